//! Randomised checks of the nearness theorems on a concrete complex.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    descriptive_near, graded_strong_near, intersection, lodato_near, strong_near,
    DimensionFeatures, FeatureExtractor, IntersectionMode, Region, ShapeRegion,
};
use crate::complex::{Cell, Complex, VertexId};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::nerve::{nerve, spoke_decomposition, SpokeDecomposition};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    /// Number of individual checks made.
    pub trials: usize,
    pub failures: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: &str) -> Self {
        Self {
            theorem: theorem.into(),
            trials: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub reports: Vec<TheoremReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.reports.iter().map(|r| r.failures.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    /// Adds the counts of `other` theorem by theorem.
    pub fn merge(&mut self, other: SuiteReport) {
        for r in other.reports {
            match self.reports.iter_mut().find(|s| s.theorem == r.theorem) {
                Some(s) => {
                    s.trials += r.trials;
                    s.failures.extend(r.failures);
                }
                None => self.reports.push(r),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremSuite {
    /// Number of nuclei drawn.
    pub trials: usize,
    pub seed: u64,
    pub eps_phi: f64,
    /// Distance for Lodato nearness of drawn cells; needs positions.
    pub eps_geo: Option<f64>,
    /// Complexes with at most this many triangles get every nucleus pair
    /// compared for the object-space biconditional.
    pub exhaustive_limit: usize,
}

impl Default for TheoremSuite {
    fn default() -> Self {
        Self {
            trials: 10,
            seed: 0,
            eps_phi: 1e-9,
            eps_geo: None,
            exhaustive_limit: 15,
        }
    }
}

const NAMES: [&str; 6] = [
    "theorem1", "theorem2", "theorem3", "theorem4", "theorem5", "lemma1",
];

struct Ctx<'a> {
    positions: Option<&'a [Point]>,
    phi: &'a dyn FeatureExtractor,
    suite: &'a TheoremSuite,
}

impl Ctx<'_> {
    fn region<'c>(&self, cells: impl IntoIterator<Item = &'c Cell>) -> Region {
        let r = Region::new(cells.into_iter().cloned());
        match self.positions {
            Some(p) => r.with_positions(p),
            None => r,
        }
    }
}

fn union(dec: &SpokeDecomposition) -> BTreeSet<Cell> {
    dec.levels().iter().flatten().cloned().collect()
}

/// Highest level whose faces meet the boundary of the object space.
fn boundary_level(dec: &SpokeDecomposition) -> usize {
    let triangles = union(dec);
    let Ok(shape) = ShapeRegion::from_triangles(triangles.iter()) else {
        return 0;
    };
    (1..dec.levels().len())
        .rev()
        .find(|&k| {
            dec.levels()[k]
                .iter()
                .flat_map(Cell::closure)
                .any(|c| shape.boundary().contains(&c))
        })
        .unwrap_or(0)
}

impl TheoremSuite {
    /// Runs on an undrawn complex with dimension-only features.
    pub fn run(&self, k: &Complex) -> Result<SuiteReport> {
        self.run_with(k, None, &DimensionFeatures)
    }

    pub fn run_with(
        &self,
        k: &Complex,
        positions: Option<&[Point]>,
        phi: &dyn FeatureExtractor,
    ) -> Result<SuiteReport> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig(
                "theorem suite needs at least one trial".into(),
            ));
        }
        if self.eps_geo.is_some() && positions.is_none() {
            return Err(Error::Configuration(
                "eps_geo needs vertex positions".into(),
            ));
        }
        let ctx = Ctx {
            positions,
            phi,
            suite: self,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut vertices: Vec<VertexId> = k.vertices().collect();
        if vertices.is_empty() {
            return Err(Error::EmptyRegion);
        }
        vertices.shuffle(&mut rng);
        let nuclei: Vec<VertexId> = vertices.iter().cycle().take(self.trials).copied().collect();
        vertices.sort();
        let exhaustive = k.triangles().len() <= self.exhaustive_limit;

        let mut decs: BTreeMap<VertexId, SpokeDecomposition> = BTreeMap::new();
        for &v in &vertices {
            decs.insert(v, spoke_decomposition(k, v)?);
        }
        let mut reports: Vec<TheoremReport> = NAMES.iter().map(|n| TheoremReport::new(n)).collect();

        for p in nuclei {
            let dec = &decs[&p];
            ctx.theorem1(k, dec, &mut rng, &mut reports[0])?;
            ctx.theorem2(dec, &mut reports[1])?;
            let partners: Vec<VertexId> = if exhaustive {
                vertices.clone()
            } else {
                vec![vertices[rng.gen_range(0..vertices.len())]]
            };
            for q in partners {
                ctx.theorem3(dec, &decs[&q], &mut reports[2])?;
            }
            ctx.theorem4(dec, &mut reports[3])?;
            ctx.theorem5(dec, &mut reports[4])?;
            ctx.lemma1(dec, &mut reports[5])?;
        }
        Ok(SuiteReport { reports })
    }
}

impl Ctx<'_> {
    /// Every interior vertex of a shape is strongly near the interior
    /// through its nerve.
    fn theorem1(
        &self,
        k: &Complex,
        dec: &SpokeDecomposition,
        rng: &mut ChaCha8Rng,
        report: &mut TheoremReport,
    ) -> Result<()> {
        if dec.depth() == 0 {
            return Ok(());
        }
        let r = rng.gen_range(1..=dec.depth());
        let tris: BTreeSet<Cell> = dec.levels()[1..=r].iter().flatten().cloned().collect();
        let shape = ShapeRegion::from_triangles(tris.iter())?;
        let interior = self.region(shape.interior());
        for v in shape.interior_vertices() {
            let p = v.vertices()[0];
            let nrv = nerve(k, p)?;
            let ok = !nrv.is_empty()
                && strong_near(&interior, &self.region(&nrv), IntersectionMode::Complex)?;
            report.check(ok, || {
                format!(
                    "nucleus {}: interior vertex {p} not near its nerve",
                    dec.nucleus()
                )
            });
        }
        Ok(())
    }

    /// A shared face of dimension k brings shared faces of every lower
    /// dimension.
    fn theorem2(&self, dec: &SpokeDecomposition, report: &mut TheoremReport) -> Result<()> {
        let mut regions: Vec<Region> = dec.levels().iter().map(|l| self.region(l)).collect();
        regions.extend(dec.spoke_complex(1).iter().map(|t| self.region([t])));
        for (i, a) in regions.iter().enumerate() {
            for b in &regions[i..] {
                let Some(g) = graded_strong_near(a, b)? else {
                    continue;
                };
                let dims: BTreeSet<usize> = intersection(a, b).iter().map(Cell::dim).collect();
                report.check((0..=g).all(|d| dims.contains(&d)), || {
                    format!(
                        "nucleus {}: grade {g} without all lower faces",
                        dec.nucleus()
                    )
                });
            }
        }
        Ok(())
    }

    /// Object spaces meet exactly when some of their spoke complexes do.
    fn theorem3(
        &self,
        p: &SpokeDecomposition,
        q: &SpokeDecomposition,
        report: &mut TheoremReport,
    ) -> Result<()> {
        let lhs = strong_near(
            &self.region(&union(p)),
            &self.region(&union(q)),
            IntersectionMode::Complex,
        )?;
        let mut rhs = false;
        for a in p.levels() {
            for b in q.levels() {
                if strong_near(&self.region(a), &self.region(b), IntersectionMode::Complex)? {
                    rhs = true;
                }
            }
        }
        report.check(lhs == rhs, || {
            format!(
                "nuclei {} and {}: object spaces near = {lhs}, spokes near = {rhs}",
                p.nucleus(),
                q.nucleus()
            )
        });
        Ok(())
    }

    /// Consecutive spoke complexes below the boundary level meet.
    fn theorem4(&self, dec: &SpokeDecomposition, report: &mut TheoremReport) -> Result<()> {
        let k_hat = boundary_level(dec);
        let levels = dec.levels();
        for j in 1..k_hat {
            let up = strong_near(
                &self.region(&levels[j + 1]),
                &self.region(&levels[j]),
                IntersectionMode::Complex,
            )?;
            let down = strong_near(
                &self.region(&levels[j]),
                &self.region(&levels[j - 1]),
                IntersectionMode::Complex,
            )?;
            report.check(up && down, || {
                format!("nucleus {}: level {j} detached", dec.nucleus())
            });
        }
        Ok(())
    }

    /// Consecutive spoke complexes are descriptively near.
    fn theorem5(&self, dec: &SpokeDecomposition, report: &mut TheoremReport) -> Result<()> {
        let levels = dec.levels();
        for j in 0..dec.depth() {
            let ok = descriptive_near(
                &self.region(&levels[j + 1]),
                &self.region(&levels[j]),
                self.phi,
                self.suite.eps_phi,
            )?;
            report.check(ok, || {
                format!(
                    "nucleus {}: levels {} and {j} not descriptively near",
                    dec.nucleus(),
                    j + 1
                )
            });
        }
        Ok(())
    }

    /// Strong nearness of spoke complexes implies Lodato and descriptive
    /// nearness.
    fn lemma1(&self, dec: &SpokeDecomposition, report: &mut TheoremReport) -> Result<()> {
        let regions: Vec<Region> = dec.levels().iter().map(|l| self.region(l)).collect();
        for (a, ra) in regions.iter().enumerate() {
            for (b, rb) in regions.iter().enumerate() {
                if !strong_near(ra, rb, IntersectionMode::Complex)? {
                    continue;
                }
                let lodato = lodato_near(ra, rb, self.suite.eps_geo)?;
                let descriptive = descriptive_near(ra, rb, self.phi, self.suite.eps_phi)?;
                report.check(lodato && descriptive, || {
                    format!(
                        "nucleus {}: levels {a},{b} lodato = {lodato}, descriptive = {descriptive}",
                        dec.nucleus()
                    )
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexKind;
    use crate::samples::grid_fixture;

    #[test]
    fn fixture_passes_for_every_nucleus() {
        let suite = TheoremSuite {
            trials: 9,
            ..TheoremSuite::default()
        };
        let report = suite.run(&grid_fixture()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.reports.len(), 6);
        assert!(report.reports.iter().all(|r| r.trials > 0));
    }

    #[test]
    fn single_triangle_has_vacuous_theorem4() {
        let k = Complex::build([Cell::triangle(0, 1, 2)], ComplexKind::Ordered).unwrap();
        let dec = spoke_decomposition(&k, VertexId(0)).unwrap();
        assert_eq!(boundary_level(&dec), 1);
        let report = TheoremSuite::default().run(&k).unwrap();
        assert!(report.passed());
        assert_eq!(report.reports[3].trials, 0);
    }

    #[test]
    fn json_shape() {
        let report = TheoremSuite {
            trials: 1,
            ..Default::default()
        }
        .run(&grid_fixture())
        .unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v[0]["theorem"], "theorem1");
        assert!(v[0]["failures"].as_array().unwrap().is_empty());
    }

    #[test]
    fn bad_configuration() {
        assert!(TheoremSuite {
            trials: 0,
            ..Default::default()
        }
        .run(&grid_fixture())
        .is_err());
        let suite = TheoremSuite {
            eps_geo: Some(1.0),
            ..Default::default()
        };
        assert!(matches!(
            suite.run(&grid_fixture()),
            Err(Error::Configuration(_))
        ));
    }
}
