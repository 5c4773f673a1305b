//! Knot vectors, the Cox–de Boor basis and rational B-spline curves.
//!
//! Degree-0 basis functions use half-open spans `[t_i, t_{i+1})`, except that
//! the last non-empty span is closed so the curve is defined at `t_m`. Terms
//! with a zero denominator are taken as zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct KnotVector(Vec<f64>);

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidKnots("need at least two knots".into()));
        }
        if knots
            .iter()
            .any(|t| !t.is_finite() || !(0.0..=1.0).contains(t))
        {
            return Err(Error::InvalidKnots("knots must lie in [0, 1]".into()));
        }
        if knots.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidKnots("knots must be non-decreasing".into()));
        }
        if knots[0] == knots[knots.len() - 1] {
            return Err(Error::InvalidKnots("knot span is empty".into()));
        }
        Ok(Self(knots))
    }

    /// `degree + 1` copies of 0 and of 1 with uniformly spaced interior knots,
    /// so a curve over `n_control` points starts and ends on its end points.
    pub fn clamped_uniform(n_control: usize, degree: usize) -> Result<Self> {
        if n_control < degree + 1 {
            return Err(Error::InvalidKnots(format!(
                "{n_control} control points cannot carry degree {degree}"
            )));
        }
        let interior = n_control - degree - 1;
        let mut knots = vec![0.0; degree + 1];
        knots.extend((1..=interior).map(|i| i as f64 / (interior + 1) as f64));
        knots.extend(std::iter::repeat_n(1.0, degree + 1));
        Self::new(knots)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.0[0], self.0[self.0.len() - 1])
    }

    pub fn multiplicity(&self, value: f64) -> usize {
        self.0.iter().filter(|&&t| t == value).count()
    }

    fn last_nonempty_span(&self) -> usize {
        (0..self.0.len() - 1)
            .rev()
            .find(|&i| self.0[i] < self.0[i + 1])
            .expect("knot span is non-empty")
    }

    fn check_param(&self, t: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if t.is_nan() || t < lo || t > hi {
            return Err(Error::Domain(t));
        }
        Ok(())
    }

    fn indicator(&self, i: usize, t: f64) -> f64 {
        let k = &self.0;
        let closed_end = t == k[k.len() - 1] && i == self.last_nonempty_span();
        if (k[i] <= t && t < k[i + 1]) || closed_end {
            1.0
        } else {
            0.0
        }
    }
}

impl TryFrom<Vec<f64>> for KnotVector {
    type Error = Error;
    fn try_from(knots: Vec<f64>) -> Result<Self> {
        Self::new(knots)
    }
}

impl From<KnotVector> for Vec<f64> {
    fn from(k: KnotVector) -> Self {
        k.0
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn cox_de_boor(knots: &KnotVector, i: usize, j: usize, t: f64) -> f64 {
    if j == 0 {
        return knots.indicator(i, t);
    }
    let k = knots.as_slice();
    ratio(t - k[i], k[i + j] - k[i]) * cox_de_boor(knots, i, j - 1, t)
        + ratio(k[i + j + 1] - t, k[i + j + 1] - k[i + 1]) * cox_de_boor(knots, i + 1, j - 1, t)
}

/// `N_{i,j}(t)` by direct recursion.
pub fn basis(i: usize, j: usize, t: f64, knots: &KnotVector) -> Result<f64> {
    if i + j + 1 > knots.len() - 1 {
        return Err(Error::BasisIndex {
            index: i,
            degree: j,
            knots: knots.len(),
        });
    }
    knots.check_param(t)?;
    Ok(cox_de_boor(knots, i, j, t))
}

/// A (rational) B-spline curve in the image plane.
///
/// With all weights equal this is the plain sum `Σ P_i N_{i,p}(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson", into = "CurveJson")]
pub struct BSplineCurve {
    degree: usize,
    knots: KnotVector,
    control: Vec<Point>,
    weights: Vec<f64>,
}

impl BSplineCurve {
    /// The degree follows from the sizes: `p = m - n - 1`.
    pub fn new(control: Vec<Point>, weights: Vec<f64>, knots: KnotVector) -> Result<Self> {
        if control.len() < 2 {
            return Err(Error::InvalidCurve(
                "need at least two control points".into(),
            ));
        }
        if weights.len() != control.len() {
            return Err(Error::WeightLength {
                got: weights.len(),
                expected: control.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidCurve("weights must be positive".into()));
        }
        if control.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::InvalidCurve("control points must be finite".into()));
        }
        let degree = knots
            .len()
            .checked_sub(control.len() + 1)
            .filter(|&p| p >= 1)
            .ok_or_else(|| {
                Error::InvalidCurve(format!(
                    "{} knots and {} control points give no degree >= 1",
                    knots.len(),
                    control.len()
                ))
            })?;
        Ok(Self {
            degree,
            knots,
            control,
            weights,
        })
    }

    pub fn clamped(control: Vec<Point>, weights: Vec<f64>, degree: usize) -> Result<Self> {
        let knots = KnotVector::clamped_uniform(control.len(), degree)?;
        Self::new(control, weights, knots)
    }

    pub fn unweighted(control: Vec<Point>, knots: KnotVector) -> Result<Self> {
        let weights = vec![1.0; control.len()];
        Self::new(control, weights, knots)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn control(&self) -> &[Point] {
        &self.control
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// All `N_{i,p}(t)`, `i = 0..=n`, built bottom-up from the degree-0
    /// indicators.
    fn basis_row(&self, t: f64) -> Vec<f64> {
        let k = self.knots.as_slice();
        let m = k.len() - 1;
        let mut row: Vec<f64> = (0..m).map(|i| self.knots.indicator(i, t)).collect();
        for j in 1..=self.degree {
            row = (0..m - j)
                .map(|i| {
                    ratio(t - k[i], k[i + j] - k[i]) * row[i]
                        + ratio(k[i + j + 1] - t, k[i + j + 1] - k[i + 1]) * row[i + 1]
                })
                .collect();
        }
        row
    }

    pub fn eval(&self, t: f64) -> Result<Point> {
        self.knots.check_param(t)?;
        let row = self.basis_row(t);
        let (mut x, mut y, mut den) = (0.0, 0.0, 0.0);
        for ((p, w), n) in self.control.iter().zip(&self.weights).zip(&row) {
            let wn = w * n;
            x += wn * p.x;
            y += wn * p.y;
            den += wn;
        }
        if den <= 0.0 {
            return Err(Error::Domain(t));
        }
        Ok(Point::new(x / den, y / den))
    }

    /// `n_samples` evaluations at uniformly spaced parameters, both ends
    /// included.
    pub fn sample(&self, n_samples: usize) -> Result<Vec<Point>> {
        if n_samples < 2 {
            return Err(Error::InvalidCurve("need at least two samples".into()));
        }
        let (lo, hi) = self.knots.domain();
        (0..n_samples)
            .map(|i| {
                let t = if i + 1 == n_samples {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n_samples - 1) as f64
                };
                self.eval(t)
            })
            .collect()
    }

    /// `p - k` for an interior knot of multiplicity `k`: the number of
    /// continuous derivatives at that knot (negative means a jump).
    pub fn continuity_class(&self, at_knot: usize) -> Result<i64> {
        let k = self.knots.as_slice();
        let value = *k.get(at_knot).ok_or(Error::BasisIndex {
            index: at_knot,
            degree: 0,
            knots: k.len(),
        })?;
        let (lo, hi) = self.knots.domain();
        if value <= lo || value >= hi {
            return Err(Error::Domain(value));
        }
        Ok(self.degree as i64 - self.knots.multiplicity(value) as i64)
    }
}

pub fn eval_curve(curve: &BSplineCurve, t: f64) -> Result<Point> {
    curve.eval(t)
}

pub fn sample_curve(curve: &BSplineCurve, n_samples: usize) -> Result<Vec<Point>> {
    curve.sample(n_samples)
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    degree: usize,
    knots: Vec<f64>,
    control: Vec<Point>,
    weights: Vec<f64>,
}

impl From<BSplineCurve> for CurveJson {
    fn from(c: BSplineCurve) -> Self {
        CurveJson {
            degree: c.degree,
            knots: c.knots.into(),
            control: c.control,
            weights: c.weights,
        }
    }
}

impl TryFrom<CurveJson> for BSplineCurve {
    type Error = Error;
    fn try_from(json: CurveJson) -> Result<Self> {
        let curve = BSplineCurve::new(json.control, json.weights, KnotVector::new(json.knots)?)?;
        if curve.degree != json.degree {
            return Err(Error::InvalidCurve(format!(
                "declared degree {} but sizes imply {}",
                json.degree, curve.degree
            )));
        }
        Ok(curve)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knots(v: &[f64]) -> KnotVector {
        KnotVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn degree_zero_is_an_indicator() {
        let t = knots(&[0.0, 0.5, 1.0]);
        assert_eq!(basis(0, 0, 0.25, &t).unwrap(), 1.0);
        assert_eq!(basis(1, 0, 0.25, &t).unwrap(), 0.0);
        // closed right end
        assert_eq!(basis(1, 0, 1.0, &t).unwrap(), 1.0);
        assert_eq!(basis(0, 0, 1.0, &t).unwrap(), 0.0);
    }

    #[test]
    fn hat_function_peaks_at_interior_knot() {
        let t = knots(&[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!((basis(0, 1, 0.25, &t).unwrap() - 1.0).abs() < 1e-15);
        assert!((basis(0, 1, 0.125, &t).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(basis(0, 1, 0.5, &t).unwrap(), 0.0);
    }

    #[test]
    fn basis_errors() {
        let t = knots(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            basis(3, 2, 0.5, &t),
            Err(Error::BasisIndex { .. })
        ));
        assert!(matches!(basis(0, 2, 1.5, &t), Err(Error::Domain(_))));
        assert!(KnotVector::new(vec![0.0, 0.6, 0.4, 1.0]).is_err());
        assert!(KnotVector::new(vec![0.0, 1.2]).is_err());
        assert!(KnotVector::new(vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn quadratic_partition_of_unity() {
        let t = knots(&[0.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        for s in 0..100 {
            let x = s as f64 / 99.0;
            let sum: f64 = (0..3).map(|i| basis(i, 2, x, &t).unwrap()).sum();
            assert!((sum - 1.0).abs() <= 1e-9, "t = {x}: {sum}");
        }
    }

    #[test]
    fn constant_control_polygon() {
        let q = Point::new(3.5, -2.0);
        let curve = BSplineCurve::clamped(vec![q; 4], vec![0.3, 2.0, 5.0, 1.0], 3).unwrap();
        for p in curve.sample(17).unwrap() {
            assert!((p.x - q.x).abs() < 1e-12 && (p.y - q.y).abs() < 1e-12);
        }
    }

    #[test]
    fn clamped_linear_midpoint() {
        let curve = BSplineCurve::clamped(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)],
            vec![1.0; 2],
            1,
        )
        .unwrap();
        assert_eq!(curve.knots().as_slice(), &[0.0, 0.0, 1.0, 1.0]);
        let mid = curve.eval(0.5).unwrap();
        assert!((mid.x - 0.5).abs() < 1e-15 && (mid.y - 0.5).abs() < 1e-15);
        assert_eq!(curve.eval(0.0).unwrap(), Point::new(0.0, 0.0));
        assert_eq!(curve.eval(1.0).unwrap(), Point::new(1.0, 1.0));
    }

    #[test]
    fn two_samples_are_the_end_points() {
        let ctrl = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 9.0),
            Point::new(8.0, 1.0),
        ];
        let curve = BSplineCurve::clamped(ctrl.clone(), vec![1.0; 3], 2).unwrap();
        assert_eq!(curve.sample(2).unwrap(), vec![ctrl[0], ctrl[2]]);
        assert!(curve.sample(1).is_err());
    }

    #[test]
    fn unsupported_parameter_is_a_domain_error() {
        // unclamped linear: every basis function vanishes at t = 0
        let curve = BSplineCurve::unweighted(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(2.0, 0.0),
            ],
            knots(&[0.0, 0.25, 0.5, 0.75, 1.0]),
        )
        .unwrap();
        assert!(matches!(curve.eval(0.0), Err(Error::Domain(_))));
        assert!(curve.eval(0.5).is_ok());
    }

    #[test]
    fn continuity_from_knot_multiplicity() {
        let ctrl: Vec<Point> = (0..5)
            .map(|i| Point::new(i as f64, (i * i) as f64))
            .collect();
        let cubic =
            BSplineCurve::unweighted(ctrl.clone(), knots(&[0., 0., 0., 0., 0.5, 1., 1., 1., 1.]))
                .unwrap();
        assert_eq!(cubic.degree(), 3);
        assert_eq!(cubic.continuity_class(4).unwrap(), 2);
        let quad =
            BSplineCurve::unweighted(ctrl[..4].to_vec(), knots(&[0., 0., 0., 0.5, 0.5, 1., 1.]))
                .unwrap();
        assert_eq!(quad.degree(), 2);
        assert_eq!(quad.continuity_class(3).unwrap(), 0);
        assert!(matches!(quad.continuity_class(0), Err(Error::Domain(_))));
        assert!(matches!(quad.continuity_class(6), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_curves() {
        let ctrl = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ];
        assert!(matches!(
            BSplineCurve::clamped(ctrl.clone(), vec![1.0; 2], 2),
            Err(Error::WeightLength { .. })
        ));
        assert!(BSplineCurve::clamped(ctrl.clone(), vec![1.0, 0.0, 1.0], 2).is_err());
        assert!(BSplineCurve::clamped(ctrl.clone(), vec![1.0; 3], 3).is_err());
        assert!(BSplineCurve::unweighted(ctrl, knots(&[0.0, 0.5, 1.0])).is_err());
    }

    #[test]
    fn json_shape() {
        let curve = BSplineCurve::clamped(
            vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0)],
            vec![1.0; 2],
            1,
        )
        .unwrap();
        let value = serde_json::to_value(&curve).unwrap();
        assert_eq!(
            value,
            serde_json::json!({
                "degree": 1,
                "knots": [0.0, 0.0, 1.0, 1.0],
                "control": [[0.0, 0.0], [1.0, 1.0]],
                "weights": [1.0, 1.0]
            })
        );
        let back: BSplineCurve = serde_json::from_value(value).unwrap();
        assert_eq!(back, curve);
    }
}
