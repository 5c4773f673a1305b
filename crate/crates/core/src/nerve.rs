//! Nerves, spokes, spoke complexes and spoke chains around a nucleus vertex.
//!
//! Spokes are 2-cells. Two cells intersect when they share a vertex.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Cell, Complex, VertexId};
use crate::error::{Error, Result};

static EMPTY: BTreeSet<Cell> = BTreeSet::new();

fn incident_triangles(k: &Complex) -> BTreeMap<VertexId, Vec<&Cell>> {
    let mut index: BTreeMap<VertexId, Vec<&Cell>> = BTreeMap::new();
    for t in k.triangles() {
        let mut seen: Vec<VertexId> = Vec::with_capacity(3);
        for &v in t.vertices() {
            if !seen.contains(&v) {
                seen.push(v);
                index.entry(v).or_default().push(t);
            }
        }
    }
    index
}

fn require_vertex(k: &Complex, p: VertexId) -> Result<()> {
    if k.has_vertex(p) {
        Ok(())
    } else {
        Err(Error::VertexNotFound(p))
    }
}

/// `Nrv K(p)`: every 2-cell of `k` containing `p`.
pub fn nerve(k: &Complex, p: VertexId) -> Result<BTreeSet<Cell>> {
    require_vertex(k, p)?;
    Ok(k.triangles()
        .iter()
        .filter(|t| t.contains(p))
        .cloned()
        .collect())
}

/// Level `k` holds the `k`-spokes around the nucleus: 2-cells not already
/// placed on a lower level that share a vertex with level `k - 1`. Level 0 is
/// the nucleus itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "DecompositionJson", try_from = "DecompositionJson")]
pub struct SpokeDecomposition {
    nucleus: VertexId,
    levels: Vec<BTreeSet<Cell>>,
}

impl SpokeDecomposition {
    pub fn new(k: &Complex, p: VertexId) -> Result<Self> {
        require_vertex(k, p)?;
        let incident = incident_triangles(k);
        let mut assigned: BTreeSet<&Cell> = BTreeSet::new();
        let mut levels = vec![BTreeSet::from([Cell::vertex(p.0)])];
        let mut frontier: BTreeSet<VertexId> = BTreeSet::from([p]);
        loop {
            let mut level: BTreeSet<Cell> = BTreeSet::new();
            for v in &frontier {
                for &t in incident.get(v).map(Vec::as_slice).unwrap_or_default() {
                    if assigned.insert(t) {
                        level.insert(t.clone());
                    }
                }
            }
            if level.is_empty() {
                break;
            }
            frontier = level
                .iter()
                .flat_map(|c| c.vertices().iter().copied())
                .collect();
            levels.push(level);
        }
        Ok(Self { nucleus: p, levels })
    }

    pub fn nucleus(&self) -> VertexId {
        self.nucleus
    }

    pub fn levels(&self) -> &[BTreeSet<Cell>] {
        &self.levels
    }

    /// Highest non-empty level index.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// `skcx_k K(p)`; empty past the last level.
    pub fn spoke_complex(&self, k: usize) -> &BTreeSet<Cell> {
        self.levels.get(k).unwrap_or(&EMPTY)
    }

    pub fn level_of(&self, cell: &Cell) -> Option<usize> {
        self.levels.iter().position(|l| l.contains(cell))
    }

    /// A `k`-spoke chain `A_0, ..., A_k` with `A_j` drawn from level `j` and
    /// consecutive members sharing a vertex. Among valid choices the
    /// lexicographically lowest cell is taken at every step.
    pub fn spoke_chain(&self, k: usize) -> Result<Vec<Cell>> {
        if k > self.depth() {
            return Err(Error::NoChain(k));
        }
        // extendable[j]: cells of level j from which some chain reaches level k
        let mut extendable: Vec<BTreeSet<&Cell>> = vec![BTreeSet::new(); k + 1];
        extendable[k] = self.levels[k].iter().collect();
        for j in (0..k).rev() {
            let (lower, upper) = extendable.split_at_mut(j + 1);
            lower[j] = self.levels[j]
                .iter()
                .filter(|c| upper[0].iter().any(|d| c.shares_vertex(d)))
                .collect();
        }
        let mut chain: Vec<Cell> = Vec::with_capacity(k + 1);
        for (j, candidates) in extendable.iter().enumerate() {
            let next = candidates
                .iter()
                .find(|c| chain.last().is_none_or(|prev| prev.shares_vertex(c)))
                .ok_or(Error::NoChain(j))?;
            chain.push((*next).clone());
        }
        Ok(chain)
    }

    pub fn object_space(&self) -> ObjectSpace {
        ObjectSpace {
            nucleus: self.nucleus,
            cells: self.levels.iter().flatten().cloned().collect(),
        }
    }
}

pub fn spoke_decomposition(k: &Complex, p: VertexId) -> Result<SpokeDecomposition> {
    SpokeDecomposition::new(k, p)
}

/// `O_p`: the union of all spoke complexes around `p`, nucleus included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectSpace {
    pub nucleus: VertexId,
    pub cells: BTreeSet<Cell>,
}

impl ObjectSpace {
    pub fn triangles(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.dim() == 2)
    }
}

pub fn object_space(k: &Complex, p: VertexId) -> Result<ObjectSpace> {
    Ok(SpokeDecomposition::new(k, p)?.object_space())
}

/// Vertices whose nerve is largest, in increasing id order.
pub fn max_nerve_clusters(k: &Complex) -> Result<Vec<VertexId>> {
    let incident = incident_triangles(k);
    let best = incident
        .values()
        .map(Vec::len)
        .max()
        .ok_or(Error::NoTriangles)?;
    Ok(incident
        .iter()
        .filter(|(_, ts)| ts.len() == best)
        .map(|(&v, _)| v)
        .collect())
}

/// The maximal nerve cluster: the nucleus with the most incident 2-cells
/// (lowest id on ties) together with its nerve.
pub fn max_nerve_cluster(k: &Complex) -> Result<(VertexId, BTreeSet<Cell>)> {
    let p = max_nerve_clusters(k)?[0];
    Ok((p, nerve(k, p)?))
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    nucleus: u32,
    levels: Vec<Vec<Vec<u32>>>,
}

impl From<SpokeDecomposition> for DecompositionJson {
    fn from(d: SpokeDecomposition) -> Self {
        DecompositionJson {
            nucleus: d.nucleus.0,
            levels: d
                .levels
                .iter()
                .map(|l| {
                    l.iter()
                        .map(|c| c.vertices().iter().map(|v| v.0).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<DecompositionJson> for SpokeDecomposition {
    type Error = Error;

    fn try_from(json: DecompositionJson) -> Result<Self> {
        let levels = json
            .levels
            .into_iter()
            .map(|l| {
                l.into_iter()
                    .map(Cell::new)
                    .collect::<Result<BTreeSet<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if levels.first() != Some(&BTreeSet::from([Cell::vertex(json.nucleus)])) {
            return Err(Error::Consistency("level 0 must be the nucleus".into()));
        }
        Ok(Self {
            nucleus: VertexId(json.nucleus),
            levels,
        })
    }
}
