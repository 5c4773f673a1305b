//! Simplicial, ordered and Delta complexes of dimension at most two.
//!
//! A [`Complex`] keeps its cells graded by dimension together with an explicit
//! face-map table `(cell, j) -> face`. For simplicial and ordered complexes the
//! table is derived from vertex lists (delete the `j`-th vertex); for Delta
//! complexes it is supplied by the caller, because two cells may share a
//! vertex list and a cell may repeat a vertex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A vertex, edge or filled triangle, named by its ordered vertex list.
///
/// The optional tag distinguishes Delta-set cells that share a vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    vertices: Vec<VertexId>,
    tag: Option<String>,
}

impl Cell {
    pub fn new<V: Into<VertexId>>(vertices: impl IntoIterator<Item = V>) -> Result<Self> {
        let vertices: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() || vertices.len() > 3 {
            return Err(Error::CellSize(vertices.len()));
        }
        Ok(Self {
            vertices,
            tag: None,
        })
    }

    /// Builds a cell from a vertex set, sorting it into increasing order.
    pub fn sorted<V: Into<VertexId>>(vertices: impl IntoIterator<Item = V>) -> Result<Self> {
        let mut cell = Self::new(vertices)?;
        cell.vertices.sort();
        Ok(cell)
    }

    pub fn vertex(a: u32) -> Self {
        Self {
            vertices: vec![VertexId(a)],
            tag: None,
        }
    }

    pub fn edge(a: u32, b: u32) -> Self {
        Self {
            vertices: vec![VertexId(a), VertexId(b)],
            tag: None,
        }
    }

    pub fn triangle(a: u32, b: u32, c: u32) -> Self {
        Self {
            vertices: vec![VertexId(a), VertexId(b), VertexId(c)],
            tag: None,
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn untagged(&self) -> Self {
        Self {
            vertices: self.vertices.clone(),
            tag: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn shares_vertex(&self, other: &Cell) -> bool {
        self.vertices.iter().any(|v| other.vertices.contains(v))
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.vertices.windows(2).all(|w| w[0] < w[1])
    }

    /// The face obtained by deleting the `j`-th vertex.
    pub fn face(&self, j: usize) -> Result<Cell> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::VertexHasNoFaces);
        }
        if j > dim {
            return Err(Error::FaceIndex { index: j, dim });
        }
        let mut vertices = self.vertices.clone();
        vertices.remove(j);
        Ok(Cell {
            vertices,
            tag: None,
        })
    }

    /// All vertex-deletion faces of every dimension below this cell's.
    pub fn closure(&self) -> Vec<Cell> {
        let mut out = vec![self.untagged()];
        let mut frontier = vec![self.untagged()];
        while let Some(c) = frontier.pop() {
            if c.dim() == 0 {
                continue;
            }
            for j in 0..=c.dim() {
                let f = c.face(j).expect("index within range");
                if !out.contains(&f) {
                    out.push(f.clone());
                    frontier.push(f);
                }
            }
        }
        out
    }

    fn ids(&self) -> Vec<u32> {
        self.vertices.iter().map(|v| v.0).collect()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")?;
        if let Some(tag) = &self.tag {
            write!(f, "#{tag}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Simplicial,
    Ordered,
    Delta,
}

/// One failed invariant reported by [`Complex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotIncreasing(Cell),
    MissingFace {
        cell: Cell,
        face: Cell,
    },
    MissingFaceMap {
        cell: Cell,
        index: usize,
    },
    WrongFace {
        cell: Cell,
        index: usize,
        found: Cell,
    },
    DanglingFace {
        cell: Cell,
        index: usize,
        face: Cell,
    },
    FaceDimension {
        cell: Cell,
        index: usize,
        face: Cell,
    },
    Commutation {
        cell: Cell,
        i: usize,
        j: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotIncreasing(c) => write!(f, "{c} is not strictly increasing"),
            Violation::MissingFace { cell, face } => write!(f, "face {face} of {cell} is missing"),
            Violation::MissingFaceMap { cell, index } => {
                write!(f, "d_{index} is not assigned for {cell}")
            }
            Violation::WrongFace { cell, index, found } => {
                write!(
                    f,
                    "d_{index}({cell}) = {found} does not delete vertex {index}"
                )
            }
            Violation::DanglingFace { cell, index, face } => {
                write!(f, "d_{index}({cell}) = {face} is not a cell of the complex")
            }
            Violation::FaceDimension { cell, index, face } => {
                write!(f, "d_{index}({cell}) = {face} has the wrong dimension")
            }
            Violation::Commutation { cell, i, j } => {
                write!(f, "d_{i} d_{j} != d_{} d_{i} on {cell}", j - 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ComplexJson", try_from = "ComplexJson")]
pub struct Complex {
    kind: ComplexKind,
    grades: [BTreeSet<Cell>; 3],
    faces: BTreeMap<(Cell, usize), Cell>,
}

static EMPTY: BTreeSet<Cell> = BTreeSet::new();

impl Complex {
    /// Closes `cells` under taking faces and derives the face maps.
    ///
    /// Delta complexes need explicit face maps, so only vertex-only input is
    /// accepted for [`ComplexKind::Delta`]; use [`Complex::delta`] otherwise.
    pub fn build(cells: impl IntoIterator<Item = Cell>, kind: ComplexKind) -> Result<Self> {
        let cells: Vec<Cell> = cells.into_iter().collect();
        if cells.is_empty() {
            return Err(Error::Consistency(
                "a complex needs at least one cell".into(),
            ));
        }
        if kind == ComplexKind::Delta {
            if let Some(c) = cells.iter().find(|c| c.dim() > 0) {
                return Err(Error::MissingFaceMap {
                    cell: c.clone(),
                    index: 0,
                });
            }
            let mut cx = Self::empty(kind);
            for c in cells {
                cx.grades[0].insert(c);
            }
            return Ok(cx);
        }
        let mut cx = Self::empty(kind);
        for c in cells {
            let c = c.untagged();
            if !c.is_strictly_increasing() {
                return Err(Error::NotIncreasing(c));
            }
            cx.insert_closed(c);
        }
        Ok(cx)
    }

    /// Builds a Delta complex from cells and explicit face assignments
    /// `(cell, j, d_j(cell))`. Cells named only in assignments are added.
    pub fn delta(
        cells: impl IntoIterator<Item = Cell>,
        faces: impl IntoIterator<Item = (Cell, usize, Cell)>,
    ) -> Result<Self> {
        let mut cx = Self::empty(ComplexKind::Delta);
        for c in cells {
            cx.grades[c.dim()].insert(c);
        }
        for (cell, j, face) in faces {
            if j > cell.dim() || face.dim() + 1 != cell.dim() {
                return Err(Error::InvalidDeltaSet(format!(
                    "d_{j}({cell}) = {face} is not a face assignment"
                )));
            }
            cx.grades[cell.dim()].insert(cell.clone());
            cx.grades[face.dim()].insert(face.clone());
            if let Some(prev) = cx.faces.insert((cell.clone(), j), face.clone()) {
                if prev != face {
                    return Err(Error::InvalidDeltaSet(format!(
                        "d_{j}({cell}) assigned both {prev} and {face}"
                    )));
                }
            }
        }
        if cx.is_empty() {
            return Err(Error::Consistency(
                "a complex needs at least one cell".into(),
            ));
        }
        cx.check_delta()?;
        Ok(cx)
    }

    /// Assembles a complex without any checks. Use [`Complex::validate`] to
    /// inspect the result.
    pub fn from_parts(
        kind: ComplexKind,
        cells: impl IntoIterator<Item = Cell>,
        faces: impl IntoIterator<Item = (Cell, usize, Cell)>,
    ) -> Self {
        let mut cx = Self::empty(kind);
        for c in cells {
            cx.grades[c.dim()].insert(c);
        }
        for (cell, j, face) in faces {
            cx.faces.insert((cell, j), face);
        }
        cx
    }

    fn empty(kind: ComplexKind) -> Self {
        Self {
            kind,
            grades: Default::default(),
            faces: BTreeMap::new(),
        }
    }

    fn insert_closed(&mut self, cell: Cell) {
        if self.grades[cell.dim()].contains(&cell) {
            return;
        }
        if cell.dim() > 0 {
            for j in 0..=cell.dim() {
                let f = cell.face(j).expect("index within range");
                self.faces.insert((cell.clone(), j), f.clone());
                self.insert_closed(f);
            }
        }
        self.grades[cell.dim()].insert(cell);
    }

    fn check_delta(&self) -> Result<()> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(Violation::MissingFaceMap { cell, index }) => {
                Err(Error::MissingFaceMap { cell, index })
            }
            Some(v) => Err(Error::InvalidDeltaSet(v.to_string())),
        }
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    /// Cells of one dimension (`X^dim`); empty above dimension two.
    pub fn cells(&self, dim: usize) -> &BTreeSet<Cell> {
        self.grades.get(dim).unwrap_or(&EMPTY)
    }

    pub fn all_cells(&self) -> impl Iterator<Item = &Cell> {
        self.grades.iter().flatten()
    }

    pub fn triangles(&self) -> &BTreeSet<Cell> {
        &self.grades[2]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.grades[0].iter().map(|c| c.vertices[0])
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.grades[0].iter().any(|c| c.vertices[0] == v)
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        self.grades
            .get(cell.dim())
            .is_some_and(|grade| grade.contains(cell))
    }

    pub fn len(&self) -> usize {
        self.grades.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn face_maps(&self) -> impl Iterator<Item = (&Cell, usize, &Cell)> {
        self.faces.iter().map(|((c, j), f)| (c, *j, f))
    }

    /// `d_j(cell)` as recorded in the complex.
    pub fn face(&self, cell: &Cell, j: usize) -> Result<Cell> {
        let dim = cell.dim();
        if dim == 0 {
            return Err(Error::VertexHasNoFaces);
        }
        if j > dim {
            return Err(Error::FaceIndex { index: j, dim });
        }
        if !self.contains(cell) {
            return Err(Error::CellNotFound(cell.clone()));
        }
        if let Some(f) = self.faces.get(&(cell.clone(), j)) {
            return Ok(f.clone());
        }
        match self.kind {
            ComplexKind::Delta => Err(Error::MissingFaceMap {
                cell: cell.clone(),
                index: j,
            }),
            _ => cell.face(j),
        }
    }

    /// Checks closure, face-map consistency and `d_i d_j = d_{j-1} d_i`.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let simplicial = self.kind != ComplexKind::Delta;
        for cell in self.all_cells() {
            if simplicial && !cell.is_strictly_increasing() {
                out.push(Violation::NotIncreasing(cell.clone()));
            }
            if cell.dim() == 0 {
                continue;
            }
            if simplicial {
                for face in cell.closure().into_iter().skip(1) {
                    if !self.contains(&face) {
                        out.push(Violation::MissingFace {
                            cell: cell.clone(),
                            face,
                        });
                    }
                }
            }
            for j in 0..=cell.dim() {
                match self.faces.get(&(cell.clone(), j)) {
                    None => out.push(Violation::MissingFaceMap {
                        cell: cell.clone(),
                        index: j,
                    }),
                    Some(face) => {
                        if face.dim() + 1 != cell.dim() {
                            out.push(Violation::FaceDimension {
                                cell: cell.clone(),
                                index: j,
                                face: face.clone(),
                            });
                        } else if !self.contains(face) {
                            out.push(Violation::DanglingFace {
                                cell: cell.clone(),
                                index: j,
                                face: face.clone(),
                            });
                        } else if simplicial && *face != cell.face(j).expect("in range") {
                            out.push(Violation::WrongFace {
                                cell: cell.clone(),
                                index: j,
                                found: face.clone(),
                            });
                        }
                    }
                }
            }
        }
        for cell in &self.grades[2] {
            for j in 1..=2 {
                for i in 0..j {
                    let lhs = self
                        .faces
                        .get(&(cell.clone(), j))
                        .and_then(|e| self.faces.get(&(e.clone(), i)));
                    let rhs = self
                        .faces
                        .get(&(cell.clone(), i))
                        .and_then(|e| self.faces.get(&(e.clone(), j - 1)));
                    if let (Some(l), Some(r)) = (lhs, rhs) {
                        if l != r {
                            out.push(Violation::Commutation {
                                cell: cell.clone(),
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The same cells and face maps, reinterpreted as a Delta complex.
    pub fn to_delta(&self) -> Complex {
        Complex {
            kind: ComplexKind::Delta,
            grades: self.grades.clone(),
            faces: self
                .all_cells()
                .filter(|c| c.dim() > 0)
                .fold(BTreeMap::new(), |mut acc, c| {
                    for j in 0..=c.dim() {
                        if let Ok(f) = self.face(c, j) {
                            acc.insert((c.clone(), j), f);
                        }
                    }
                    acc
                }),
        }
    }

    /// Grade-wise union with `other` after renaming `other`'s vertex `q` to
    /// this complex's vertex `p`. Vertex ids shared by both complexes denote
    /// the same vertex. Simplicial and ordered results are completed: any
    /// vertex triple whose three edges are present becomes a 2-cell.
    pub fn sew(&self, other: &Complex, p: VertexId, q: VertexId) -> Result<Complex> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch {
                left: self.kind,
                right: other.kind,
            });
        }
        if !self.has_vertex(p) {
            return Err(Error::VertexNotFound(p));
        }
        if !other.has_vertex(q) {
            return Err(Error::VertexNotFound(q));
        }
        let renamed = other.relabel(q, p)?;
        self.union(&renamed)
    }

    /// Identifies vertex `merge` with vertex `keep` inside this complex.
    ///
    /// In a Delta complex, cells whose vertex lists change keep their identity
    /// through a tag naming their original vertices, so gluing two vertices
    /// of a triangle yields a cone with two distinct side edges.
    pub fn glue(&self, keep: VertexId, merge: VertexId) -> Result<Complex> {
        for v in [keep, merge] {
            if !self.has_vertex(v) {
                return Err(Error::VertexNotFound(v));
            }
        }
        if keep == merge {
            return Ok(self.clone());
        }
        let mut out = self.relabel(merge, keep)?;
        if out.kind != ComplexKind::Delta {
            out.complete();
        }
        Ok(out)
    }

    fn relabel(&self, from: VertexId, to: VertexId) -> Result<Complex> {
        let rename = |v: VertexId| if v == from { to } else { v };
        match self.kind {
            ComplexKind::Delta => {
                let mut mapping: HashMap<&Cell, Cell> = HashMap::new();
                for c in self.all_cells() {
                    let vertices: Vec<VertexId> = c.vertices.iter().map(|&v| rename(v)).collect();
                    let changed = vertices != c.vertices;
                    let tag = match (&c.tag, changed && c.dim() > 0) {
                        (Some(t), _) => Some(t.clone()),
                        (None, true) => Some(c.to_string()),
                        (None, false) => None,
                    };
                    mapping.insert(c, Cell { vertices, tag });
                }
                let mut out = Self::empty(ComplexKind::Delta);
                for new in mapping.values() {
                    out.grades[new.dim()].insert(new.clone());
                }
                for ((c, j), f) in &self.faces {
                    let key = mapping.get(c).cloned().unwrap_or_else(|| c.clone());
                    let val = mapping.get(f).cloned().unwrap_or_else(|| f.clone());
                    out.faces.insert((key, *j), val);
                }
                Ok(out)
            }
            kind => {
                let mut cells = Vec::new();
                for c in self.all_cells() {
                    let mut vertices: Vec<VertexId> =
                        c.vertices.iter().map(|&v| rename(v)).collect();
                    vertices.sort();
                    let renamed = Cell {
                        vertices,
                        tag: None,
                    };
                    if !renamed.is_strictly_increasing() {
                        return Err(Error::KindViolation(renamed));
                    }
                    cells.push(renamed);
                }
                Complex::build(cells, kind)
            }
        }
    }

    fn union(&self, other: &Complex) -> Result<Complex> {
        match self.kind {
            ComplexKind::Delta => {
                let mut out = self.clone();
                for c in other.all_cells() {
                    out.grades[c.dim()].insert(c.clone());
                }
                for ((c, j), f) in &other.faces {
                    if let Some(prev) = out.faces.insert((c.clone(), *j), f.clone()) {
                        if prev != *f {
                            return Err(Error::InvalidDeltaSet(format!(
                                "d_{j}({c}) glued to both {prev} and {f}"
                            )));
                        }
                    }
                }
                out.check_delta()?;
                Ok(out)
            }
            kind => {
                let mut out =
                    Complex::build(self.all_cells().chain(other.all_cells()).cloned(), kind)?;
                out.complete();
                Ok(out)
            }
        }
    }

    /// Adds every vertex triple whose three edges are all present, repeating
    /// until nothing changes.
    fn complete(&mut self) {
        loop {
            let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
            for e in &self.grades[1] {
                let (a, b) = (e.vertices[0], e.vertices[1]);
                adjacency.entry(a).or_default().insert(b);
                adjacency.entry(b).or_default().insert(a);
            }
            let mut added = Vec::new();
            for e in &self.grades[1] {
                let (a, b) = (e.vertices[0], e.vertices[1]);
                let (na, nb) = (&adjacency[&a], &adjacency[&b]);
                for &c in na.intersection(nb).filter(|&&c| c > b) {
                    let t = Cell {
                        vertices: vec![a, b, c],
                        tag: None,
                    };
                    if !self.grades[2].contains(&t) {
                        added.push(t);
                    }
                }
            }
            if added.is_empty() {
                return;
            }
            for t in added {
                self.insert_closed(t);
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FaceJson {
    cell: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cell_tag: Option<String>,
    j: usize,
    face: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    face_tag: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TagsJson {
    #[serde(rename = "X0")]
    x0: Vec<Option<String>>,
    #[serde(rename = "X1")]
    x1: Vec<Option<String>>,
    #[serde(rename = "X2")]
    x2: Vec<Option<String>>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    kind: ComplexKind,
    #[serde(rename = "X0")]
    x0: Vec<Vec<u32>>,
    #[serde(rename = "X1")]
    x1: Vec<Vec<u32>>,
    #[serde(rename = "X2")]
    x2: Vec<Vec<u32>>,
    faces: Vec<FaceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tags: Option<TagsJson>,
}

impl From<Complex> for ComplexJson {
    fn from(cx: Complex) -> Self {
        let ids = |d: usize| cx.grades[d].iter().map(Cell::ids).collect::<Vec<_>>();
        let tags = |d: usize| {
            cx.grades[d]
                .iter()
                .map(|c| c.tag.clone())
                .collect::<Vec<_>>()
        };
        let tagged = cx.all_cells().any(|c| c.tag.is_some());
        ComplexJson {
            kind: cx.kind,
            x0: ids(0),
            x1: ids(1),
            x2: ids(2),
            faces: cx
                .faces
                .iter()
                .map(|((c, j), f)| FaceJson {
                    cell: c.ids(),
                    cell_tag: c.tag.clone(),
                    j: *j,
                    face: f.ids(),
                    face_tag: f.tag.clone(),
                })
                .collect(),
            tags: tagged.then(|| TagsJson {
                x0: tags(0),
                x1: tags(1),
                x2: tags(2),
            }),
        }
    }
}

impl TryFrom<ComplexJson> for Complex {
    type Error = Error;

    fn try_from(json: ComplexJson) -> Result<Self> {
        fn cell(ids: Vec<u32>, tag: Option<String>) -> Result<Cell> {
            let mut c = Cell::new(ids)?;
            c.tag = tag;
            Ok(c)
        }
        let grades = [json.x0, json.x1, json.x2];
        let tags = json.tags.map(|t| [t.x0, t.x1, t.x2]);
        let mut cells = Vec::new();
        for (d, grade) in grades.into_iter().enumerate() {
            let grade_tags = tags.as_ref().map(|t| &t[d]);
            for (i, ids) in grade.into_iter().enumerate() {
                if ids.len() != d + 1 {
                    return Err(Error::Consistency(format!(
                        "X{d} entry {i} has {} vertices",
                        ids.len()
                    )));
                }
                let tag = grade_tags.and_then(|t| t.get(i).cloned()).flatten();
                cells.push(cell(ids, tag)?);
            }
        }
        let mut faces = Vec::new();
        for f in json.faces {
            faces.push((cell(f.cell, f.cell_tag)?, f.j, cell(f.face, f.face_tag)?));
        }
        Ok(Complex::from_parts(json.kind, cells, faces))
    }
}
