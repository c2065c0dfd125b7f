//! Implicit infinite lattices.
//!
//! A [`LatticeSpec`] describes an infinite locally finite graph by a vertex
//! coordinate scheme plus a symmetric neighbor rule; it is never materialized
//! as a whole. Finite pieces are carved out as [`VertexSubset`]s (balls and
//! swelling sequences) and turned into concrete [`crate::network::Network`]s
//! by the approximation module.
//!
//! Vertices are integer coordinate tuples plus a small sublattice tag. The
//! packing into network vertex ids is the insertion order of the subset that
//! materializes them, which is deterministic for every constructor here, so
//! serialized subsets and flows are stable across runs.
//!
//! Coordinate conventions per kind:
//! - `grid(d)`: points of Z^d, tag unused; neighbors along each axis.
//! - `triangular`: Z^2 with neighbor offsets (±1,0), (0,±1), ±(1,1); valence 6.
//! - `hexagonal`: honeycomb as two triangular sublattices, tag 0/1;
//!   `(x,y,0) ~ (x,y,1), (x-1,y,1), (x,y-1,1)`; valence 3.
//! - `subdivided_grid`: square grid with every edge subdivided; tag 0 =
//!   junction (valence 4), tag 1/2 = midpoint of the horizontal/vertical edge
//!   leaving `(x,y)` (valence 2).
//! - `tree(b)`: the b-regular infinite tree; vertices are root paths with a
//!   leading 0 sentinel, so the root is `[0]` and children append a digit.
//! - `dumbbell(d)`: two copies of the d-grid (tag = side) joined by a single
//!   bridge edge between the two origins.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexSet;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Coordinates of one lattice vertex; inline up to four entries.
pub type Coords = SmallVec<[i32; 4]>;

/// Neighbor list with per-edge conductance.
pub type NeighborList = SmallVec<[(LatticeVertex, f64); 8]>;

/// A vertex of an implicit infinite lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVertex {
    coords: Coords,
    tag: u8,
}

impl LatticeVertex {
    pub fn new(coords: &[i32], tag: u8) -> Self {
        LatticeVertex {
            coords: SmallVec::from_slice(coords),
            tag,
        }
    }

    pub fn coords(&self) -> &[i32] {
        &self.coords
    }

    pub fn tag(&self) -> u8 {
        self.tag
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        if self.tag != 0 {
            write!(f, ":{}", self.tag)?;
        }
        Ok(())
    }
}

/// The lattice families in scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// Z^d with unit resistors along each axis.
    Grid(u8),
    Triangular,
    Hexagonal,
    SubdividedGrid,
    /// The b-regular infinite tree.
    Tree(u8),
    /// Two d-grids joined by one bridge edge between their origins.
    Dumbbell(u8),
}

/// Immutable description of an infinite lattice; all queries are pure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    kind: LatticeKind,
}

/// Positive rational relative frequency of a symmetry class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frequency {
    pub numerator: u32,
    pub denominator: u32,
}

impl Frequency {
    pub const ONE: Frequency = Frequency {
        numerator: 1,
        denominator: 1,
    };

    pub fn new(numerator: u32, denominator: u32) -> Self {
        Frequency {
            numerator,
            denominator,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// One symmetry class of vertices with its density and valence.
#[derive(Debug, Clone, Copy)]
pub struct VertexKindInfo {
    pub label: &'static str,
    pub frequency: Frequency,
    pub valence: u32,
}

/// One symmetry class of edges with its density.
#[derive(Debug, Clone, Copy)]
pub struct EdgeKindInfo {
    pub label: &'static str,
    pub frequency: Frequency,
}

impl LatticeSpec {
    pub fn grid(d: u8) -> Result<Self> {
        if (1..=6).contains(&d) {
            Ok(LatticeSpec {
                kind: LatticeKind::Grid(d),
            })
        } else {
            Err(Error::InvalidArgument(format!(
                "grid dimension must be 1..=6, got {d}"
            )))
        }
    }

    pub fn triangular() -> Self {
        LatticeSpec {
            kind: LatticeKind::Triangular,
        }
    }

    pub fn hexagonal() -> Self {
        LatticeSpec {
            kind: LatticeKind::Hexagonal,
        }
    }

    pub fn subdivided_grid() -> Self {
        LatticeSpec {
            kind: LatticeKind::SubdividedGrid,
        }
    }

    pub fn tree(valence: u8) -> Result<Self> {
        if valence >= 3 {
            Ok(LatticeSpec {
                kind: LatticeKind::Tree(valence),
            })
        } else {
            Err(Error::InvalidArgument(format!(
                "tree valence must be at least 3, got {valence}"
            )))
        }
    }

    pub fn dumbbell(d: u8) -> Result<Self> {
        if (1..=4).contains(&d) {
            Ok(LatticeSpec {
                kind: LatticeKind::Dumbbell(d),
            })
        } else {
            Err(Error::InvalidArgument(format!(
                "dumbbell grid dimension must be 1..=4, got {d}"
            )))
        }
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// The canonical base point of the lattice.
    pub fn origin(&self) -> LatticeVertex {
        match self.kind {
            LatticeKind::Grid(d) => LatticeVertex::new(&vec![0; d as usize], 0),
            LatticeKind::Triangular => LatticeVertex::new(&[0, 0], 0),
            LatticeKind::Hexagonal | LatticeKind::SubdividedGrid => {
                LatticeVertex::new(&[0, 0], 0)
            }
            LatticeKind::Tree(_) => LatticeVertex::new(&[0], 0),
            LatticeKind::Dumbbell(d) => LatticeVertex::new(&vec![0; d as usize], 0),
        }
    }

    /// A fixed neighbor of the origin; `(origin, canonical_neighbor)` is the
    /// edge used by the edge-resistance experiments.
    pub fn canonical_neighbor(&self) -> LatticeVertex {
        match self.kind {
            LatticeKind::Grid(d) => {
                let mut c = vec![0; d as usize];
                c[0] = 1;
                LatticeVertex::new(&c, 0)
            }
            LatticeKind::Triangular => LatticeVertex::new(&[1, 0], 0),
            LatticeKind::Hexagonal => LatticeVertex::new(&[0, 0], 1),
            LatticeKind::SubdividedGrid => LatticeVertex::new(&[0, 0], 1),
            LatticeKind::Tree(_) => LatticeVertex::new(&[0, 0], 0),
            // the bridge edge
            LatticeKind::Dumbbell(d) => LatticeVertex::new(&vec![0; d as usize], 1),
        }
    }

    pub fn canonical_edge(&self) -> (LatticeVertex, LatticeVertex) {
        (self.origin(), self.canonical_neighbor())
    }

    /// Checks that `v` is a well-formed vertex of this lattice.
    pub fn validate_vertex(&self, v: &LatticeVertex) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        match self.kind {
            LatticeKind::Grid(d) => {
                if v.coords.len() != d as usize || v.tag != 0 {
                    return bad(format!("expected {d} coordinates and no tag for {self}"));
                }
            }
            LatticeKind::Triangular => {
                if v.coords.len() != 2 || v.tag != 0 {
                    return bad(format!("expected 2 coordinates and no tag for {self}"));
                }
            }
            LatticeKind::Hexagonal => {
                if v.coords.len() != 2 || v.tag > 1 {
                    return bad(format!("expected 2 coordinates and tag 0|1 for {self}"));
                }
            }
            LatticeKind::SubdividedGrid => {
                if v.coords.len() != 2 || v.tag > 2 {
                    return bad(format!("expected 2 coordinates and tag 0|1|2 for {self}"));
                }
            }
            LatticeKind::Tree(b) => {
                let ok = v.tag == 0
                    && !v.coords.is_empty()
                    && v.coords[0] == 0
                    && v.coords.iter().skip(1).enumerate().all(|(i, &digit)| {
                        let limit = if i == 0 { b as i32 } else { b as i32 - 1 };
                        (0..limit).contains(&digit)
                    });
                if !ok {
                    return bad(format!("malformed tree path for {self}"));
                }
            }
            LatticeKind::Dumbbell(d) => {
                if v.coords.len() != d as usize || v.tag > 1 {
                    return bad(format!("expected {d} coordinates and tag 0|1 for {self}"));
                }
            }
        }
        Ok(())
    }

    /// Neighbors of `v` with per-edge conductances (1 ohm throughout).
    /// The rule is symmetric: `u` lists `v` iff `v` lists `u`.
    pub fn neighbors(&self, v: &LatticeVertex) -> NeighborList {
        let mut out = NeighborList::new();
        match self.kind {
            LatticeKind::Grid(d) => {
                grid_moves(&v.coords, d as usize, v.tag, &mut out);
            }
            LatticeKind::Triangular => {
                let (x, y) = (v.coords[0], v.coords[1]);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)] {
                    out.push((LatticeVertex::new(&[x + dx, y + dy], 0), 1.0));
                }
            }
            LatticeKind::Hexagonal => {
                let (x, y) = (v.coords[0], v.coords[1]);
                if v.tag == 0 {
                    out.push((LatticeVertex::new(&[x, y], 1), 1.0));
                    out.push((LatticeVertex::new(&[x - 1, y], 1), 1.0));
                    out.push((LatticeVertex::new(&[x, y - 1], 1), 1.0));
                } else {
                    out.push((LatticeVertex::new(&[x, y], 0), 1.0));
                    out.push((LatticeVertex::new(&[x + 1, y], 0), 1.0));
                    out.push((LatticeVertex::new(&[x, y + 1], 0), 1.0));
                }
            }
            LatticeKind::SubdividedGrid => {
                let (x, y) = (v.coords[0], v.coords[1]);
                match v.tag {
                    0 => {
                        out.push((LatticeVertex::new(&[x, y], 1), 1.0));
                        out.push((LatticeVertex::new(&[x - 1, y], 1), 1.0));
                        out.push((LatticeVertex::new(&[x, y], 2), 1.0));
                        out.push((LatticeVertex::new(&[x, y - 1], 2), 1.0));
                    }
                    1 => {
                        out.push((LatticeVertex::new(&[x, y], 0), 1.0));
                        out.push((LatticeVertex::new(&[x + 1, y], 0), 1.0));
                    }
                    _ => {
                        out.push((LatticeVertex::new(&[x, y], 0), 1.0));
                        out.push((LatticeVertex::new(&[x, y + 1], 0), 1.0));
                    }
                }
            }
            LatticeKind::Tree(b) => {
                if v.coords.len() > 1 {
                    let mut parent = v.coords.clone();
                    parent.pop();
                    out.push((
                        LatticeVertex {
                            coords: parent,
                            tag: 0,
                        },
                        1.0,
                    ));
                }
                let child_count = if v.coords.len() == 1 { b } else { b - 1 };
                for digit in 0..child_count {
                    let mut child = v.coords.clone();
                    child.push(digit as i32);
                    out.push((
                        LatticeVertex {
                            coords: child,
                            tag: 0,
                        },
                        1.0,
                    ));
                }
            }
            LatticeKind::Dumbbell(d) => {
                grid_moves(&v.coords, d as usize, v.tag, &mut out);
                if v.coords.iter().all(|&c| c == 0) {
                    out.push((
                        LatticeVertex {
                            coords: v.coords.clone(),
                            tag: 1 - v.tag,
                        },
                        1.0,
                    ));
                }
            }
        }
        out
    }

    /// All vertices within distance `radius` of `center`: the L-infinity ball
    /// for grids, the graph-distance ball for every other kind. The
    /// enumeration order is deterministic (lexicographic for grids, BFS
    /// otherwise).
    pub fn ball(&self, center: &LatticeVertex, radius: u32) -> Result<VertexSubset> {
        self.validate_vertex(center)?;
        match self.kind {
            LatticeKind::Grid(d) => Ok(self.box_ball(center, radius, d as usize)),
            _ => Ok(self.bfs_ball(center, radius)),
        }
    }

    fn box_ball(&self, center: &LatticeVertex, radius: u32, d: usize) -> VertexSubset {
        let r = radius as i32;
        let mut set = IndexSet::new();
        let mut coords = vec![0i32; d];
        fn rec(
            dim: usize,
            d: usize,
            center: &[i32],
            r: i32,
            coords: &mut Vec<i32>,
            set: &mut IndexSet<LatticeVertex>,
        ) {
            if dim == d {
                set.insert(LatticeVertex::new(coords, 0));
                return;
            }
            for c in center[dim] - r..=center[dim] + r {
                coords[dim] = c;
                rec(dim + 1, d, center, r, coords, set);
            }
        }
        rec(0, d, &center.coords, r, &mut coords, &mut set);
        VertexSubset { set }
    }

    fn bfs_ball(&self, center: &LatticeVertex, radius: u32) -> VertexSubset {
        let mut set = IndexSet::new();
        set.insert(center.clone());
        let mut dist = vec![0u32];
        let mut head = 0;
        while head < set.len() {
            if dist[head] < radius {
                let v = set.get_index(head).unwrap().clone();
                let d = dist[head];
                for (w, _) in self.neighbors(&v) {
                    if set.insert(w) {
                        dist.push(d + 1);
                    }
                }
            }
            head += 1;
        }
        VertexSubset { set }
    }

    /// Vertices of `s` with at least one neighbor outside `s`.
    pub fn boundary(&self, s: &VertexSubset) -> VertexSubset {
        let mut set = IndexSet::new();
        for v in s.iter() {
            if self.neighbors(v).iter().any(|(w, _)| !s.contains(w)) {
                set.insert(v.clone());
            }
        }
        VertexSubset { set }
    }

    /// Edges from a vertex in `s` to a vertex outside `s`, as
    /// `(inside, outside)` pairs in subset order.
    pub fn edge_boundary(&self, s: &VertexSubset) -> Vec<(LatticeVertex, LatticeVertex)> {
        let mut out = Vec::new();
        for v in s.iter() {
            for (w, _) in self.neighbors(v) {
                if !s.contains(&w) {
                    out.push((v.clone(), w));
                }
            }
        }
        out
    }

    /// |edge_boundary(s)| / |s|; small values witness a pinching sequence.
    pub fn pinching_ratio(&self, s: &VertexSubset) -> Result<f64> {
        if s.is_empty() {
            return Err(Error::EmptySubset);
        }
        Ok(self.edge_boundary(s).len() as f64 / s.len() as f64)
    }

    /// Symmetry classes of vertices with densities and valences. The bridge
    /// endpoints of the dumbbell have density zero and are not listed.
    pub fn vertex_kinds(&self) -> Vec<VertexKindInfo> {
        match self.kind {
            LatticeKind::Grid(d) | LatticeKind::Dumbbell(d) => vec![VertexKindInfo {
                label: "vertex",
                frequency: Frequency::ONE,
                valence: 2 * d as u32,
            }],
            LatticeKind::Triangular => vec![VertexKindInfo {
                label: "vertex",
                frequency: Frequency::ONE,
                valence: 6,
            }],
            LatticeKind::Hexagonal => vec![VertexKindInfo {
                label: "vertex",
                frequency: Frequency::ONE,
                valence: 3,
            }],
            LatticeKind::SubdividedGrid => vec![
                VertexKindInfo {
                    label: "junction",
                    frequency: Frequency::new(1, 3),
                    valence: 4,
                },
                VertexKindInfo {
                    label: "midpoint",
                    frequency: Frequency::new(2, 3),
                    valence: 2,
                },
            ],
            LatticeKind::Tree(b) => vec![VertexKindInfo {
                label: "vertex",
                frequency: Frequency::ONE,
                valence: b as u32,
            }],
        }
    }

    /// Symmetry classes of edges. Every kind in scope is edge-transitive up
    /// to density-zero exceptions (the dumbbell bridge).
    pub fn edge_kinds(&self) -> Vec<EdgeKindInfo> {
        vec![EdgeKindInfo {
            label: "edge",
            frequency: Frequency::ONE,
        }]
    }

    /// Index into `vertex_kinds()` for a given vertex.
    pub fn vertex_kind_index(&self, v: &LatticeVertex) -> usize {
        match self.kind {
            LatticeKind::SubdividedGrid => usize::from(v.tag != 0),
            _ => 0,
        }
    }

    /// Density-weighted mean valence.
    pub fn average_valence(&self) -> f64 {
        self.vertex_kinds()
            .iter()
            .map(|k| k.frequency.as_f64() * k.valence as f64)
            .sum()
    }

    /// Closed-form resistance across any edge of an edge-transitive smallish
    /// lattice: `2 / valence` with one vertex class, else
    /// `(v1 + v2) / (v1 * v2)` with two. Unsupported for trees (not smallish)
    /// and dumbbells (not edge-transitive).
    pub fn theoretical_edge_resistance(&self) -> Result<f64> {
        match self.kind {
            LatticeKind::Grid(_)
            | LatticeKind::Triangular
            | LatticeKind::Hexagonal
            | LatticeKind::SubdividedGrid => {
                let kinds = self.vertex_kinds();
                match kinds.as_slice() {
                    [one] => Ok(2.0 / one.valence as f64),
                    [a, b] => {
                        Ok((a.valence + b.valence) as f64 / (a.valence * b.valence) as f64)
                    }
                    _ => unreachable!("kind tables have one or two entries"),
                }
            }
            _ => Err(Error::UnsupportedKind {
                kind: self.to_string(),
                operation: "theoretical_edge_resistance",
            }),
        }
    }

    /// Parses `origin`, `neighbor`, or coordinates like `1,-2` / `0,0:1`.
    pub fn parse_vertex(&self, text: &str) -> Result<LatticeVertex> {
        let text = text.trim();
        match text {
            "origin" => return Ok(self.origin()),
            "neighbor" => return Ok(self.canonical_neighbor()),
            _ => {}
        }
        let (coord_part, tag) = match text.split_once(':') {
            None => (text, 0u8),
            Some((c, t)) => (
                c,
                t.parse::<u8>().map_err(|_| {
                    Error::InvalidArgument(format!("bad sublattice tag in {text:?}"))
                })?,
            ),
        };
        let coords: Vec<i32> = coord_part
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coordinate in {text:?}")))
            })
            .collect::<Result<_>>()?;
        let v = LatticeVertex::new(&coords, tag);
        self.validate_vertex(&v)?;
        Ok(v)
    }
}

fn grid_moves(coords: &Coords, d: usize, tag: u8, out: &mut NeighborList) {
    for axis in 0..d {
        for step in [1, -1] {
            let mut c = coords.clone();
            c[axis] += step;
            out.push((LatticeVertex { coords: c, tag }, 1.0));
        }
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LatticeKind::Grid(d) => write!(f, "grid{d}"),
            LatticeKind::Triangular => write!(f, "tri"),
            LatticeKind::Hexagonal => write!(f, "hex"),
            LatticeKind::SubdividedGrid => write!(f, "subdiv"),
            LatticeKind::Tree(b) => write!(f, "tree{b}"),
            LatticeKind::Dumbbell(d) => write!(f, "dumbbell{d}"),
        }
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tri" => return Ok(LatticeSpec::triangular()),
            "hex" => return Ok(LatticeSpec::hexagonal()),
            "subdiv" => return Ok(LatticeSpec::subdivided_grid()),
            _ => {}
        }
        if let Some(d) = s.strip_prefix("grid").and_then(|t| t.parse::<u8>().ok()) {
            return LatticeSpec::grid(d);
        }
        if let Some(b) = s.strip_prefix("tree").and_then(|t| t.parse::<u8>().ok()) {
            return LatticeSpec::tree(b);
        }
        if let Some(d) = s
            .strip_prefix("dumbbell")
            .and_then(|t| t.parse::<u8>().ok())
        {
            return LatticeSpec::dumbbell(d);
        }
        Err(Error::InvalidArgument(format!(
            "unknown lattice kind {s:?} (expected grid1|grid2|grid3|grid4|tri|hex|subdiv|tree3|dumbbell3)"
        )))
    }
}

/// Finite, insertion-ordered set of lattice vertices.
#[derive(Debug, Clone, Default)]
pub struct VertexSubset {
    set: IndexSet<LatticeVertex>,
}

impl VertexSubset {
    /// Builds a subset, deduplicating while keeping first-seen order.
    pub fn from_vertices(vertices: impl IntoIterator<Item = LatticeVertex>) -> Self {
        VertexSubset {
            set: vertices.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn contains(&self, v: &LatticeVertex) -> bool {
        self.set.contains(v)
    }

    /// Insertion position of `v`; this is its dense network vertex id after
    /// materialization.
    pub fn position(&self, v: &LatticeVertex) -> Option<usize> {
        self.set.get_index_of(v)
    }

    pub fn get(&self, index: usize) -> Option<&LatticeVertex> {
        self.set.get_index(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LatticeVertex> {
        self.set.iter()
    }

    /// True if every vertex of `other` is contained in `self`.
    pub fn contains_all(&self, other: &VertexSubset) -> bool {
        other.iter().all(|v| self.contains(v))
    }
}

/// Nested balls around a fixed center set; term `r` is the union of the
/// radius-`r` balls around each center, so any finite set is eventually
/// contained in some term.
#[derive(Debug, Clone)]
pub struct SwellingSequence {
    lattice: LatticeSpec,
    centers: Vec<LatticeVertex>,
}

impl SwellingSequence {
    pub fn around(lattice: &LatticeSpec, centers: &[LatticeVertex]) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::EmptySubset);
        }
        for c in centers {
            lattice.validate_vertex(c)?;
        }
        Ok(SwellingSequence {
            lattice: *lattice,
            centers: centers.to_vec(),
        })
    }

    /// Sequence centered on the canonical edge, the default for bracketing a
    /// pair of adjacent vertices.
    pub fn around_pair(
        lattice: &LatticeSpec,
        p: &LatticeVertex,
        q: &LatticeVertex,
    ) -> Result<Self> {
        Self::around(lattice, &[p.clone(), q.clone()])
    }

    pub fn lattice(&self) -> &LatticeSpec {
        &self.lattice
    }

    pub fn subset(&self, radius: u32) -> VertexSubset {
        let mut set = IndexSet::new();
        for c in &self.centers {
            // centers were validated at construction
            let ball = self.lattice.ball(c, radius).expect("validated center");
            for v in ball.set {
                set.insert(v);
            }
        }
        VertexSubset { set }
    }
}
