//! Triangulations as sets of maximal faces: links, stars, the graphs
//! `sigma_q`, corner simplices and corner-cut triangulations of the 4-cube,
//! validation, and the placing triangulation.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::kernel::{rat, Config, Face, Rational};
use crate::presets;

/// A triangulation, stored as its maximal faces in lexicographic order.
#[derive(Clone)]
pub struct Triangulation {
    cfg: Arc<Config>,
    cells: Vec<Face>,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        same_config(&self.cfg, &other.cfg) && self.cells == other.cells
    }
}

impl Eq for Triangulation {}

impl Hash for Triangulation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.cells.iter().map(|&c| self.cfg.face_set(c)))
            .finish()
    }
}

pub(crate) fn same_config(a: &Arc<Config>, b: &Arc<Config>) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && a.labels() == b.labels())
}

impl Triangulation {
    /// Builds a triangulation from its maximal faces. Only cardinalities are
    /// checked here; use [`Triangulation::validate`] for the geometry.
    pub fn new(cfg: Arc<Config>, cells: impl IntoIterator<Item = Face>) -> Result<Triangulation> {
        let size = cfg.affine_dim() + 1;
        let mut cells: Vec<Face> = cells.into_iter().collect();
        for &c in &cells {
            if !c.is_subset_of(cfg.all()) {
                return Err(Error::UnknownLabel(format!("{c:?}")));
            }
            if c.len() != size {
                return Err(Error::WrongCardinality {
                    expected: size,
                    got: c.len(),
                });
            }
        }
        cells.sort_unstable();
        let before = cells.len();
        cells.dedup();
        if cells.len() != before {
            return Err(Error::PreconditionFailed("repeated maximal face".into()));
        }
        Ok(Triangulation { cfg, cells })
    }

    pub(crate) fn from_cells(cfg: Arc<Config>, mut cells: Vec<Face>) -> Triangulation {
        cells.sort_unstable();
        Triangulation { cfg, cells }
    }

    pub fn cfg(&self) -> &Arc<Config> {
        &self.cfg
    }

    /// Maximal faces in lexicographic order.
    pub fn cells(&self) -> &[Face] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Points used by at least one cell.
    pub fn vertices(&self) -> Face {
        self.cells.iter().fold(Face::EMPTY, |a, &c| a.union(c))
    }

    pub fn has_face(&self, f: Face) -> bool {
        self.cells.iter().any(|&c| f.is_subset_of(c))
    }

    pub fn has_cell(&self, c: Face) -> bool {
        self.cells.binary_search(&c).is_ok()
    }

    /// Maximal faces of the link of `t`: `c \ t` for every cell `c ⊇ t`.
    pub fn link(&self, t: Face) -> Result<Vec<Face>> {
        let link: Vec<Face> = self
            .cells
            .iter()
            .filter(|&&c| t.is_subset_of(c))
            .map(|&c| c.difference(t))
            .collect();
        if link.is_empty() {
            return Err(Error::NotAFace(self.cfg.face_set(t)));
        }
        let mut link = link;
        link.sort_unstable();
        Ok(link)
    }

    /// Maximal faces of the star of `t`: the cells containing it.
    pub fn star(&self, t: Face) -> Result<Vec<Face>> {
        let star: Vec<Face> = self.cells.iter().copied().filter(|&c| t.is_subset_of(c)).collect();
        if star.is_empty() {
            return Err(Error::NotAFace(self.cfg.face_set(t)));
        }
        Ok(star)
    }

    /// Edges of the 1-skeleton, sorted.
    pub fn edges(&self) -> Vec<Face> {
        let mut edges: Vec<Face> = self
            .cells
            .iter()
            .flat_map(|&c| {
                let v = c.to_vec();
                let mut out = Vec::with_capacity(v.len() * (v.len() - 1) / 2);
                for (i, &a) in v.iter().enumerate() {
                    for &b in &v[i + 1..] {
                        out.push(Face::from_indices([a, b]));
                    }
                }
                out
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Edges of squared length `q`.
    pub fn sigma_graph(&self, q: i64) -> SigmaGraph {
        let q_rat = rat(q);
        let edges = self
            .edges()
            .into_iter()
            .filter(|e| {
                let v = e.to_vec();
                *self.cfg.sq_dist(v[0], v[1]) == q_rat
            })
            .collect();
        SigmaGraph { q, edges }
    }

    /// Sum of the cell volumes containing `t`.
    pub fn star_volume(&self, t: Face) -> Rational {
        self.cells
            .iter()
            .filter(|&&c| t.is_subset_of(c))
            .map(|&c| self.cfg.unsigned_volume(c))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn total_volume(&self) -> Rational {
        self.star_volume(Face::EMPTY)
    }

    /// Checks that the maximal faces form a triangulation of the whole
    /// configuration: full-dimensional cells, pairwise proper intersections
    /// (no circuit has one side in a cell and the other side in a cell), and
    /// total volume equal to the hull volume.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let cfg = &self.cfg;
        let size = cfg.affine_dim() + 1;
        for &c in &self.cells {
            if c.len() != size {
                return Err(ValidationError::WrongSize {
                    cell: cfg.face_set(c),
                    expected: size,
                });
            }
            if cfg.signed_volume(c).map(|v| v.is_zero()).unwrap_or(true) {
                return Err(ValidationError::Degenerate(cfg.face_set(c)));
            }
        }
        for w in self.cells.windows(2) {
            if w[0] == w[1] {
                return Err(ValidationError::Duplicate(cfg.face_set(w[0])));
            }
        }
        for z in cfg.circuits().all() {
            let first = self.cells.iter().find(|&&c| z.neg.is_subset_of(c));
            let second = self.cells.iter().find(|&&c| z.pos.is_subset_of(c));
            if let (Some(&a), Some(&b)) = (first, second) {
                return Err(ValidationError::ImproperIntersection {
                    first: cfg.face_set(a),
                    second: cfg.face_set(b),
                    circuit: z.display(cfg),
                });
            }
        }
        let total = self.total_volume();
        let hull = cfg.hull_volume();
        if &total != hull {
            return Err(ValidationError::Volume {
                total: total.to_string(),
                hull: hull.to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("cell {cell} does not have {expected} points")]
    WrongSize { cell: String, expected: usize },
    #[error("cell {0} is affinely dependent")]
    Degenerate(String),
    #[error("cell {0} appears twice")]
    Duplicate(String),
    #[error("cells {first} and {second} intersect improperly (circuit {circuit})")]
    ImproperIntersection {
        first: String,
        second: String,
        circuit: String,
    },
    #[error("cells cover volume {total}, hull volume is {hull}")]
    Volume { total: String, hull: String },
}

/// Edges of a triangulation with a fixed squared length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaGraph {
    pub q: i64,
    pub edges: Vec<Face>,
}

impl SigmaGraph {
    pub fn degree(&self, x: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(x)).count()
    }

    pub fn is_isolated(&self, x: usize) -> bool {
        self.degree(x) == 0
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Parity classes of the 4-cube's vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CubeClass {
    /// Even coordinate sum: `a d f g j k m p`.
    E,
    /// Odd coordinate sum: `b c e h i l n o`.
    O,
}

impl CubeClass {
    pub fn of(x: usize) -> CubeClass {
        if x.count_ones() % 2 == 0 {
            CubeClass::E
        } else {
            CubeClass::O
        }
    }

    pub fn members(self) -> Face {
        Face::from_indices((0..16).filter(|&x| CubeClass::of(x) == self))
    }

    pub fn other(self) -> CubeClass {
        match self {
            CubeClass::E => CubeClass::O,
            CubeClass::O => CubeClass::E,
        }
    }

    /// The four long diagonals `{x, x'}` with both ends in this class.
    pub fn diagonals(self) -> Vec<Face> {
        self.members()
            .iter()
            .filter(|&x| x < 15 - x)
            .map(|x| Face::from_indices([x, 15 - x]))
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            CubeClass::E => "E",
            CubeClass::O => "O",
        }
    }
}

/// `x` together with every point at squared distance 1 from it.
pub fn corner_simplex(cfg: &Config, x: usize) -> Result<Face> {
    if x >= cfg.len() {
        return Err(Error::UnknownLabel(format!("#{x}")));
    }
    let one = rat(1);
    Ok((0..cfg.len())
        .filter(|&y| y == x || *cfg.sq_dist(x, y) == one)
        .collect())
}

/// Corner simplex of the 4-cube with apex `x`.
pub fn cube_corner(x: usize) -> Face {
    Face::from_indices(std::iter::once(x).chain((0..4).map(|j| x ^ 1 << j)))
}

/// Builds the corner-cut triangulation of the 4-cube that cuts the corners
/// with apex outside `class` and triangulates the cross polytope `conv(class)`
/// around `diagonal`.
pub fn make_corner_cut(class: CubeClass, diagonal: Face) -> Result<Triangulation> {
    let cube = presets::cube4();
    let diagonals = class.diagonals();
    if !diagonals.contains(&diagonal) {
        return Err(Error::BadDiagonal(cube.face_set(diagonal)));
    }
    let mut cells: Vec<Face> = class
        .other()
        .members()
        .iter()
        .map(cube_corner)
        .collect();
    let others: Vec<Vec<usize>> = diagonals
        .iter()
        .filter(|&&d| d != diagonal)
        .map(|d| d.to_vec())
        .collect();
    for choice in 0..8usize {
        let mut cell = diagonal;
        for (j, d) in others.iter().enumerate() {
            cell = cell.with(d[choice >> j & 1]);
        }
        cells.push(cell);
    }
    Triangulation::new(cube, cells)
}

/// The eight corner-cut triangulations, in `(class, diagonal)` order.
pub fn corner_cuts() -> &'static [(CubeClass, Face, Triangulation)] {
    static ALL: OnceLock<Vec<(CubeClass, Face, Triangulation)>> = OnceLock::new();
    ALL.get_or_init(|| {
        [CubeClass::E, CubeClass::O]
            .into_iter()
            .flat_map(|s| {
                s.diagonals()
                    .into_iter()
                    .map(move |d| (s, d, make_corner_cut(s, d).expect("class diagonal")))
            })
            .collect()
    })
}

/// The `(class, diagonal)` of a corner-cut triangulation, if `t` is one.
pub fn is_corner_cut(t: &Triangulation) -> Option<(CubeClass, Face)> {
    corner_cuts()
        .iter()
        .find(|(_, _, cc)| cc == t)
        .map(|&(s, d, _)| (s, d))
}

/// Number of corner simplices with apex in `class` present in `t`.
pub fn corner_count(t: &Triangulation, class: CubeClass) -> usize {
    class
        .members()
        .iter()
        .filter(|&x| t.has_cell(cube_corner(x)))
        .count()
}

/// Cells of the placing triangulation: points inserted in label order, each
/// coned over the boundary facets it sees; points not beyond any facet are
/// skipped.
pub fn placing_cells(cfg: &Config) -> Vec<Face> {
    let mut cells: Vec<Face> = vec![Face::singleton(0)];
    let mut used = Face::singleton(0);
    let mut rank = 1;
    for i in 1..cfg.len() {
        if cfg.affine_rank(used.with(i)) > rank {
            cells = cells.into_iter().map(|c| c.with(i)).collect();
            used = used.with(i);
            rank += 1;
            continue;
        }
        let mut added = Vec::new();
        for &c in &cells {
            for v in c.iter() {
                let facet = c.without(v);
                let shared = cells
                    .iter()
                    .filter(|&&o| o != c && facet.is_subset_of(o))
                    .count();
                if shared > 0 {
                    continue;
                }
                let bary = cfg
                    .barycentric(c, i)
                    .expect("point lies in the affine hull of the cells");
                let pos = c.iter().position(|u| u == v).expect("vertex of cell");
                if bary[pos].is_negative() {
                    added.push(facet.with(i));
                }
            }
        }
        if !added.is_empty() {
            cells.extend(added);
            used = used.with(i);
        }
    }
    cells.sort_unstable();
    cells
}

/// Deterministic placing triangulation in label order.
pub fn placing_triangulation(cfg: &Arc<Config>) -> Result<Triangulation> {
    if cfg.affine_dim() == 0 {
        return Err(Error::DegenerateConfig("a single point has no full-dimensional cells".into()));
    }
    Ok(Triangulation::from_cells(cfg.clone(), placing_cells(cfg)))
}
