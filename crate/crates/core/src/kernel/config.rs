use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use sha2::{Digest, Sha256};

use super::circuit::CircuitTable;
use super::face::{Face, MAX_POINTS};
use super::linalg;
use super::Rational;
use crate::error::{Error, Result};

/// Name of a point in a configuration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Label(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A labeled point configuration with exact rational coordinates.
///
/// Besides the ambient coordinates, every point carries intrinsic
/// coordinates relative to an affine basis of the configuration (the
/// lexicographically first affinely independent points). When the
/// configuration is full-dimensional the intrinsic coordinates are the
/// ambient ones, so volumes are Euclidean; otherwise they are measured in
/// units of the basis simplex.
pub struct Config {
    name: String,
    labels: Vec<Label>,
    coords: Vec<Vec<Rational>>,
    ambient_dim: usize,
    affine_dim: usize,
    /// `(1, intrinsic coordinates)` for every point.
    hom: Vec<Vec<Rational>>,
    sq_dist: Vec<Vec<Rational>>,
    dist_ids: Vec<Vec<u32>>,
    index: HashMap<String, usize>,
    circuits: OnceLock<CircuitTable>,
    hull_volume: OnceLock<Rational>,
}

impl fmt::Debug for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Config")
            .field("name", &self.name)
            .field("points", &self.labels.len())
            .field("ambient_dim", &self.ambient_dim)
            .field("affine_dim", &self.affine_dim)
            .finish()
    }
}

impl Config {
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        points: Vec<(String, Vec<Rational>)>,
    ) -> Result<Config> {
        let name = name.into();
        if points.is_empty() {
            return Err(Error::DegenerateConfig("no points".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::DegenerateConfig(format!(
                "{} points exceed the limit of {MAX_POINTS}",
                points.len()
            )));
        }
        let mut index = HashMap::new();
        let mut labels = Vec::with_capacity(points.len());
        let mut coords = Vec::with_capacity(points.len());
        for (i, (label, c)) in points.into_iter().enumerate() {
            if label.is_empty() || label.contains(char::is_whitespace) || label.starts_with('#') {
                return Err(Error::DegenerateConfig(format!("invalid label `{label}`")));
            }
            if c.len() != ambient_dim {
                return Err(Error::DegenerateConfig(format!(
                    "point `{label}` has {} coordinates, expected {ambient_dim}",
                    c.len()
                )));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DegenerateConfig(format!("duplicate label `{label}`")));
            }
            if let Some(j) = coords.iter().position(|o| *o == c) {
                return Err(Error::DegenerateConfig(format!(
                    "points `{}` and `{label}` coincide",
                    labels[j]
                )));
            }
            labels.push(Label(label));
            coords.push(c);
        }

        let (affine_dim, intrinsic) = intrinsic_coordinates(&coords, ambient_dim);
        let hom = intrinsic
            .into_iter()
            .map(|c| std::iter::once(Rational::one()).chain(c).collect())
            .collect();

        let n = coords.len();
        let sq_dist: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        coords[i]
                            .iter()
                            .zip(&coords[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .fold(Rational::zero(), |acc, x| acc + x)
                    })
                    .collect()
            })
            .collect();
        let dist_ids = sq_dist
            .iter()
            .map(|row| row.iter().map(intern_distance).collect())
            .collect();

        Ok(Config {
            name,
            labels,
            coords,
            ambient_dim,
            affine_dim,
            hom,
            sq_dist,
            dist_ids,
            index,
            circuits: OnceLock::new(),
            hull_volume: OnceLock::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    /// Face containing every point of the configuration.
    pub fn all(&self) -> Face {
        Face::from_bits(if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        self.labels[i].as_str()
    }

    pub fn coords(&self, i: usize) -> &[Rational] {
        &self.coords[i]
    }

    /// Homogenized intrinsic coordinates `(1, x_1, .., x_k)`.
    pub fn hom(&self, i: usize) -> &[Rational] {
        &self.hom[i]
    }

    pub fn sq_dist(&self, i: usize, j: usize) -> &Rational {
        &self.sq_dist[i][j]
    }

    /// Process-wide identifier of the squared distance between `i` and `j`;
    /// equal ids mean equal distances, across configurations.
    pub fn dist_id(&self, i: usize, j: usize) -> u32 {
        self.dist_ids[i][j]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn face<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        labels
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Face::from_indices)
    }

    /// Parses a face written as a string of single-character labels
    /// (`"abce"`) or space/comma separated labels (`"b/a c/a"`).
    pub fn face_str(&self, s: &str) -> Result<Face> {
        let parts: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .collect();
        if parts.len() == 1 && self.index_of(parts[0]).is_err() {
            let chars: Vec<String> = parts[0].chars().map(String::from).collect();
            return self.face(&chars);
        }
        self.face(&parts)
    }

    /// Labels of `f` separated by single spaces, in label order.
    pub fn format_face(&self, f: Face) -> String {
        f.iter().map(|i| self.label(i)).collect::<Vec<_>>().join(" ")
    }

    /// `{a,b,c}` style rendering.
    pub fn face_set(&self, f: Face) -> String {
        format!(
            "{{{}}}",
            f.iter().map(|i| self.label(i)).collect::<Vec<_>>().join(",")
        )
    }

    pub fn circuits(&self) -> &CircuitTable {
        self.circuits.get_or_init(|| CircuitTable::build(self))
    }

    /// Volume of the convex hull, measured as the volume of the placing
    /// triangulation.
    pub fn hull_volume(&self) -> &Rational {
        self.hull_volume.get_or_init(|| {
            crate::complex::placing_cells(self)
                .into_iter()
                .map(|c| self.unsigned_volume(c))
                .fold(Rational::zero(), |a, b| a + b)
        })
    }

    /// Stable digest of labels and coordinates.
    pub fn identity_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.ambient_dim.to_le_bytes());
        for (l, c) in self.labels.iter().zip(&self.coords) {
            h.update(l.as_str().as_bytes());
            for x in c {
                h.update(b" ");
                h.update(x.to_string().as_bytes());
            }
            h.update(b"\n");
        }
        hex::encode(&h.finalize()[..16])
    }

    /// Affine rank of a face: number of affinely independent points.
    pub fn affine_rank(&self, f: Face) -> usize {
        if f.is_empty() {
            return 0;
        }
        let rows: Vec<&[Rational]> = f.iter().map(|i| self.hom(i)).collect();
        linalg::rank(&rows)
    }

    pub fn is_independent(&self, f: Face) -> bool {
        self.affine_rank(f) == f.len()
    }

    /// Signed volume of the simplex whose vertices are taken in the given
    /// order.
    pub fn signed_volume_ordered(&self, vertices: &[usize]) -> Result<Rational> {
        let k = self.affine_dim;
        if vertices.len() != k + 1 {
            return Err(Error::WrongCardinality {
                expected: k + 1,
                got: vertices.len(),
            });
        }
        let base = &self.hom[vertices[0]];
        let m: linalg::Matrix = vertices[1..]
            .iter()
            .map(|&v| (1..=k).map(|j| &self.hom[v][j] - &base[j]).collect())
            .collect();
        Ok(linalg::determinant(m) / linalg::factorial(k))
    }

    /// Signed volume with vertices in label order.
    pub fn signed_volume(&self, simplex: Face) -> Result<Rational> {
        self.signed_volume_ordered(&simplex.to_vec())
    }

    pub(crate) fn unsigned_volume(&self, simplex: Face) -> Rational {
        self.signed_volume(simplex)
            .expect("cells have affine-dimension + 1 points")
            .abs()
    }

    /// Barycentric coordinates of point `q` with respect to the affinely
    /// independent face `cell`, in index order. `None` if the face is
    /// dependent or does not span `q`'s affine hull.
    pub fn barycentric(&self, cell: Face, q: usize) -> Option<Vec<Rational>> {
        let cols: Vec<&[Rational]> = cell.iter().map(|i| self.hom(i)).collect();
        linalg::solve_columns(&cols, self.hom(q))
    }
}

fn intrinsic_coordinates(coords: &[Vec<Rational>], ambient_dim: usize) -> (usize, Vec<Vec<Rational>>) {
    let hom: Vec<Vec<Rational>> = coords
        .iter()
        .map(|c| std::iter::once(Rational::one()).chain(c.iter().cloned()).collect())
        .collect();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..coords.len() {
        let mut rows: Vec<&[Rational]> = basis.iter().map(|&b| hom[b].as_slice()).collect();
        rows.push(&hom[i]);
        if linalg::rank(&rows) == rows.len() {
            basis.push(i);
        }
    }
    let k = basis.len() - 1;
    if k == ambient_dim {
        return (k, coords.to_vec());
    }
    let origin = &coords[basis[0]];
    let dirs: Vec<Vec<Rational>> = basis[1..]
        .iter()
        .map(|&b| coords[b].iter().zip(origin).map(|(x, o)| x - o).collect())
        .collect();
    let cols: Vec<&[Rational]> = dirs.iter().map(Vec::as_slice).collect();
    let intrinsic = coords
        .iter()
        .map(|c| {
            let rhs: Vec<Rational> = c.iter().zip(origin).map(|(x, o)| x - o).collect();
            linalg::solve_columns(&cols, &rhs).expect("point lies in the affine hull of the basis")
        })
        .collect();
    (k, intrinsic)
}

fn intern_distance(d: &Rational) -> u32 {
    static TABLE: OnceLock<Mutex<HashMap<Rational, u32>>> = OnceLock::new();
    let mut table = TABLE
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    let next = table.len() as u32;
    *table.entry(d.clone()).or_insert(next)
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
