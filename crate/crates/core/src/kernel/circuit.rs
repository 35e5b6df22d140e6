use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::config::Config;
use super::face::{k_subsets, Face};
use super::linalg;
use super::Rational;
use crate::error::{Error, Result};

/// A minimal affinely dependent set together with its Radon partition.
///
/// Unoriented circuits store the lexicographically smaller side in `neg`.
/// [`Circuit::through`] re-orients so that a distinguished point lies in
/// `neg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub support: Face,
    pub neg: Face,
    pub pos: Face,
}

impl Circuit {
    fn canonical(neg: Face, pos: Face) -> Circuit {
        let (neg, pos) = if neg <= pos { (neg, pos) } else { (pos, neg) };
        Circuit {
            support: neg.union(pos),
            neg,
            pos,
        }
    }

    /// The same circuit with the side containing `x` stored as `neg`.
    pub fn through(self, x: usize) -> Option<Circuit> {
        if self.neg.contains(x) {
            Some(self)
        } else if self.pos.contains(x) {
            Some(self.flipped())
        } else {
            None
        }
    }

    pub fn flipped(self) -> Circuit {
        Circuit {
            support: self.support,
            neg: self.pos,
            pos: self.neg,
        }
    }

    /// The side opposite to `side`, which must be one of the two sides.
    pub fn opposite(&self, side: Face) -> Option<Face> {
        if side == self.neg {
            Some(self.pos)
        } else if side == self.pos {
            Some(self.neg)
        } else {
            None
        }
    }

    pub fn has_singleton_side(&self) -> bool {
        self.neg.len() == 1 || self.pos.len() == 1
    }

    /// Canonical sort key: support size first, then lexicographic labels.
    pub fn sort_key(&self) -> (usize, Face) {
        (self.support.len(), self.support)
    }

    pub fn display(&self, cfg: &Config) -> String {
        format!(
            "{} | {} / {}",
            cfg.format_face(self.support),
            cfg.format_face(self.neg),
            cfg.format_face(self.pos)
        )
    }
}

/// Kernel vector of the homogenized coordinates of `support`, indexed like
/// `support.iter()`, if the null space is one-dimensional.
pub(crate) fn kernel_vector(cfg: &Config, support: Face) -> Option<Vec<Rational>> {
    let cols: Vec<&[Rational]> = support.iter().map(|i| cfg.hom(i)).collect();
    linalg::unique_kernel_vector(&cols)
}

/// Computes the Radon partition of `support`, failing unless it is a circuit.
pub fn radon_partition(support: Face, cfg: &Config) -> Result<Circuit> {
    if !support.is_subset_of(cfg.all()) {
        let bad = support.difference(cfg.all()).first().unwrap_or(0);
        return Err(Error::UnknownLabel(format!("#{bad}")));
    }
    let not_circuit = || Error::NotACircuit(cfg.face_set(support));
    if support.len() < 2 {
        return Err(not_circuit());
    }
    let v = kernel_vector(cfg, support).ok_or_else(not_circuit)?;
    if v.iter().any(Zero::is_zero) {
        return Err(not_circuit());
    }
    let mut neg = Face::EMPTY;
    let mut pos = Face::EMPTY;
    for (i, c) in support.iter().zip(&v) {
        if c.is_positive() {
            pos = pos.with(i);
        } else {
            neg = neg.with(i);
        }
    }
    Ok(Circuit::canonical(neg, pos))
}

/// A point in the intersection of the convex hulls of the two sides,
/// computed from the kernel vector.
pub fn radon_point(cfg: &Config, z: &Circuit) -> Vec<Rational> {
    let v = kernel_vector(cfg, z.support).expect("circuit has a one-dimensional kernel");
    let coeffs: Vec<(usize, Rational)> = z.support.iter().zip(v).collect();
    let side_point = |side: Face| {
        let total: Rational = coeffs
            .iter()
            .filter(|(i, _)| side.contains(*i))
            .map(|(_, c)| c.abs())
            .fold(Rational::zero(), |a, b| a + b);
        let mut p = vec![Rational::zero(); cfg.ambient_dim()];
        for (i, c) in coeffs.iter().filter(|(i, _)| side.contains(*i)) {
            for (pj, xj) in p.iter_mut().zip(cfg.coords(*i)) {
                *pj += c.abs() * xj / &total;
            }
        }
        p
    };
    let a = side_point(z.neg);
    debug_assert_eq!(a, side_point(z.pos));
    a
}

/// All circuits of a configuration, indexed for the lookups flips need.
#[derive(Debug)]
pub struct CircuitTable {
    circuits: Vec<Circuit>,
    by_support: HashMap<u32, u32>,
    spanning: SpanningIndex,
    singleton: Vec<u32>,
}

/// Maps each `(dim + 2)`-subset of full rank to the index of the unique
/// circuit it contains.
#[derive(Debug)]
enum SpanningIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u32, u32>),
}

const NONE: u32 = u32::MAX;

impl CircuitTable {
    pub(crate) fn build(cfg: &Config) -> CircuitTable {
        let n = cfg.len();
        let size = cfg.affine_dim() + 2;
        let mut found: HashMap<u32, Circuit> = HashMap::new();
        let mut spanning_raw: Vec<(u32, u32)> = Vec::new();
        for set in k_subsets(n, size) {
            let Some(v) = kernel_vector(cfg, set) else {
                continue;
            };
            let mut neg = Face::EMPTY;
            let mut pos = Face::EMPTY;
            for (i, c) in set.iter().zip(&v) {
                if c.is_positive() {
                    pos = pos.with(i);
                } else if c.is_negative() {
                    neg = neg.with(i);
                }
            }
            let z = Circuit::canonical(neg, pos);
            found.entry(z.support.bits()).or_insert(z);
            spanning_raw.push((set.bits(), z.support.bits()));
        }
        let mut circuits: Vec<Circuit> = found.into_values().collect();
        circuits.sort_by_key(Circuit::sort_key);
        let by_support: HashMap<u32, u32> = circuits
            .iter()
            .enumerate()
            .map(|(i, z)| (z.support.bits(), i as u32))
            .collect();
        let spanning = if n <= 16 {
            let mut dense = vec![NONE; 1 << n];
            for (set, sup) in spanning_raw {
                dense[set as usize] = by_support[&sup];
            }
            SpanningIndex::Dense(dense)
        } else {
            SpanningIndex::Sparse(
                spanning_raw
                    .into_iter()
                    .map(|(set, sup)| (set, by_support[&sup]))
                    .collect(),
            )
        };
        let singleton = circuits
            .iter()
            .enumerate()
            .filter(|(_, z)| z.has_singleton_side())
            .map(|(i, _)| i as u32)
            .collect();
        CircuitTable {
            circuits,
            by_support,
            spanning,
            singleton,
        }
    }

    pub fn all(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn len(&self) -> usize {
        self.circuits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuits.is_empty()
    }

    pub fn get(&self, idx: u32) -> Circuit {
        self.circuits[idx as usize]
    }

    pub fn index_of_support(&self, support: Face) -> Option<u32> {
        self.by_support.get(&support.bits()).copied()
    }

    /// The circuit inside a full-rank set of `dim + 2` points, such as the
    /// union of two adjacent cells.
    #[inline]
    pub fn in_spanning_set(&self, set: Face) -> Option<u32> {
        let idx = match &self.spanning {
            SpanningIndex::Dense(v) => v.get(set.bits() as usize).copied().unwrap_or(NONE),
            SpanningIndex::Sparse(m) => m.get(&set.bits()).copied().unwrap_or(NONE),
        };
        (idx != NONE).then_some(idx)
    }

    /// Indices of circuits with a one-point side (the point lies inside the
    /// hull of the rest).
    pub fn with_singleton_side(&self) -> &[u32] {
        &self.singleton
    }
}

/// Every circuit of the configuration in canonical order.
pub fn enumerate_circuits(cfg: &Config) -> Vec<Circuit> {
    cfg.circuits().all().to_vec()
}

/// Circuits whose support contains `x`, oriented so that `x` is on the
/// negative side.
pub fn circuits_through(cfg: &Config, x: usize) -> Result<Vec<Circuit>> {
    if x >= cfg.len() {
        return Err(Error::UnknownLabel(format!("#{x}")));
    }
    Ok(cfg
        .circuits()
        .all()
        .iter()
        .filter_map(|z| z.through(x))
        .collect())
}
