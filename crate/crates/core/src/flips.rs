//! Bistellar flips: detecting flippable circuits and applying them.

use crate::complex::Triangulation;
use crate::error::{Error, Result};
use crate::kernel::{Circuit, Face};

/// A flip of `circuit` that removes the faces containing `removed` and
/// inserts those containing the other side, joined with the common `link`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlipMove {
    pub circuit: Circuit,
    pub removed: Face,
    pub link: Vec<Face>,
}

impl FlipMove {
    /// The side that becomes a face after the flip.
    pub fn added_side(&self) -> Face {
        self.circuit
            .opposite(self.removed)
            .expect("removed side belongs to the circuit")
    }

    /// Cells removed by the flip.
    pub fn removed_cells(&self) -> Vec<Face> {
        self.join(self.added_side())
    }

    /// Cells inserted by the flip.
    pub fn added_cells(&self) -> Vec<Face> {
        self.join(self.removed)
    }

    /// `link ⋆ {z \ y : y ∈ side}`.
    fn join(&self, side: Face) -> Vec<Face> {
        let z = self.circuit.support;
        side.iter()
            .flat_map(|y| self.link.iter().map(move |&l| l.union(z.without(y))))
            .collect()
    }

    /// The move undoing this one.
    pub fn reversed(&self) -> FlipMove {
        FlipMove {
            circuit: self.circuit,
            removed: self.added_side(),
            link: self.link.clone(),
        }
    }
}

/// Checks whether `z` can be flipped in `t` with `removed` the side present.
///
/// The faces `z \ y` for `y` in the other side are the maximal faces of the
/// triangulation of `z` containing `removed`; the flip exists iff all of them
/// are faces of `t` with one common link.
pub fn is_flippable(t: &Triangulation, z: &Circuit, removed: Face) -> Option<FlipMove> {
    flippable_in_cells(t.cells(), z, removed)
}

pub(crate) fn flippable_in_cells(cells: &[Face], z: &Circuit, removed: Face) -> Option<FlipMove> {
    let other = z.opposite(removed)?;
    let mut link: Option<Vec<Face>> = None;
    for y in other.iter() {
        let m = z.support.without(y);
        let mut l: Vec<Face> = cells
            .iter()
            .filter(|&&c| m.is_subset_of(c))
            .map(|&c| c.difference(m))
            .collect();
        if l.is_empty() {
            return None;
        }
        l.sort_unstable();
        match &link {
            None => link = Some(l),
            Some(prev) if *prev != l => return None,
            Some(_) => {}
        }
    }
    Some(FlipMove {
        circuit: *z,
        removed,
        link: link?,
    })
}

/// Every flip available in `t`, one per circuit, in canonical circuit order.
pub fn flippable_moves(t: &Triangulation) -> Vec<FlipMove> {
    moves_in_cells(t.cfg().as_ref(), t.cells())
}

pub(crate) fn moves_in_cells(cfg: &crate::Config, cells: &[Face]) -> Vec<FlipMove> {
    let table = cfg.circuits();
    let k = cfg.affine_dim();
    let mut candidates: Vec<u32> = Vec::new();
    for (i, &a) in cells.iter().enumerate() {
        for &b in &cells[i + 1..] {
            if a.intersection(b).len() == k {
                if let Some(idx) = table.in_spanning_set(a.union(b)) {
                    candidates.push(idx);
                }
            }
        }
    }
    let used = cells.iter().fold(Face::EMPTY, |u, &c| u.union(c));
    for &idx in table.with_singleton_side() {
        let z = table.get(idx);
        let lone = if z.neg.len() == 1 { z.neg } else { z.pos };
        if lone.is_disjoint(used) {
            candidates.push(idx);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();
    candidates
        .into_iter()
        .filter_map(|idx| {
            let z = table.get(idx);
            flippable_in_cells(cells, &z, z.neg).or_else(|| flippable_in_cells(cells, &z, z.pos))
        })
        .collect()
}

/// Applies a flip after re-checking it against `t`.
pub fn apply_flip(t: &Triangulation, m: &FlipMove) -> Result<Triangulation> {
    match is_flippable(t, &m.circuit, m.removed) {
        Some(ref checked) if checked.link == m.link => Ok(apply_unchecked(t, m)),
        _ => Err(Error::NotFlippable(format!(
            "{} (removing {})",
            m.circuit.display(t.cfg()),
            t.cfg().face_set(m.removed)
        ))),
    }
}

pub(crate) fn apply_unchecked(t: &Triangulation, m: &FlipMove) -> Triangulation {
    Triangulation::from_cells(t.cfg().clone(), flip_cells(t.cells(), m))
}

pub(crate) fn flip_cells(cells: &[Face], m: &FlipMove) -> Vec<Face> {
    let mut gone = m.removed_cells();
    gone.sort_unstable();
    let mut out: Vec<Face> = cells
        .iter()
        .copied()
        .filter(|c| gone.binary_search(c).is_err())
        .collect();
    out.extend(m.added_cells());
    out.sort_unstable();
    out
}
