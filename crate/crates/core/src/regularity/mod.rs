//! Regularity: checking height-function certificates and deciding
//! regularity exactly by linear programming.

mod simplex;

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};

pub use simplex::{check_farkas, check_solution, feasible_point, Feasibility};

use crate::complex::{CubeClass, Triangulation};
use crate::error::{Error, Result};
use crate::kernel::{rat, Config, Face, Rational};

/// Heights of all points of a configuration, by index.
#[derive(Clone, PartialEq, Eq)]
pub struct HeightFunction(pub Vec<Rational>);

impl HeightFunction {
    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn display(&self, cfg: &Config) -> String {
        self.0
            .iter()
            .enumerate()
            .map(|(i, h)| format!("{} {}", cfg.label(i), h))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Debug for HeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|h| h.to_string())).finish()
    }
}

/// Whether `w` induces `t`: on every cell, the affine interpolation of `w`
/// lies strictly below `w` at every other point.
pub fn verify_certificate(t: &Triangulation, w: &HeightFunction) -> Result<bool> {
    let cfg = t.cfg();
    if w.0.len() != cfg.len() {
        return Err(Error::WrongCardinality {
            expected: cfg.len(),
            got: w.0.len(),
        });
    }
    for &c in t.cells() {
        for p in (0..cfg.len()).filter(|&p| !c.contains(p)) {
            let beta = cfg
                .barycentric(c, p)
                .ok_or_else(|| Error::SingularFace(cfg.face_set(c)))?;
            let xi = c
                .iter()
                .zip(&beta)
                .fold(Rational::zero(), |acc, (i, b)| acc + b * &w.0[i]);
            if xi >= w.0[p] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of the regularity LP.
#[derive(Clone, Debug)]
pub enum Regularity {
    Regular(HeightFunction),
    /// Farkas multipliers over the folding constraints, verified exactly.
    NonRegular(Vec<Rational>),
}

/// Decides regularity with an exact LP: heights of one cell are pinned to
/// zero, every interior facet must fold upwards by at least one, and every
/// unused point must lie at least one above the cell containing it.
pub fn decide_regularity(t: &Triangulation) -> Result<Regularity> {
    let cfg = t.cfg();
    let n = cfg.len();
    let cells = t.cells();
    let Some(&pinned) = cells.first() else {
        return Err(Error::PreconditionFailed("empty triangulation".into()));
    };
    let free: Vec<usize> = (0..n).filter(|&i| !pinned.contains(i)).collect();
    let col: HashMap<usize, usize> = free.iter().enumerate().map(|(j, &i)| (i, j)).collect();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut add_row = |above: usize, cell: Face| -> Result<()> {
        let beta = cfg
            .barycentric(cell, above)
            .ok_or_else(|| Error::SingularFace(cfg.face_set(cell)))?;
        let mut row = vec![Rational::zero(); free.len()];
        if let Some(&j) = col.get(&above) {
            row[j] += rat(1);
        }
        for (i, b) in cell.iter().zip(beta) {
            if let Some(&j) = col.get(&i) {
                row[j] -= b;
            }
        }
        rows.push(row);
        Ok(())
    };

    let mut by_facet: HashMap<Face, Vec<Face>> = HashMap::new();
    for &c in cells {
        for v in c.iter() {
            by_facet.entry(c.without(v)).or_default().push(c);
        }
    }
    let mut shared: Vec<(Face, Vec<Face>)> = by_facet.into_iter().filter(|(_, cs)| cs.len() == 2).collect();
    shared.sort_unstable();
    for (f, cs) in shared {
        let v = cs[1].difference(f).first().expect("cell has one vertex off the facet");
        add_row(v, cs[0])?;
    }
    let used = t.vertices();
    for p in (0..n).filter(|&p| !used.contains(p)) {
        let holder = cells
            .iter()
            .copied()
            .find(|&c| cfg.barycentric(c, p).is_some_and(|b| b.iter().all(|x| !x.is_negative())))
            .ok_or_else(|| Error::PreconditionFailed(format!("point `{}` is not covered", cfg.label(p))))?;
        add_row(p, holder)?;
    }

    let b = vec![rat(1); rows.len()];
    match feasible_point(&rows, &b) {
        Feasibility::Feasible(x) => {
            let mut w = vec![Rational::zero(); n];
            for (j, &i) in free.iter().enumerate() {
                w[i] = x[j].clone();
            }
            let w = HeightFunction(w);
            if !verify_certificate(t, &w)? {
                return Err(Error::Paradox("LP heights fail the certificate check".into()));
            }
            Ok(Regularity::Regular(w))
        }
        Feasibility::Infeasible(y) => {
            if !check_farkas(&rows, &b, &y) {
                return Err(Error::Paradox("Farkas certificate fails its check".into()));
            }
            Ok(Regularity::NonRegular(y))
        }
    }
}

/// A height function inducing `t`, if `t` is regular.
pub fn is_regular(t: &Triangulation) -> Option<HeightFunction> {
    match decide_regularity(t) {
        Ok(Regularity::Regular(w)) => Some(w),
        _ => None,
    }
}

/// Heights certifying a corner-cut triangulation of the 4-cube: 0 on the
/// diagonal, 1 on the rest of its class, 2 on the other class.
pub fn corner_cut_heights(class: CubeClass, diagonal: Face) -> HeightFunction {
    HeightFunction(
        (0..16)
            .map(|i| {
                if diagonal.contains(i) {
                    rat(0)
                } else if CubeClass::of(i) == class {
                    rat(1)
                } else {
                    rat(2)
                }
            })
            .collect(),
    )
}
