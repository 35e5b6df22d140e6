//! Exhaustive enumeration of triangulations by growing a simplicial ball
//! across interior facets, independent of flip connectivity.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::complex::Triangulation;
use crate::error::{Error, Result};
use crate::kernel::{k_subsets, linalg, rat, Config, Face, Rational};

/// Size limits for [`enumerate_all_triangulations`] without `force`.
pub fn oracle_limit(affine_dim: usize) -> usize {
    if affine_dim <= 3 {
        12
    } else {
        8
    }
}

/// Every triangulation of `cfg` (fine or not), each exactly once, sorted.
pub fn enumerate_all_triangulations(cfg: &Arc<Config>, force: bool) -> Result<Vec<Triangulation>> {
    let limit = oracle_limit(cfg.affine_dim());
    if cfg.len() > limit && !force {
        return Err(Error::TooLarge {
            points: cfg.len(),
            limit,
        });
    }
    let search = Search::new(cfg);
    let q = search.generic_point();
    let roots: Vec<usize> = (0..search.cells.len())
        .filter(|&c| search.strictly_contains(c, &q))
        .collect();
    let mut out = Vec::new();
    for root in roots {
        let mut chosen = vec![root];
        let allowed = search.compat[root].clone();
        search.grow(&mut chosen, allowed, &mut |cells| {
            out.push(Triangulation::from_cells(cfg.clone(), cells.to_vec()));
            true
        });
    }
    out.sort_by(|a, b| a.cells().cmp(b.cells()));
    Ok(out)
}

/// Some triangulation of `cfg` containing all of `initial` as cells, if
/// one exists.
pub fn complete_triangulation(cfg: &Arc<Config>, initial: &[Face]) -> Result<Option<Triangulation>> {
    let search = Search::new(cfg);
    let mut chosen = Vec::new();
    let mut allowed = vec![!0u64; search.words];
    for &f in initial {
        let Some(&c) = search.index.get(&f.bits()) else {
            return Err(Error::SingularFace(cfg.face_set(f)));
        };
        if allowed[c / 64] >> (c % 64) & 1 == 0 {
            return Ok(None);
        }
        chosen.push(c);
        for (a, b) in allowed.iter_mut().zip(&search.compat[c]) {
            *a &= b;
        }
    }
    if chosen.is_empty() {
        let q = search.generic_point();
        let root = (0..search.cells.len())
            .find(|&c| search.strictly_contains(c, &q))
            .expect("some cell contains an interior point");
        chosen.push(root);
        allowed = search.compat[root].clone();
    }
    let mut found = None;
    search.grow(&mut chosen, allowed, &mut |cells| {
        found = Some(Triangulation::from_cells(cfg.clone(), cells.to_vec()));
        false
    });
    Ok(found)
}

struct Search<'a> {
    cfg: &'a Config,
    cells: Vec<Face>,
    index: HashMap<u32, usize>,
    /// `compat[c]` has bit `d` set iff cells `c` and `d` intersect properly.
    compat: Vec<Vec<u64>>,
    words: usize,
    /// For each facet: the cells containing it, with the side of the
    /// opposite vertex.
    facets: HashMap<u32, FacetInfo>,
}

struct FacetInfo {
    boundary: bool,
    cells: Vec<(usize, i8)>,
}

impl<'a> Search<'a> {
    fn new(cfg: &'a Config) -> Search<'a> {
        let k = cfg.affine_dim();
        let n = cfg.len();
        let cells: Vec<Face> = k_subsets(n, k + 1).filter(|&c| cfg.is_independent(c)).collect();
        let index: HashMap<u32, usize> = cells.iter().enumerate().map(|(i, c)| (c.bits(), i)).collect();
        let words = cells.len().div_ceil(64);

        let mut compat = vec![vec![!0u64; words]; cells.len()];
        for z in cfg.circuits().all() {
            let a: Vec<usize> = (0..cells.len()).filter(|&c| z.neg.is_subset_of(cells[c])).collect();
            let b: Vec<usize> = (0..cells.len()).filter(|&c| z.pos.is_subset_of(cells[c])).collect();
            for &x in &a {
                for &y in &b {
                    compat[x][y / 64] &= !(1u64 << (y % 64));
                    compat[y][x / 64] &= !(1u64 << (x % 64));
                }
            }
        }

        let mut facets: HashMap<u32, FacetInfo> = HashMap::new();
        for (ci, &c) in cells.iter().enumerate() {
            for v in c.iter() {
                let f = c.without(v);
                let info = facets.entry(f.bits()).or_insert_with(|| FacetInfo {
                    boundary: is_boundary(cfg, f),
                    cells: Vec::new(),
                });
                info.cells.push((ci, side(cfg, f, cfg.hom(v))));
            }
        }
        Search {
            cfg,
            cells,
            index,
            compat,
            words,
            facets,
        }
    }

    /// A point of the relative interior avoiding every facet hyperplane, in
    /// homogeneous intrinsic coordinates.
    fn generic_point(&self) -> Vec<Rational> {
        let n = self.cfg.len();
        let dim = self.cfg.affine_dim() + 1;
        for attempt in 1..1000i64 {
            let weights: Vec<Rational> = (0..n)
                .map(|i| rat(1000) + rat(((i as i64 + 1) * (attempt * 7 + 3)) % 97 + i as i64 * attempt))
                .collect();
            let total = weights.iter().fold(Rational::zero(), |a, b| a + b);
            let mut q = vec![Rational::zero(); dim];
            for (i, w) in weights.iter().enumerate() {
                for (qj, hj) in q.iter_mut().zip(self.cfg.hom(i)) {
                    *qj += w * hj / &total;
                }
            }
            if self.facets.keys().all(|&f| side(self.cfg, Face::from_bits(f), &q) != 0) {
                return q;
            }
        }
        panic!("no generic interior point found");
    }

    fn strictly_contains(&self, c: usize, q: &[Rational]) -> bool {
        let cols: Vec<&[Rational]> = self.cells[c].iter().map(|i| self.cfg.hom(i)).collect();
        linalg::solve_columns(&cols, q).is_some_and(|b| b.iter().all(Signed::is_positive))
    }

    /// Depth-first completion. `emit` returns whether to keep searching;
    /// the return value is false once the search was stopped.
    fn grow(&self, chosen: &mut Vec<usize>, allowed: Vec<u64>, emit: &mut dyn FnMut(&[Face]) -> bool) -> bool {
        let mut count: HashMap<u32, (u32, usize)> = HashMap::new();
        for &c in chosen.iter() {
            for v in self.cells[c].iter() {
                let e = count.entry(self.cells[c].without(v).bits()).or_insert((0, c));
                e.0 += 1;
            }
        }
        let mut best: Option<Vec<usize>> = None;
        let mut open: Vec<(u32, usize)> = count
            .iter()
            .filter(|(f, (n, _))| *n == 1 && !self.facets[*f].boundary)
            .map(|(f, (_, c))| (*f, *c))
            .collect();
        open.sort_unstable();
        for (f, owner) in open {
            let info = &self.facets[&f];
            let owner_side = info.cells.iter().find(|(c, _)| *c == owner).expect("owner").1;
            let cands: Vec<usize> = info
                .cells
                .iter()
                .filter(|(c, s)| *s == -owner_side && allowed[c / 64] >> (c % 64) & 1 == 1)
                .map(|(c, _)| *c)
                .collect();
            if best.as_ref().is_none_or(|b| cands.len() < b.len()) {
                let empty = cands.is_empty();
                best = Some(cands);
                if empty {
                    return true;
                }
            }
        }
        let Some(cands) = best else {
            let mut cells: Vec<Face> = chosen.iter().map(|&c| self.cells[c]).collect();
            cells.sort_unstable();
            return emit(&cells);
        };
        for c in cands {
            chosen.push(c);
            let next: Vec<u64> = allowed.iter().zip(&self.compat[c]).map(|(a, b)| a & b).collect();
            let go_on = self.grow(chosen, next, emit);
            chosen.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Sign of the homogeneous point `q` relative to the hyperplane spanned by
/// the facet `f`.
fn side(cfg: &Config, f: Face, q: &[Rational]) -> i8 {
    let mut m: Vec<Vec<Rational>> = f.iter().map(|i| cfg.hom(i).to_vec()).collect();
    m.push(q.to_vec());
    let d = linalg::determinant(m);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

fn is_boundary(cfg: &Config, f: Face) -> bool {
    let mut seen = 0i8;
    for p in 0..cfg.len() {
        let s = side(cfg, f, cfg.hom(p));
        if s != 0 {
            if seen != 0 && s != seen {
                return false;
            }
            seen = s;
        }
    }
    true
}
