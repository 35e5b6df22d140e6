//! Isometries of configurations, canonical forms of triangulations under a
//! group, and distance-preserving embeddings between point sets.

use std::fmt;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::complex::Triangulation;
use crate::kernel::{Config, Face};

/// A permutation of point indices: `i ↦ self.0[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMap(Vec<u8>);

impl fmt::Debug for SymMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMap{:?}", self.0)
    }
}

impl SymMap {
    pub fn from_images(images: Vec<u8>) -> SymMap {
        SymMap(images)
    }

    pub fn identity(n: usize) -> SymMap {
        SymMap((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn apply_face(&self, f: Face) -> Face {
        f.iter().map(|i| self.apply(i)).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymMap) -> SymMap {
        SymMap(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> SymMap {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        SymMap(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn preserves_distances(&self, cfg: &Config) -> bool {
        let n = cfg.len();
        (0..n).all(|i| (0..n).all(|j| cfg.dist_id(i, j) == cfg.dist_id(self.apply(i), self.apply(j))))
    }

    pub fn map_triangulation(&self, t: &Triangulation) -> Triangulation {
        Triangulation::from_cells(t.cfg().clone(), t.cells().iter().map(|&c| self.apply_face(c)).collect())
    }
}

/// The 384 symmetries of the 4-cube acting on labels `a..p`, sorted so that
/// the identity comes first.
pub fn cube_group() -> &'static [SymMap] {
    static GROUP: OnceLock<Vec<SymMap>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut perms = Vec::new();
        permutations(&mut [0, 1, 2, 3], 0, &mut perms);
        let mut group: Vec<SymMap> = perms
            .iter()
            .flat_map(|perm| {
                (0..16u8).map(move |flip| {
                    SymMap(
                        (0..16u8)
                            .map(|i| {
                                let v = i ^ flip;
                                (0..4).fold(0u8, |acc, j| acc | ((v >> j) & 1) << perm[j])
                            })
                            .collect(),
                    )
                })
            })
            .collect();
        group.sort();
        group
    })
}

fn permutations(items: &mut [usize; 4], k: usize, out: &mut Vec<[usize; 4]>) {
    if k == items.len() {
        out.push(*items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Every distance-preserving permutation of the configuration, sorted.
pub fn automorphisms(cfg: &Config) -> Vec<SymMap> {
    let n = cfg.len();
    let mut out = Vec::new();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend_automorphism(cfg, 0, &mut image, &mut used, &mut out);
    out.sort();
    out
}

fn extend_automorphism(
    cfg: &Config,
    i: usize,
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<SymMap>,
) {
    let n = cfg.len();
    if i == n {
        out.push(SymMap(image.iter().map(|&j| j as u8).collect()));
        return;
    }
    for cand in 0..n {
        if used[cand] {
            continue;
        }
        if (0..i).all(|j| cfg.dist_id(i, j) == cfg.dist_id(cand, image[j])) {
            image[i] = cand;
            used[cand] = true;
            extend_automorphism(cfg, i + 1, image, used, out);
            used[cand] = false;
        }
    }
    image[i] = usize::MAX;
}

/// Group-minimal encodings of triangulations.
///
/// A triangulation is encoded as its cell bitmasks sorted numerically, each
/// written big-endian in 2 bytes (4 bytes above 16 points). The canonical
/// form is the minimum encoding over the group.
pub struct Canonicalizer {
    n: usize,
    group: Vec<SymMap>,
    /// Per group element, images of each byte of a cell mask.
    tables: Vec<[[u32; 256]; 4]>,
    hash: String,
}

impl Canonicalizer {
    pub fn new(n: usize, group: Vec<SymMap>) -> Canonicalizer {
        let tables = group
            .iter()
            .map(|g| {
                let mut t = [[0u32; 256]; 4];
                for (byte, table) in t.iter_mut().enumerate() {
                    for (v, slot) in table.iter_mut().enumerate() {
                        let mut img = 0u32;
                        for bit in 0..8 {
                            let i = byte * 8 + bit;
                            if v >> bit & 1 == 1 && i < n {
                                img |= 1 << g.apply(i);
                            }
                        }
                        *slot = img;
                    }
                }
                t
            })
            .collect();
        let mut h = Sha256::new();
        h.update((n as u64).to_le_bytes());
        for g in &group {
            h.update(&g.0);
        }
        let hash = hex::encode(&h.finalize()[..16]);
        Canonicalizer {
            n,
            group,
            tables,
            hash,
        }
    }

    /// Canonicalizer for the trivial group.
    pub fn trivial(n: usize) -> Canonicalizer {
        Canonicalizer::new(n, vec![SymMap::identity(n)])
    }

    /// Canonicalizer for the full isometry group of `cfg`.
    pub fn for_config(cfg: &Config) -> Canonicalizer {
        Canonicalizer::new(cfg.len(), automorphisms(cfg))
    }

    pub fn group(&self) -> &[SymMap] {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.len()
    }

    /// Digest of the group, recorded in checkpoints.
    pub fn identity_hash(&self) -> &str {
        &self.hash
    }

    fn width(&self) -> usize {
        if self.n <= 16 {
            2
        } else {
            4
        }
    }

    #[inline]
    fn map_cell(table: &[[u32; 256]; 4], c: u32) -> u32 {
        table[0][(c & 0xff) as usize]
            | table[1][(c >> 8 & 0xff) as usize]
            | table[2][(c >> 16 & 0xff) as usize]
            | table[3][(c >> 24) as usize]
    }

    /// Minimal image of the cells and the size of their stabilizer.
    pub fn canonical_cells(&self, cells: &[Face]) -> (Vec<u32>, usize) {
        let mut best: Vec<u32> = Vec::new();
        let mut buf: Vec<u32> = Vec::with_capacity(cells.len());
        let mut stab = 0;
        for table in &self.tables {
            buf.clear();
            buf.extend(cells.iter().map(|c| Self::map_cell(table, c.bits())));
            buf.sort_unstable();
            if best.is_empty() {
                best.extend_from_slice(&buf);
                stab = 1;
                continue;
            }
            match buf.cmp(&best) {
                std::cmp::Ordering::Less => {
                    std::mem::swap(&mut best, &mut buf);
                    stab = 1;
                }
                std::cmp::Ordering::Equal => stab += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        (best, stab)
    }

    pub fn encode(&self, masks: &[u32]) -> Vec<u8> {
        let w = self.width();
        let mut out = Vec::with_capacity(masks.len() * w);
        for &m in masks {
            out.extend_from_slice(&m.to_be_bytes()[4 - w..]);
        }
        out
    }

    pub fn decode(&self, key: &[u8]) -> Vec<Face> {
        let w = self.width();
        let mut cells: Vec<Face> = key
            .chunks(w)
            .map(|ch| Face::from_bits(ch.iter().fold(0u32, |acc, &b| acc << 8 | b as u32)))
            .collect();
        cells.sort_unstable();
        cells
    }

    /// Canonical form and stabilizer order.
    pub fn canonical_key(&self, cells: &[Face]) -> (Vec<u8>, usize) {
        let (best, stab) = self.canonical_cells(cells);
        (self.encode(&best), stab)
    }

    pub fn canonical_form(&self, t: &Triangulation) -> Vec<u8> {
        self.canonical_key(t.cells()).0
    }

    /// Size of the orbit of `t`.
    pub fn orbit_size(&self, t: &Triangulation) -> usize {
        self.order() / self.canonical_key(t.cells()).1
    }
}

/// Canonical form of `t` under the group `g`.
pub fn canonical_form(t: &Triangulation, g: &[SymMap]) -> Vec<u8> {
    Canonicalizer::new(t.cfg().len(), g.to_vec()).canonical_form(t)
}

/// A distance-preserving injection of the points `v` of `a` into the points
/// `s` of `b`, as `(point of a, image in b)` pairs.
pub fn isometric_subset_embedding(a: &Config, v: Face, b: &Config, s: Face) -> Option<Vec<(usize, usize)>> {
    if v.len() > s.len() {
        return None;
    }
    let src = v.to_vec();
    let dst = s.to_vec();
    let mut image = Vec::with_capacity(src.len());
    let mut used = vec![false; dst.len()];
    if embed(a, b, &src, &dst, &mut image, &mut used) {
        Some(src.into_iter().zip(image.into_iter().map(|j| dst[j])).collect())
    } else {
        None
    }
}

fn embed(a: &Config, b: &Config, src: &[usize], dst: &[usize], image: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = image.len();
    if i == src.len() {
        return true;
    }
    for j in 0..dst.len() {
        if used[j] {
            continue;
        }
        let ok = (0..i).all(|k| a.dist_id(src[i], src[k]) == b.dist_id(dst[j], dst[image[k]]));
        if ok {
            image.push(j);
            used[j] = true;
            if embed(a, b, src, dst, image, used) {
                return true;
            }
            used[j] = false;
            image.pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{corner_cuts, CubeClass};
    use crate::contraction::full_context;
    use crate::presets::{cube3, cube4, s_config};

    #[test]
    fn cube_group_is_a_group() {
        let g = cube_group();
        assert_eq!(g.len(), 384);
        assert!(g[0].is_identity());
        let cube = cube4();
        let set: std::collections::HashSet<&SymMap> = g.iter().collect();
        assert_eq!(set.len(), 384);
        for a in g.iter().step_by(17) {
            assert!(a.preserves_distances(&cube));
            assert!(set.contains(&a.inverse()));
            for b in g.iter().step_by(23) {
                assert!(set.contains(&a.compose(b)));
            }
        }
        let swaps = g
            .iter()
            .any(|h| h.apply_face(CubeClass::E.members()) == CubeClass::O.members());
        assert!(swaps);
    }

    #[test]
    fn automorphism_orders() {
        assert_eq!(automorphisms(&cube3()).len(), 48);
        assert_eq!(automorphisms(&cube4()), cube_group().to_vec());
        // the stabilizer of a in the cube group acts on the contraction at a
        assert_eq!(automorphisms(&full_context(0).target).len(), 24);
        assert!(automorphisms(&s_config(3)).len() >= 1);
    }

    #[test]
    fn corner_cuts_form_one_orbit() {
        let canon = Canonicalizer::new(16, cube_group().to_vec());
        let forms: std::collections::HashSet<Vec<u8>> =
            corner_cuts().iter().map(|(_, _, t)| canon.canonical_form(t)).collect();
        assert_eq!(forms.len(), 1);
        let trivial = Canonicalizer::trivial(16);
        let forms: std::collections::HashSet<Vec<u8>> =
            corner_cuts().iter().map(|(_, _, t)| trivial.canonical_form(t)).collect();
        assert_eq!(forms.len(), 8);
        let t = &corner_cuts()[0].2;
        assert_eq!(canon.orbit_size(t), 8);
        assert_eq!(canon.decode(&trivial.canonical_form(t)), t.cells());
    }

    #[test]
    fn embeddings() {
        let ctx = full_context(0);
        let s3 = s_config(3);
        assert!(isometric_subset_embedding(&ctx.target, ctx.target.all(), &s3, s3.all()).is_none());
        let s1 = s_config(1);
        let e = isometric_subset_embedding(&s1, s1.all(), &ctx.target, ctx.target.all()).unwrap();
        assert_eq!(e.len(), 11);
    }
}
