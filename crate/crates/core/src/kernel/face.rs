use std::cmp::Ordering;
use std::fmt;

/// Largest configuration a [`Face`] bitmask can address.
pub const MAX_POINTS: usize = 32;

/// A set of point indices of a configuration, stored as a bitmask.
///
/// Equality is structural. Ordering is lexicographic on the sorted index
/// sequence, so `{0,1,5} < {0,2} < {1}` and a prefix sorts first.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Face(u32);

impl Face {
    pub const EMPTY: Face = Face(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        Face(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_POINTS);
        Face(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Face::EMPTY, |f, i| f.with(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: Face) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn union(self, other: Face) -> Face {
        Face(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Face) -> Face {
        Face(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Face) -> Face {
        Face(self.0 & !other.0)
    }

    #[inline]
    pub fn is_disjoint(self, other: Face) -> bool {
        self.0 & other.0 == 0
    }

    #[inline]
    pub fn with(self, i: usize) -> Face {
        Face(self.0 | 1 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Face {
        Face(self.0 & !(1 << i))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest index in the face.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> FaceIter {
        FaceIter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self` (including the empty set and `self`).
    pub fn subsets(self) -> impl Iterator<Item = Face> {
        let full = self.0;
        let mut cur = Some(0u32);
        std::iter::from_fn(move || {
            let out = cur?;
            cur = if out == full {
                None
            } else {
                Some((out | !full).wrapping_add(1) & full)
            };
            Some(Face(out))
        })
    }
}

impl Ord for Face {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let low = diff.trailing_zeros();
        // Both sequences agree below `low`; whichever owns `low` is smaller
        // unless the other one has already run out.
        let (owner, rival) = if self.0 >> low & 1 == 1 {
            (Ordering::Less, other.0)
        } else {
            (Ordering::Greater, self.0)
        };
        let rival_continues = low < 31 && rival >> (low + 1) != 0;
        if rival_continues {
            owner
        } else {
            owner.reverse()
        }
    }
}

impl PartialOrd for Face {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Face {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Face::from_indices(iter)
    }
}

pub struct FaceIter(u32);

impl Iterator for FaceIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for FaceIter {}

/// Iterates over all `k`-subsets of `{0, .., n-1}` in colexicographic order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Face> {
    let limit: u64 = 1 << n;
    let mut cur: Option<u64> = if k <= n { Some((1u64 << k) - 1) } else { None };
    std::iter::from_fn(move || {
        let out = cur?;
        if out >= limit {
            cur = None;
            return None;
        }
        cur = if out == 0 {
            None
        } else {
            // Gosper's hack.
            let c = out & out.wrapping_neg();
            let r = out + c;
            Some((((r ^ out) >> 2) / c) | r)
        };
        Some(Face(out as u32))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(a: &[usize], b: &[usize]) -> Ordering {
        a.cmp(b)
    }

    #[test]
    fn order_matches_sorted_sequences() {
        let faces: Vec<Face> = (0u32..256).map(Face::from_bits).collect();
        for &a in &faces {
            for &b in &faces {
                assert_eq!(a.cmp(&b), lex(&a.to_vec(), &b.to_vec()), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(16, 5).count(), 4368);
        assert_eq!(k_subsets(6, 0).count(), 1);
        assert_eq!(k_subsets(3, 4).count(), 0);
        assert!(k_subsets(10, 3).all(|f| f.len() == 3));
    }

    #[test]
    fn subsets_of_face() {
        let f = Face::from_indices([1, 4, 7]);
        let subs: Vec<Face> = f.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|s| s.is_subset_of(f)));
        assert_eq!(Face::EMPTY.subsets().count(), 1);
    }
}
