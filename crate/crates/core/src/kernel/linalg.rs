//! Dense exact linear algebra over [`Rational`]. Matrices are small
//! (at most a handful of rows), so plain Gauss-Jordan elimination is used.

use num_traits::{One, Zero};

use super::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[&[Rational]]) -> usize {
    let mut m: Matrix = rows.iter().map(|r| r.to_vec()).collect();
    rref(&mut m).len()
}

/// Returns a basis vector of the null space of the matrix whose columns are
/// `cols`, provided that null space is exactly one-dimensional.
pub fn unique_kernel_vector(cols: &[&[Rational]]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let h = cols.first().map_or(0, |c| c.len());
    let mut m: Matrix = (0..h)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); n];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Solves `sum_j x_j * cols[j] = rhs` when the columns are linearly
/// independent and `rhs` lies in their span; the system may be overdetermined.
pub fn solve_columns(cols: &[&[Rational]], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = cols.len();
    let mut m: Matrix = (0..rhs.len())
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        // Either dependent columns or the augmented column is a pivot.
        return None;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

pub fn determinant(mut m: Matrix) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for j in c..n {
                let delta = &factor * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

pub fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i.into()))
}
