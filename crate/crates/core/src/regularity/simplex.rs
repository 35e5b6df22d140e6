//! Exact phase-one simplex for systems `A x ≥ b` with free `x`.

use num_traits::{One, Signed, Zero};

use crate::kernel::Rational;

/// Outcome of [`feasible_point`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    /// A solution of `A x ≥ b`.
    Feasible(Vec<Rational>),
    /// Farkas multipliers `y ≥ 0` with `yᵀA = 0` and `yᵀb > 0`.
    Infeasible(Vec<Rational>),
}

/// Decides `A x ≥ b` exactly, using Bland's rule on the phase-one problem
/// `min Σ r` subject to `A x⁺ - A x⁻ - s + r = b` (rows negated where
/// `b < 0`).
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    // columns: x⁺ (n), x⁻ (n), s (m), r (m), rhs
    let cols = 2 * n + 2 * m;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    let mut signs = Vec::with_capacity(m);
    for i in 0..m {
        let sign = if b[i].is_negative() { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); cols + 1];
        for j in 0..n {
            row[j] = &sign * &a[i][j];
            row[n + j] = -&row[j];
        }
        row[2 * n + i] = -sign.clone();
        row[2 * n + m + i] = Rational::one();
        row[cols] = &sign * &b[i];
        signs.push(sign);
        tab.push(row);
    }
    // objective row: reduced costs of min Σ r with r basic
    let mut obj = vec![Rational::zero(); cols + 1];
    for j in 0..cols + 1 {
        let s = tab.iter().fold(Rational::zero(), |acc, row| acc + &row[j]);
        obj[j] = if (2 * n + m..2 * n + 2 * m).contains(&j) {
            Rational::zero()
        } else {
            -s
        };
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();

    loop {
        let enter = (0..cols).find(|&j| tab[m][j].is_negative());
        let Some(e) = enter else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][e].is_positive() {
                let ratio = &tab[i][cols] / &tab[i][e];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((l, _)) = leave else {
            unreachable!("phase one is bounded below by zero")
        };
        pivot(&mut tab, l, e);
        basis[l] = e;
    }

    // the objective row stores -(Σ r) in its rhs slot
    if tab[m][cols].is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] += &tab[i][cols];
            } else if bv < 2 * n {
                x[bv - n] -= &tab[i][cols];
            }
        }
        Feasibility::Feasible(x)
    } else {
        // reduced cost of r_i is 1 - y'_i
        let y = (0..m)
            .map(|i| (Rational::one() - &tab[m][2 * n + m + i]) * &signs[i])
            .collect();
        Feasibility::Infeasible(y)
    }
}

fn pivot(tab: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v /= &p;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}

/// Checks a Farkas certificate for `A x ≥ b`.
pub fn check_farkas(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    let n = a.first().map_or(0, Vec::len);
    y.len() == a.len()
        && y.iter().all(|v| !v.is_negative())
        && (0..n).all(|j| a.iter().zip(y).fold(Rational::zero(), |acc, (row, yi)| acc + &row[j] * yi).is_zero())
        && b.iter().zip(y).fold(Rational::zero(), |acc, (bi, yi)| acc + bi * yi).is_positive()
}

/// Checks `A x ≥ b`.
pub fn check_solution(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    a.iter().zip(b).all(|(row, bi)| {
        row.iter().zip(x).fold(Rational::zero(), |acc, (aij, xj)| acc + aij * xj) >= *bi
    })
}
