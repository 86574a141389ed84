//! Exact dense linear algebra over the rationals.

#![allow(clippy::needless_range_loop)]

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn is_symmetric(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n)
        && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

pub fn transpose(m: &[Vec<Rational>]) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Rows scaled by the lcm of their denominators, so every entry is an integer.
fn integer_rows(m: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&l / q.denom()))
                .collect()
        })
        .collect()
}

/// Exact rank by Bareiss fraction-free elimination.
///
/// Row scaling does not change the rank, so the rational matrix is first
/// cleared of denominators row by row and elimination runs over the integers.
pub fn rank(m: &[Vec<Rational>]) -> usize {
    let mut a = integer_rows(m);
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                // Exact by Sylvester's identity.
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &[Vec<Rational>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of `{x : m x = 0}`, one vector per free column in increasing order.
pub fn kernel(m: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let (red, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -red[row][f].clone();
            }
            x
        })
        .collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(vectors: &[Vec<Rational>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Matrix = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

/// Coefficients `c` with `sum_i c_i * rows[i] = target`, if any exist.
/// When `rows` is independent the answer is unique.
pub fn combination(rows: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = rows.len();
    // Solve rows^T c = target as an augmented system.
    let dim = target.len();
    let aug: Matrix = (0..dim)
        .map(|j| {
            rows.iter()
                .map(|r| r[j].clone())
                .chain(std::iter::once(target[j].clone()))
                .collect()
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![Rational::zero(); k];
    for (row, &pc) in pivots.iter().enumerate() {
        c[pc] = red[row][k].clone();
    }
    Some(c)
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix, computed by
/// symmetric elimination (congruence diagonalization).
pub fn inertia(m: &[Vec<Rational>]) -> (usize, usize, usize) {
    let mut a: Matrix = m.to_vec();
    let mut n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while n > 0 {
        // Bring a nonzero diagonal entry to position 0, creating one from an
        // off-diagonal entry when the diagonal vanishes.
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            a.swap(0, i);
            for row in a.iter_mut() {
                row.swap(0, i);
            }
        } else if let Some(j) = (1..n).find(|&j| !a[0][j].is_zero()) {
            // Replace e_0 by e_0 + e_j: a00 becomes 2 a0j.
            for k in 0..n {
                let v = a[j][k].clone();
                a[0][k] += v;
            }
            for k in 0..n {
                let v = a[k][j].clone();
                a[k][0] += v;
            }
        } else if (0..n).all(|j| a[0][j].is_zero()) {
            zero += 1;
            a.remove(0);
            for row in a.iter_mut() {
                row.remove(0);
            }
            n -= 1;
            continue;
        }
        debug_assert!(!a[0][0].is_zero());
        let p = a[0][0].clone();
        if p > Rational::zero() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in 1..n {
            let f = &a[i][0] / &p;
            for j in 0..n {
                let delta = &f * &a[0][j];
                a[i][j] -= delta;
            }
        }
        a.remove(0);
        for row in a.iter_mut() {
            row.remove(0);
        }
        n -= 1;
    }
    (pos, neg, zero)
}
