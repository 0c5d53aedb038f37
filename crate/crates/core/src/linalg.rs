//! Dense exact linear algebra over `Q` (row-major `Vec<Vec<Q>>`).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::rational::{dot, zeros, Q};

pub type Matrix = Vec<Vec<Q>>;

/// Reduced row echelon form; returns the reduced matrix and pivot columns.
pub fn rref(m: &[Vec<Q>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
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
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    rref(m).1.len()
}

/// Basis of `{x : m x = 0}`; `cols` is needed when `m` has no rows.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Matrix {
    if m.is_empty() {
        return (0..cols).map(|i| crate::rational::unit(cols, i)).collect();
    }
    let (r, piv) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zeros(cols);
            v[f] = Q::one();
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, or `None` if inconsistent.
pub fn solve_particular(a: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(zeros(cols));
    }
    let (r, piv) = rref(&aug);
    if piv.last() == Some(&cols) {
        return None;
    }
    let mut x = zeros(cols);
    for (row, &pc) in piv.iter().enumerate() {
        x[pc] = r[row][cols].clone();
    }
    Some(x)
}

/// The unique solution of `a x = b`, if there is exactly one.
pub fn solve_unique(a: &[Vec<Q>], b: &[Q], cols: usize) -> Option<Vec<Q>> {
    if rank(a) != cols {
        return None;
    }
    solve_particular(a, b, cols)
}

pub fn inverse(m: &[Vec<Q>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(crate::rational::unit(n, i));
            r
        })
        .collect();
    let (r, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d *= &piv;
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &piv;
                let src = a[c].clone();
                for (x, s) in a[i].iter_mut().zip(src.iter()) {
                    *x -= &f * s;
                }
            }
        }
    }
    d
}

pub fn transpose(m: &[Vec<Q>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    m.iter().map(|r| dot(r, v)).collect()
}

/// `vᵀ m` for a row vector `v`.
pub fn vec_mat(v: &[Q], m: &[Vec<Q>]) -> Vec<Q> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut out = zeros(cols);
    for (vi, row) in v.iter().zip(m) {
        if vi.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(row) {
            *o += vi * x;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Matrix {
    a.iter().map(|r| vec_mat(r, b)).collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| crate::rational::unit(n, i)).collect()
}

/// Indices of a maximal linearly independent subfamily, chosen greedily in
/// the given order (so the result is the lexicographically first basis).
pub fn greedy_basis(rows: &[Vec<Q>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Matrix = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        acc.push(r.clone());
        if rank(&acc) == chosen.len() + 1 {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

pub fn in_span(rows: &[Vec<Q>], v: &[Q]) -> bool {
    if rows.is_empty() {
        return v.iter().all(Zero::is_zero);
    }
    let mut with = rows.to_vec();
    with.push(v.to_vec());
    rank(&with) == rank(rows)
}

/// Canonical basis (the nonzero rows of the RREF) of the row span.
pub fn span_basis(rows: &[Vec<Q>]) -> Matrix {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, piv) = rref(rows);
    r.into_iter().take(piv.len()).collect()
}

/// Coefficients `c` with `Σ c_i rows[i] = v`, if `v` lies in the span.
pub fn express_in(rows: &[Vec<Q>], v: &[Q]) -> Option<Vec<Q>> {
    let a = transpose(rows);
    let a = if a.is_empty() { vec![Vec::new(); v.len()] } else { a };
    solve_particular(&a, v, rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_ints, q, qf};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| from_ints(r)).collect()
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[2, -1], &[-1, 2]]);
        assert_eq!(det(&a), q(3));
        let inv = inverse(&a).unwrap();
        assert_eq!(inv[0][0], qf(2, 3));
        assert_eq!(inv[0][1], qf(1, 3));
        assert_eq!(mat_mul(&a, &inv), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn nullspace_dims() {
        let a = m(&[&[1, 1, 0]]);
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert_eq!(mat_vec(&a, v), vec![q(0)]);
        }
    }

    #[test]
    fn solve_systems() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve_unique(&a, &from_ints(&[3, 1]), 2).unwrap(), from_ints(&[2, 1]));
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_particular(&b, &from_ints(&[1, 3]), 2).is_none());
        assert!(solve_unique(&b, &from_ints(&[1, 2]), 2).is_none());
        assert_eq!(greedy_basis(&m(&[&[1, 0], &[2, 0], &[0, 1]])), vec![0, 2]);
        assert_eq!(
            express_in(&m(&[&[1, 0], &[1, 1]]), &from_ints(&[3, 2])).unwrap(),
            from_ints(&[1, 2])
        );
    }
}
