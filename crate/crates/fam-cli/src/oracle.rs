//! Dense rational stochastic-matrix arithmetic, used as an independent
//! reference for the kernel and solver code paths. Deliberately separate
//! from the library implementations.

use fam_core::Q;
use num::{One, Zero};

pub fn vec_mat(vector: &[Q], matrix: &[Vec<Q>]) -> Vec<Q> {
    let n = matrix.len();
    (0..n)
        .map(|j| (0..n).fold(Q::zero(), |acc, i| acc + &vector[i] * &matrix[i][j]))
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut out = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            for (k, b_row) in b.iter().enumerate() {
                out[i][j] += &a[i][k] * &b_row[j];
            }
        }
    }
    out
}

pub fn mat_pow(matrix: &[Vec<Q>], exponent: usize) -> Vec<Vec<Q>> {
    let mut acc = matrix.to_vec();
    for _ in 1..exponent {
        acc = mat_mul(&acc, matrix);
    }
    acc
}

/// Basis of stationary row vectors: solves `(P^T - I) x = 0` by elimination.
pub fn stationary_basis(p: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = p.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = p[j][i].clone();
                    if i == j {
                        v -= Q::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, r);
        let pivot = a[row][col].clone();
        for v in a[row].iter_mut() {
            *v /= pivot.clone();
        }
        let reduced = a[row].clone();
        for (r2, target) in a.iter_mut().enumerate() {
            if r2 == row || target[col].is_zero() {
                continue;
            }
            let f = target[col].clone();
            for (v, p) in target.iter_mut().zip(&reduced) {
                *v -= &f * p;
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    free.into_iter()
        .map(|f| {
            let mut x = vec![Q::zero(); n];
            x[f] = Q::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                x[pc] = -a[r][f].clone();
            }
            x
        })
        .collect()
}

/// The unique normalized stationary vector of a strictly positive matrix.
pub fn unique_stationary(p: &[Vec<Q>]) -> Option<Vec<Q>> {
    let basis = stationary_basis(p);
    if basis.len() != 1 {
        return None;
    }
    let total: Q = basis[0].iter().fold(Q::zero(), |acc, v| acc + v);
    if total.is_zero() {
        return None;
    }
    Some(basis[0].iter().map(|v| v / &total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        fam_core::rat::q(n, d)
    }

    #[test]
    fn stationary_of_two_state_chain() {
        // jump probabilities 1/3 and 2/3: stationary (2/3, 1/3) scaled
        let p = vec![vec![q(2, 3), q(1, 3)], vec![q(2, 3), q(1, 3)]];
        let stationary = unique_stationary(&p).unwrap();
        assert_eq!(stationary, vec![q(2, 3), q(1, 3)]);
        let back = vec_mat(&stationary, &p);
        assert_eq!(back, stationary);
    }

    #[test]
    fn powers_agree_with_repeated_products() {
        let p = vec![vec![q(1, 2), q(1, 2)], vec![q(1, 4), q(3, 4)]];
        let p3 = mat_pow(&p, 3);
        let manual = mat_mul(&mat_mul(&p, &p), &p);
        assert_eq!(p3, manual);
    }
}
