//! Small exact-rational linear algebra: just enough Gaussian elimination to
//! extract nullspace bases for the fixed-point solver.

use num::{One, Zero};

use crate::rat::Q;

/// Reduced row echelon form in place; returns pivot column indices.
pub fn rref(matrix: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, pivot_row);
        let pivot = matrix[row][col].clone();
        for v in matrix[row].iter_mut() {
            *v /= pivot.clone();
        }
        let reduced = matrix[row].clone();
        for (r, target) in matrix.iter_mut().enumerate() {
            if r == row || target[col].is_zero() {
                continue;
            }
            let factor = target[col].clone();
            for (v, p) in target.iter_mut().zip(&reduced) {
                *v -= &factor * p;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

/// Basis of `{ v : A v = 0 }` for a square or rectangular rational matrix,
/// one vector per free column.
pub fn nullspace(matrix: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = if matrix.is_empty() {
        0
    } else {
        matrix[0].len()
    };
    let mut work: Vec<Vec<Q>> = matrix.to_vec();
    let pivots = rref(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Q::zero(); cols];
        v[f] = Q::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -work[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// `a - I`, for building fixed-point systems.
pub fn subtract_identity(matrix: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out = matrix.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= Q::one();
    }
    out
}

/// Matrix-vector product.
pub fn mat_vec(matrix: &[Vec<Q>], vector: &[Q]) -> Vec<Q> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(vector)
                .fold(Q::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}
