//! Small dense linear algebra over the rationals and over `f64`.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::exactpoly::Rational;

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (c, v) in row.iter_mut().enumerate().skip(col) {
                *v -= &factor * &pivot_row[c];
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    pivots
}

/// Rank of a rational matrix given by rows.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut rows = rows.to_vec();
    rref(&mut rows).len()
}

/// Basis of `{v : rows · v = 0}`, one vector per free column.
pub fn rational_nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut rows = rows.to_vec();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Numerical rank: singular values above `rel_tol * sigma_max`.
pub fn float_rank(rows: &[Vec<f64>], rel_tol: f64) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]);
    let sv = m.singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Moore-Penrose solve of `J · dx = r` in the least-squares sense.
pub fn pinv_solve(jac: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let nrows = jac.len();
    let ncols = jac.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return None;
    }
    let j = DMatrix::from_fn(nrows, ncols, |a, b| jac[a][b]);
    let r = nalgebra::DVector::from_column_slice(rhs);
    let svd = j.svd(true, true);
    let sol = svd.solve(&r, 1e-12).ok()?;
    Some(sol.iter().copied().collect())
}
