//! Fixed-capacity dense algebra for tensors of dimension at most four.
//!
//! Every chart in this crate has dimension 2, 3 or 4, so components live in
//! `[f64; 4]` / `[[f64; 4]; 4]` buffers with an explicit `dim`; entries past
//! `dim` are kept at zero.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 4;

pub type Vec4 = [f64; MAX_DIM];
pub type Mat4 = [[f64; MAX_DIM]; MAX_DIM];

pub const ZERO_VEC: Vec4 = [0.0; MAX_DIM];
pub const ZERO_MAT: Mat4 = [[0.0; MAX_DIM]; MAX_DIM];

pub fn vec_from_slice(s: &[f64]) -> Result<Vec4> {
    if s.len() > MAX_DIM {
        return Err(Error::Dimension { expected: MAX_DIM, got: s.len() });
    }
    let mut v = ZERO_VEC;
    v[..s.len()].copy_from_slice(s);
    Ok(v)
}

pub fn dot(dim: usize, a: &Vec4, b: &Vec4) -> f64 {
    (0..dim).map(|i| a[i] * b[i]).sum()
}

/// `g(u, v) = g_ij u^i v^j`.
pub fn inner(dim: usize, g: &Mat4, u: &Vec4, v: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            s += g[i][j] * u[i] * v[j];
        }
    }
    s
}

pub fn mat_vec(dim: usize, a: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = ZERO_VEC;
    for i in 0..dim {
        out[i] = (0..dim).map(|j| a[i][j] * v[j]).sum();
    }
    out
}

pub fn mat_mul(dim: usize, a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = ZERO_MAT;
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = (0..dim).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(dim: usize, a: &Mat4) -> Mat4 {
    let mut out = ZERO_MAT;
    for i in 0..dim {
        for j in 0..dim {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn identity(dim: usize) -> Mat4 {
    let mut out = ZERO_MAT;
    for (i, row) in out.iter_mut().enumerate().take(dim) {
        row[i] = 1.0;
    }
    out
}

pub fn max_abs_asymmetry(dim: usize, a: &Mat4) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..dim {
        for j in 0..i {
            m = m.max((a[i][j] - a[j][i]).abs());
        }
    }
    m
}

/// Lower Cholesky factor `L` with `a = L L^T`. Fails unless `a` is positive definite.
pub fn cholesky(dim: usize, a: &Mat4) -> Result<Mat4> {
    let mut l = ZERO_MAT;
    for j in 0..dim {
        let mut d = a[j][j];
        for k in 0..j {
            d -= l[j][k] * l[j][k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::DegenerateMetric);
        }
        let djj = d.sqrt();
        l[j][j] = djj;
        for i in (j + 1)..dim {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            l[i][j] = s / djj;
        }
    }
    Ok(l)
}

fn lower_inverse(dim: usize, l: &Mat4) -> Mat4 {
    let mut inv = ZERO_MAT;
    for i in 0..dim {
        inv[i][i] = 1.0 / l[i][i];
        for j in 0..i {
            let mut s = 0.0;
            for k in j..i {
                s -= l[i][k] * inv[k][j];
            }
            inv[i][j] = s / l[i][i];
        }
    }
    inv
}

/// Inverse of a symmetric positive-definite matrix.
pub fn spd_inverse(dim: usize, a: &Mat4) -> Result<Mat4> {
    let l = cholesky(dim, a)?;
    let li = lower_inverse(dim, &l);
    let mut out = ZERO_MAT;
    for i in 0..dim {
        for j in 0..=i {
            let s: f64 = (i.max(j)..dim).map(|k| li[k][i] * li[k][j]).sum();
            out[i][j] = s;
            out[j][i] = s;
        }
    }
    Ok(out)
}

pub fn determinant(dim: usize, a: &Mat4) -> f64 {
    let m = DMatrix::from_fn(dim, dim, |i, j| a[i][j]);
    m.determinant()
}

/// Solution of the self-adjoint eigenproblem `A f = kappa B f` with `A`
/// symmetric and `B` positive definite. Eigenvalues ascend; eigenvectors are
/// returned as columns of the result matrix and are `B`-orthonormal.
pub fn generalized_symmetric_eigen(dim: usize, a: &Mat4, b: &Mat4) -> Result<(Vec4, Mat4)> {
    let l = cholesky(dim, b)?;
    let li = lower_inverse(dim, &l);
    // C = L^{-1} A L^{-T}, symmetrised against rounding.
    let c = mat_mul(dim, &mat_mul(dim, &li, a), &transpose(dim, &li));
    let cm = DMatrix::from_fn(dim, dim, |i, j| 0.5 * (c[i][j] + c[j][i]));
    let eig = SymmetricEigen::new(cm);

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&p, &q| eig.eigenvalues[p].total_cmp(&eig.eigenvalues[q]));

    let lit = transpose(dim, &li);
    let mut values = ZERO_VEC;
    let mut vectors = ZERO_MAT;
    for (col, &k) in order.iter().enumerate() {
        values[col] = eig.eigenvalues[k];
        let mut y = ZERO_VEC;
        for i in 0..dim {
            y[i] = eig.eigenvectors[(i, k)];
        }
        let f = mat_vec(dim, &lit, &y);
        for i in 0..dim {
            vectors[i][col] = f[i];
        }
    }
    Ok((values, vectors))
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(dim: usize, a: &Mat4, b: &Vec4) -> Result<Vec4> {
    let mut m = *a;
    let mut x = *b;
    for col in 0..dim {
        let piv = (col..dim).max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs())).unwrap_or(col);
        if m[piv][col].abs() < 1e-300 {
            return Err(Error::DegenerateMetric);
        }
        m.swap(col, piv);
        x.swap(col, piv);
        for row in (col + 1)..dim {
            let f = m[row][col] / m[col][col];
            for k in col..dim {
                m[row][k] -= f * m[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for row in (0..dim).rev() {
        let mut s = x[row];
        for k in (row + 1)..dim {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_spd() -> Mat4 {
        [[4.0, 1.0, 0.5, 0.0], [1.0, 3.0, 0.2, 0.1], [0.5, 0.2, 2.0, 0.3], [0.0, 0.1, 0.3, 1.5]]
    }

    #[test]
    fn spd_inverse_is_inverse() {
        let a = sample_spd();
        let inv = spd_inverse(4, &a).unwrap();
        let p = mat_mul(4, &a, &inv);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p[i][j] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = identity(2);
        a[1][1] = -1.0;
        assert_eq!(cholesky(2, &a), Err(Error::DegenerateMetric));
    }

    #[test]
    fn generalized_eigen_vectors_are_b_orthonormal() {
        let b = sample_spd();
        let mut a = ZERO_MAT;
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = (i + j) as f64 - 1.5 * (i == j) as u8 as f64;
            }
        }
        let (vals, vecs) = generalized_symmetric_eigen(3, &a, &b).unwrap();
        for p in 0..3 {
            let fp = [vecs[0][p], vecs[1][p], vecs[2][p], 0.0];
            let af = mat_vec(3, &a, &fp);
            let bf = mat_vec(3, &b, &fp);
            for i in 0..3 {
                assert!((af[i] - vals[p] * bf[i]).abs() < 1e-12);
            }
            for q in 0..3 {
                let fq = [vecs[0][q], vecs[1][q], vecs[2][q], 0.0];
                let want = if p == q { 1.0 } else { 0.0 };
                assert!((inner(3, &b, &fp, &fq) - want).abs() < 1e-12);
            }
        }
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
    }

    #[test]
    fn solve_matches_inverse() {
        let a = sample_spd();
        let b = [1.0, -2.0, 0.5, 3.0];
        let x = solve(4, &a, &b).unwrap();
        let back = mat_vec(4, &a, &x);
        for i in 0..4 {
            assert!((back[i] - b[i]).abs() < 1e-13);
        }
    }
}
