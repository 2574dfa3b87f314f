//! Hermitian eigendecomposition via the cyclic Jacobi method.
//!
//! The matrices in this crate are small (dimension at most 81), where Jacobi
//! is simple, unconditionally stable, and accurate to machine precision. Each
//! rotation annihilates one off-diagonal pair with a complex Givens rotation;
//! sweeps repeat until the off-diagonal mass is negligible.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::matrix::ComplexMatrix;

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 60;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian matrix.
///
/// Rejects inputs whose Hermiticity defect exceeds
/// `HERMITICITY_TOL * (1 + max|M|)`, naming the worst entry.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let scale = m.max_abs();
    let tolerance = HERMITICITY_TOL * (1.0 + scale);
    let (defect, row, col) = m.hermiticity_defect();
    if defect > tolerance {
        return Err(Error::NotHermitian {
            row,
            col,
            deviation: defect,
            tolerance,
        });
    }

    let n = m.dim();
    let mut a = m.clone();
    a.hermitize();
    let mut v = ComplexMatrix::identity(n);

    // Rotations below this threshold cannot improve the result.
    let off_target = 1e-15 * (1.0 + scale);

    for _ in 0..MAX_SWEEPS {
        let mut off_max = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_max = off_max.max(a[(p, q)].norm());
            }
        }
        if off_max <= off_target {
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        a.hermitize();
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    sort_ascending(&mut eigenvalues, &mut v);
    Ok((eigenvalues, v))
}

/// Annihilate the (p, q) off-diagonal entry of `a` with a unitary plane
/// rotation, accumulating the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let r = z.norm();
    if r < 1e-300 {
        return;
    }
    // Factor out the phase so the remaining 2x2 problem is real symmetric.
    let u = z / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // tan of the rotation angle: the root of t^2 - 2*theta*t - 1 = 0 with the
    // smaller magnitude, for stability.
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        -1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_conj = u.conj();
    let n = a.dim();

    // A <- G^dag A G with G supported on the (p, q) plane:
    //   G[p][p] = c, G[p][q] = -s, G[q][p] = s*conj(u), G[q][q] = c*conj(u).
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = c * aip + s * u_conj * aiq;
        a[(i, q)] = -s * aip + c * u_conj * aiq;
    }
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = c * apj + s * u * aqj;
        a[(q, j)] = -s * apj + c * u * aqj;
    }
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = c * vip + s * u_conj * viq;
        v[(i, q)] = -s * vip + c * u_conj * viq;
    }
}

fn sort_ascending(eigenvalues: &mut [f64], v: &mut ComplexMatrix) {
    let n = eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[i].partial_cmp(&eigenvalues[j]).unwrap());

    let sorted_vals: Vec<f64> = order.iter().map(|&k| eigenvalues[k]).collect();
    eigenvalues.copy_from_slice(&sorted_vals);

    let old = v.clone();
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            v[(i, new_col)] = old[(i, old_col)];
        }
    }
}
