//! Dense symmetric eigensolver based on cyclic Jacobi rotations.

use ndarray::{Array1, Array2, ArrayView2};

use crate::error::{Error, Result};

/// Off-diagonal Frobenius mass, relative to `‖A‖_F`, at which sweeps stop.
pub const CONVERGENCE_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Largest tolerated `max |A - A^T|`, scaled by `max(1, ‖A‖_max)`.
pub const SYMMETRY_TOL: f64 = 1e-8;

/// Ascending eigenvalues with unit-norm eigenvectors stored column-wise.
///
/// Each eigenvector is signed so that its largest-magnitude component is
/// positive (the lowest such index decides among equal magnitudes).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: Array2<f64>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V Λ V^T`.
    pub fn reconstruct(&self) -> Array2<f64> {
        let scaled = &self.eigenvectors * &self.eigenvalues;
        scaled.dot(&self.eigenvectors.t())
    }
}

/// Eigendecomposition of a dense symmetric matrix.
pub fn eig_symmetric(a: ArrayView2<'_, f64>) -> Result<SpectralDecomposition> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let max_abs = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !max_abs.is_finite() {
        return Err(Error::InvalidParameter(
            "matrix has non-finite entries".into(),
        ));
    }
    let asym = crate::laplacian::max_asymmetry(&a.to_owned());
    if asym > SYMMETRY_TOL * max_abs.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }

    // row-major working copy of the symmetrized input
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a[[i, j]] + a[[j, i]]);
        }
    }
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let frob = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = CONVERGENCE_TOL * frob;
    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        if off_diagonal_norm(&m, n) <= target {
            converged = true;
            break;
        }
        sweep(&mut m, &mut v, n);
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: numerically equal eigenvalues keep the solver's order
    order.sort_by(|&x, &y| m[x * n + x].total_cmp(&m[y * n + y]));

    let eigenvalues = order.iter().map(|&i| m[i * n + i]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let mut u: Vec<f64> = (0..n).map(|r| v[r * n + src]).collect();
        normalize(&mut u);
        fix_sign(&mut u);
        for (r, x) in u.into_iter().enumerate() {
            eigenvectors[[r, col]] = x;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

/// One cyclic sweep over all `p < q` pairs.
fn sweep(m: &mut [f64], v: &mut [f64], n: usize) {
    for p in 0..n {
        for q in (p + 1)..n {
            let apq = m[p * n + q];
            if apq == 0.0 {
                continue;
            }
            let app = m[p * n + p];
            let aqq = m[q * n + q];
            let theta = (aqq - app) / (2.0 * apq);
            let t = if theta.is_finite() {
                theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
            } else {
                // |theta| overflowed: the rotation angle is negligible
                1.0 / (2.0 * theta)
            };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;

            // A <- A J
            for k in 0..n {
                let akp = m[k * n + p];
                let akq = m[k * n + q];
                m[k * n + p] = c * akp - s * akq;
                m[k * n + q] = s * akp + c * akq;
            }
            // A <- J^T A
            for k in 0..n {
                let apk = m[p * n + k];
                let aqk = m[q * n + k];
                m[p * n + k] = c * apk - s * aqk;
                m[q * n + k] = s * apk + c * aqk;
            }
            m[p * n + q] = 0.0;
            m[q * n + p] = 0.0;
            // V <- V J
            for k in 0..n {
                let vkp = v[k * n + p];
                let vkq = v[k * n + q];
                v[k * n + p] = c * vkp - s * vkq;
                v[k * n + q] = s * vkp + c * vkq;
            }
        }
    }
}

pub(crate) fn normalize(u: &mut [f64]) {
    let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        u.iter_mut().for_each(|x| *x /= norm);
    }
}

/// Flips `u` so its largest-magnitude entry is positive.
pub(crate) fn fix_sign(u: &mut [f64]) {
    let mut best = 0;
    for (i, x) in u.iter().enumerate() {
        if x.abs() > u[best].abs() {
            best = i;
        }
    }
    if u.get(best).is_some_and(|&x| x < 0.0) {
        u.iter_mut().for_each(|x| *x = -*x);
    }
}
