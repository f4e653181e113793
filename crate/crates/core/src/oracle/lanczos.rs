use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{dot, eigen_residual, norm, random_vector, EigResult, SparseOperator, Which};
use crate::{Error, Result};

/// Seed of the starting vector ("qwalk" in ASCII).
pub const START_SEED: u64 = 0x71_77_61_6c_6b;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosConfig {
    /// Krylov dimension per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 120,
            max_restarts: 400,
            seed: START_SEED,
        }
    }
}

/// Extremal eigenpair with `‖Av - value v‖ / ‖v‖ <= tol`.
pub fn extremal_eigen(op: &SparseOperator, which: Which, tol: f64) -> Result<EigResult> {
    extremal_eigen_with(op, which, tol, &LanczosConfig::default())
}

/// Lanczos with full reorthogonalisation, restarted from the current Ritz
/// vector. The residual is recomputed from the operator after every cycle.
pub fn extremal_eigen_with(
    op: &SparseOperator,
    which: Which,
    tol: f64,
    cfg: &LanczosConfig,
) -> Result<EigResult> {
    if !op.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            field: "tol",
            reason: alloc::format!("must be positive, got {tol}"),
        });
    }
    let n = op.dimension();
    let m = cfg.krylov_dim.clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start = random_vector(n, &mut rng);
    let n0 = norm(&start);
    scale(&mut start, 1.0 / n0);

    let mut iterations = 0;
    let mut best = f64::INFINITY;
    let mut w = alloc::vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..=cfg.max_restarts {
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        basis.push(start.clone());
        loop {
            let j = basis.len() - 1;
            op.apply(&basis[j], &mut w);
            iterations += 1;
            let a = dot(&basis[j], &w).re;
            axpy(&mut w, -a, &basis[j]);
            if j > 0 {
                axpy(&mut w, -beta[j - 1], &basis[j - 1]);
            }
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            alpha.push(a);
            let b = norm(&w);
            let size = alpha.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(1.0);
            if basis.len() == m || b <= 1e-13 * size {
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            scale(&mut next, 1.0 / b);
            basis.push(next);
        }

        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let pick = (0..k)
            .reduce(|best, i| {
                let better = match which {
                    Which::Largest => eig.eigenvalues[i] > eig.eigenvalues[best],
                    Which::Smallest => eig.eigenvalues[i] < eig.eigenvalues[best],
                };
                if better {
                    i
                } else {
                    best
                }
            })
            .unwrap_or(0);
        let theta = eig.eigenvalues[pick];
        let mut x = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (i, q) in basis.iter().enumerate() {
            axpy(&mut x, eig.eigenvectors[(i, pick)], q);
        }
        let nx = norm(&x);
        scale(&mut x, 1.0 / nx);
        let residual = eigen_residual(op, theta, &x);
        best = best.min(residual);
        if residual <= tol {
            return Ok(EigResult {
                value: theta,
                vector: x,
                residual,
                iterations,
            });
        }
        start = x;
    }
    Err(Error::NotConverged {
        iterations,
        best_residual: best,
    })
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += xi * a;
    }
}

fn scale(v: &mut [Complex64], s: f64) {
    for x in v {
        *x *= s;
    }
}
