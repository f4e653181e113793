//! Finite-lattice Hamiltonians and brute-force eigensolvers.
//!
//! Operators are matrix free: a nearest-neighbour hopping pattern on a box
//! or torus plus a constant diagonal and an on-site spike. Sites are stored
//! with the last axis fastest, so a box of radius `L` lines up with
//! [`LatticeVector`](crate::wavefunction::LatticeVector) of the same radius.

mod dense;
mod lanczos;

pub use dense::{dense_matrix, dense_spectrum, DENSE_LIMIT};
pub use lanczos::{extremal_eigen, extremal_eigen_with, LanczosConfig, START_SEED};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{OneParticleParams, QuasiMomentum, TwoParticleParams};
use crate::{math, Error, Result};

/// Default cap on the number of sites of a two-particle torus.
pub const DEFAULT_SITE_BUDGET: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Which {
    Largest,
    Smallest,
}

#[derive(Debug, Clone, PartialEq)]
enum Spike {
    /// Every coordinate equals `origin`.
    Site { origin: usize },
    /// First half of the axes equals the second half.
    Coincidence,
}

/// `(Av)(x) = diag v(x) + mu [x ∈ spike] v(x)
///          - Σ_k (hop_k v(x - e_k) + conj(hop_k) v(x + e_k))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    side: usize,
    axes: usize,
    boundary: Boundary,
    diag: f64,
    mu: f64,
    spike: Spike,
    hop: Vec<Complex64>,
    strides: Vec<usize>,
    dimension: usize,
    hermitian: bool,
}

impl SparseOperator {
    fn new(
        side: usize,
        axes: usize,
        boundary: Boundary,
        diag: f64,
        mu: f64,
        spike: Spike,
        hop: Vec<Complex64>,
    ) -> Self {
        let dimension = side.pow(axes as u32);
        let mut strides = vec![1usize; axes];
        for k in (0..axes.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * side;
        }
        Self {
            side,
            axes,
            boundary,
            diag,
            mu,
            spike,
            hop,
            strides,
            dimension,
            hermitian: true,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    fn coord(&self, site: usize, k: usize) -> usize {
        (site / self.strides[k]) % self.side
    }

    fn on_spike(&self, site: usize) -> bool {
        match self.spike {
            Spike::Site { origin } => (0..self.axes).all(|k| self.coord(site, k) == origin),
            Spike::Coincidence => {
                let d = self.axes / 2;
                (0..d).all(|k| self.coord(site, k) == self.coord(site, k + d))
            }
        }
    }

    fn row(&self, site: usize, v: &[Complex64]) -> Complex64 {
        let mut acc = v[site] * self.diag;
        if self.mu != 0.0 && self.on_spike(site) {
            acc += v[site] * self.mu;
        }
        let last = self.side - 1;
        for k in 0..self.axes {
            let h = self.hop[k];
            if h == Complex64::new(0.0, 0.0) {
                continue;
            }
            let c = self.coord(site, k);
            let stride = self.strides[k];
            let back = if c > 0 {
                Some(site - stride)
            } else if self.boundary == Boundary::Periodic {
                Some(site + last * stride)
            } else {
                None
            };
            let forward = if c < last {
                Some(site + stride)
            } else if self.boundary == Boundary::Periodic {
                Some(site - last * stride)
            } else {
                None
            };
            if let Some(b) = back {
                acc -= h * v[b];
            }
            if let Some(f) = forward {
                acc -= h.conj() * v[f];
            }
        }
        acc
    }

    /// `out = A v`.
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        assert_eq!(v.len(), self.dimension);
        assert_eq!(out.len(), self.dimension);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            out.par_iter_mut()
                .enumerate()
                .with_min_len(1024)
                .for_each(|(i, o)| *o = self.row(i, v));
        }
        #[cfg(not(feature = "parallel"))]
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i, v);
        }
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dimension];
        self.apply(v, &mut out);
        out
    }
}

/// One-particle walk on `[-L, L]^d` (open) or the torus of `2L + 1` sites.
pub fn build_one_particle(p: &OneParticleParams, radius: usize, bc: Boundary) -> SparseOperator {
    let d = p.d;
    SparseOperator::new(
        2 * radius + 1,
        d,
        bc,
        2.0 * p.lambda * d as f64,
        p.mu,
        Spike::Site { origin: radius },
        vec![Complex64::new(p.lambda, 0.0); d],
    )
}

fn fiber_hops(phi: &QuasiMomentum, p: &TwoParticleParams) -> Vec<Complex64> {
    phi.angles()
        .iter()
        .map(|&a| Complex64::new(p.lambda1 * math::cos(a) + p.lambda2, -p.lambda1 * math::sin(a)))
        .collect()
}

/// Fiber operator at quasi-momentum `phi` on `[-L, L]^d`.
pub fn build_fiber(
    phi: &QuasiMomentum,
    p: &TwoParticleParams,
    radius: usize,
    bc: Boundary,
) -> Result<SparseOperator> {
    p.validate()?;
    check_phi(phi, p)?;
    Ok(SparseOperator::new(
        2 * radius + 1,
        p.d,
        bc,
        2.0 * p.d as f64 * p.total_hopping(),
        p.mu,
        Spike::Site { origin: radius },
        fiber_hops(phi, p),
    ))
}

/// Fiber operator on the periodic torus `Z_N^d`, interaction at site 0.
pub fn build_fiber_on_torus(
    phi: &QuasiMomentum,
    p: &TwoParticleParams,
    sites: usize,
) -> Result<SparseOperator> {
    p.validate()?;
    check_phi(phi, p)?;
    if sites < 3 {
        return Err(Error::InvalidParameter {
            field: "sites",
            reason: format!("need at least 3 sites per axis, got {sites}"),
        });
    }
    Ok(SparseOperator::new(
        sites,
        p.d,
        Boundary::Periodic,
        2.0 * p.d as f64 * p.total_hopping(),
        p.mu,
        Spike::Site { origin: 0 },
        fiber_hops(phi, p),
    ))
}

fn check_phi(phi: &QuasiMomentum, p: &TwoParticleParams) -> Result<()> {
    if phi.dims() != p.d {
        return Err(Error::InvalidParameter {
            field: "phi",
            reason: format!("expected {} angles, got {}", p.d, phi.dims()),
        });
    }
    Ok(())
}

/// Two particles on the periodic torus `Z_N^d`, coordinates `(x1, x2)`.
pub fn build_two_particle_torus(p: &TwoParticleParams, sites: usize) -> Result<SparseOperator> {
    build_two_particle_torus_with_budget(p, sites, DEFAULT_SITE_BUDGET)
}

pub fn build_two_particle_torus_with_budget(
    p: &TwoParticleParams,
    sites: usize,
    budget: usize,
) -> Result<SparseOperator> {
    p.validate()?;
    if sites < 3 {
        return Err(Error::InvalidParameter {
            field: "sites",
            reason: format!("need at least 3 sites per axis, got {sites}"),
        });
    }
    let d = p.d;
    let requested = (sites as u128).checked_pow(2 * d as u32).unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::ResourceLimit {
            requested,
            budget: budget as u128,
        });
    }
    let mut hop = vec![Complex64::new(p.lambda1, 0.0); d];
    hop.extend(core::iter::repeat(Complex64::new(p.lambda2, 0.0)).take(d));
    Ok(SparseOperator::new(
        sites,
        2 * d,
        Boundary::Periodic,
        2.0 * d as f64 * p.total_hopping(),
        p.mu,
        Spike::Coincidence,
        hop,
    ))
}

pub(crate) fn random_vector(dimension: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let unit = |rng: &mut ChaCha8Rng| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    (0..dimension)
        .map(|_| {
            let re = unit(rng);
            let im = unit(rng);
            Complex64::new(re, im)
        })
        .collect()
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    math::sqrt(a.iter().map(|x| x.norm_sqr()).sum())
}

/// `|<Av, w> - <v, Aw>| / (|A v| |w|)` for seeded random `v`, `w`.
pub fn hermiticity_defect(op: &SparseOperator, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_vector(op.dimension(), &mut rng);
    let w = random_vector(op.dimension(), &mut rng);
    let av = op.apply_vec(&v);
    let aw = op.apply_vec(&w);
    let lhs = dot(&av, &w);
    let rhs = dot(&v, &aw);
    let scale = (norm(&av) * norm(&w)).max(norm(&v) * norm(&aw)).max(f64::MIN_POSITIVE);
    math::sqrt((lhs - rhs).norm_sqr()) / scale
}

/// `‖A v - value v‖ / ‖v‖`.
pub fn eigen_residual(op: &SparseOperator, value: f64, vector: &[Complex64]) -> f64 {
    let av = op.apply_vec(vector);
    let r: f64 = av
        .iter()
        .zip(vector)
        .map(|(a, v)| (a - v * value).norm_sqr())
        .sum();
    math::sqrt(r) / norm(vector)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub value: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}
