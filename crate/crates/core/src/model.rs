//! Parameters and closed-form scalar functions of the model.
//!
//! The fiber operator at total quasi-momentum `phi` is
//!
//! `(H(phi) u)(x) = -Σ_k [a_k u(x - e_k) + conj(a_k) u(x + e_k)] + (2 d Λ + mu δ_{x,0}) u(x)`
//!
//! with `a_k = λ1 e^{-i phi_k} + λ2` and `Λ = λ1 + λ2`. Its band is
//! `[β1, β2] = 2Λ [d - Σ r(phi_k), d + Σ r(phi_k)]` where `r(α) = |λ1 e^{iα} + λ2| / Λ`.
//! The one-particle Hamiltonian is the special case `r ≡ 1`, `Λ = λ`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{math, Error, Result};

fn check_dimension(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidParameter {
            field: "d",
            reason: "dimension must be at least 1".into(),
        });
    }
    Ok(())
}

fn check_hopping(field: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::InvalidParameter {
            field,
            reason: format!("hopping must be finite and positive, got {value}"),
        });
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(Error::InvalidParameter {
            field: "mu",
            reason: format!("interaction strength must be finite, got {mu}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OneParticleParams {
    pub lambda: f64,
    pub mu: f64,
    pub d: usize,
}

impl OneParticleParams {
    pub fn new(lambda: f64, mu: f64, d: usize) -> Result<Self> {
        let p = Self { lambda, mu, d };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_hopping("lambda", self.lambda)?;
        check_mu(self.mu)?;
        check_dimension(self.d)
    }

    /// `[0, 4 λ d]`.
    pub fn band(&self) -> BandEdges {
        BandEdges {
            beta1: 0.0,
            beta2: 4.0 * self.lambda * self.d as f64,
        }
    }

    /// The one-particle problem viewed as a fiber with unit weights.
    pub fn as_fiber(&self) -> Fiber {
        Fiber {
            d: self.d,
            hopping: self.lambda,
            weights: alloc::vec![1.0; self.d],
            support: SupportSet {
                s: self.d,
                indices: (0..self.d).collect(),
            },
            edges: self.band(),
            equal_hoppings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TwoParticleParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub mu: f64,
    pub d: usize,
}

impl TwoParticleParams {
    pub fn new(lambda1: f64, lambda2: f64, mu: f64, d: usize) -> Result<Self> {
        let p = Self {
            lambda1,
            lambda2,
            mu,
            d,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_hopping("lambda1", self.lambda1)?;
        check_hopping("lambda2", self.lambda2)?;
        check_mu(self.mu)?;
        check_dimension(self.d)
    }

    /// `Λ = λ1 + λ2`.
    pub fn total_hopping(&self) -> f64 {
        self.lambda1 + self.lambda2
    }

    pub fn equal_hoppings(&self) -> bool {
        self.lambda1 == self.lambda2
    }

    /// Same `Λ`, `mu` and `d` as a one-particle problem.
    pub fn reduced(&self) -> OneParticleParams {
        OneParticleParams {
            lambda: self.total_hopping(),
            mu: self.mu,
            d: self.d,
        }
    }

    pub fn fiber(&self, phi: &QuasiMomentum) -> Result<Fiber> {
        self.check_phi(phi)?;
        let weights: Vec<f64> = phi.angles().iter().map(|&a| r_of(a, self)).collect();
        let support = support_set(phi, self)?;
        let edges = band_edges(phi, self)?;
        Ok(Fiber {
            d: self.d,
            hopping: self.total_hopping(),
            weights,
            support,
            edges,
            equal_hoppings: self.equal_hoppings(),
        })
    }

    pub(crate) fn check_phi(&self, phi: &QuasiMomentum) -> Result<()> {
        if phi.dims() != self.d {
            return Err(Error::InvalidParameter {
                field: "phi",
                reason: format!("expected {} components, got {}", self.d, phi.dims()),
            });
        }
        Ok(())
    }
}

/// A point of the torus, every component in `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuasiMomentum {
    phi: Vec<f64>,
}

impl QuasiMomentum {
    /// Canonicalises every component modulo `2 pi`. Rejects non-finite
    /// components.
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if let Some(bad) = phi.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "phi",
                reason: format!("angle must be finite, got {bad}"),
            });
        }
        Ok(Self {
            phi: phi.into_iter().map(canonical_angle).collect(),
        })
    }

    /// Angles given in units of pi; reduction happens in those units, so
    /// `1.0` maps to exactly `PI`.
    pub fn from_pi_units(units: &[f64]) -> Result<Self> {
        if let Some(bad) = units.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "phi",
                reason: format!("angle must be finite, got {bad}"),
            });
        }
        let phi = units
            .iter()
            .map(|&u| {
                let mut r = u - 2.0 * math::floor(0.5 * u);
                if r > 1.0 {
                    r -= 2.0;
                }
                if r == 1.0 {
                    PI
                } else {
                    r * PI
                }
            })
            .collect();
        Ok(Self { phi })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            phi: alloc::vec![0.0; d],
        }
    }

    /// `(pi, ..., pi)`.
    pub fn corner(d: usize) -> Self {
        Self {
            phi: alloc::vec![PI; d],
        }
    }

    pub fn dims(&self) -> usize {
        self.phi.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.phi
    }
}

/// `α` modulo `2 pi`, in `(-pi, pi]`.
pub fn canonical_angle(alpha: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = alpha - two_pi * math::round(alpha / two_pi);
    if r <= -PI {
        r += two_pi;
    }
    if r > PI {
        r -= two_pi;
    }
    r
}

/// `γ(phi) = Σ cos phi_k`.
pub fn gamma(phi: &QuasiMomentum) -> f64 {
    phi.angles().iter().map(|&a| math::cos(a)).sum()
}

/// Effective hopping `r(α) = |λ1 e^{iα} + λ2| / (λ1 + λ2)`, exactly zero
/// when `λ1 = λ2` and `α ≡ pi`.
pub fn r_of(alpha: f64, p: &TwoParticleParams) -> f64 {
    let a = canonical_angle(alpha);
    if axis_is_inert(a, p) {
        return 0.0;
    }
    let re = p.lambda1 * math::cos(a) + p.lambda2;
    let im = p.lambda1 * math::sin(a);
    (math::hypot(re, im) / p.total_hopping()).min(1.0)
}

fn axis_is_inert(canonical_alpha: f64, p: &TwoParticleParams) -> bool {
    p.equal_hoppings() && canonical_alpha == PI
}

/// Phase `η` with `λ1 cos α + λ2 = r' cos η` and `λ1 sin α = r' sin η`,
/// `r' = Λ r(α)`.
pub fn eta_of(alpha: f64, p: &TwoParticleParams) -> Result<f64> {
    let a = canonical_angle(alpha);
    if axis_is_inert(a, p) {
        return Err(Error::UndefinedPhase);
    }
    Ok(math::atan2(
        p.lambda1 * math::sin(a),
        p.lambda1 * math::cos(a) + p.lambda2,
    ))
}

/// Axes with nonzero effective hopping. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SupportSet {
    pub s: usize,
    pub indices: Vec<usize>,
}

pub fn support_set(phi: &QuasiMomentum, p: &TwoParticleParams) -> Result<SupportSet> {
    p.check_phi(phi)?;
    let indices: Vec<usize> = phi
        .angles()
        .iter()
        .enumerate()
        .filter(|(_, &a)| !axis_is_inert(a, p))
        .map(|(k, _)| k)
        .collect();
    Ok(SupportSet {
        s: indices.len(),
        indices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandEdges {
    pub beta1: f64,
    pub beta2: f64,
}

impl BandEdges {
    pub fn width(&self) -> f64 {
        self.beta2 - self.beta1
    }

    /// Strictly inside `(β1, β2)`.
    pub fn contains_interior(&self, nu: f64) -> bool {
        nu > self.beta1 && nu < self.beta2
    }
}

pub fn band_edges(phi: &QuasiMomentum, p: &TwoParticleParams) -> Result<BandEdges> {
    p.check_phi(phi)?;
    let sum_r: f64 = phi.angles().iter().map(|&a| r_of(a, p)).sum();
    let d = p.d as f64;
    let scale = 2.0 * p.total_hopping();
    Ok(BandEdges {
        beta1: (scale * (d - sum_r)).max(0.0),
        beta2: scale * (d + sum_r),
    })
}

/// Everything the resolvent integrals need about one fiber.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Fiber {
    pub d: usize,
    /// `Λ` (or `λ` for one particle).
    pub hopping: f64,
    /// `r(phi_k)` for every axis.
    pub weights: Vec<f64>,
    pub support: SupportSet,
    pub edges: BandEdges,
    pub equal_hoppings: bool,
}

impl Fiber {
    pub fn active_weights(&self) -> Vec<f64> {
        self.support.indices.iter().map(|&k| self.weights[k]).collect()
    }

    /// Smallest active weight, `None` when `s = 0`.
    pub fn min_active_weight(&self) -> Option<f64> {
        self.support
            .indices
            .iter()
            .map(|&k| self.weights[k])
            .min_by(f64::total_cmp)
    }
}
