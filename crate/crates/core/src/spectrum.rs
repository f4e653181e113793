//! Dispersion equation and spectral classification.
//!
//! A fiber has at most one eigenvalue outside its band. It solves
//! `q(nu, phi) = 2Λ / mu`, with `q` strictly decreasing on either side of
//! the band, positive above and negative below, tending to 0 at infinity and
//! to `±c(d, phi)` at the edges. Whether a root exists therefore depends only
//! on how `|2Λ/mu|` compares with the edge constant.

use alloc::format;
use alloc::vec::Vec;

use crate::green::{fiber_edge_constant, fiber_resolvent, ExtendedReal, GreenConfig};
use crate::model::{BandEdges, Fiber, OneParticleParams, QuasiMomentum, TwoParticleParams};
use crate::quadrature::map_indices;
use crate::{Error, Result};

/// Relative half-width of the band around `|2Λ/mu| = c` treated as
/// equality.
pub const THRESHOLD_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Side {
    Above,
    Below,
}

/// Where the monotone branch starts and what it is worth there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    /// Band edge the branch starts from.
    pub edge: f64,
    /// Limit of `q` at the edge (`±inf` when the integral diverges).
    pub edge_value: ExtendedReal,
    pub side: Side,
    /// Typical distance scale for the first probe, e.g. the band width.
    pub scale: f64,
}

/// Root of `q_fn(nu) = target` on one side of the band.
///
/// The search starts one `scale` away from the edge, expands or contracts
/// geometrically until the root is bracketed, then runs an Illinois
/// (modified regula falsi) iteration guarded by bisection.
pub fn solve_dispersion<F>(mut q_fn: F, bracket: Bracket, target: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sign = match bracket.side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    if !(target.is_finite() && target != 0.0) {
        return Err(Error::NoSolution(format!(
            "q takes every value of its sign except zero; target {target}"
        )));
    }
    if target.signum() != sign {
        return Err(Error::NoSolution(format!(
            "target {target} has the wrong sign for the {:?} branch",
            bracket.side
        )));
    }
    let goal = target.abs();
    if let Some(c) = bracket.edge_value.finite() {
        if goal > c.abs() {
            return Err(Error::NoSolution(format!(
                "|target| = {goal} exceeds the edge value {}",
                c.abs()
            )));
        }
        if goal == c.abs() {
            return Ok(bracket.edge);
        }
    }
    let nu_at = |t: f64| bracket.edge + sign * t;
    // h(t) = |q(edge ± t)| - |target|, strictly decreasing in t
    let mut h = |t: f64| -> Result<f64> { Ok(sign * q_fn(nu_at(t))? - goal) };

    let mut t = if bracket.scale > 0.0 { bracket.scale } else { 1.0 };
    let mut ht = h(t)?;
    let (mut lo, mut hlo, mut hi, mut hhi);
    if ht > 0.0 {
        lo = t;
        hlo = ht;
        loop {
            t *= 4.0;
            ht = h(t)?;
            if ht <= 0.0 {
                break;
            }
            lo = t;
            hlo = ht;
            if t > 1e300 {
                return Err(Error::NoSolution("no sign change towards infinity".into()));
            }
        }
        hi = t;
        hhi = ht;
    } else {
        hi = t;
        hhi = ht;
        loop {
            t *= 0.25;
            if nu_at(t) == bracket.edge {
                // The root is closer to the edge than one ulp; the nearest
                // representable point outside the band is the answer.
                return Ok(step_away(bracket.edge, sign));
            }
            ht = h(t)?;
            if ht >= 0.0 {
                break;
            }
            hi = t;
            hhi = ht;
        }
        lo = t;
        hlo = ht;
    }
    if hlo == 0.0 {
        return Ok(nu_at(lo));
    }
    if hhi == 0.0 {
        return Ok(nu_at(hi));
    }

    let mut side_kept = 0i8;
    let mut best = (f64::INFINITY, lo);
    for _ in 0..300 {
        let width = hi - lo;
        let mut x = lo + width * hlo / (hlo - hhi);
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let hx = h(x)?;
        if hx.abs() < best.0 {
            best = (hx.abs(), x);
        }
        if hx.abs() <= tol * goal || width <= 4.0 * f64::EPSILON * hi {
            return Ok(nu_at(x));
        }
        if hx > 0.0 {
            lo = x;
            hlo = hx;
            if side_kept == 1 {
                hhi *= 0.5;
            }
            side_kept = 1;
        } else {
            hi = x;
            hhi = hx;
            if side_kept == -1 {
                hlo *= 0.5;
            }
            side_kept = -1;
        }
    }
    Err(Error::NotConverged {
        iterations: 300,
        best_residual: best.0 / goal,
    })
}

/// Next float after `x` in the direction of `sign`.
fn step_away(x: f64, sign: f64) -> f64 {
    if x == 0.0 {
        return sign * f64::from_bits(1);
    }
    let bits = x.to_bits();
    let outward = (x > 0.0) == (sign > 0.0);
    f64::from_bits(if outward { bits + 1 } else { bits - 1 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind"))]
pub enum PointSpectrum {
    Exists { nu: f64 },
    /// Eigenvalue sitting on the upper edge `β2`.
    ThresholdUpper { nu: f64 },
    /// Eigenvalue sitting on the lower edge `β1`.
    ThresholdLower { nu: f64 },
    Absent,
}

impl PointSpectrum {
    pub fn nu(&self) -> Option<f64> {
        match *self {
            PointSpectrum::Exists { nu }
            | PointSpectrum::ThresholdUpper { nu }
            | PointSpectrum::ThresholdLower { nu } => Some(nu),
            PointSpectrum::Absent => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            PointSpectrum::Exists { .. } => "Exists",
            PointSpectrum::ThresholdUpper { .. } => "ThresholdUpper",
            PointSpectrum::ThresholdLower { .. } => "ThresholdLower",
            PointSpectrum::Absent => "Absent",
        }
    }

    /// Same variant, ignoring `nu`.
    pub fn same_kind(&self, other: &PointSpectrum) -> bool {
        core::mem::discriminant(self) == core::mem::discriminant(other)
    }
}

/// Which branch of the classification decided the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Regime {
    /// `mu = 0`.
    NoInteraction,
    /// `d <= 2`: the edge integral diverges, an eigenvalue always exists.
    LowDimension,
    /// `λ1 = λ2` with at most two active axes: the fiber behaves like a
    /// low-dimensional one.
    DegenerateFiber,
    /// Finite edge constant, no edge eigenvalue possible (`s` is 3 or 4):
    /// exists iff `|2Λ/mu| < c`.
    StrictThreshold,
    /// Finite edge constant with at least five active axes: exists for
    /// `|2Λ/mu| < c`, sits on the edge at equality.
    EdgeEigenvalue,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::NoInteraction => "no-interaction",
            Regime::LowDimension => "low-dimension",
            Regime::DegenerateFiber => "degenerate-fiber",
            Regime::StrictThreshold => "strict-threshold",
            Regime::EdgeEigenvalue => "edge-eigenvalue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PointVerdict {
    pub kind: PointSpectrum,
    pub regime: Regime,
    /// `|2Λ/mu|` fell within [`THRESHOLD_BAND`] of the edge constant.
    pub near_threshold: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumReport {
    pub essential: BandEdges,
    pub point: PointVerdict,
    /// `c(d, phi)` (or `c(d)`).
    pub edge_constant: ExtendedReal,
    /// `2Λ / |mu|` (infinite for `mu = 0`).
    pub coupling: f64,
}

/// Tolerances for the classifiers.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Relative residual on `q(nu) - target`.
    pub tol: f64,
    pub green: GreenConfig,
}

impl SolverConfig {
    /// `1e-12` for `d <= 2`, `1e-9` otherwise; quadrature run tighter than
    /// its module default so the root is limited by the solver, not `q`.
    pub fn for_dims(d: usize) -> Self {
        let (tol, green_tol) = if d <= 2 { (1e-12, 1e-12) } else { (1e-9, 1e-10) };
        Self {
            tol,
            green: GreenConfig::default().with_rel_tol(green_tol),
        }
    }
}

/// Spectral classification of a fiber (the one-particle problem is
/// the fiber with unit weights and `equal_hoppings = false`).
pub fn classify(fiber: &Fiber, mu: f64, cfg: &SolverConfig) -> Result<SpectrumReport> {
    let essential = fiber.edges;
    let coupling = if mu == 0.0 {
        f64::INFINITY
    } else {
        2.0 * fiber.hopping / mu.abs()
    };
    let report = |kind, regime, near, c| SpectrumReport {
        essential,
        point: PointVerdict {
            kind,
            regime,
            near_threshold: near,
        },
        edge_constant: c,
        coupling,
    };
    let s = fiber.support.s;
    if mu == 0.0 {
        let c = if fiber.d <= 2 || s <= 2 {
            ExtendedReal::PosInf
        } else {
            fiber_edge_constant(fiber, &cfg.green)?.value
        };
        return Ok(report(PointSpectrum::Absent, Regime::NoInteraction, false, c));
    }
    let regime = if fiber.d <= 2 {
        Regime::LowDimension
    } else if fiber.equal_hoppings && s <= 2 {
        Regime::DegenerateFiber
    } else if fiber.d <= 4 || (fiber.equal_hoppings && s <= 4) {
        Regime::StrictThreshold
    } else {
        Regime::EdgeEigenvalue
    };
    let c_value = match regime {
        Regime::LowDimension | Regime::DegenerateFiber => ExtendedReal::PosInf,
        _ => fiber_edge_constant(fiber, &cfg.green)?.value,
    };
    let (edge, side) = if mu > 0.0 {
        (essential.beta2, Side::Above)
    } else {
        (essential.beta1, Side::Below)
    };
    let solve = |c_value: ExtendedReal| -> Result<f64> {
        let edge_value = match side {
            Side::Above => c_value,
            Side::Below => c_value.negate(),
        };
        let scale = essential.width().max(2.0 * fiber.hopping);
        solve_dispersion(
            |nu| {
                fiber_resolvent(fiber, nu, &cfg.green)?
                    .value
                    .finite()
                    .ok_or_else(|| Error::Domain(format!("q diverges at nu = {nu}")))
            },
            Bracket {
                edge,
                edge_value,
                side,
                scale,
            },
            2.0 * fiber.hopping / mu,
            cfg.tol,
        )
    };
    let Some(c) = c_value.finite() else {
        // no active axes: q = ±2Λ / (nu - edge), so the root is edge + mu
        let nu = if s == 0 { edge + mu } else { solve(c_value)? };
        return Ok(report(PointSpectrum::Exists { nu }, regime, false, c_value));
    };
    let near = (coupling - c).abs() <= THRESHOLD_BAND * c;
    let kind = if near {
        match (regime, side) {
            (Regime::EdgeEigenvalue, Side::Above) => PointSpectrum::ThresholdUpper { nu: edge },
            (Regime::EdgeEigenvalue, Side::Below) => PointSpectrum::ThresholdLower { nu: edge },
            _ => PointSpectrum::Absent,
        }
    } else if coupling < c {
        PointSpectrum::Exists {
            nu: solve(c_value)?,
        }
    } else {
        PointSpectrum::Absent
    };
    Ok(report(kind, regime, near, c_value))
}

/// Spectrum of the one-particle Hamiltonian: band `[0, 4λd]` and at most one
/// eigenvalue, above the band for `mu > 0` and below for `mu < 0`.
pub fn classify_one_particle(p: &OneParticleParams) -> Result<SpectrumReport> {
    p.validate()?;
    classify(&p.as_fiber(), p.mu, &SolverConfig::for_dims(p.d))
}

/// Spectrum of the fiber operator at quasi-momentum `phi`.
pub fn classify_fiber(phi: &QuasiMomentum, p: &TwoParticleParams) -> Result<SpectrumReport> {
    p.validate()?;
    classify(&p.fiber(phi)?, p.mu, &SolverConfig::for_dims(p.d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SubspaceVerdict {
    ExistsUnique,
    None,
}

/// Whether the two-particle system carries a one-particle (bound pair)
/// subspace: always for `d <= 2`; for `d = 3, 4` iff `|2Λ/mu| < c(d)`; for
/// `d >= 5` iff `|2Λ/mu| <= c(d)`.
pub fn subspace_exists(p: &TwoParticleParams) -> Result<SubspaceVerdict> {
    p.validate()?;
    if p.mu == 0.0 {
        return Ok(SubspaceVerdict::None);
    }
    if p.d <= 2 {
        return Ok(SubspaceVerdict::ExistsUnique);
    }
    let cfg = SolverConfig::for_dims(p.d);
    let fiber = p.reduced().as_fiber();
    let c = fiber_edge_constant(&fiber, &cfg.green)?
        .value
        .finite()
        .ok_or_else(|| Error::QuadratureFailed("c(d) must be finite for d >= 3".into()))?;
    let coupling = 2.0 * p.total_hopping() / p.mu.abs();
    let near = (coupling - c).abs() <= THRESHOLD_BAND * c;
    let exists = if p.d <= 4 {
        coupling < c && !near
    } else {
        coupling < c || near
    };
    Ok(if exists {
        SubspaceVerdict::ExistsUnique
    } else {
        SubspaceVerdict::None
    })
}

/// `-pi + 2pi (j + 1) / n` for `j = 0..n`, in units of pi; the last node is
/// exactly `pi` and, for even `n`, node `n/2 - 1` is exactly `0`.
pub fn surface_axis_units(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| -1.0 + 2.0 * (j + 1) as f64 / n as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DispersionSurface {
    pub params: TwoParticleParams,
    pub shape: Vec<usize>,
    /// Lexicographic order, first axis slowest.
    pub grid: Vec<QuasiMomentum>,
    pub values: Vec<SpectrumReport>,
    /// Largest `|nu|` jump between grid neighbours (periodic) that both
    /// carry an `Exists` verdict; 0 if there is no such pair.
    pub max_adjacent_jump: f64,
    /// Largest grid spacing, `2pi / min(shape)`.
    pub mesh: f64,
}

/// `nu(phi)` on a tensor grid (see [`surface_axis_units`]).
pub fn dispersion_surface(shape: &[usize], p: &TwoParticleParams) -> Result<DispersionSurface> {
    p.validate()?;
    if p.mu == 0.0 {
        return Err(Error::InvalidParameter {
            field: "mu",
            reason: "the dispersion surface needs a nonzero interaction".into(),
        });
    }
    if shape.len() != p.d {
        return Err(Error::InvalidParameter {
            field: "grid",
            reason: format!("expected {} axis counts, got {}", p.d, shape.len()),
        });
    }
    let total: usize = shape.iter().product();
    let axes: Vec<Vec<f64>> = shape.iter().map(|&n| surface_axis_units(n)).collect();
    let mut grid = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rest = flat;
        let mut units = alloc::vec![0.0; p.d];
        for k in (0..p.d).rev() {
            units[k] = axes[k][rest % shape[k]];
            rest /= shape[k];
        }
        grid.push(QuasiMomentum::from_pi_units(&units)?);
    }
    let reports = map_indices(total, |i| classify_fiber(&grid[i], p));
    let values = reports.into_iter().collect::<Result<Vec<_>>>()?;

    let mut max_jump: f64 = 0.0;
    for flat in 0..total {
        let Some(nu) = exists_nu(&values[flat]) else { continue };
        let mut stride = 1;
        for k in (0..p.d).rev() {
            let n = shape[k];
            let coord = (flat / stride) % n;
            let next = if coord + 1 == n { flat + stride - n * stride } else { flat + stride };
            if n > 1 {
                if let Some(other) = exists_nu(&values[next]) {
                    max_jump = max_jump.max((nu - other).abs());
                }
            }
            stride *= n;
        }
    }
    let mesh = shape
        .iter()
        .copied()
        .min()
        .filter(|&n| n > 0)
        .map_or(0.0, |n| 2.0 * core::f64::consts::PI / n as f64);
    Ok(DispersionSurface {
        params: *p,
        shape: shape.to_vec(),
        grid,
        values,
        max_adjacent_jump: max_jump,
        mesh,
    })
}

fn exists_nu(r: &SpectrumReport) -> Option<f64> {
    match r.point.kind {
        PointSpectrum::Exists { nu } => Some(nu),
        _ => None,
    }
}
