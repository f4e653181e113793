//! Bound-state kernels and eigenvectors.
//!
//! For `nu` outside the band of a fiber the kernel
//!
//! `K(phi, x) = (2pi)^-d ∫ (mu/2Λ) Π cos(x_k psi_k) / (Σ r_k cos psi_k - d + nu/2Λ) dpsi`
//!
//! is real and even in every coordinate. When `nu` solves the dispersion
//! equation, `K(phi, 0) = 1`. `K` is the eigenvector of the fiber operator
//! with real hoppings `Λ r_k`; the fiber operator itself carries complex
//! hoppings `Λ r_k e^{-i η_k}`, so its eigenvector is `e^{-i η·x} K(phi, x)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::green::edge_square_integrable;
use crate::model::{eta_of, Fiber, OneParticleParams, QuasiMomentum, TwoParticleParams};
use crate::quadrature::{
    cosine_moments, midpoint_nodes, richardson, Extrapolation, QuadratureSpec, QuadratureStatus,
};
use crate::spectrum::{classify, classify_fiber, subspace_exists, PointSpectrum, SolverConfig, SubspaceVerdict};
use crate::{math, Error, Result};

/// Values that can live on a lattice box.
pub trait Amplitude: Copy + Default {
    fn abs_sq(&self) -> f64;
}

impl Amplitude for f64 {
    fn abs_sq(&self) -> f64 {
        self * self
    }
}

impl Amplitude for Complex64 {
    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }
}

/// A function on `[-R, R]^d ⊂ Z^d`, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeVector<T> {
    dims: usize,
    radius: usize,
    values: Vec<T>,
    norm_sq: f64,
}

impl<T: Amplitude> LatticeVector<T> {
    pub fn from_fn<F: FnMut(&[i64]) -> T>(dims: usize, radius: usize, mut f: F) -> Self {
        let side = 2 * radius + 1;
        let len = side.pow(dims as u32);
        let mut values = Vec::with_capacity(len);
        let mut x = vec![-(radius as i64); dims];
        for _ in 0..len {
            values.push(f(&x));
            for k in (0..dims).rev() {
                x[k] += 1;
                if x[k] <= radius as i64 {
                    break;
                }
                x[k] = -(radius as i64);
            }
        }
        let norm_sq = values.iter().map(Amplitude::abs_sq).sum();
        Self {
            dims,
            radius,
            values,
            norm_sq,
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Cached `Σ |v|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn recompute_norm_sq(&self) -> f64 {
        self.values.iter().map(Amplitude::abs_sq).sum()
    }

    pub fn index_of(&self, x: &[i64]) -> Option<usize> {
        if x.len() != self.dims {
            return None;
        }
        let side = 2 * self.radius + 1;
        let mut flat = 0;
        for &c in x {
            if c.unsigned_abs() as usize > self.radius {
                return None;
            }
            flat = flat * side + (c + self.radius as i64) as usize;
        }
        Some(flat)
    }

    pub fn get(&self, x: &[i64]) -> Option<T> {
        self.index_of(x).map(|i| self.values[i])
    }

    /// Coordinates of the `flat`-th entry.
    pub fn coords(&self, flat: usize) -> Vec<i64> {
        let side = 2 * self.radius + 1;
        let mut x = vec![0i64; self.dims];
        let mut rest = flat;
        for k in (0..self.dims).rev() {
            x[k] = (rest % side) as i64 - self.radius as i64;
            rest /= side;
        }
        x
    }

    /// `Σ |v(x)|^2` over the sub-box `[-r, r]^d`.
    pub fn partial_norm_sq(&self, r: usize) -> f64 {
        let r = r.min(self.radius) as i64;
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| self.coords(*i).iter().all(|c| c.abs() <= r))
            .map(|(_, v)| v.abs_sq())
            .sum()
    }

    pub fn map<U: Amplitude, F: FnMut(&[i64], T) -> U>(&self, mut f: F) -> LatticeVector<U> {
        let mut i = 0;
        LatticeVector::from_fn(self.dims, self.radius, |x| {
            let v = f(x, self.values[i]);
            i += 1;
            v
        })
    }
}

/// Exponential envelope `|v(x)| <= c t^{|x|_1}` fitted to the shell maxima.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayFit {
    pub c: f64,
    pub t: f64,
    /// Shells `|x|_1 = n` used by the fit.
    pub shells: usize,
}

/// Least-squares fit of `ln max_{|x|_1 = n} |v(x)|` against `n` for shells
/// `1..=R` whose maxima stay above `floor * |v(0)|`; `c` is then raised so
/// the envelope bounds every computed value. `None` with fewer than three
/// usable shells.
pub fn fit_decay<T: Amplitude>(v: &LatticeVector<T>, floor: f64) -> Option<DecayFit> {
    let r = v.radius();
    let mut shell_max = vec![0.0f64; v.dims() * r + 1];
    for (i, value) in v.values().iter().enumerate() {
        let n: i64 = v.coords(i).iter().map(|c| c.abs()).sum();
        let n = n as usize;
        shell_max[n] = shell_max[n].max(math::sqrt(value.abs_sq()));
    }
    let origin = shell_max[0];
    let usable: Vec<(f64, f64)> = (1..=r)
        .filter(|&n| shell_max[n] > floor * origin && shell_max[n] > 0.0)
        .map(|n| (n as f64, math::ln(shell_max[n])))
        .collect();
    if usable.len() < 3 {
        return None;
    }
    let count = usable.len() as f64;
    let mean_n = usable.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_l = usable.iter().map(|p| p.1).sum::<f64>() / count;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(n, l) in &usable {
        sxy += (n - mean_n) * (l - mean_l);
        sxx += (n - mean_n) * (n - mean_n);
    }
    let slope = sxy / sxx;
    let t = math::exp(slope);
    let mut c: f64 = 0.0;
    for (n, &m) in shell_max.iter().enumerate() {
        if m > 0.0 {
            c = c.max(m / math::powi(t, n as i32));
        }
    }
    Some(DecayFit {
        c,
        t,
        shells: usable.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KernelSample {
    pub phi: QuasiMomentum,
    pub nu: f64,
    pub values: LatticeVector<f64>,
    pub abs_error_estimate: f64,
    pub status: QuadratureStatus,
}

/// Relative tolerance for kernel moments by number of active axes.
fn kernel_tol(s: usize) -> f64 {
    match s {
        0..=2 => 1e-11,
        3 | 4 => 1e-8,
        _ => 1e-5,
    }
}

/// `K(phi, ·)` on `[-radius, radius]^d`.
pub fn kernel_k(
    phi: &QuasiMomentum,
    nu: f64,
    p: &TwoParticleParams,
    radius: usize,
) -> Result<KernelSample> {
    p.validate()?;
    let fiber = p.fiber(phi)?;
    let (values, abs_error_estimate, status) = fiber_kernel(&fiber, p.mu, nu, radius)?;
    if status != QuadratureStatus::Converged {
        return Err(Error::QuadratureFailed(format!(
            "kernel moments did not settle (max change {abs_error_estimate:e})"
        )));
    }
    Ok(KernelSample {
        phi: phi.clone(),
        nu,
        values,
        abs_error_estimate,
        status,
    })
}

fn fiber_kernel(
    fiber: &Fiber,
    mu: f64,
    nu: f64,
    radius: usize,
) -> Result<(LatticeVector<f64>, f64, QuadratureStatus)> {
    if !nu.is_finite() {
        return Err(Error::Domain(format!("nu must be finite, got {nu}")));
    }
    let edges = fiber.edges;
    if edges.contains_interior(nu) {
        return Err(Error::Domain(format!(
            "nu = {nu} lies inside the band ({}, {})",
            edges.beta1, edges.beta2
        )));
    }
    let s = fiber.support.s;
    let above = nu >= edges.beta2;
    let two_l = 2.0 * fiber.hopping;
    let g = if above {
        (nu - edges.beta2) / two_l
    } else {
        (edges.beta1 - nu) / two_l
    }
    .max(0.0);
    if g == 0.0 && !edge_square_integrable(s) {
        return Err(Error::NotSquareIntegrable(format!(
            "nu = {nu} sits on the band edge with {s} active axes; the kernel is not square summable below five"
        )));
    }
    let factor = mu / two_l;
    let d = fiber.d;
    if s == 0 {
        let a = nu / two_l - d as f64;
        let centre = factor / a;
        let v = LatticeVector::from_fn(d, radius, |x| {
            if x.iter().all(|&c| c == 0) {
                centre
            } else {
                0.0
            }
        });
        return Ok((v, 0.0, QuadratureStatus::Converged));
    }

    let w = fiber.active_weights();
    // denominators rewritten so the small quantity never comes from a
    // cancellation: above the band a + Σ r cos = g + Σ r (1 + cos),
    // below it a + Σ r cos = -(g + Σ r (1 - cos))
    let sign = if above { 1.0 } else { -1.0 };
    let integrand = |psi: &[f64]| {
        let mut den = g;
        for (r, &t) in w.iter().zip(psi) {
            den += r * if above {
                let c = math::cos(0.5 * t);
                2.0 * c * c
            } else {
                math::one_minus_cos(t)
            };
        }
        1.0 / den
    };
    let mut spec = QuadratureSpec::for_dims(s)
        .with_rel_tol(kernel_tol(s))
        .with_max_doublings(12)
        .with_point_budget(1 << 24);
    if g == 0.0 {
        spec = spec.with_extrapolation(Extrapolation::EdgeSingular {
            leading_order: s as f64 - 2.0,
        });
    }
    let moments = cosine_moments(integrand, radius, &spec)?;
    let active = &fiber.support.indices;
    let mut sub = vec![0i64; s];
    let values = LatticeVector::from_fn(d, radius, |x| {
        for k in 0..d {
            if x[k] != 0 && fiber.weights[k] == 0.0 {
                return 0.0;
            }
        }
        for (j, &k) in active.iter().enumerate() {
            sub[j] = x[k];
        }
        sign * factor * moments.get(&sub).unwrap_or(0.0)
    });
    let scale = (sign * factor).abs();
    Ok((values, scale * moments.abs_error_estimate, moments.status))
}

/// One-particle bound state `f`, normalised to `f(0) = 1`.
///
/// `nu` must be the eigenvalue reported by the classifier.
pub fn one_particle_eigenfunction(
    p: &OneParticleParams,
    nu: f64,
    radius: usize,
) -> Result<LatticeVector<f64>> {
    p.validate()?;
    let fiber = p.as_fiber();
    let band = fiber.edges;
    if band.contains_interior(nu) {
        return Err(Error::Domain(format!("nu = {nu} lies inside the band")));
    }
    if (nu == band.beta1 || nu == band.beta2) && !edge_square_integrable(p.d) {
        return Err(Error::NotSquareIntegrable(format!(
            "threshold energy nu = {nu} in d = {} gives a kernel outside l2",
            p.d
        )));
    }
    let report = classify(&fiber, p.mu, &SolverConfig::for_dims(p.d))?;
    if report.point.kind == PointSpectrum::Absent {
        return Err(Error::NoEigenfunction(format!(
            "no eigenvalue for lambda = {}, mu = {}, d = {}",
            p.lambda, p.mu, p.d
        )));
    }
    let (k, err, status) = fiber_kernel(&fiber, p.mu, nu, radius)?;
    if status != QuadratureStatus::Converged {
        return Err(Error::QuadratureFailed(format!(
            "eigenfunction moments did not settle (max change {err:e})"
        )));
    }
    let centre = k.get(&vec![0; p.d]).unwrap_or(1.0);
    Ok(k.map(|_, v| v / centre))
}

/// Eigenvalue and eigenvector of the fiber operator, `F0(phi, 0) = 1`.
pub fn fiber_eigenvector(
    phi: &QuasiMomentum,
    p: &TwoParticleParams,
    radius: usize,
) -> Result<(f64, LatticeVector<Complex64>)> {
    let report = classify_fiber(phi, p)?;
    let nu = report.point.kind.nu().ok_or_else(|| {
        Error::NoEigenfunction(format!(
            "fiber at phi = {:?} has no eigenvalue ({})",
            phi.angles(),
            report.point.regime.tag()
        ))
    })?;
    let k = kernel_k(phi, nu, p, radius)?;
    let eta: Vec<f64> = phi
        .angles()
        .iter()
        .map(|&a| eta_of(a, p).unwrap_or(0.0))
        .collect();
    let centre = k.values.get(&vec![0; p.d]).unwrap_or(1.0);
    let f0 = k.values.map(|x, v| {
        let phase: f64 = x.iter().zip(&eta).map(|(&c, e)| c as f64 * e).sum();
        Complex64::new(v / centre * math::cos(phase), -v / centre * math::sin(phase))
    });
    Ok((nu, f0))
}

/// `g0(x1, x)` on `[-R1, R1]^d × [-R, R]^d`, `x1` slowest.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SubspaceGenerator {
    pub dims: usize,
    pub radius_x1: usize,
    pub radius_x: usize,
    pub values: Vec<f64>,
    pub abs_error_estimate: f64,
    pub status: QuadratureStatus,
    /// Points per axis of the final quasi-momentum grid.
    pub phi_points: usize,
}

impl SubspaceGenerator {
    fn side(r: usize) -> usize {
        2 * r + 1
    }

    pub fn get(&self, x1: &[i64], x: &[i64]) -> Option<f64> {
        if x1.len() != self.dims || x.len() != self.dims {
            return None;
        }
        let mut flat = 0usize;
        for &c in x1 {
            if c.unsigned_abs() as usize > self.radius_x1 {
                return None;
            }
            flat = flat * Self::side(self.radius_x1) + (c + self.radius_x1 as i64) as usize;
        }
        for &c in x {
            if c.unsigned_abs() as usize > self.radius_x {
                return None;
            }
            flat = flat * Self::side(self.radius_x) + (c + self.radius_x as i64) as usize;
        }
        Some(self.values[flat])
    }

    /// `Σ g0^2` over `|x1|_∞ <= r` and `|x|_∞ <= r`.
    pub fn partial_norm_sq(&self, r: usize) -> f64 {
        let d = self.dims;
        let s1 = Self::side(self.radius_x1);
        let s2 = Self::side(self.radius_x);
        let mut total = 0.0;
        for (flat, v) in self.values.iter().enumerate() {
            let mut rest = flat;
            let mut inside = true;
            for _ in 0..d {
                let c = (rest % s2) as i64 - self.radius_x as i64;
                rest /= s2;
                inside &= c.unsigned_abs() as usize <= r;
            }
            for _ in 0..d {
                let c = (rest % s1) as i64 - self.radius_x1 as i64;
                rest /= s1;
                inside &= c.unsigned_abs() as usize <= r;
            }
            if inside {
                total += v * v;
            }
        }
        total
    }
}

/// Generator of the one-particle subspace,
/// `g0(x1, x) = (2pi)^{-d/2} ∫ Π cos(x1_k phi_k) K(phi, x) dphi`,
/// with `nu(phi)` solved once per quasi-momentum node.
///
/// The `phi` grid is doubled until the values are stable to `1e-8` of
/// their maximum (with Richardson elimination of `h^2, h^4, h^6` terms,
/// since `r(phi)` has a kink at `pi` when `λ1 = λ2`).
pub fn subspace_generator_g0(
    p: &TwoParticleParams,
    radii: (usize, usize),
) -> Result<SubspaceGenerator> {
    p.validate()?;
    if subspace_exists(p)? != SubspaceVerdict::ExistsUnique {
        return Err(Error::SubspaceAbsent);
    }
    let (r1, r) = radii;
    let d = p.d;
    let side1 = 2 * r1 + 1;
    let side = 2 * r + 1;
    let len = side1.pow(d as u32) * side.pow(d as u32);
    let tol = 1e-8;
    let max_nodes: u64 = 1 << 16;

    let mut steps: Vec<f64> = Vec::new();
    let mut levels: Vec<Vec<f64>> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut n = 8usize.max((4 * (r1 + 1)).next_power_of_two());
    let mut result: Option<(Vec<f64>, f64, usize)> = None;
    let mut status = QuadratureStatus::Inconclusive;
    for _ in 0..10 {
        let half = n / 2;
        if (half as u64).pow(d as u32) > max_nodes {
            break;
        }
        let level = g0_level(p, n, r1, r, len)?;
        steps.push(2.0 * core::f64::consts::PI / n as f64);
        levels.push(level);
        if levels.len() > 4 {
            levels.remove(0);
            steps.remove(0);
        }
        let estimate: Vec<f64> = (0..len)
            .map(|i| {
                let column: Vec<f64> = levels.iter().map(|l| l[i]).collect();
                richardson(&steps, &column, 2.0, 3)
            })
            .collect();
        let scale = estimate.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let change = previous.as_ref().map_or(f64::INFINITY, |prev| {
            prev.iter()
                .zip(&estimate)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        });
        result = Some((estimate.clone(), change, n));
        previous = Some(estimate);
        if levels.len() >= 3 && change <= tol * scale {
            status = QuadratureStatus::Converged;
            break;
        }
        n *= 2;
    }
    let (values, abs_error_estimate, phi_points) =
        result.ok_or_else(|| Error::QuadratureFailed("no quasi-momentum grid fits the budget".into()))?;
    Ok(SubspaceGenerator {
        dims: d,
        radius_x1: r1,
        radius_x: r,
        values,
        abs_error_estimate,
        status,
        phi_points,
    })
}

/// One midpoint level of the `phi` integral. `K(phi, x)` is even in `phi`
/// (`r` is), so only the positive half of each axis is sampled.
fn g0_level(p: &TwoParticleParams, n: usize, r1: usize, r: usize, len: usize) -> Result<Vec<f64>> {
    let d = p.d;
    let nodes = midpoint_nodes(n, true);
    let m = nodes.len();
    let count = m.pow(d as u32);
    let kernels = crate::quadrature::map_indices(count, |flat| -> Result<(Vec<f64>, LatticeVector<f64>)> {
        let mut phi = vec![0.0; d];
        let mut rest = flat;
        for k in (0..d).rev() {
            phi[k] = nodes[rest % m];
            rest /= m;
        }
        let q = QuasiMomentum::new(phi.clone())?;
        let report = classify_fiber(&q, p)?;
        let nu = report.point.kind.nu().ok_or_else(|| {
            Error::NoEigenfunction(format!("no fiber eigenvalue at phi = {phi:?}"))
        })?;
        let (k, err, status) = fiber_kernel(&p.fiber(&q)?, p.mu, nu, r)?;
        if status != QuadratureStatus::Converged {
            return Err(Error::QuadratureFailed(format!(
                "kernel at phi = {phi:?} did not settle ({err:e})"
            )));
        }
        Ok((phi, k))
    });
    let side1 = 2 * r1 + 1;
    let inner = (2 * r + 1).pow(d as u32);
    let mut out = vec![0.0; len];
    for item in kernels {
        let (phi, k) = item?;
        for a in 0..side1.pow(d as u32) {
            let mut rest = a;
            let mut weight = 1.0;
            for kk in (0..d).rev() {
                let c = (rest % side1) as f64 - r1 as f64;
                rest /= side1;
                weight *= math::cos(c * phi[kk]);
            }
            let row = &mut out[a * inner..(a + 1) * inner];
            for (o, v) in row.iter_mut().zip(k.values()) {
                *o += weight * v;
            }
        }
    }
    let scale = math::powf(2.0 * core::f64::consts::PI, 0.5 * d as f64) / count as f64;
    for v in &mut out {
        *v *= scale;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    #[test]
    fn lattice_vector_bookkeeping() {
        let v = LatticeVector::from_fn(2, 2, |x| (x[0] * 10 + x[1]) as f64);
        assert_eq!(v.values().len(), 25);
        assert_eq!(v.get(&[-2, 1]), Some(-19.0));
        assert_eq!(v.get(&[3, 0]), None);
        assert_eq!(v.coords(v.index_of(&[1, -2]).unwrap()), vec![1, -2]);
        assert_relative_eq!(v.norm_sq(), v.recompute_norm_sq());
        assert_relative_eq!(v.partial_norm_sq(0), 0.0);
        assert_relative_eq!(v.partial_norm_sq(1), 2.0 * (100.0 + 1.0 + 81.0 + 121.0) );
    }

    #[test]
    fn inert_fiber_kernel_is_a_delta() {
        let p = TwoParticleParams::new(1.0, 1.0, 2.0, 1).unwrap();
        let k = kernel_k(&QuasiMomentum::corner(1), 6.0, &p, 5).unwrap();
        assert_relative_eq!(k.values.get(&[0]).unwrap(), 1.0, max_relative = 1e-15);
        for x in 1..=5 {
            assert_eq!(k.values.get(&[x]).unwrap(), 0.0);
        }
    }

    #[test]
    fn one_particle_geometric_ratio() {
        let p = OneParticleParams::new(1.0, 2.0, 1).unwrap();
        let nu = 2.0 * (1.0 + 2f64.sqrt());
        let f = one_particle_eigenfunction(&p, nu, 20).unwrap();
        assert_eq!(f.get(&[0]), Some(1.0));
        for x in 0..19 {
            let ratio = f.get(&[x + 1]).unwrap() / f.get(&[x]).unwrap();
            assert_relative_eq!(ratio, -(2f64.sqrt() - 1.0), max_relative = 1e-8);
        }
    }

    #[test]
    fn threshold_in_three_dimensions_is_not_square_summable() {
        let p = OneParticleParams::new(1.0, 4.0, 3).unwrap();
        assert!(matches!(
            one_particle_eigenfunction(&p, 12.0, 3),
            Err(Error::NotSquareIntegrable(_))
        ));
    }

    #[test]
    fn absent_state_has_no_eigenfunction() {
        let p = OneParticleParams::new(1.0, 0.0, 1).unwrap();
        assert!(matches!(
            one_particle_eigenfunction(&p, 5.0, 3),
            Err(Error::NoEigenfunction(_))
        ));
    }

    #[test]
    fn fiber_eigenvector_is_normalised() {
        let p = TwoParticleParams::new(1.0, 2.0, 3.0, 1).unwrap();
        let phi = QuasiMomentum::new(vec![PI / 3.0]).unwrap();
        let (nu, f0) = fiber_eigenvector(&phi, &p, 30).unwrap();
        assert!(nu > 6.0 * (1.0 + crate::model::r_of(PI / 3.0, &p)));
        let c = f0.get(&[0]).unwrap();
        assert_relative_eq!(c.re, 1.0, max_relative = 1e-9);
        assert!(c.im.abs() < 1e-15);
    }

    #[test]
    fn decay_fit_recovers_geometric_rate() {
        let v = LatticeVector::from_fn(1, 30, |x| 0.3f64.powi(x[0].abs() as i32));
        let fit = fit_decay(&v, 1e-14).unwrap();
        assert_relative_eq!(fit.t, 0.3, max_relative = 1e-10);
        assert_relative_eq!(fit.c, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn g0_origin_and_symmetry() {
        let p = TwoParticleParams::new(1.0, 1.0, 2.0, 1).unwrap();
        let g = subspace_generator_g0(&p, (2, 2)).unwrap();
        assert_eq!(g.status, QuadratureStatus::Converged);
        // K(phi, 0) = 1 for every phi, so g0(0, 0) = sqrt(2pi)
        assert_relative_eq!(g.get(&[0], &[0]).unwrap(), (2.0 * PI).sqrt(), max_relative = 1e-7);
        for a in -2..=2i64 {
            for b in -2..=2i64 {
                let v = g.get(&[a], &[b]).unwrap();
                assert_eq!(v, g.get(&[-a], &[b]).unwrap());
                assert_eq!(v, g.get(&[a], &[-b]).unwrap());
            }
        }
    }
}
