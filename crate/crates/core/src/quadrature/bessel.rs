//! Laplace-transform representation of lattice resolvents:
//!
//! `(2pi)^-d ∫ dpsi / (a - Σ v_k cos psi_k) = ∫_0^∞ e^(-a t) Π I0(v_k t) dt`
//!
//! written with scaled Bessel functions `i0e(x) = e^-x I0(x)` as
//! `∫_0^∞ e^(-g t) Π i0e(v_k t) dt` with `g = a - Σ v_k >= 0`, which keeps
//! every factor bounded by 1.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{GaussLegendre, QuadratureResult, QuadratureStatus};
use crate::{math, Error, Result};

/// Past this argument the asymptotic series is accurate to rounding.
const ASYMPTOTIC_FROM: f64 = 20.0;
/// Number of correction terms kept in the power tail for `g = 0`.
const TAIL_TERMS: usize = 5;
/// The power tail starts once every active factor is this far into its
/// asymptotic regime.
const TAIL_START: f64 = 400.0;
/// `e^(-g t)` is negligible beyond this exponent.
const EXP_CUTOFF: f64 = 60.0;

/// `e^-|x| I0(x)`.
pub fn scaled_bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= ASYMPTOTIC_FROM {
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * math::exp(-x)
    } else {
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
            if next >= term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / math::sqrt(2.0 * PI * x)
    }
}

/// Coefficients `b_j` of `i0e(x) ~ (2 pi x)^(-1/2) Σ b_j x^-j`.
fn asymptotic_coefficients() -> [f64; TAIL_TERMS] {
    let mut b = [0.0; TAIL_TERMS];
    b[0] = 1.0;
    for k in 1..TAIL_TERMS {
        let kf = k as f64;
        b[k] = b[k - 1] * (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (8.0 * kf);
    }
    b
}

/// `∫_T^∞ Π i0e(v_k t) dt` from the asymptotic expansion of the product.
fn power_tail(active: &[f64], t: f64) -> f64 {
    let b = asymptotic_coefficients();
    let mut series = [0.0; TAIL_TERMS];
    series[0] = 1.0;
    let mut prefactor = 1.0;
    for &v in active {
        prefactor /= math::sqrt(2.0 * PI * v);
        let mut factor = [0.0; TAIL_TERMS];
        for (j, f) in factor.iter_mut().enumerate() {
            *f = b[j] / math::powi(v, j as i32);
        }
        let mut product = [0.0; TAIL_TERMS];
        for i in 0..TAIL_TERMS {
            for j in 0..TAIL_TERMS - i {
                product[i + j] += series[i] * factor[j];
            }
        }
        series = product;
    }
    let half_m = 0.5 * active.len() as f64;
    let mut total = 0.0;
    for (j, c) in series.iter().enumerate() {
        let exponent = half_m + j as f64 - 1.0;
        total += c * math::powf(t, -exponent) / exponent;
    }
    prefactor * total
}

/// `(2pi)^-d ∫_{T^d} dpsi / (shift - Σ v_k cos psi_k)`, i.e. the torus
/// *mean*, evaluated on the Bessel path.
///
/// The value at `shift = Σ v_k` diverges unless at least three weights are
/// positive; that case is reported with status `Divergent` and an infinite
/// value.
pub fn integrate_bessel_path(weights: &[f64], shift: f64) -> Result<QuadratureResult> {
    if let Some(&bad) = weights.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return Err(Error::InvalidParameter {
            field: "weights",
            reason: format!("weights must be finite and nonnegative, got {bad}"),
        });
    }
    if !shift.is_finite() {
        return Err(Error::InvalidParameter {
            field: "shift",
            reason: format!("shift must be finite, got {shift}"),
        });
    }
    let total: f64 = weights.iter().sum();
    let g = shift - total;
    if g < 0.0 {
        return Err(Error::Domain(format!(
            "shift {shift} lies below the sum of weights {total}; the denominator changes sign"
        )));
    }
    let active: Vec<f64> = weights.iter().copied().filter(|&v| v > 0.0).collect();
    if active.is_empty() {
        return Ok(if g > 0.0 {
            QuadratureResult {
                value: 1.0 / g,
                abs_error_estimate: 0.0,
                status: QuadratureStatus::Converged,
                evaluations: 0,
                refinements: Vec::new(),
            }
        } else {
            divergent()
        });
    }
    if g == 0.0 && active.len() <= 2 {
        return Ok(divergent());
    }

    let coarse = GaussLegendre::new(20);
    let fine = GaussLegendre::new(32);
    let integrand = |t: f64| {
        let mut value = math::exp(-g * t);
        for &v in &active {
            value *= scaled_bessel_i0(v * t);
        }
        value
    };

    let v_max = active.iter().copied().fold(0.0, f64::max);
    let v_min = active.iter().copied().fold(f64::INFINITY, f64::min);
    let end = if g > 0.0 { EXP_CUTOFF / g } else { TAIL_START / v_min };
    let width_cap = if g > 0.0 { 2.0 / g } else { f64::INFINITY };

    let mut sum_coarse = 0.0;
    let mut sum_fine = 0.0;
    let mut evaluations = 0u64;
    let mut left = 0.0;
    let mut right = (1.0 / (v_max + g)).min(end);
    while left < end {
        let pieces = math::floor((right - left) / width_cap) as usize + 1;
        let step = (right - left) / pieces as f64;
        for i in 0..pieces {
            let a = left + i as f64 * step;
            let b = if i + 1 == pieces { right } else { a + step };
            sum_coarse += coarse.integrate(a, b, integrand);
            sum_fine += fine.integrate(a, b, integrand);
            evaluations += (coarse.len() + fine.len()) as u64;
        }
        left = right;
        right = (2.0 * right).min(end);
    }
    if g == 0.0 {
        let tail = power_tail(&active, end);
        sum_coarse += tail;
        sum_fine += tail;
    }

    let abs_error_estimate = (sum_fine - sum_coarse).abs();
    let status = if abs_error_estimate <= 1e-11 * sum_fine.abs().max(1.0) {
        QuadratureStatus::Converged
    } else {
        QuadratureStatus::Inconclusive
    };
    Ok(QuadratureResult {
        value: sum_fine,
        abs_error_estimate,
        status,
        evaluations,
        refinements: Vec::new(),
    })
}

fn divergent() -> QuadratureResult {
    QuadratureResult {
        value: f64::INFINITY,
        abs_error_estimate: f64::INFINITY,
        status: QuadratureStatus::Divergent,
        evaluations: 0,
        refinements: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn i0e_reference_values() {
        // scipy.special.i0e
        assert_relative_eq!(scaled_bessel_i0(0.0), 1.0);
        assert_relative_eq!(scaled_bessel_i0(1.0), 0.465_759_607_593_640_4, max_relative = 1e-14);
        assert_relative_eq!(scaled_bessel_i0(10.0), 0.127_833_337_163_428_6, max_relative = 1e-13);
        assert_relative_eq!(scaled_bessel_i0(19.9), 0.090_008_588_864_389_59, max_relative = 1e-12);
        assert_relative_eq!(scaled_bessel_i0(20.1), 0.089_553_763_620_613_44, max_relative = 1e-12);
        assert_relative_eq!(scaled_bessel_i0(500.0), 0.017_845_706_500_153_165, max_relative = 1e-13);
    }

    #[test]
    fn one_dimensional_closed_form() {
        let r = integrate_bessel_path(&[1.0], 2.0).unwrap();
        assert!(r.is_converged());
        assert_relative_eq!(r.value, 1.0 / 3f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn zero_weight_is_pure_exponential() {
        let r = integrate_bessel_path(&[0.0], 1.0).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn watson_constants() {
        for (d, c) in [
            (3, 0.505_462_019_717_326_2),
            (4, 0.309_866_780_462_120_4),
            (5, 0.231_261_624_968_046_23),
            (10, 0.105_954_374_788_828_97),
        ] {
            let w = alloc::vec![1.0; d];
            let r = integrate_bessel_path(&w, d as f64).unwrap();
            assert!(r.is_converged(), "d={d}: {r:?}");
            assert_relative_eq!(r.value, c, max_relative = 1e-11);
        }
    }

    #[test]
    fn low_dimensional_edge_is_divergent() {
        let r = integrate_bessel_path(&[1.0, 1.0], 2.0).unwrap();
        assert_eq!(r.status, QuadratureStatus::Divergent);
    }

    #[test]
    fn shift_below_band_is_a_domain_error() {
        assert!(matches!(
            integrate_bessel_path(&[1.0, 0.5], 1.4),
            Err(Error::Domain(_))
        ));
    }
}
