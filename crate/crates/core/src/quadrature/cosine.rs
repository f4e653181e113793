//! Cosine moments `M(x) = (2pi)^-d ∫ f(psi) Π cos(x_k psi_k) dpsi` of an
//! integrand that is even in every axis, for all `x` in a box at once.

use alloc::vec;
use alloc::vec::Vec;

use super::{map_indices, midpoint_nodes, richardson, Extrapolation, QuadratureSpec, QuadratureStatus};
use crate::{math, Error, Result};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosineMoments {
    pub dims: usize,
    pub radius: usize,
    /// `M(x)` for `x in [0, radius]^dims`, last axis fastest.
    pub values: Vec<f64>,
    pub abs_error_estimate: f64,
    pub status: QuadratureStatus,
    pub evaluations: u64,
    pub points_per_axis: usize,
}

impl CosineMoments {
    /// `M(x)` for any `x` in `[-radius, radius]^dims`; moments are even in
    /// every coordinate.
    pub fn get(&self, x: &[i64]) -> Option<f64> {
        if x.len() != self.dims {
            return None;
        }
        let mut flat = 0usize;
        for &c in x {
            let c = c.unsigned_abs() as usize;
            if c > self.radius {
                return None;
            }
            flat = flat * (self.radius + 1) + c;
        }
        Some(self.values[flat])
    }
}

/// Doubles the grid until every moment is stable to
/// `spec.rel_tol * max |M|`. `spec.symmetry` is ignored: evenness is a
/// precondition here and the grid is always folded.
pub fn cosine_moments<F>(f: F, radius: usize, spec: &QuadratureSpec) -> Result<CosineMoments>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    spec.validate()?;
    let dims = spec.dims;
    let leading_order = match spec.extrapolation {
        Extrapolation::EdgeSingular { leading_order } if leading_order > 0.0 => Some(leading_order),
        _ => None,
    };
    let mut n = spec.initial_points_per_axis;
    while n < 4 * (radius + 1) {
        n *= 2;
    }

    let mut steps: Vec<f64> = Vec::new();
    let mut raw: Vec<Vec<f64>> = Vec::new();
    let mut previous: Option<Vec<f64>> = None;
    let mut evaluations = 0u64;
    let mut best: Option<(Vec<f64>, f64, usize)> = None;
    let mut status = QuadratureStatus::Inconclusive;

    for _ in 0..=spec.max_doublings {
        let half = (n / 2) as u64;
        let cost = (0..dims).try_fold(1u64, |acc, _| acc.checked_mul(half));
        if cost.map_or(true, |c| c > spec.max_points_per_level) {
            break;
        }
        let level = folded_moments(&f, dims, n, radius)?;
        evaluations += cost.unwrap_or(0);
        steps.push(2.0 * core::f64::consts::PI / n as f64);
        raw.push(level);
        if raw.len() > 4 {
            raw.remove(0);
            steps.remove(0);
        }
        let estimate: Vec<f64> = match leading_order {
            Some(p) => (0..raw[0].len())
                .map(|i| {
                    let column: Vec<f64> = raw.iter().map(|v| v[i]).collect();
                    richardson(&steps, &column, p, 3)
                })
                .collect(),
            None => raw[raw.len() - 1].clone(),
        };
        let scale = estimate.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut error = f64::INFINITY;
        if let Some(prev) = &previous {
            error = prev
                .iter()
                .zip(&estimate)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        }
        let enough_levels = raw.len() >= if leading_order.is_some() { 3 } else { 2 };
        let converged = enough_levels && error <= spec.rel_tol * scale;
        best = Some((estimate.clone(), error, n));
        previous = Some(estimate);
        if converged {
            status = QuadratureStatus::Converged;
            break;
        }
        n *= 2;
    }

    let Some((values, abs_error_estimate, points_per_axis)) = best else {
        return Err(Error::InvalidSpec(
            "point budget too small for even the first grid level".into(),
        ));
    };
    Ok(CosineMoments {
        dims,
        radius,
        values,
        abs_error_estimate,
        status,
        evaluations,
        points_per_axis,
    })
}

/// One grid level: sample on the positive half of every axis, then
/// contract axis by axis against `cos(x psi)`.
fn folded_moments<F>(f: &F, dims: usize, n: usize, radius: usize) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let nodes = midpoint_nodes(n, true);
    let m = nodes.len();
    let inner: usize = m.pow(dims as u32 - 1);

    let slabs = map_indices(m, |i0| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(inner);
        let mut index = vec![0usize; dims];
        let mut point = vec![nodes[0]; dims];
        index[0] = i0;
        point[0] = nodes[i0];
        for _ in 0..inner {
            let value = f(&point);
            if !value.is_finite() {
                return Err(Error::NonFiniteSample {
                    node: index.iter().map(|&i| i + n / 2).collect(),
                    point: point.clone(),
                    value,
                });
            }
            out.push(value);
            for k in (1..dims).rev() {
                index[k] += 1;
                if index[k] < m {
                    point[k] = nodes[index[k]];
                    break;
                }
                index[k] = 0;
                point[k] = nodes[0];
            }
        }
        Ok(out)
    });
    let mut tensor = Vec::with_capacity(m * inner);
    for slab in slabs {
        tensor.extend(slab?);
    }

    let cosines: Vec<f64> = (0..=radius)
        .flat_map(|x| nodes.iter().map(move |&t| math::cos(x as f64 * t)))
        .collect();
    let r1 = radius + 1;
    let mut shape = vec![m; dims];
    for axis in 0..dims {
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let mut next = vec![0.0; outer * r1 * inner];
        for o in 0..outer {
            for x in 0..r1 {
                let row = &cosines[x * m..(x + 1) * m];
                let dst = &mut next[(o * r1 + x) * inner..(o * r1 + x + 1) * inner];
                for (j, &c) in row.iter().enumerate() {
                    let src = &tensor[(o * m + j) * inner..(o * m + j + 1) * inner];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += c * s;
                    }
                }
            }
        }
        tensor = next;
        shape[axis] = r1;
    }
    let norm = math::powi(m as f64, dims as i32);
    for v in &mut tensor {
        *v /= norm;
    }
    Ok(tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn resolvent_kernel_in_one_dimension() {
        // (1/2pi) ∫ cos(x psi) / (a - cos psi) = t^|x| / sqrt(a^2 - 1),
        // t = a - sqrt(a^2 - 1)
        let a = 1.5f64;
        let m = cosine_moments(
            |p| 1.0 / (a - math::cos(p[0])),
            12,
            &QuadratureSpec::for_dims(1).with_rel_tol(1e-12),
        )
        .unwrap();
        assert_eq!(m.status, QuadratureStatus::Converged);
        let root = (a * a - 1.0).sqrt();
        for x in 0..=12i64 {
            let exact = (a - root).powi(x as i32) / root;
            assert_relative_eq!(m.get(&[x]).unwrap(), exact, epsilon = 1e-12);
            assert_eq!(m.get(&[x]), m.get(&[-x]));
        }
    }

    #[test]
    fn separable_integrand_factorises() {
        let a = 2.0f64;
        let m = cosine_moments(
            |p| 1.0 / ((a - math::cos(p[0])) * (a - math::cos(p[1]))),
            4,
            &QuadratureSpec::for_dims(2),
        )
        .unwrap();
        let root = (a * a - 1.0).sqrt();
        let one = |x: i32| (a - root).powi(x) / root;
        for x in 0..=4 {
            for y in 0..=4 {
                assert_relative_eq!(
                    m.get(&[x as i64, y as i64]).unwrap(),
                    one(x) * one(y),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn out_of_box_lookup_is_none() {
        let m = cosine_moments(|_| 1.0, 2, &QuadratureSpec::for_dims(1)).unwrap();
        assert_eq!(m.get(&[3]), None);
        assert_eq!(m.get(&[0, 0]), None);
        assert_relative_eq!(m.get(&[0]).unwrap(), 1.0);
        assert!(m.get(&[1]).unwrap().abs() < 1e-15);
    }
}
