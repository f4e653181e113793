//! Numerical acceptance checks, shared by `qwalk verify` and the
//! `acceptance` test target.

use std::f64::consts::PI;
use std::time::Instant;

use qwalk_core::green::{
    b_expected_status, b_probe, q_of_nu, torus_resolvent, watson_asymptotic, watson_c, watson_c1,
    GreenConfig,
};
use qwalk_core::model::{band_edges, OneParticleParams, QuasiMomentum, TwoParticleParams};
use qwalk_core::oracle::{
    build_fiber, build_fiber_on_torus, build_one_particle, build_two_particle_torus,
    dense_spectrum, eigen_residual, extremal_eigen, Boundary, Which,
};
use qwalk_core::quadrature::integrate_bessel_path;
use qwalk_core::spectrum::{classify_fiber, classify_one_particle, surface_axis_units, PointSpectrum};
use qwalk_core::wavefunction::{fiber_eigenvector, kernel_k};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Reference value of `c(3)` from a high-resolution Bessel-path run.
pub const WATSON_C3: f64 = 0.505_462_0;

const SEED: u64 = 20_240_611;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub passed: bool,
    /// Worst deviation seen (or the decisive quantity).
    pub observed: f64,
    pub tolerance: f64,
    pub seconds: f64,
    pub detail: String,
}

impl Check {
    fn new(id: &str, name: &str) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            passed: false,
            observed: f64::NAN,
            tolerance: f64::NAN,
            seconds: 0.0,
            detail: String::new(),
        }
    }
}

/// Runs `body`, catching errors into a failed check and timing it.
fn run<F>(id: &str, name: &str, time_limit: Option<f64>, body: F) -> Check
where
    F: FnOnce(&mut Check) -> anyhow::Result<()>,
{
    let mut check = Check::new(id, name);
    let start = Instant::now();
    let outcome = body(&mut check);
    check.seconds = start.elapsed().as_secs_f64();
    if let Err(e) = outcome {
        check.passed = false;
        check.detail = format!("error: {e:#}");
    }
    if let Some(limit) = time_limit {
        if check.seconds > limit {
            check.passed = false;
            check.detail = format!("{} (over the {limit} s budget)", check.detail);
        }
    }
    check
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn which_for(mu: f64) -> Which {
    if mu > 0.0 {
        Which::Largest
    } else {
        Which::Smallest
    }
}

pub fn closed_form_one_particle() -> Check {
    run("1", "d=1 closed-form bound state", Some(1.0), |c| {
        c.tolerance = 1e-10;
        let mut worst: f64 = 0.0;
        for mu in [0.5, -0.5, 2.0, -2.0, 10.0, -10.0] {
            let p = OneParticleParams::new(1.0, mu, 1)?;
            let got = classify_one_particle(&p)?
                .point
                .kind
                .nu()
                .ok_or_else(|| anyhow::anyhow!("no eigenvalue for mu = {mu}"))?;
            let h: f64 = mu / 2.0;
            let expected = 2.0 * (1.0 + mu.signum() * (1.0 + h * h).sqrt());
            worst = worst.max(((got - expected) / expected).abs());
        }
        c.observed = worst;
        c.passed = worst <= c.tolerance;
        c.detail = "max relative error over mu in {±0.5, ±2, ±10}".into();
        Ok(())
    })
}

pub fn watson_c3() -> Check {
    run("2", "c(3) from two evaluators", Some(30.0), |c| {
        c.tolerance = 2e-7;
        let torus = torus_resolvent(&[1.0; 3], 0.0, &GreenConfig::default())?.converged_value()?;
        let bessel = integrate_bessel_path(&[1.0; 3], 3.0)?.converged_value()?;
        let spread = (torus - bessel).abs();
        let off = (torus - WATSON_C3).abs().max((bessel - WATSON_C3).abs());
        c.observed = spread;
        c.passed = spread <= 2e-7 && off <= 1e-6;
        c.detail = format!(
            "torus {torus:.12}, bessel {bessel:.12}, max distance to {WATSON_C3} is {off:.2e} (limit 1e-6)"
        );
        Ok(())
    })
}

pub fn watson_reflection() -> Check {
    run("3", "c(d) = -c1(d) for d = 3, 4, 5", None, |c| {
        let mut worst_ratio: f64 = 0.0;
        let mut parts = Vec::new();
        for d in 3..=5 {
            let cv = watson_c(d)?;
            let c1 = watson_c1(d)?;
            let a = cv.value.to_f64();
            let b = c1.value.to_f64();
            let allowed = 2.0 * cv.rel_tolerance().max(c1.rel_tolerance()) * a.abs();
            let gap = (a + b).abs();
            worst_ratio = worst_ratio.max(gap / allowed);
            parts.push(format!("d={d}: |c+c1| = {gap:.2e} (allowed {allowed:.2e})"));
        }
        c.observed = worst_ratio;
        c.tolerance = 1.0;
        c.passed = worst_ratio <= 1.0;
        c.detail = parts.join("; ");
        Ok(())
    })
}

pub fn watson_asymptotics() -> Check {
    run("4", "c(10) against the three-term expansion", None, |c| {
        c.tolerance = 5e-4;
        let v = watson_c(10)?.value.to_f64();
        let a = watson_asymptotic(10);
        c.observed = (v - a).abs();
        c.passed = c.observed < c.tolerance;
        c.detail = format!("c(10) = {v:.10}, expansion {a:.10}");
        Ok(())
    })
}

fn lanczos_vs_solver(
    p: &TwoParticleParams,
    phi: &QuasiMomentum,
    radius: usize,
) -> anyhow::Result<(f64, f64)> {
    let nu = classify_fiber(phi, p)?
        .point
        .kind
        .nu()
        .ok_or_else(|| anyhow::anyhow!("no eigenvalue at phi = {:?}", phi.angles()))?;
    let op = build_fiber(phi, p, radius, Boundary::Open)?;
    let e = extremal_eigen(&op, which_for(p.mu), 1e-10)?;
    Ok((nu, e.value))
}

/// Quasi-momenta (units of pi) used by the oracle agreement checks.
pub const ORACLE_PHI: [f64; 3] = [0.0, 0.5, 1.0];

pub fn oracle_agreement_1d() -> Check {
    run("5a", "solver vs Lanczos, d=1, L=2000", Some(60.0), |c| {
        c.tolerance = 1e-8;
        let mut worst: f64 = 0.0;
        for mu in [3.0, -3.0] {
            let p = TwoParticleParams::new(1.0, 2.0, mu, 1)?;
            for u in ORACLE_PHI {
                let phi = QuasiMomentum::from_pi_units(&[u])?;
                let (nu, lanczos) = lanczos_vs_solver(&p, &phi, 2000)?;
                worst = worst.max((nu - lanczos).abs());
            }
        }
        c.observed = worst;
        c.passed = worst <= c.tolerance;
        c.detail = "lambda1=1, lambda2=2, mu=±3, phi in {0, pi/2, pi}".into();
        Ok(())
    })
}

pub fn oracle_agreement_2d() -> Check {
    run("5b", "solver vs Lanczos, d=2, L=60", Some(60.0), |c| {
        c.tolerance = 1e-6;
        let mut worst: f64 = 0.0;
        let mut parts = Vec::new();
        for mu in [3.0, -3.0] {
            let p = TwoParticleParams::new(1.0, 2.0, mu, 2)?;
            for u in ORACLE_PHI {
                let phi = QuasiMomentum::from_pi_units(&[u, u])?;
                let (nu, lanczos) = lanczos_vs_solver(&p, &phi, 60)?;
                let gap = (nu - lanczos).abs();
                worst = worst.max(gap);
                parts.push(format!("mu={mu} phi=({u},{u})pi: {gap:.2e}"));
            }
        }
        c.observed = worst;
        c.passed = worst <= c.tolerance;
        c.detail = parts.join("; ");
        Ok(())
    })
}

pub fn direct_integral() -> Check {
    run("6", "two-particle torus spectrum = union of fiber spectra", None, |c| {
        c.tolerance = 1e-10;
        let n = 24;
        let p = TwoParticleParams::new(1.0, 2.0, 3.0, 1)?;
        let full = dense_spectrum(&build_two_particle_torus(&p, n)?)?;
        let mut union = Vec::with_capacity(n * n);
        for j in 0..n {
            let phi = QuasiMomentum::new(vec![2.0 * PI * j as f64 / n as f64])?;
            union.extend(dense_spectrum(&build_fiber_on_torus(&phi, &p, n)?)?);
        }
        union.sort_by(f64::total_cmp);
        anyhow::ensure!(union.len() == full.len(), "multiset sizes differ");
        let worst = full
            .iter()
            .zip(&union)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        c.observed = worst;
        c.passed = worst <= c.tolerance;
        c.detail = format!("d=1, N={n}, {} eigenvalues", full.len());
        Ok(())
    })
}

pub fn threshold_gate_d3() -> Check {
    run("7", "verdict gate around mu* in d=3", None, |c| {
        let c3 = watson_c(3)?.value.to_f64();
        let mu_star = 2.0 * 2.0 / c3;
        let phi = QuasiMomentum::zero(3);
        let verdict = |f: f64| -> anyhow::Result<PointSpectrum> {
            let p = TwoParticleParams::new(1.0, 1.0, f * mu_star, 3)?;
            Ok(classify_fiber(&phi, &p)?.point.kind)
        };
        let above = verdict(1.1)?;
        let below = verdict(0.9)?;
        let at = verdict(1.0)?;
        let gates = matches!(above, PointSpectrum::Exists { .. })
            && below == PointSpectrum::Absent
            && at == PointSpectrum::Absent;
        let radius = 12;
        let p = TwoParticleParams::new(1.0, 1.0, 1.5 * mu_star, 3)?;
        let edge = band_edges(&phi, &p)?.beta2;
        let e = extremal_eigen(&build_fiber(&phi, &p, radius, Boundary::Open)?, Which::Largest, 1e-9)?;
        let separation = e.value - edge;
        c.observed = separation;
        c.tolerance = 5.0 / radius as f64;
        c.passed = gates && separation > c.tolerance;
        c.detail = format!(
            "mu* = {mu_star:.9}; 1.1mu*: {}, 0.9mu*: {}, mu*: {}; Lanczos at 1.5mu* (L={radius}) sits {separation:.4} above the band",
            above.kind_name(),
            below.kind_name(),
            at.kind_name()
        );
        Ok(())
    })
}

pub fn kernel_normalisation() -> Check {
    run("8", "K(phi, 0) = 1 on a 32-point grid, d=1", None, |c| {
        c.tolerance = 1e-8;
        let mut worst: f64 = 0.0;
        let mut tested = 0;
        for (l1, l2, mu) in [(1.0, 1.0, 2.0), (1.0, 2.0, 3.0), (1.0, 2.0, -3.0)] {
            let p = TwoParticleParams::new(l1, l2, mu, 1)?;
            for u in surface_axis_units(32) {
                let phi = QuasiMomentum::from_pi_units(&[u])?;
                let Some(nu) = classify_fiber(&phi, &p)?.point.kind.nu() else {
                    continue;
                };
                let k = kernel_k(&phi, nu, &p, 4)?;
                let k0 = k.values.get(&[0]).unwrap_or(f64::NAN);
                worst = worst.max((k0 - 1.0).abs());
                tested += 1;
            }
        }
        c.observed = worst;
        c.passed = worst <= c.tolerance && tested > 0;
        c.detail = format!("{tested} grid points with an eigenvalue");
        Ok(())
    })
}

pub fn eigen_residuals() -> Check {
    run("9", "fiber eigenvector residual", None, |c| {
        c.tolerance = 1e-6;
        let mut worst: f64 = 0.0;
        let cases: [(usize, f64, usize, [f64; 5]); 2] = [
            (1, 3.0, 400, [-0.8, -0.3, 0.0, 0.45, 1.0]),
            (2, 8.0, 40, [0.0, 0.25, 0.5, 0.75, 1.0]),
        ];
        for (d, mu, radius, units) in cases {
            let p = TwoParticleParams::new(1.0, 2.0, mu, d)?;
            for u in units {
                let phi = QuasiMomentum::from_pi_units(&vec![u; d])?;
                let (nu, f0) = fiber_eigenvector(&phi, &p, radius)?;
                let op = build_fiber(&phi, &p, radius, Boundary::Open)?;
                worst = worst.max(eigen_residual(&op, nu, f0.values()));
            }
        }
        c.observed = worst;
        c.passed = worst < c.tolerance;
        c.detail = "d=1 (mu=3, L=400) and d=2 (mu=8, L=40), 5 quasi-momenta each".into();
        Ok(())
    })
}

pub fn edge_probes() -> Check {
    run("10", "edge square-integrability probes", None, |c| {
        c.tolerance = 8.0;
        let mut ok = true;
        let mut worst_doublings = 0usize;
        let mut parts = Vec::new();
        for (m, at_edge) in [(3, true), (4, true), (3, false), (5, true)] {
            let w = vec![1.0; m];
            let y = if at_edge { m as f64 } else { 0.0 };
            let r = b_probe(&w, y)?;
            let expected = b_expected_status(m, at_edge);
            let doublings = r.refinements.len().saturating_sub(1);
            worst_doublings = worst_doublings.max(doublings);
            let good = r.status == expected && doublings <= 8;
            ok &= good;
            parts.push(format!(
                "m={m}, y={}: {:?} after {doublings} doublings",
                if at_edge { "D" } else { "0" },
                r.status
            ));
        }
        c.observed = worst_doublings as f64;
        c.passed = ok;
        c.detail = parts.join("; ");
        Ok(())
    })
}

pub fn monotonicity() -> Check {
    run("11", "q strictly decreasing on both sides of the band", None, |c| {
        c.tolerance = 0.0;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut violations = 0usize;
        let mut evaluations = 0usize;
        for _ in 0..10 {
            let d = 1 + (rng.next_u64() % 3) as usize;
            let l1 = 0.2 + 1.8 * unit(&mut rng);
            let l2 = 0.2 + 1.8 * unit(&mut rng);
            let p = TwoParticleParams::new(l1, l2, 1.0, d)?;
            let angles: Vec<f64> = (0..d).map(|_| PI * (2.0 * unit(&mut rng) - 1.0)).collect();
            let phi = QuasiMomentum::new(angles)?;
            let band = band_edges(&phi, &p)?;
            let scale = band.width().max(2.0 * p.total_hopping());
            let mut offsets: Vec<f64> = (0..20)
                .map(|_| scale * 10f64.powf(-3.0 + 5.0 * unit(&mut rng)))
                .collect();
            offsets.sort_by(f64::total_cmp);
            let above: Vec<f64> = offsets.iter().map(|t| band.beta2 + t).collect();
            let mut below: Vec<f64> = offsets.iter().map(|t| band.beta1 - t).collect();
            below.reverse();
            for side in [above, below] {
                let q: Vec<f64> = side
                    .iter()
                    .map(|&nu| q_of_nu(nu, &phi, &p))
                    .collect::<Result<_, _>>()?;
                evaluations += q.len();
                violations += q.windows(2).filter(|w| !(w[0] > w[1])).count();
            }
        }
        c.observed = violations as f64;
        c.passed = violations == 0;
        c.detail = format!("{evaluations} evaluations over 10 random (phi, p)");
        Ok(())
    })
}

pub fn reduction_sweep() -> Check {
    run("12", "fiber at phi = 0 reduces to the one-particle problem", None, |c| {
        c.tolerance = 1e-9;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
        let dims = [1usize, 2, 3, 5];
        let mut worst: f64 = 0.0;
        let mut kind_mismatch = 0;
        let mut counts = [0usize; 2];
        for i in 0..50 {
            let d = dims[i % dims.len()];
            let l1 = 0.2 + 1.8 * unit(&mut rng);
            let l2 = 0.2 + 1.8 * unit(&mut rng);
            let magnitude = 10f64.powf(-1.0 + 2.5 * unit(&mut rng));
            let mu = if rng.next_u64() % 2 == 0 { magnitude } else { -magnitude };
            let p = TwoParticleParams::new(l1, l2, mu, d)?;
            let fiber = classify_fiber(&QuasiMomentum::zero(d), &p)?.point.kind;
            let one = classify_one_particle(&p.reduced())?.point.kind;
            if !fiber.same_kind(&one) {
                kind_mismatch += 1;
            }
            match (fiber.nu(), one.nu()) {
                (Some(a), Some(b)) => {
                    worst = worst.max((a - b).abs() / b.abs().max(1.0));
                    counts[0] += 1;
                }
                _ => counts[1] += 1,
            }
        }
        c.observed = worst;
        c.passed = kind_mismatch == 0 && worst <= c.tolerance;
        c.detail = format!(
            "{} with an eigenvalue, {} without, {kind_mismatch} verdict mismatches",
            counts[0], counts[1]
        );
        Ok(())
    })
}

/// Criteria that cannot be met as stated, with the reason.
pub const KNOWN_INFEASIBLE: [(&str, &str); 1] = [(
    "5b",
    "at phi = 0 the d=2 bound state lies 3.3e-4 above the band; its decay length (~95 sites) exceeds L = 60, so the box eigenvalue is off by ~1e-3",
)];

pub fn acceptance() -> Vec<Check> {
    vec![
        closed_form_one_particle(),
        watson_c3(),
        watson_reflection(),
        watson_asymptotics(),
        oracle_agreement_1d(),
        oracle_agreement_2d(),
        direct_integral(),
        threshold_gate_d3(),
        kernel_normalisation(),
        eigen_residuals(),
        edge_probes(),
        monotonicity(),
        reduction_sweep(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Quadrature,
    Oracle,
    #[value(name = "theorem-branches")]
    Classification,
    #[value(name = "appendix")]
    EdgeProbes,
}

/// d=1 closed form against Lanczos on the one-particle walk.
pub fn one_particle_lanczos() -> Check {
    run("oracle-1d", "d=1 closed form vs Lanczos, L=2000", None, |c| {
        c.tolerance = 1e-8;
        let mut worst: f64 = 0.0;
        for mu in [2.0, -2.0] {
            let p = OneParticleParams::new(1.0, mu, 1)?;
            let e = extremal_eigen(&build_one_particle(&p, 2000, Boundary::Open), which_for(mu), 1e-10)?;
            let expected = 2.0 * (1.0 + mu.signum() * 2f64.sqrt());
            worst = worst.max((e.value - expected).abs());
        }
        c.observed = worst;
        c.passed = worst <= c.tolerance;
        c.detail = "lambda=1, mu=±2".into();
        Ok(())
    })
}

pub fn run_suite(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Quadrature => vec![
            watson_c3(),
            watson_reflection(),
            watson_asymptotics(),
            kernel_normalisation(),
        ],
        Suite::Oracle => vec![
            one_particle_lanczos(),
            oracle_agreement_1d(),
            oracle_agreement_2d(),
            direct_integral(),
            eigen_residuals(),
        ],
        Suite::Classification => vec![
            closed_form_one_particle(),
            threshold_gate_d3(),
            monotonicity(),
            reduction_sweep(),
        ],
        Suite::EdgeProbes => vec![edge_probes()],
    }
}

/// Whether every check passed, counting those in [`KNOWN_INFEASIBLE`].
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
