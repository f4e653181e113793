use core::f64::consts::PI;

use qwalk_core::model::band_edges;
use qwalk_core::oracle::{
    build_fiber, build_fiber_on_torus, build_one_particle, build_two_particle_torus,
    dense_spectrum, extremal_eigen, Boundary, Which,
};
use qwalk_core::spectrum::classify_fiber;
use qwalk_core::{OneParticleParams, QuasiMomentum, TwoParticleParams};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Sorted union of the fiber spectra over the `N^d` discrete quasi-momenta.
fn fiber_union(p: &TwoParticleParams, n: usize) -> Vec<f64> {
    let d = p.d;
    let mut all = Vec::new();
    for flat in 0..n.pow(d as u32) {
        let mut rest = flat;
        let mut phi = vec![0.0; d];
        for a in phi.iter_mut().rev() {
            *a = 2.0 * PI * (rest % n) as f64 / n as f64;
            rest /= n;
        }
        let q = QuasiMomentum::new(phi).unwrap();
        all.extend(dense_spectrum(&build_fiber_on_torus(&q, p, n).unwrap()).unwrap());
    }
    all.sort_by(f64::total_cmp);
    all
}

#[test]
fn torus_spectrum_splits_into_fibers_in_one_dimension() {
    for (n, l1, l2, mu) in [(5, 0.7, 1.3, -2.0), (8, 1.0, 1.0, 4.0), (13, 2.0, 0.5, 0.75), (24, 1.0, 2.0, -3.0)] {
        let p = TwoParticleParams::new(l1, l2, mu, 1).unwrap();
        let full = dense_spectrum(&build_two_particle_torus(&p, n).unwrap()).unwrap();
        let gap = max_gap(&full, &fiber_union(&p, n));
        assert!(gap < 1e-10, "N = {n}: {gap:e}");
    }
}

#[test]
fn torus_spectrum_splits_into_fibers_in_two_dimensions() {
    let p = TwoParticleParams::new(1.0, 1.5, 2.5, 2).unwrap();
    let full = dense_spectrum(&build_two_particle_torus(&p, 6).unwrap()).unwrap();
    assert_eq!(full.len(), 1296);
    let gap = max_gap(&full, &fiber_union(&p, 6));
    assert!(gap < 1e-10, "{gap:e}");
}

#[test]
fn random_line_fibers_match_lanczos() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..20 {
        let l1 = 0.3 + 1.7 * unit(&mut rng);
        let l2 = 0.3 + 1.7 * unit(&mut rng);
        let magnitude = 1.0 + 4.0 * unit(&mut rng);
        let mu = if rng.next_u64() % 2 == 0 { magnitude } else { -magnitude };
        let phi = QuasiMomentum::new(vec![PI * (2.0 * unit(&mut rng) - 1.0)]).unwrap();
        let p = TwoParticleParams::new(l1, l2, mu, 1).unwrap();
        let nu = classify_fiber(&phi, &p).unwrap().point.kind.nu().unwrap();
        let which = if mu > 0.0 { Which::Largest } else { Which::Smallest };
        let op = build_fiber(&phi, &p, 400, Boundary::Open).unwrap();
        let e = extremal_eigen(&op, which, 1e-11).unwrap();
        assert!(
            (e.value - nu).abs() <= 1e-8,
            "case {case}: lambda = ({l1}, {l2}), mu = {mu}, phi = {:?}: solver {nu}, Lanczos {}",
            phi.angles(),
            e.value
        );
    }
}

#[test]
fn free_periodic_walk_fills_the_band() {
    let lambda = 0.8;
    let p = OneParticleParams::new(lambda, 0.0, 1).unwrap();
    for radius in [100usize, 200, 400] {
        let n = (2 * radius + 1) as f64;
        let spec = dense_spectrum(&build_one_particle(&p, radius, Boundary::Periodic)).unwrap();
        let (lo, hi) = (spec[0], *spec.last().unwrap());
        assert!(lo.abs() < 1e-12, "L = {radius}: bottom {lo}");
        assert!(hi <= 4.0 * lambda + 1e-12);
        // the closest mode to pi misses the top by ~ λ (pi/n)^2
        assert!(4.0 * lambda - hi <= 2.0 * lambda * (PI / n).powi(2), "L = {radius}: top {hi}");
    }
}

#[test]
fn free_periodic_fiber_fills_its_band() {
    let p = TwoParticleParams::new(0.6, 1.4, 0.0, 1).unwrap();
    let phi = QuasiMomentum::new(vec![0.9]).unwrap();
    let band = band_edges(&phi, &p).unwrap();
    for radius in [100usize, 200, 400] {
        let n = (2 * radius + 1) as f64;
        let spec = dense_spectrum(&build_fiber(&phi, &p, radius, Boundary::Periodic).unwrap()).unwrap();
        let (lo, hi) = (spec[0], *spec.last().unwrap());
        let slack = 2.0 * band.width() * (2.0 * PI / n).powi(2);
        assert!(lo >= band.beta1 - 1e-12 && lo - band.beta1 <= slack, "L = {radius}: {lo}");
        assert!(hi <= band.beta2 + 1e-12 && band.beta2 - hi <= slack, "L = {radius}: {hi}");
    }
}
