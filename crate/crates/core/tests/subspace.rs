use core::f64::consts::PI;

use qwalk_core::model::r_of;
use qwalk_core::quadrature::QuadratureStatus;
use qwalk_core::spectrum::classify_fiber;
use qwalk_core::wavefunction::subspace_generator_g0;
use qwalk_core::{QuasiMomentum, TwoParticleParams};

#[test]
fn generator_norm_settles_on_the_line() {
    let p = TwoParticleParams::new(1.0, 2.0, 6.0, 1).unwrap();
    let g = subspace_generator_g0(&p, (15, 15)).unwrap();
    assert_eq!(g.status, QuadratureStatus::Converged);
    let (inner, outer) = (g.partial_norm_sq(10), g.partial_norm_sq(15));
    assert!(outer >= inner);
    assert!((outer - inner) / outer < 1e-6, "{inner} -> {outer}");
}

/// `g0(x1, x)` for `d = 1` straight from its double-integral definition:
/// trapezoid in `phi` and in the kernel variable `psi`, with the fiber
/// eigenvalue solved per `phi` node.
fn g0_direct(p: &TwoParticleParams, x1: i64, x: i64, n_phi: usize, n_psi: usize) -> f64 {
    let big = p.total_hopping();
    let mut outer = 0.0;
    for j in 0..n_phi {
        let phi = -PI + 2.0 * PI * (j as f64 + 0.5) / n_phi as f64;
        let q = QuasiMomentum::new(vec![phi]).unwrap();
        let nu = classify_fiber(&q, p).unwrap().point.kind.nu().unwrap();
        let r = r_of(phi, p);
        let mut inner = 0.0;
        for k in 0..n_psi {
            let psi = 2.0 * PI * k as f64 / n_psi as f64;
            inner += (x as f64 * psi).cos() / (r * psi.cos() - 1.0 + nu / (2.0 * big));
        }
        let kernel = p.mu / (2.0 * big) * inner / n_psi as f64;
        outer += (x1 as f64 * phi).cos() * kernel;
    }
    (2.0 * PI).powf(-0.5) * 2.0 * PI * outer / n_phi as f64
}

#[test]
fn generator_matches_direct_double_integral() {
    let p = TwoParticleParams::new(0.7, 1.6, -4.0, 1).unwrap();
    let g = subspace_generator_g0(&p, (3, 3)).unwrap();
    assert_eq!(g.status, QuadratureStatus::Converged);
    // K(phi, 0) = 1, so the corner value is sqrt(2pi) whatever the couplings
    let scale = (2.0 * PI).sqrt();
    assert!((g0_direct(&p, 0, 0, 256, 512) - scale).abs() < 1e-12);
    for (x1, x) in [(0, 0), (1, 1), (0, 2), (2, -1), (3, 3)] {
        let direct = g0_direct(&p, x1, x, 256, 512);
        let fast = g.get(&[x1], &[x]).unwrap();
        assert!(
            (direct - fast).abs() <= 1e-9 * scale,
            "({x1}, {x}): direct {direct}, generator {fast}"
        );
    }
}
