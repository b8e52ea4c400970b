//! Eigenvalues from the characteristic polynomial against a finite-difference
//! Jacobian of the flow written in the local surface chart `(gamma2, gamma3)`.

use num_complex::Complex64;
use suslov_core::{find_critical_points, CriticalPoint, LevelValues, Params, StabilityKind};

/// Vector field in the chart: `gamma1`, `m1`, `m2` are recovered from the
/// level equations with the signs they have at the base point.
fn chart_field(y: [f64; 2], cp: &CriticalPoint, b: &Params, k: &LevelValues) -> [f64; 2] {
    let s = cp.state;
    let (g2, g3) = (y[0], y[1]);
    let g1 = s.gamma1.signum() * (1.0 - g2 * g2 - g3 * g3).sqrt();
    let m1 = s.m1.signum() * (k.k1 - b.b1 * g1 * g1).sqrt();
    let m2 = s.m2.signum() * (k.k2 - b.b2 * g2 * g2).sqrt();
    [-m2 * g3, g2 * m2 - g1 * m1]
}

fn fd_eigenvalues(cp: &CriticalPoint, b: &Params, k: &LevelValues) -> [Complex64; 2] {
    let h = 1e-6;
    let y0 = [cp.state.gamma2, cp.state.gamma3];
    let mut jac = [[0.0; 2]; 2];
    for col in 0..2 {
        let mut yp = y0;
        let mut ym = y0;
        yp[col] += h;
        ym[col] -= h;
        let fp = chart_field(yp, cp, b, k);
        let fm = chart_field(ym, cp, b, k);
        for row in 0..2 {
            jac[row][col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    let tr = jac[0][0] + jac[1][1];
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

fn same_pair(a: [Complex64; 2], b: [Complex64; 2], tol: f64) -> bool {
    let d = |x: Complex64, y: Complex64| (x - y).norm();
    (d(a[0], b[0]) <= tol && d(a[1], b[1]) <= tol) || (d(a[0], b[1]) <= tol && d(a[1], b[0]) <= tol)
}

#[test]
fn analytic_eigenvalues_match_finite_differences() {
    let cases = [
        (1.0, 1.0, 1.5, 1.5),
        (1.0, 1.0, 0.7, 0.7),
        (4.0, 1.0, 2.0, 0.75),
        (4.0, 1.0, 4.4, 1.1),
        (4.0, 1.0, 3.4, 1.2),
        (4.0, 1.0, 2.0, 1.1),
        (1.0, 4.0, 0.75, 2.0),
        (1.0, 4.0, 1.2, 3.4),
        (2.5, 0.8, 1.9, 0.7),
    ];
    let mut checked = 0;
    for (b1, b2, k1, k2) in cases {
        let b = Params::new(b1, b2).unwrap();
        let k = LevelValues::new(k1, k2).unwrap();
        for cp in find_critical_points(&b, &k).unwrap() {
            assert_ne!(cp.kind, StabilityKind::Degenerate);
            let fd = fd_eigenvalues(&cp, &b, &k);
            assert!(
                same_pair(fd, cp.eigenvalues, 1e-6),
                "b = ({b1}, {b2}), k = ({k1}, {k2}): {:?} vs {:?}",
                cp.eigenvalues,
                fd
            );
            checked += 1;
        }
    }
    assert!(checked >= 80);
}

#[test]
fn unit_center_frequency() {
    let b = Params::new(1.0, 1.0).unwrap();
    let k = LevelValues::new(1.5, 1.5).unwrap();
    for cp in find_critical_points(&b, &k).unwrap() {
        let fd = fd_eigenvalues(&cp, &b, &k);
        assert!(same_pair(fd, [Complex64::i(), -Complex64::i()], 1e-6));
    }
}
