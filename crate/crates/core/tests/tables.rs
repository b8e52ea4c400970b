//! Equilibrium counts, sign patterns and stability, region by region.

use suslov_core::{
    classify_region, euler_char_ph, find_critical_points, vector_field, CriticalPoint, Family,
    LevelValues, Params, StabilityKind, Subregion,
};

fn points(b: (f64, f64), k: (f64, f64)) -> Vec<CriticalPoint> {
    let b = Params::new(b.0, b.1).unwrap();
    let k = LevelValues::new(k.0, k.1).unwrap();
    let pts = find_critical_points(&b, &k).unwrap();
    for p in &pts {
        let s = p.state;
        let x = vector_field(&s, &b);
        assert!(x.iter().map(|v| v * v).sum::<f64>().sqrt() <= 1e-12);
        assert!((s.m1 * s.m1 + b.b1 * s.gamma1 * s.gamma1 - k.k1).abs() <= 1e-12);
        assert!((s.m2 * s.m2 + b.b2 * s.gamma2 * s.gamma2 - k.k2).abs() <= 1e-12);
        assert!((s.gamma_norm_sq() - 1.0).abs() <= 1e-12);
        assert_eq!(s.gamma3, 0.0);
        // sign rule: sign(m2) = sign(m1) sign(gamma1) sign(gamma2)
        assert_eq!(
            s.m2.signum(),
            s.m1.signum() * s.gamma1.signum() * s.gamma2.signum()
        );
    }
    let mut keys: Vec<_> = pts
        .iter()
        .map(|p| p.state.to_array().map(|v| v.to_bits()))
        .collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), pts.len(), "duplicate equilibria");
    pts
}

fn count(pts: &[CriticalPoint], kind: StabilityKind) -> usize {
    pts.iter().filter(|p| p.kind == kind).count()
}

#[test]
fn equal_b_rows() {
    let rows = [
        ((0.3, 0.3), 0),
        ((0.7, 0.7), 8),
        ((1.5, 0.5), 0),
        ((0.5, 1.5), 0),
        ((1.5, 1.5), 8),
    ];
    for (k, n) in rows {
        let pts = points((1.0, 1.0), k);
        assert_eq!(pts.len(), n, "k = {k:?}");
        assert!(pts.iter().all(|p| p.family == Family::EqualB));
    }
    assert_eq!(count(&points((1.0, 1.0), (0.7, 0.7)), StabilityKind::Saddle), 8);
    assert_eq!(count(&points((1.0, 1.0), (1.5, 1.5)), StabilityKind::Center), 8);
}

#[test]
fn equal_b_closed_form() {
    // gamma1* = sqrt((k2 - b)/(k1 + k2 - 2b)), gamma2* = sqrt((k1 - b)/(..)), t = sqrt(k1 + k2 - b)
    let (k1, k2, bb) = (1.7f64, 1.3f64, 1.0f64);
    let s = k1 + k2 - 2.0 * bb;
    let g1 = ((k2 - bb) / s).sqrt();
    let g2 = ((k1 - bb) / s).sqrt();
    let t = (k1 + k2 - bb).sqrt();
    for p in points((bb, bb), (k1, k2)) {
        let st = p.state;
        assert!((st.m1.abs() - t * g2).abs() < 1e-14);
        assert!((st.m2.abs() - t * g1).abs() < 1e-14);
        assert!((st.gamma1.abs() - g1).abs() < 1e-14);
        assert!((st.gamma2.abs() - g2).abs() < 1e-14);
    }
}

/// `k` on `Delta = 0` for `b = (4, 1)`: `k2 = 1 + u`, `k1 = 1 - u + 2 sqrt(3u)`.
fn on_curve(u: f64) -> (f64, f64) {
    (1.0 - u + 2.0 * (3.0 * u).sqrt(), 1.0 + u)
}

#[test]
fn unequal_b_rows() {
    let b = (4.0, 1.0);
    let rows: [((f64, f64), usize, Option<Subregion>); 9] = [
        ((1.0, 0.5), 0, None),
        ((2.0, 0.75), 8, None),
        ((6.0, 0.5), 0, None),
        ((3.8, 7.0), 0, Some(Subregion::Sub3)),
        ((4.4, 1.1), 8, None),
        ((3.4, 1.2), 16, Some(Subregion::Sub12)),
        (on_curve(0.5), 8, Some(Subregion::C1)),
        (on_curve(6.0), 0, Some(Subregion::C2)),
        ((0.5, 1.05), 0, Some(Subregion::Sub4)),
    ];
    let params = Params::new(b.0, b.1).unwrap();
    for (k, n, sub) in rows {
        let region = classify_region(&params, &LevelValues::new(k.0, k.1).unwrap());
        assert_eq!(region.subregion, sub, "k = {k:?}");
        assert_eq!(points(b, k).len(), n, "k = {k:?}");
    }

    let d2 = points(b, (2.0, 0.75));
    assert_eq!(count(&d2, StabilityKind::Saddle), 8);
    assert!(d2.iter().all(|p| p.family == Family::Plus));

    let d5 = points(b, (4.4, 1.1));
    assert_eq!(count(&d5, StabilityKind::Center), 8);
    assert!(d5.iter().all(|p| p.family == Family::Minus));

    let mixed = points(b, (3.4, 1.2));
    for p in &mixed {
        let expect = match p.family {
            Family::Plus => StabilityKind::Saddle,
            _ => StabilityKind::Center,
        };
        assert_eq!(p.kind, expect);
    }
    assert_eq!(count(&mixed, StabilityKind::Saddle), 8);
    assert_eq!(euler_char_ph(&mixed), 0);

    let c1 = points(b, on_curve(0.5));
    assert_eq!(count(&c1, StabilityKind::Degenerate), 8);
    assert_eq!(euler_char_ph(&c1), 0);
}

#[test]
fn level_near_the_delta_curve_has_sixteen_points() {
    // Delta = 0.01 > 0 at (2, 1.1): easy to mistake for the empty part of D4,
    // but the quadratic has two admissible roots
    let b = Params::new(4.0, 1.0).unwrap();
    let k = LevelValues::new(2.0, 1.1).unwrap();
    assert_eq!(classify_region(&b, &k).subregion, Some(Subregion::Sub12));
    assert_eq!(points((4.0, 1.0), (2.0, 1.1)).len(), 16);
}

#[test]
fn sub12_corner_below_the_minus_branch_is_empty() {
    // Delta > 0 and k1 + k2 < 2 b2: both roots of the quadratic are negative
    let b = Params::new(4.0, 1.0).unwrap();
    let k = LevelValues::new(0.01, 1.001).unwrap();
    assert_eq!(classify_region(&b, &k).subregion, Some(Subregion::Sub12));
    assert!(points((4.0, 1.0), (0.01, 1.001)).is_empty());
}

#[test]
fn swapped_indices_mirror_counts() {
    for ((k1, k2), n) in [((0.75, 2.0), 8), ((1.1, 4.4), 8), ((1.2, 3.4), 16), ((1.05, 0.5), 0)] {
        assert_eq!(points((1.0, 4.0), (k1, k2)).len(), n, "k = ({k1}, {k2})");
    }
}
