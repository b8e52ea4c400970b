//! Scenes for the flat-torus portrait and the parameter-plane diagram.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU as TWO_PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use suslov_core::critical::{find_critical_points, StabilityKind};
use suslov_core::dynamics::{detect_rational_ratio, DEFAULT_MAX_DEN};
use suslov_core::levelset::{g_value, uk_grid, GkData};
use suslov_core::projection::{chord_polylines, sample_state, trace_chord};
use suslov_core::{classify_region, to_torus, LevelValues, Params, RegionTag, Result, Subregion};

use crate::svg::{Curve, Marker, MarkerShape, Patch, Scene};

/// Resolution of the shading and boundary contour.
pub const PORTRAIT_GRID: usize = 256;

/// `theta1` length drawn for an orbit whose line never closes.
const OPEN_LINE_TURNS: f64 = 6.0;

fn pi_ticks(values: &[(f64, &str)]) -> Vec<(f64, String)> {
    values.iter().map(|&(v, s)| (v, s.to_string())).collect()
}

/// Edge of the sampling lattice: `(i, j, horizontal)`.
type EdgeKey = (usize, usize, bool);

/// Zero contour of `f` on the periodic node lattice of the fundamental
/// square, joined into polylines.
pub fn contour(n: usize, f: impl Fn(f64, f64) -> f64) -> Vec<Vec<(f64, f64)>> {
    let h = TWO_PI / n as f64;
    let x = |i: usize| -FRAC_PI_2 + i as f64 * h;
    let y = |j: usize| j as f64 * h;
    let vals: Vec<f64> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| f(x(i), y(j)))
        .collect();
    let v = |i: usize, j: usize| vals[i * (n + 1) + j];

    let crossing = |e: EdgeKey| -> (f64, f64) {
        let (i, j, horizontal) = e;
        let (a, b, p0, p1) = if horizontal {
            (v(i, j), v(i + 1, j), (x(i), y(j)), (x(i + 1), y(j)))
        } else {
            (v(i, j), v(i, j + 1), (x(i), y(j)), (x(i), y(j + 1)))
        };
        let t = a / (a - b);
        (p0.0 + t * (p1.0 - p0.0), p0.1 + t * (p1.1 - p0.1))
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let c = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            let code = c
                .iter()
                .enumerate()
                .fold(0u8, |acc, (bit, &val)| acc | (u8::from(val > 0.0) << bit));
            let bottom = (i, j, true);
            let right = (i + 1, j, false);
            let top = (i, j + 1, true);
            let left = (i, j, false);
            let centre_in = c.iter().sum::<f64>() > 0.0;
            let pairs: &[(EdgeKey, EdgeKey)] = match code {
                0 | 15 => &[],
                1 | 14 => &[(left, bottom)],
                2 | 13 => &[(bottom, right)],
                3 | 12 => &[(left, right)],
                4 | 11 => &[(right, top)],
                6 | 9 => &[(bottom, top)],
                7 | 8 => &[(left, top)],
                5 => {
                    if centre_in {
                        &[(left, top), (bottom, right)]
                    } else {
                        &[(left, bottom), (right, top)]
                    }
                }
                10 => {
                    if centre_in {
                        &[(left, bottom), (right, top)]
                    } else {
                        &[(left, top), (bottom, right)]
                    }
                }
                _ => unreachable!(),
            };
            segments.extend_from_slice(pairs);
        }
    }

    let mut by_edge: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (idx, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(idx);
        by_edge.entry(*b).or_default().push(idx);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (a, b) = segments[start];
        let mut keys = vec![a, b];
        // extend forwards from the tail, then backwards from the head
        for forwards in [true, false] {
            loop {
                let end = if forwards { *keys.last().unwrap() } else { keys[0] };
                let next = by_edge[&end].iter().copied().find(|&s| !used[s]);
                let Some(s) = next else { break };
                used[s] = true;
                let (p, q) = segments[s];
                let other = if p == end { q } else { p };
                if forwards {
                    keys.push(other);
                } else {
                    keys.insert(0, other);
                }
            }
        }
        lines.push(keys.into_iter().map(crossing).collect());
    }
    lines
}

fn uk_shading(b: &Params, k: &LevelValues) -> Result<Vec<Patch>> {
    let grid = uk_grid(b, k, PORTRAIT_GRID)?;
    let n = grid.n();
    let h = TWO_PI / n as f64;
    let mut patches = Vec::new();
    for j in 0..n {
        let mut i = 0;
        while i < n {
            if !grid.get(i as isize, j as isize) {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && grid.get(i as isize, j as isize) {
                i += 1;
            }
            patches.push(Patch {
                x0: -FRAC_PI_2 + start as f64 * h,
                y0: j as f64 * h,
                x1: -FRAC_PI_2 + i as f64 * h,
                y1: (j + 1) as f64 * h,
                fill: "#bcd7f0".into(),
            });
        }
    }
    Ok(patches)
}

/// Flat-torus portrait: `closure(U_k)` shaded, its boundary, the guide lines
/// `theta1 = +-pi/2` and `theta2 in {0, pi}`, `orbits` seeded projected
/// orbits, and the equilibria.
pub fn torus_scene(b: &Params, k: &LevelValues, orbits: usize, seed: u64) -> Result<Scene> {
    let region = classify_region(b, k);
    region.require_smooth()?;
    let mut scene = Scene::new((-FRAC_PI_2, 3.0 * FRAC_PI_2), (0.0, TWO_PI));
    scene.title = format!(
        "b = ({}, {}), k = ({}, {}): {}{}",
        b.b1,
        b.b2,
        k.k1,
        k.k2,
        region.tag,
        region
            .subregion
            .map(|s| format!(" / {s}"))
            .unwrap_or_default()
    );
    scene.x_label = "θ1".into();
    scene.y_label = "θ2".into();
    scene.x_ticks = pi_ticks(&[
        (-FRAC_PI_2, "-π/2"),
        (0.0, "0"),
        (FRAC_PI_2, "π/2"),
        (PI, "π"),
        (3.0 * FRAC_PI_2, "3π/2"),
    ]);
    scene.y_ticks = pi_ticks(&[
        (0.0, "0"),
        (FRAC_PI_2, "π/2"),
        (PI, "π"),
        (3.0 * FRAC_PI_2, "3π/2"),
        (TWO_PI, "2π"),
    ]);

    scene.shading = uk_shading(b, k)?;
    let eps = GkData::new(b, k).eps;
    scene.boundaries = contour(PORTRAIT_GRID, |x, y| g_value(x, y, b, k) - eps)
        .into_iter()
        .map(|points| Curve {
            points,
            stroke: "#1f4e79".into(),
            width: 2.0,
        })
        .collect();

    let guide = |points: Vec<(f64, f64)>| Curve {
        points,
        stroke: "#555555".into(),
        width: 1.0,
    };
    for x in [-FRAC_PI_2, FRAC_PI_2] {
        scene.guides.push(guide(vec![(x, 0.0), (x, TWO_PI)]));
    }
    for y in [0.0, PI] {
        scene
            .guides
            .push(guide(vec![(-FRAC_PI_2, y), (3.0 * FRAC_PI_2, y)]));
    }

    let closing = detect_rational_ratio(b, DEFAULT_MAX_DEN).map(|e| TWO_PI * e.p as f64);
    let max_len = closing.unwrap_or(TWO_PI * OPEN_LINE_TURNS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette = ["#c0392b", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#2c3e50"];
    for idx in 0..orbits {
        let s = sample_state(b, k, &mut rng)?;
        let t = to_torus(&s, b, k)?;
        let chord = trace_chord(t.theta1, t.theta2, b, k, max_len);
        let (back, fwd) = match (chord.backward, chord.forward) {
            (Some(bk), Some(fw)) => (bk, fw),
            (None, None) => (0.0, max_len),
            (bk, fw) => (bk.unwrap_or(max_len), fw.unwrap_or(max_len)),
        };
        for points in chord_polylines(&chord, back, fwd) {
            scene.orbits.push(Curve {
                points,
                stroke: palette[idx % palette.len()].into(),
                width: 1.5,
            });
        }
    }

    for cp in find_critical_points(b, k)? {
        let t = to_torus(&cp.state, b, k)?;
        let (shape, color) = match cp.kind {
            StabilityKind::Saddle => (MarkerShape::Cross, "#b03a2e"),
            StabilityKind::Center => (MarkerShape::Circle, "#f1c40f"),
            StabilityKind::Degenerate => (MarkerShape::Diamond, "#7d3c98"),
        };
        scene.markers.push(Marker {
            x: t.theta1,
            y: t.theta2,
            shape,
            color: color.into(),
        });
    }
    Ok(scene)
}

pub fn region_color(tag: RegionTag, sub: Option<Subregion>) -> &'static str {
    match (tag, sub) {
        (RegionTag::D1, _) => "#f5b7b1",
        (RegionTag::D2, _) => "#fad7a0",
        (RegionTag::D3, None) | (RegionTag::D4, None) => "#aed6f1",
        (_, Some(Subregion::Sub12)) => "#a9dfbf",
        (_, Some(Subregion::Sub3)) => "#d2b4de",
        (_, Some(Subregion::Sub4)) => "#aed6f1",
        (_, Some(Subregion::C1)) | (_, Some(Subregion::C2)) => "#7f8c8d",
        (RegionTag::D5, None) => "#f9e79f",
        (RegionTag::Singular, None) => "#ffffff",
    }
}

/// Sampled branches of `delta = 0` in the (k1, k2) plane, indices swapped
/// when `b1 < b2`.
pub fn delta_zero_curve(b: &Params, k_max: f64) -> Vec<Vec<(f64, f64)>> {
    let (big, small, swap) = if b.b1 > b.b2 {
        (b.b1, b.b2, false)
    } else {
        (b.b2, b.b1, true)
    };
    let gap = big - small;
    if gap <= 0.0 {
        return Vec::new();
    }
    let u_max = k_max.max(small) + gap;
    let samples = 2000;
    let mut branches = Vec::new();
    for sign in [1.0, -1.0] {
        let mut pts = Vec::new();
        for i in 0..=samples {
            // denser near u = 0 where the branches turn
            let u = u_max * (i as f64 / samples as f64).powi(2);
            let along = small - u + sign * 2.0 * (gap * u).sqrt();
            let across = small + u;
            if along < 0.0 {
                continue;
            }
            pts.push(if swap { (across, along) } else { (along, across) });
        }
        branches.push(pts);
    }
    branches
}
