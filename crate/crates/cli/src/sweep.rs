//! Region atlas over a rectangle of level values.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use suslov_core::critical::{euler_char_ph, find_critical_points};
use suslov_core::levelset::topology_via_construction;
use suslov_core::{classify_region, LevelValues, Params, RegionTag, SingularCause, Subregion};

use crate::args::SweepRange;
use crate::portrait::{delta_zero_curve, region_color};
use crate::svg::{Curve, Patch, Scene};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub k1: f64,
    pub k2: f64,
    pub region: RegionTag,
    pub subregion: Option<Subregion>,
    pub singular_cause: Option<SingularCause>,
    pub critical_points: Option<usize>,
    pub euler: Option<i64>,
    pub euler_ph: Option<i64>,
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atlas {
    pub b1: f64,
    pub b2: f64,
    pub k1_min: f64,
    pub k1_max: f64,
    pub k2_min: f64,
    pub k2_max: f64,
    pub n: usize,
    pub grid_n: usize,
    pub cells: Vec<Cell>,
}

impl SweepRange {
    /// Center of cell `(i, j)`.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        let h1 = (self.k1_max - self.k1_min) / self.n as f64;
        let h2 = (self.k2_max - self.k2_min) / self.n as f64;
        (
            self.k1_min + (i as f64 + 0.5) * h1,
            self.k2_min + (j as f64 + 0.5) * h2,
        )
    }
}

fn evaluate(b: &Params, range: &SweepRange, grid_n: usize, i: usize, j: usize) -> Cell {
    let (k1, k2) = range.center(i, j);
    let mut cell = Cell {
        i,
        j,
        k1,
        k2,
        region: RegionTag::Singular,
        subregion: None,
        singular_cause: None,
        critical_points: None,
        euler: None,
        euler_ph: None,
        agree: None,
    };
    let Ok(k) = LevelValues::new(k1, k2) else {
        return cell;
    };
    let region = classify_region(b, &k);
    cell.region = region.tag;
    cell.subregion = region.subregion;
    cell.singular_cause = region.singular_cause;
    if region.is_singular() {
        return cell;
    }
    if let Ok(points) = find_critical_points(b, &k) {
        cell.critical_points = Some(points.len());
        cell.euler_ph = Some(euler_char_ph(&points));
    }
    if let Ok(topo) = topology_via_construction(b, &k, grid_n) {
        cell.euler = Some(topo.euler);
    }
    if let (Some(a), Some(c)) = (cell.euler, cell.euler_ph) {
        cell.agree = Some(a == c);
    }
    cell
}

/// Evaluates every cell on the rayon pool; cells come back in `(i, j)` order.
pub fn sweep(b: &Params, range: &SweepRange, grid_n: usize) -> Atlas {
    let n = range.n;
    let cells = (0..n * n)
        .into_par_iter()
        .map(|idx| evaluate(b, range, grid_n, idx / n, idx % n))
        .collect();
    Atlas {
        b1: b.b1,
        b2: b.b2,
        k1_min: range.k1_min,
        k1_max: range.k1_max,
        k2_min: range.k2_min,
        k2_max: range.k2_max,
        n,
        grid_n,
        cells,
    }
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn write_atlas_csv<W: Write>(w: W, atlas: &Atlas) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "i",
        "j",
        "k1",
        "k2",
        "region",
        "subregion",
        "singular_cause",
        "critical_points",
        "euler",
        "euler_ph",
        "agree",
    ])?;
    for c in &atlas.cells {
        out.write_record([
            c.i.to_string(),
            c.j.to_string(),
            crate::report::full_precision(c.k1),
            crate::report::full_precision(c.k2),
            c.region.to_string(),
            opt(&c.subregion),
            c.singular_cause.map(|s| format!("{s:?}")).unwrap_or_default(),
            opt(&c.critical_points),
            opt(&c.euler),
            opt(&c.euler_ph),
            opt(&c.agree),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn ticks(lo: f64, hi: f64) -> Vec<(f64, String)> {
    (0..=4)
        .map(|i| {
            let v = lo + (hi - lo) * i as f64 / 4.0;
            (v, format!("{v:.2}"))
        })
        .collect()
}

/// Parameter-plane diagram: cells colored by region, the lines `k1 = b1`,
/// `k2 = b2`, `k1/b1 + k2/b2 = 1`, and (for `b1 != b2`) the curve
/// `delta = 0` with the dashed line `k1 + k2 = 2 max(b1, b2)`.
pub fn bifurcation_scene(atlas: &Atlas) -> Scene {
    let b = Params {
        b1: atlas.b1,
        b2: atlas.b2,
    };
    let x_range = (atlas.k1_min, atlas.k1_max);
    let y_range = (atlas.k2_min, atlas.k2_max);
    let mut scene = Scene::new(x_range, y_range);
    scene.title = format!("regions for b = ({}, {})", b.b1, b.b2);
    scene.x_label = "k1".into();
    scene.y_label = "k2".into();
    scene.x_ticks = ticks(x_range.0, x_range.1);
    scene.y_ticks = ticks(y_range.0, y_range.1);

    let h1 = (x_range.1 - x_range.0) / atlas.n as f64;
    let h2 = (y_range.1 - y_range.0) / atlas.n as f64;
    for c in &atlas.cells {
        scene.shading.push(Patch {
            x0: c.k1 - 0.5 * h1,
            y0: c.k2 - 0.5 * h2,
            x1: c.k1 + 0.5 * h1,
            y1: c.k2 + 0.5 * h2,
            fill: region_color(c.region, c.subregion).into(),
        });
    }

    let line = |points: Vec<(f64, f64)>| Curve {
        points,
        stroke: "black".into(),
        width: 2.0,
    };
    scene
        .boundaries
        .push(line(vec![(b.b1, y_range.0), (b.b1, y_range.1)]));
    scene
        .boundaries
        .push(line(vec![(x_range.0, b.b2), (x_range.1, b.b2)]));
    scene.boundaries.push(line(vec![(b.b1, 0.0), (0.0, b.b2)]));
    if b.b1 != b.b2 {
        let k_max = x_range.1.max(y_range.1);
        for branch in delta_zero_curve(&b, k_max) {
            scene.boundaries.push(line(branch));
        }
        let big = 2.0 * b.b1.max(b.b2);
        scene.guides.push(Curve {
            points: vec![(big, 0.0), (0.0, big)],
            stroke: "black".into(),
            width: 1.5,
        });
    }
    scene
}
