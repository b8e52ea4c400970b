//! Parameter-plane regions, the Morse function `g_k` on the flat torus, the
//! superlevel set `U_k = {g_k > eps_k}` and the topology of `S_k` obtained by
//! doubling `closure(U_k)` along its boundary.
//!
//! The torus is the square `[-pi/2, 3pi/2) x [0, 2pi)` with opposite sides
//! identified.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI, TAU as TWO_PI};

use serde::{Deserialize, Serialize};

use crate::critical::{delta_is_zero, raw_discriminant};
use crate::error::{Error, Result};
use crate::types::{LevelValues, Params, Region, RegionTag, SingularCause, Subregion, TAU};

/// Default grid resolution for [`topology_via_construction`].
pub const DEFAULT_GRID_N: usize = 512;

/// Critical levels of `g_k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkData {
    /// `k1/b1 + k2/b2 - 1`
    pub eps: f64,
    /// `(k1/b1, k2/b2)`
    pub saddle_levels: (f64, f64),
    pub max_level: f64,
}

impl GkData {
    pub fn new(b: &Params, k: &LevelValues) -> Self {
        let r1 = k.k1 / b.b1;
        let r2 = k.k2 / b.b2;
        let max_level = r1 + r2;
        Self {
            eps: max_level - 1.0,
            saddle_levels: (r1, r2),
            max_level,
        }
    }
}

pub fn classify_region(b: &Params, k: &LevelValues) -> Region {
    classify_region_with_tol(b, k, TAU)
}

/// Region of `k` in the parameter plane; boundaries are fenced with the
/// relative tolerance `tol`.
pub fn classify_region_with_tol(b: &Params, k: &LevelValues, tol: f64) -> Region {
    let r1 = k.k1 / b.b1;
    let r2 = k.k2 / b.b2;
    let cause = if r1 <= tol || r2 <= tol {
        Some(SingularCause::KZero)
    } else if (r1 - 1.0).abs() <= tol {
        Some(SingularCause::K1EqB1)
    } else if (r2 - 1.0).abs() <= tol {
        Some(SingularCause::K2EqB2)
    } else if (r1 + r2 - 1.0).abs() <= tol {
        Some(SingularCause::RatioSumOne)
    } else {
        None
    };
    if let Some(cause) = cause {
        return Region {
            tag: RegionTag::Singular,
            subregion: None,
            singular_cause: Some(cause),
        };
    }

    let tag = if r1 + r2 < 1.0 {
        RegionTag::D1
    } else if r1 < 1.0 && r2 < 1.0 {
        RegionTag::D2
    } else if r1 > 1.0 && r2 < 1.0 {
        RegionTag::D3
    } else if r1 < 1.0 {
        RegionTag::D4
    } else {
        RegionTag::D5
    };

    // The band region where the larger b's ratio is below 1 is cut by delta = 0.
    let banded = !b.is_equal_b(tol)
        && ((b.b1 > b.b2 && tag == RegionTag::D4) || (b.b1 < b.b2 && tag == RegionTag::D3));
    let subregion = banded.then(|| {
        let delta = raw_discriminant(b, k);
        let below_line = k.sum() < 2.0 * b.b1.max(b.b2);
        if delta_is_zero(delta, b, k, tol) {
            if below_line {
                Subregion::C1
            } else {
                Subregion::C2
            }
        } else if delta < 0.0 {
            Subregion::Sub4
        } else if below_line {
            Subregion::Sub12
        } else {
            Subregion::Sub3
        }
    });

    Region {
        tag,
        subregion,
        singular_cause: None,
    }
}

/// `g_k(theta1, theta2) = (k1/b1) cos^2 theta1 + (k2/b2) sin^2 theta2`.
#[inline]
pub fn g_value(theta1: f64, theta2: f64, b: &Params, k: &LevelValues) -> f64 {
    let c1 = theta1.cos();
    let s2 = theta2.sin();
    k.k1 / b.b1 * c1 * c1 + k.k2 / b.b2 * s2 * s2
}

/// Gradient of [`g_value`].
pub fn g_gradient(theta1: f64, theta2: f64, b: &Params, k: &LevelValues) -> (f64, f64) {
    (
        -k.k1 / b.b1 * (2.0 * theta1).sin(),
        k.k2 / b.b2 * (2.0 * theta2).sin(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MorseKind {
    Minimum,
    Saddle,
    Maximum,
}

/// Critical level of `g_k`, evaluated per `(b, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GkLevel {
    Zero,
    K1OverB1,
    K2OverB2,
    Sum,
}

impl GkLevel {
    pub fn value(self, b: &Params, k: &LevelValues) -> f64 {
        let d = GkData::new(b, k);
        match self {
            GkLevel::Zero => 0.0,
            GkLevel::K1OverB1 => d.saddle_levels.0,
            GkLevel::K2OverB2 => d.saddle_levels.1,
            GkLevel::Sum => d.max_level,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GkCriticalPoint {
    pub theta1: f64,
    pub theta2: f64,
    pub kind: MorseKind,
    pub level: GkLevel,
}

/// The 16 critical points of `g_k`; their positions do not depend on `k`.
pub fn gk_critical_points() -> Vec<GkCriticalPoint> {
    let groups = [
        ([-FRAC_PI_2, FRAC_PI_2], [0.0, PI], MorseKind::Minimum, GkLevel::Zero),
        (
            [-FRAC_PI_2, FRAC_PI_2],
            [FRAC_PI_2, 3.0 * FRAC_PI_2],
            MorseKind::Saddle,
            GkLevel::K2OverB2,
        ),
        ([0.0, PI], [0.0, PI], MorseKind::Saddle, GkLevel::K1OverB1),
        (
            [0.0, PI],
            [FRAC_PI_2, 3.0 * FRAC_PI_2],
            MorseKind::Maximum,
            GkLevel::Sum,
        ),
    ];
    let mut out = Vec::with_capacity(16);
    for (t1s, t2s, kind, level) in groups {
        for theta1 in t1s {
            for theta2 in t2s {
                out.push(GkCriticalPoint {
                    theta1,
                    theta2,
                    kind,
                    level,
                });
            }
        }
    }
    out
}

/// Pixel mask of `U_k` on an `n x n` toric grid; cell `(i, j)` covers
/// `theta1` index `i` and `theta2` index `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UkGrid {
    n: usize,
    cells: Vec<bool>,
}

impl UkGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Cell centre angles.
    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        cell_center(self.n, i, j)
    }

    /// Membership with toric wrap-around in both indices.
    pub fn get(&self, i: isize, j: isize) -> bool {
        let n = self.n as isize;
        self.cells[(i.rem_euclid(n) * n + j.rem_euclid(n)) as usize]
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    /// 4-connected components of the `true` cells with their Euler
    /// characteristic. The cells are vertices of a cubical complex with an
    /// edge between 4-neighbours and a square for every full 2x2 block.
    pub fn components(&self) -> Vec<GridComponent> {
        let n = self.n;
        let mut label = vec![usize::MAX; n * n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n * n {
            if !self.cells[start] || label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            label[start] = id;
            queue.push_back(start);
            while let Some(c) = queue.pop_front() {
                let (i, j) = (c / n, c % n);
                for (di, dj) in [(1, 0), (n - 1, 0), (0, 1), (0, n - 1)] {
                    let nb = ((i + di) % n) * n + (j + dj) % n;
                    if self.cells[nb] && label[nb] == usize::MAX {
                        label[nb] = id;
                        queue.push_back(nb);
                    }
                }
            }
            comps.push(GridComponent {
                cells: 0,
                euler: 0,
            });
        }

        let mut v = vec![0i64; comps.len()];
        let mut e = vec![0i64; comps.len()];
        let mut f = vec![0i64; comps.len()];
        for i in 0..n {
            for j in 0..n {
                let c = i * n + j;
                let id = label[c];
                if id == usize::MAX {
                    continue;
                }
                let right = ((i + 1) % n) * n + j;
                let up = i * n + (j + 1) % n;
                let diag = ((i + 1) % n) * n + (j + 1) % n;
                v[id] += 1;
                let has_r = label[right] == id;
                let has_u = label[up] == id;
                e[id] += i64::from(has_r) + i64::from(has_u);
                if has_r && has_u && label[diag] == id {
                    f[id] += 1;
                }
            }
        }
        for (id, comp) in comps.iter_mut().enumerate() {
            comp.cells = v[id] as usize;
            comp.euler = v[id] - e[id] + f[id];
        }
        comps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridComponent {
    pub cells: usize,
    pub euler: i64,
}

fn cell_center(n: usize, i: usize, j: usize) -> (f64, f64) {
    let h = TWO_PI / n as f64;
    (-FRAC_PI_2 + (i as f64 + 0.5) * h, (j as f64 + 0.5) * h)
}

pub fn uk_grid(b: &Params, k: &LevelValues, n: usize) -> Result<UkGrid> {
    if n < 16 {
        return Err(Error::InvalidInput(format!("grid size must be >= 16, got {n}")));
    }
    let eps = GkData::new(b, k).eps;
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (t1, t2) = cell_center(n, i, j);
            cells.push(g_value(t1, t2, b, k) > eps);
        }
    }
    Ok(UkGrid { n, cells })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub components: usize,
    pub genus_per_component: Vec<u32>,
    pub euler: i64,
}

impl Topology {
    /// Builds the topology from per-component Euler characteristics.
    pub fn from_component_eulers(eulers: &[i64]) -> Self {
        let genus_per_component = eulers.iter().map(|&x| ((2 - x) / 2) as u32).collect();
        Self {
            components: eulers.len(),
            genus_per_component,
            euler: eulers.iter().sum(),
        }
    }
}

/// Topology of `S_k` from two copies of `closure(U_k)` glued along the
/// boundary circles: each boundary-carrying component of `closure(U_k)`
/// doubles into one closed surface with twice its Euler characteristic, while
/// a component without boundary (the whole torus) gives two disjoint copies.
pub fn topology_via_construction(b: &Params, k: &LevelValues, n: usize) -> Result<Topology> {
    classify_region(b, k).require_smooth()?;
    if n < 64 {
        return Err(Error::InvalidInput(format!(
            "topology grid must be >= 64, got {n}"
        )));
    }
    let grid = uk_grid(b, k, n)?;
    let mut eulers = Vec::new();
    for comp in grid.components() {
        if comp.cells == n * n {
            eulers.push(comp.euler);
            eulers.push(comp.euler);
        } else {
            eulers.push(2 * comp.euler);
        }
    }
    if eulers.iter().any(|&x| x > 2) {
        return Err(Error::InvalidInput(format!(
            "grid n = {n} does not resolve U_k (component Euler characteristics {eulers:?})"
        )));
    }
    Ok(Topology::from_component_eulers(&eulers))
}
