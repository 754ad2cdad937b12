//! Brute-force reference minimization, used to check the exact and
//! iterative solvers: nested grid search in dimensions 1 to 3, random
//! multistart pattern search above that, sublevel-set diameters for
//! uniqueness checks, and a seeded instance generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ft::FtProblem;
use crate::geom::{Ball, Point};
use crate::sylvester::SylvesterProblem;
use crate::threeball::Model;

/// Nested grids: a full grid over the box at `initial_step`, then `levels - 1`
/// finer grids, each `shrink` times finer, on a window around the incumbent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub initial_step: f64,
    pub levels: usize,
    pub shrink: f64,
}

impl GridSpec {
    /// Hull of the centers inflated by `max radius + bound`, with the default
    /// schedule of 4 levels from step 1 down to 1e-3.
    pub fn around<'a>(balls: impl IntoIterator<Item = &'a Ball>, bound: f64) -> Self {
        let balls: Vec<&Ball> = balls.into_iter().collect();
        let n = balls[0].dim();
        let pad = balls.iter().map(|b| b.radius).fold(0.0, f64::max) + bound.max(0.0);
        let lower = (0..n)
            .map(|k| {
                balls
                    .iter()
                    .map(|b| b.center[k])
                    .fold(f64::INFINITY, f64::min)
                    - pad
            })
            .collect();
        let upper = (0..n)
            .map(|k| {
                balls
                    .iter()
                    .map(|b| b.center[k])
                    .fold(f64::NEG_INFINITY, f64::max)
                    + pad
            })
            .collect();
        Self {
            lower,
            upper,
            initial_step: 1.0,
            levels: 4,
            shrink: 10.0,
        }
    }

    pub fn final_step(&self) -> f64 {
        self.initial_step / self.shrink.powi(self.levels as i32 - 1)
    }

    /// Adds levels until the final step is at most `step`.
    pub fn refined_to(mut self, step: f64) -> Self {
        while self.final_step() > step {
            self.levels += 1;
        }
        self
    }

    fn dim(&self) -> usize {
        self.lower.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best: Point,
    pub value: f64,
    /// Final grid step (pattern step for the multistart search).
    pub resolution: f64,
    pub evaluations: usize,
    /// The level-0 incumbent sat on the box boundary: the box may exclude the minimizer.
    pub on_boundary: bool,
    /// Produced by multistart pattern search rather than a grid.
    pub weak: bool,
    /// Best value after each level.
    pub level_values: Vec<f64>,
}

/// Summary of `{x : f(x) <= f_best + epsilon}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSet {
    pub epsilon: f64,
    /// Boundary points located (one per ray).
    pub count: usize,
    pub diameter: f64,
}

const GRID_DIM_LIMIT: usize = 3;
const MAX_RECENTER: usize = 200;

/// Minimizes `f` on the nested grids of `spec`. Ties between nodes go to
/// the node visited first, so results do not depend on anything but `spec`.
pub fn grid_minimize(f: impl Fn(&[f64]) -> f64, spec: &GridSpec) -> OracleResult {
    let n = spec.dim();
    if n > GRID_DIM_LIMIT {
        return multistart(&f, spec, 0);
    }
    let mut evaluations = 0usize;

    let counts: Vec<usize> = (0..n)
        .map(|k| ((spec.upper[k] - spec.lower[k]) / spec.initial_step).ceil() as usize + 1)
        .collect();
    let (mut best, mut best_val, idx) = scan(
        &f,
        &spec.lower,
        spec.initial_step,
        &counts,
        &mut evaluations,
    );
    let on_boundary = idx.iter().zip(&counts).any(|(&i, &c)| i == 0 || i + 1 == c);
    let mut level_values = vec![best_val];

    let half: usize = match n {
        1 => 20,
        2 => 5,
        _ => 2,
    };
    let mut step = spec.initial_step;
    for _ in 1..spec.levels {
        let width = half as f64 * step;
        step /= spec.shrink;
        let per = (2.0 * width / step).round() as usize + 1;
        let counts = vec![per; n];
        for _ in 0..MAX_RECENTER {
            let lower: Vec<f64> = best.iter().map(|c| c - width).collect();
            let (p, v, idx) = scan(&f, &lower, step, &counts, &mut evaluations);
            let moved = v < best_val;
            if moved {
                best = p;
                best_val = v;
            }
            let edge = idx.iter().any(|&i| i == 0 || i + 1 == per);
            if !(moved && edge) {
                break;
            }
        }
        level_values.push(best_val);
    }

    OracleResult {
        best: Point::from_vec(best),
        value: best_val,
        resolution: step,
        evaluations,
        on_boundary,
        weak: false,
        level_values,
    }
}

/// Evaluates the grid `lower + i * step`, `0 <= i < counts`, in odometer order.
fn scan(
    f: &impl Fn(&[f64]) -> f64,
    lower: &[f64],
    step: f64,
    counts: &[usize],
    evaluations: &mut usize,
) -> (Vec<f64>, f64, Vec<usize>) {
    let n = lower.len();
    let mut idx = vec![0usize; n];
    let mut x = lower.to_vec();
    let mut best = (x.clone(), f64::INFINITY, idx.clone());
    loop {
        for k in 0..n {
            x[k] = lower[k] + idx[k] as f64 * step;
        }
        let v = f(&x);
        *evaluations += 1;
        if v < best.1 {
            best = (x.clone(), v, idx.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return best;
            }
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Seeded multistart pattern search for dimensions where grids are too large.
fn multistart(f: &impl Fn(&[f64]) -> f64, spec: &GridSpec, seed: u64) -> OracleResult {
    let n = spec.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0usize;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut level_values = Vec::new();
    let target = spec.final_step() * 1e-3;
    let span = (0..n)
        .map(|k| spec.upper[k] - spec.lower[k])
        .fold(0.0, f64::max);
    for _ in 0..16 {
        let mut x: Vec<f64> = (0..n)
            .map(|k| rng.gen_range(spec.lower[k]..=spec.upper[k]))
            .collect();
        let mut fx = f(&x);
        evaluations += 1;
        let mut h = span / 4.0;
        while h > target {
            let mut dirs: Vec<Vec<f64>> = (0..n)
                .map(|k| (0..n).map(|m| if m == k { 1.0 } else { 0.0 }).collect())
                .collect();
            for _ in 0..2 * n {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = crate::geom::norm(&v);
                if norm > 1e-6 {
                    dirs.push(v.iter().map(|a| a / norm).collect());
                }
            }
            let mut improved = false;
            for d in &dirs {
                for sgn in [1.0, -1.0] {
                    let y: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + sgn * h * b).collect();
                    let fy = f(&y);
                    evaluations += 1;
                    if fy < fx {
                        x = y;
                        fx = fy;
                        improved = true;
                    }
                }
            }
            if !improved {
                h /= 2.0;
            }
        }
        level_values.push(fx);
        if best.as_ref().is_none_or(|b| fx < b.1) {
            best = Some((x, fx));
        }
    }
    let (x, v) = best.expect("at least one start");
    let on_boundary = (0..n).any(|k| x[k] <= spec.lower[k] || x[k] >= spec.upper[k]);
    OracleResult {
        best: Point::from_vec(x),
        value: v,
        resolution: target,
        evaluations,
        on_boundary,
        weak: true,
        level_values,
    }
}

/// Minimizes a convex `f` over the box of `spec` by nested golden-section
/// searches, one coordinate per level. Partial minima of a convex function
/// are convex, so every level is a unimodal line search and the value found
/// is exact up to rounding, where grids can stall in curved flat valleys.
/// Cost grows like `iters^n`; meant for `n <= 3`.
pub fn golden_minimize(f: impl Fn(&[f64]) -> f64, spec: &GridSpec) -> OracleResult {
    let n = spec.dim();
    let span = (0..n)
        .map(|k| spec.upper[k] - spec.lower[k])
        .fold(0.0, f64::max);
    let resolution = 1e-13 * (1.0 + span);
    let mut evaluations = 0usize;
    // fix one coordinate at a time at the argmin of the partial minimum
    let mut best = spec.lower.clone();
    let mut value = f64::INFINITY;
    for k in 0..n {
        let (t, v) = golden_section(spec.lower[k], spec.upper[k], resolution, |t| {
            let mut x = best.clone();
            x[k] = t;
            partial_min(&f, spec, k + 1, &mut x, resolution, &mut evaluations)
        });
        best[k] = t;
        value = v;
    }
    OracleResult {
        best: Point::from_vec(best),
        value,
        resolution,
        evaluations,
        on_boundary: false,
        weak: false,
        level_values: vec![value],
    }
}

/// `min f` over coordinates `k..` of `x` with coordinates `..k` fixed.
fn partial_min(
    f: &impl Fn(&[f64]) -> f64,
    spec: &GridSpec,
    k: usize,
    x: &mut Vec<f64>,
    resolution: f64,
    evaluations: &mut usize,
) -> f64 {
    if k == spec.dim() {
        *evaluations += 1;
        return f(x);
    }
    golden_section(spec.lower[k], spec.upper[k], resolution, |t| {
        x[k] = t;
        partial_min(f, spec, k + 1, x, resolution, evaluations)
    })
    .1
}

/// Golden-section search of a unimodal `g` on `[a, b]`: `(argmin, min)`.
fn golden_section(
    mut a: f64,
    mut b: f64,
    resolution: f64,
    mut g: impl FnMut(f64) -> f64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while b - a > resolution {
        if gc <= gd {
            (b, d, gd) = (d, c, gc);
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            (a, c, gc) = (c, d, gd);
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    if gc <= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Diameter of the `epsilon`-sublevel set around `center`, located by
/// bisection along `rays` directions (planar) or random directions.
pub fn epsilon_optimal_set(
    f: impl Fn(&[f64]) -> f64,
    center: &Point,
    f_best: f64,
    epsilon: f64,
    rays: usize,
) -> EpsilonSet {
    let n = center.dim();
    let level = f_best + epsilon;
    let c = center.coords();
    let dirs: Vec<Vec<f64>> = if n == 2 {
        (0..rays)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / rays as f64;
                vec![t.cos(), t.sin()]
            })
            .collect()
    } else if n == 1 {
        vec![vec![1.0], vec![-1.0]]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        (0..rays)
            .filter_map(|_| {
                let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm = crate::geom::norm(&v);
                (norm > 1e-6).then(|| v.iter().map(|a| a / norm).collect())
            })
            .collect()
    };
    let at = |d: &[f64], t: f64| -> Vec<f64> { c.iter().zip(d).map(|(a, b)| a + t * b).collect() };
    let reach = |d: &[f64]| -> Vec<f64> {
        if f(c) > level {
            return c.to_vec();
        }
        let mut hi = 1e-12_f64.max(epsilon);
        while f(&at(d, hi)) <= level && hi < 1e6 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(&at(d, mid)) <= level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        at(d, lo)
    };
    let farthest_pair = |ends: &[Vec<f64>]| -> (f64, usize, usize) {
        let mut best = (0.0, 0, 0);
        for (i, a) in ends.iter().enumerate() {
            for (j, b) in ends.iter().enumerate().skip(i + 1) {
                let d = crate::geom::dist(a, b);
                if d > best.0 {
                    best = (d, i, j);
                }
            }
        }
        best
    };
    let mut ends: Vec<Vec<f64>> = dirs.iter().map(|d| reach(d)).collect();
    // thin sublevel sets (segments) are missed by fixed rays; aim extra rays
    // along the longest chord found so far
    for _ in 0..4 {
        let (d, i, j) = farthest_pair(&ends);
        if d == 0.0 {
            break;
        }
        let dir: Vec<f64> = ends[i]
            .iter()
            .zip(&ends[j])
            .map(|(a, b)| (a - b) / d)
            .collect();
        let back: Vec<f64> = dir.iter().map(|v| -v).collect();
        ends.push(reach(&dir));
        ends.push(reach(&back));
    }
    if n == 2 && rays > 0 {
        // a thin set is seen only by rays within ~width/length of its axis:
        // maximize the chord through `center` over the angle near the best ray
        let ray = |t: f64| [t.cos(), t.sin()];
        let chord = |t: f64| {
            let (a, b) = (reach(&ray(t)), reach(&ray(t + std::f64::consts::PI)));
            (crate::geom::dist(&a, &b), a, b)
        };
        let step = std::f64::consts::TAU / rays as f64;
        let opposite = |i: usize| crate::geom::dist(&ends[i], &ends[(i + rays / 2) % rays]);
        let k = (0..rays)
            .max_by(|&i, &j| opposite(i).total_cmp(&opposite(j)))
            .unwrap_or(0);
        let theta = step * k as f64;
        let (t, _) = golden_section(theta - step, theta + step, 1e-15, |t| -chord(t).0);
        let (_, a, b) = chord(t);
        ends.push(a);
        ends.push(b);
    }
    let diameter = farthest_pair(&ends).0;
    EpsilonSet {
        epsilon,
        count: ends.len(),
        diameter,
    }
}

/// Grid oracle for `G` with the default box and schedule.
pub fn sylvester_oracle(p: &SylvesterProblem) -> OracleResult {
    grid_minimize(|x| p.value_raw(x), &sylvester_grid(p))
}

pub fn sylvester_grid(p: &SylvesterProblem) -> GridSpec {
    let balls: Vec<&Ball> = p.enclose.iter().chain(&p.intersect).collect();
    let centroid = centroid(&balls);
    GridSpec::around(balls, p.value_raw(&centroid))
}

/// Grid oracle for `H` with the default box and schedule.
pub fn ft_oracle(p: &FtProblem) -> OracleResult {
    grid_minimize(|x| p.value_raw(x), &ft_grid(p))
}

pub fn ft_grid(p: &FtProblem) -> GridSpec {
    let balls: Vec<&Ball> = p.balls.iter().collect();
    let centroid = centroid(&balls);
    GridSpec::around(balls, p.value_raw(&centroid))
}

fn centroid(balls: &[&Ball]) -> Vec<f64> {
    let n = balls[0].dim();
    (0..n)
        .map(|k| balls.iter().map(|b| b.center[k]).sum::<f64>() / balls.len() as f64)
        .collect()
}

/// Which family `random_instance` draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum InstanceKind {
    /// Three planar balls with the model's enclose/intersect split.
    Model { model: Model },
    /// Three planar balls to intersect, pairwise centers at least 1e-3 apart.
    Ft,
    General {
        dim: usize,
        enclose: usize,
        intersect: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub enclose: Vec<Ball>,
    pub intersect: Vec<Ball>,
}

impl Instance {
    pub fn sylvester(&self) -> Result<SylvesterProblem> {
        SylvesterProblem::new(self.enclose.clone(), self.intersect.clone())
    }

    pub fn ft(&self) -> Result<FtProblem> {
        crate::ft::reduce_to_ft2(&self.enclose, &self.intersect)
    }
}

pub const CENTER_RANGE: f64 = 10.0;
pub const RADIUS_RANGE: (f64, f64) = (0.1, 3.0);
const MIN_SEPARATION: f64 = 1e-3;

/// Deterministic per seed: centers uniform in `[-10, 10]^n`, radii uniform in `[0.1, 3]`.
pub fn random_instance(seed: u64, kind: InstanceKind) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (dim, ne, ni) = match kind {
        InstanceKind::Model { model } => (2, model.enclose_count(), 3 - model.enclose_count()),
        InstanceKind::Ft => (2, 0, 3),
        InstanceKind::General {
            dim,
            enclose,
            intersect,
        } => (dim, enclose, intersect),
    };
    let draw = |rng: &mut ChaCha8Rng| {
        let c: Vec<f64> = (0..dim)
            .map(|_| rng.gen_range(-CENTER_RANGE..=CENTER_RANGE))
            .collect();
        let r = rng.gen_range(RADIUS_RANGE.0..=RADIUS_RANGE.1);
        Ball::new(Point::from_vec(c), r).expect("finite draw")
    };
    let mut balls: Vec<Ball> = Vec::with_capacity(ne + ni);
    while balls.len() < ne + ni {
        let b = draw(&mut rng);
        let separated = balls
            .iter()
            .all(|o| o.center.dist(&b.center) >= MIN_SEPARATION);
        if kind != InstanceKind::Ft || separated {
            balls.push(b);
        }
    }
    let intersect = balls.split_off(ne);
    Instance {
        enclose: balls,
        intersect,
    }
}
