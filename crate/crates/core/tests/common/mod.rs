//! Reference formulas written independently of the library, and instance builders.
#![allow(dead_code)]

use apollonia::ft::FtProblem;
use apollonia::threeball::Model;
use apollonia::{Ball, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

pub fn mid(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

/// `c + s (x - c)/|x - c|`.
pub fn along(c: &[f64], x: &[f64], s: f64) -> Vec<f64> {
    let d = dist(x, c);
    c.iter()
        .zip(x)
        .map(|(ci, xi)| ci + s * (xi - ci) / d)
        .collect()
}

/// Farthest point of `b` from `x`.
pub fn farthest_point(x: &[f64], b: &Ball) -> Vec<f64> {
    along(b.center.coords(), x, -b.radius)
}

/// Nearest point of `b` to `x`.
pub fn nearest_point(x: &[f64], b: &Ball) -> Vec<f64> {
    if dist(x, b.center.coords()) <= b.radius {
        x.to_vec()
    } else {
        along(b.center.coords(), x, b.radius)
    }
}

/// `G(x)` evaluated from its definition.
pub fn sylvester_value(x: &[f64], enclose: &[Ball], intersect: &[Ball]) -> f64 {
    let m = enclose
        .iter()
        .map(|b| dist(x, b.center.coords()) + b.radius);
    let d = intersect
        .iter()
        .map(|b| (dist(x, b.center.coords()) - b.radius).max(0.0));
    m.chain(d).fold(f64::NEG_INFINITY, f64::max)
}

/// `H(x)` evaluated from its definition.
pub fn ft_value(x: &[f64], balls: &[Ball]) -> f64 {
    balls
        .iter()
        .map(|b| (dist(x, b.center.coords()) - b.radius).max(0.0))
        .sum()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rotate(p: [f64; 2], angle: f64, shift: [f64; 2]) -> Point {
    let (s, c) = angle.sin_cos();
    Point::xy(
        c * p[0] - s * p[1] + shift[0],
        s * p[0] + c * p[1] + shift[1],
    )
}

/// Three disjoint balls where the chord between the first two runs through
/// the interior of the third: the solution set is a segment of length at
/// least 0.6.
pub fn chord_through_interior(seed: u64) -> FtProblem {
    let mut g = rng(seed);
    let (r1, r2): (f64, f64) = (g.gen_range(0.3..2.0), g.gen_range(0.3..2.0));
    let rho = g.gen_range(0.5..2.0);
    let h = g.gen_range(-0.8..0.8) * rho;
    let l = r1.max(r2) + rho + g.gen_range(0.5..4.0);
    let angle = g.gen_range(0.0..std::f64::consts::TAU);
    let shift = [g.gen_range(-5.0..5.0), g.gen_range(-5.0..5.0)];
    FtProblem::new(vec![
        Ball::new(rotate([-l, 0.0], angle, shift), r1).unwrap(),
        Ball::new(rotate([l, 0.0], angle, shift), r2).unwrap(),
        Ball::new(rotate([0.0, h], angle, shift), rho).unwrap(),
    ])
    .unwrap()
}

/// Three disjoint balls where the chord between the first two only touches
/// the third: the tangent point is the unique solution.
pub fn tangent_chord(seed: u64) -> FtProblem {
    let mut g = rng(seed);
    let (r1, r2): (f64, f64) = (g.gen_range(0.3..2.0), g.gen_range(0.3..2.0));
    let rho = g.gen_range(0.5..2.0);
    let l = r1.max(r2) + rho + g.gen_range(0.5..4.0);
    let side = if g.gen_bool(0.5) { 1.0 } else { -1.0 };
    let angle = g.gen_range(0.0..std::f64::consts::TAU);
    let shift = [g.gen_range(-5.0..5.0), g.gen_range(-5.0..5.0)];
    FtProblem::new(vec![
        Ball::new(rotate([-l, 0.0], angle, shift), r1).unwrap(),
        Ball::new(rotate([l, 0.0], angle, shift), r2).unwrap(),
        Ball::new(rotate([0.0, side * rho], angle, shift), rho).unwrap(),
    ])
    .unwrap()
}

/// Tangent point of [`tangent_chord`], recomputed from the same seed.
pub fn tangent_chord_point(seed: u64) -> Point {
    let mut g = rng(seed);
    let _ = (g.gen_range(0.3..2.0), g.gen_range(0.3..2.0));
    let _rho: f64 = g.gen_range(0.5..2.0);
    let _l: f64 = g.gen_range(0.5..4.0);
    let _side = g.gen_bool(0.5);
    let angle = g.gen_range(0.0..std::f64::consts::TAU);
    let shift = [g.gen_range(-5.0..5.0), g.gen_range(-5.0..5.0)];
    rotate([0.0, 0.0], angle, shift)
}

/// Radius-`r` balls centered at the vertices of an equilateral triangle of circumradius `big_r`.
pub fn equilateral(big_r: f64, r: f64) -> Vec<Ball> {
    [90.0_f64, 210.0, 330.0]
        .iter()
        .map(|d| {
            let t = d.to_radians();
            Ball::disk(big_r * t.cos(), big_r * t.sin(), r)
        })
        .collect()
}

/// Recomputes every named auxiliary point of a construction trace from
/// its defining formula; returns the largest discrepancy.
pub fn trace_discrepancy(
    model: Model,
    step: u8,
    aux: &std::collections::BTreeMap<String, Point>,
    center: &Point,
    balls: &[Ball; 3],
) -> Result<f64, String> {
    let a = |i: usize| balls[i].center.coords().to_vec();
    let get = |name: &str| -> Result<Vec<f64>, String> {
        aux.get(name)
            .map(|p| p.coords().to_vec())
            .ok_or_else(|| format!("missing aux point {name}"))
    };
    let mut worst: f64 = 0.0;
    let mut check = |name: &str, expected: &[f64]| -> Result<(), String> {
        worst = worst.max(dist(&get(name)?, expected));
        Ok(())
    };
    let idx = |prefix: &str| -> Option<usize> {
        (1..=3)
            .find(|i| aux.contains_key(&format!("{prefix}{i}")))
            .map(|i| i - 1)
    };
    match (model, step) {
        (Model::IV, 0) => {
            let x = get("common")?;
            for b in balls {
                if dist(&x, b.center.coords()) > b.radius + 1e-10 {
                    return Err("common point outside a ball".into());
                }
            }
            check("common", center.coords())?;
        }
        (_, 1) if model != Model::IV => {
            let i = idx("a").ok_or("no step-1 point")?;
            check(&format!("a{}", i + 1), &a(i))?;
            check(&format!("a{}", i + 1), center.coords())?;
        }
        (Model::I, 2) => {
            let i = idx("u").ok_or("no u point")?;
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let n = i + 1;
            let u = farthest_point(&a(j), &balls[k]);
            let v = farthest_point(&a(k), &balls[j]);
            let w = mid(&u, &v);
            check(&format!("u{n}"), &u)?;
            check(&format!("v{n}"), &v)?;
            check(&format!("w{n}"), &w)?;
            check(&format!("t{n}"), &farthest_point(&w, &balls[i]))?;
            check(&format!("w{n}"), center.coords())?;
        }
        (Model::II, 2) => {
            let i = idx("u").ok_or("no u point")?;
            let j = 1 - i;
            let n = i + 1;
            let u = farthest_point(&a(2), &balls[i]);
            let v = nearest_point(&a(i), &balls[2]);
            let w = mid(&u, &v);
            check(&format!("u{n}"), &u)?;
            check(&format!("v{n}"), &v)?;
            check(&format!("w{n}"), &w)?;
            check(&format!("t{n}"), &farthest_point(&w, &balls[j]))?;
            check(&format!("w{n}"), center.coords())?;
        }
        (Model::II, 3) => {
            let x1 = farthest_point(&a(1), &balls[0]);
            let x2 = farthest_point(&a(0), &balls[1]);
            let y = mid(&x1, &x2);
            check("x1", &x1)?;
            check("x2", &x2)?;
            check("y", &y)?;
            check("z", &nearest_point(&y, &balls[2]))?;
            check("y", center.coords())?;
        }
        (Model::III, 2) => {
            let i = idx("c").ok_or("no c point")?;
            let j = 1 - i;
            let n = i + 1;
            let c = farthest_point(&a(i + 1), &balls[0]);
            let d = nearest_point(&a(0), &balls[i + 1]);
            let e = mid(&c, &d);
            check(&format!("c{n}"), &c)?;
            check(&format!("d{n}"), &d)?;
            check(&format!("e{n}"), &e)?;
            check(&format!("f{n}"), &nearest_point(&e, &balls[j + 1]))?;
            check(&format!("e{n}"), center.coords())?;
        }
        (Model::III, 3) => {
            let y1 = nearest_point(&a(2), &balls[1]);
            let y2 = nearest_point(&a(1), &balls[2]);
            let z = mid(&y1, &y2);
            check("y1", &y1)?;
            check("y2", &y2)?;
            check("z", &z)?;
            check("t", &farthest_point(&z, &balls[0]))?;
            check("z", center.coords())?;
        }
        (Model::IV, 1) => {
            let j = idx("u").ok_or("no u point")?;
            let (k, l) = ((j + 1) % 3, (j + 2) % 3);
            let n = j + 1;
            let u = along(&a(k), &a(l), balls[k].radius);
            let v = along(&a(l), &a(k), balls[l].radius);
            let m = mid(&u, &v);
            check(&format!("u{n}"), &u)?;
            check(&format!("v{n}"), &v)?;
            check(&format!("m{n}"), &m)?;
            check(&format!("x{n}"), &nearest_point(&m, &balls[j]))?;
            check(&format!("m{n}"), center.coords())?;
        }
        _ => {
            // tangent-ball step
            check("center", center.coords())?;
        }
    }
    Ok(worst)
}
