mod common;

use apollonia::ft::{
    ft_active_set, ft_certificate, ft_objective, ft_uniqueness_test, reduce_to_ft2, solve_ft,
    solve_ft_subgradient, FtProblem, FtSolutionKind, FtUniqueness, FT_TOL,
};
use apollonia::oracle::{ft_oracle, grid_minimize, random_instance, GridSpec, InstanceKind};
use apollonia::subgradient::SubgradientConfig;
use apollonia::{Ball, Point};
use proptest::prelude::*;
use rand::Rng;

use common::*;

fn random_ft(seed: u64) -> FtProblem {
    random_instance(seed, InstanceKind::Ft).ft().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn objective_is_convex(seed in 0u64..10_000, t in 0.0..=1.0f64, x in prop::array::uniform2(-15.0..15.0f64), y in prop::array::uniform2(-15.0..15.0f64)) {
        let p = random_ft(seed);
        let z = [t * x[0] + (1.0 - t) * y[0], t * x[1] + (1.0 - t) * y[1]];
        let h = |v: &[f64]| ft_value(v, &p.balls);
        prop_assert!(h(&z) <= t * h(&x) + (1.0 - t) * h(&y) + 1e-12 * (1.0 + h(&x) + h(&y)));
        let lib = ft_objective(&Point::xy(x[0], x[1]), &p).unwrap();
        prop_assert!((lib - h(&x)).abs() <= 1e-12 * (1.0 + lib));
    }
}

#[test]
fn segment_points_all_attain_the_minimum() {
    let mut g = rng(3);
    let mut seen = 0;
    let problems = (0..20)
        .map(chord_through_interior)
        .chain((0..300).map(random_ft));
    for p in problems {
        let s = solve_ft(&p);
        let FtSolutionKind::Segment { start, end } = &s.kind else {
            continue;
        };
        seen += 1;
        let mut samples = vec![start.clone(), end.clone(), start.midpoint(end)];
        samples.extend((0..10).map(|_| start.lerp(end, g.gen_range(0.0..1.0))));
        for x in samples {
            assert!(
                (ft_value(x.coords(), &p.balls) - s.value).abs() <= 1e-9,
                "{:?}",
                p.balls
            );
        }
    }
    assert!(seen >= 20);
}

#[test]
fn region_points_have_zero_value() {
    let mut g = rng(4);
    let p = FtProblem::new(equilateral(0.5, 1.0)).unwrap();
    let s = solve_ft(&p);
    let FtSolutionKind::Region { balls } = &s.kind else {
        panic!("{:?}", s.kind);
    };
    let mut inside = 0;
    while inside < 100 {
        let x = [g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)];
        if balls
            .iter()
            .all(|b| dist(&x, b.center.coords()) <= b.radius)
        {
            inside += 1;
            assert!(ft_value(&x, &p.balls) == 0.0);
        }
    }
}

#[test]
fn no_sample_beats_the_solution() {
    let mut g = rng(5);
    for seed in 0..30 {
        let p = random_ft(seed);
        let s = solve_ft(&p);
        let scale = p
            .balls
            .iter()
            .map(|b| b.center.norm() + b.radius)
            .fold(1.0, f64::max);
        for _ in 0..10_000 {
            let x = [g.gen_range(-scale..scale), g.gen_range(-scale..scale)];
            assert!(s.value <= ft_value(&x, &p.balls) + 1e-9, "seed {seed}");
        }
    }
}

#[test]
fn certificate_passes_at_solutions_and_fails_nearby() {
    for seed in 0..200 {
        let p = random_ft(500 + seed);
        let s = solve_ft(&p);
        assert!(
            ft_certificate(&s.representative, &p, FT_TOL)
                .unwrap()
                .passed(),
            "seed {seed}"
        );
        if ft_uniqueness_test(&p).unwrap() == FtUniqueness::Unique {
            let scale = p.balls.iter().map(|b| b.radius).fold(1.0, f64::max);
            for k in 0..8 {
                let t = std::f64::consts::TAU * k as f64 / 8.0;
                let x = s.representative.coords();
                let y = Point::xy(x[0] + 0.01 * scale * t.cos(), x[1] + 0.01 * scale * t.sin());
                assert!(
                    !ft_certificate(&y, &p, FT_TOL).unwrap().passed(),
                    "seed {seed} direction {k}"
                );
            }
        }
    }
}

#[test]
fn two_active_balls_put_the_point_on_their_common_boundary() {
    let mut checked = 0;
    for seed in 0..500 {
        let p = random_ft(seed);
        let s = solve_ft(&p);
        let x = &s.representative;
        let active = ft_active_set(x, &p).unwrap();
        if active.len() != 2 {
            continue;
        }
        checked += 1;
        let depth = active
            .iter()
            .map(|&i| p.balls[i].radius - dist(x.coords(), p.balls[i].center.coords()))
            .fold(f64::INFINITY, f64::min);
        assert!(depth.abs() <= 1e-9, "seed {seed}: depth {depth:e}");
    }
    assert!(checked > 0);
}

/// `Σ_enclose M + Σ_intersect D` from the definition.
fn mixed_value(x: &[f64], enclose: &[Ball], intersect: &[Ball]) -> f64 {
    enclose
        .iter()
        .map(|b| dist(x, b.center.coords()) + b.radius)
        .chain(
            intersect
                .iter()
                .map(|b| (dist(x, b.center.coords()) - b.radius).max(0.0)),
        )
        .sum()
}

#[test]
fn reduction_keeps_the_minimum() {
    for seed in 0..60u64 {
        let inst = random_ft(9_000 + seed);
        let k = (seed % 4) as usize;
        let (enclose, intersect) = inst.balls.split_at(k);
        let p = reduce_to_ft2(enclose, intersect).unwrap();
        let s = solve_ft(&p);
        let f = |x: &[f64]| mixed_value(x, enclose, intersect);
        let spec = GridSpec::around(inst.balls.iter(), f(s.representative.coords()));
        let o = grid_minimize(f, &spec);
        assert!(
            (s.original_value - o.value).abs() <= 3.0 * o.resolution,
            "seed {seed}: {} vs {}",
            s.original_value,
            o.value
        );
        assert!((f(s.representative.coords()) - s.original_value).abs() <= 1e-9);
    }
}

#[test]
fn subgradient_matches_construction() {
    let cfg = SubgradientConfig::default();
    for seed in 0..100 {
        let p = random_ft(seed);
        let exact = solve_ft(&p);
        let sub = solve_ft_subgradient(&p, &cfg);
        assert!((exact.value - sub.value).abs() <= 1e-4, "seed {seed}");
    }
}

#[test]
fn oracle_agrees_with_analytic_values() {
    let seg = FtProblem::new(vec![
        Ball::disk(-3.0, 0.0, 1.0),
        Ball::disk(3.0, 0.0, 1.0),
        Ball::disk(0.0, 0.0, 1.0),
    ])
    .unwrap();
    assert!((ft_oracle(&seg).value - 4.0).abs() <= 3e-3);
    let tri = FtProblem::new(equilateral(1.0, 0.1)).unwrap();
    assert!((ft_oracle(&tri).value - 2.7).abs() <= 3e-3);
}

#[test]
fn tangent_chords_are_unique_and_solved_at_the_touching_point() {
    for seed in 0..20 {
        let p = tangent_chord(seed);
        assert_eq!(ft_uniqueness_test(&p).unwrap(), FtUniqueness::Unique);
        let s = solve_ft(&p);
        let x = tangent_chord_point(seed);
        assert!(
            (ft_value(x.coords(), &p.balls) - s.value).abs() <= 1e-9,
            "seed {seed}"
        );
        assert!(!matches!(s.kind, FtSolutionKind::Segment { .. }));
        let q = chord_through_interior(seed);
        assert!(matches!(
            ft_uniqueness_test(&q).unwrap(),
            FtUniqueness::NonUnique(_)
        ));
    }
}

#[test]
fn coincident_centers_are_rejected() {
    assert!(FtProblem::new(vec![
        Ball::disk(0.0, 0.0, 1.0),
        Ball::disk(0.0, 0.0, 2.0),
        Ball::disk(1.0, 0.0, 1.0)
    ])
    .is_err());
    assert!(FtProblem::new(vec![Ball::disk(0.0, 0.0, 1.0), Ball::disk(1.0, 0.0, 1.0)]).is_err());
}
