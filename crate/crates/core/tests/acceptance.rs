//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any failure.

use std::time::{Duration, Instant};

use boundary_pick::blaschke::BlaschkeProduct;
use boundary_pick::fuzz::{
    random_blaschke, random_boundary_points, random_instance, random_unimodular, trial_rng, FuzzConfig, Instance,
    MIN_SEPARATION, ZERO_RADIUS,
};
use boundary_pick::hermitian::{max_abs, max_abs_diff, CMatrix, HermitianReport, Tolerances, HERMITIAN_TOL};
use boundary_pick::pick_problem::{complete_to_pd, PickMatrix};
use boundary_pick::realization::{observability_rank, realize, sp_via_realization};
use boundary_pick::schwarz_pick::{boundary_jets, sp_boundary_radial, sp_boundary_structured};
use boundary_pick::uniqueness::{decide, Certificate, ContactProblem, DecideOptions, Tag};
use num_complex::Complex64;
use rand::RngExt;

const SEED: u64 = 42;
const RANK_TOL: f64 = 1e-8;
const PD_TOL: f64 = 1e-10;
const ROUTE_TOL: f64 = 1e-8;
const RADIAL_RADIUS: f64 = 1.0 - 1e-5;
const RADIAL_REL_TOL: f64 = 1e-3;
const ROUND_TRIP_TOL: f64 = 1e-9;
const CJ_TOL: f64 = 1e-10;
const UNITARITY_TOL: f64 = 1e-12;
const OBSERVABILITY_TOL: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn suite() -> Vec<Instance> {
    let config = FuzzConfig {
        trials: 200,
        degree_max: 6,
        points_max: 3,
        order_max: 3,
        seed: SEED,
        tolerances: Tolerances {
            rank: RANK_TOL,
            pd: PD_TOL,
        },
    };
    (0..config.trials as u64).map(|t| random_instance(&config, t)).collect()
}

fn structured(inst: &Instance) -> CMatrix {
    sp_boundary_structured(
        &boundary_jets(&inst.b, &inst.points, &inst.orders).unwrap(),
        &inst.orders,
    )
    .unwrap()
    .flat
}

fn rank_law(suite: &[Instance]) -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    for inst in suite {
        let p = sp_boundary_structured(
            &boundary_jets(&inst.b, &inst.points, &inst.orders).unwrap(),
            &inst.orders,
        )
        .unwrap();
        let r = HermitianReport::new(
            &p.to_hermitian().unwrap(),
            Tolerances {
                rank: RANK_TOL,
                pd: PD_TOL,
            },
        )
        .unwrap();
        let k: usize = inst.orders.iter().sum();
        if r.numerical_rank != k.min(inst.b.degree()) {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && elapsed < Duration::from_secs(10),
        format!(
            "{} instances, {failures} rank failures, {:.3} s (limit 10 s)",
            suite.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn route_agreement(suite: &[Instance]) -> Outcome {
    let mut worst_route: f64 = 0.0;
    let mut worst_radial: f64 = 0.0;
    let mut radial_cases = 0;
    for inst in suite {
        let s = structured(inst);
        let r = sp_via_realization(&realize(&inst.b), &inst.points, &inst.orders)
            .unwrap()
            .flat;
        worst_route = worst_route.max(max_abs_diff(&s, &r));
        if inst.orders.iter().all(|&k| k <= 2) {
            radial_cases += 1;
            let (rad, _) = sp_boundary_radial(&inst.b, &inst.points, &inst.orders, &[RADIAL_RADIUS]).unwrap();
            let gap = max_abs_diff(&s, &rad.flat);
            let norm = max_abs(&s);
            let rel = if norm > 0.0 { gap / norm } else { gap };
            worst_radial = worst_radial.max(rel);
        }
    }
    outcome(
        worst_route <= ROUTE_TOL && worst_radial <= RADIAL_REL_TOL,
        format!(
            "structured vs realization max {worst_route:.2e} (limit {ROUTE_TOL:.0e}); radial at r = 1-1e-5 max relative {worst_radial:.2e} over {radial_cases} cases with k <= 2 (limit {RADIAL_REL_TOL:.0e})"
        ),
    )
}

fn hermitianness(suite: &[Instance]) -> Outcome {
    let mut worst: f64 = 0.0;
    for inst in suite {
        let s = structured(inst);
        let defect = max_abs_diff(&s, &s.adjoint());
        worst = worst.max(defect / max_abs(&s).max(1.0));
    }
    outcome(
        worst <= HERMITIAN_TOL,
        format!("max |P - P*| / max(1, |P|) = {worst:.2e} (limit {HERMITIAN_TOL:.0e})"),
    )
}

fn single_point_identity() -> Outcome {
    let start = Instant::now();
    let problem = ContactProblem::new(BlaschkeProduct::power(1), vec![Complex64::new(1.0, 0.0)], vec![3]).unwrap();
    let v = decide(&problem, &DecideOptions::default()).unwrap();
    let elapsed = start.elapsed();
    let ok = v.tag == Tag::Unique
        && v.pick.matrix.shape() == (2, 2)
        && v.pick.numerical_rank == 1
        && v.pick.psd
        && !v.pick.pd
        && elapsed < Duration::from_millis(100);
    outcome(
        ok,
        format!(
            "verdict {:?}, P {}x{}, rank {}, eigenvalues {:?}, {:.2e} s (limit 0.1 s)",
            v.tag,
            v.pick.matrix.nrows(),
            v.pick.matrix.ncols(),
            v.pick.numerical_rank,
            v.pick.eigenvalues,
            elapsed.as_secs_f64()
        ),
    )
}

fn level_set_family() -> Outcome {
    let mut unique = 0;
    let mut notes = Vec::new();
    for trial in 0..20u64 {
        let mut rng = trial_rng(SEED + 1, trial);
        let d = rng.random_range(1..=5usize);
        let b = random_blaschke(&mut rng, d, ZERO_RADIUS);
        let tau = random_unimodular(&mut rng);
        let points = b.level_set(tau).unwrap();
        let mut m = vec![1; d];
        m[0] = 3;
        match ContactProblem::new(b, points, m).and_then(|p| decide(&p, &DecideOptions::default())) {
            Ok(v) if v.tag == Tag::Unique => unique += 1,
            Ok(v) => notes.push(format!("trial {trial}: {:?}", v.tag)),
            Err(e) => notes.push(format!("trial {trial}: {e}")),
        }
    }
    let mut detail = format!("{unique}/20 unique");
    if !notes.is_empty() {
        detail += &format!(" ({})", notes.join("; "));
    }
    outcome(unique == 20, detail)
}

fn sharpness() -> Outcome {
    let mut worst_ratio = f64::INFINITY;
    let mut worst_modified = f64::INFINITY;
    let mut worst_round_trip: f64 = 0.0;
    let mut even_points = 0;
    let mut notes = Vec::new();
    let mut accepted = 0;
    let mut trial = 0u64;
    while accepted < 50 {
        let mut rng = trial_rng(SEED + 2, trial);
        trial += 1;
        let d = rng.random_range(1..=6usize);
        let n = rng.random_range(1..=3usize);
        let m: Vec<usize> = (0..n).map(|_| rng.random_range(1..=4usize)).collect();
        if m.iter().map(|&mi| mi.div_ceil(2)).sum::<usize>() > d {
            continue;
        }
        accepted += 1;
        let b = random_blaschke(&mut rng, d, ZERO_RADIUS);
        let points = random_boundary_points(&mut rng, n, MIN_SEPARATION);
        let v = match ContactProblem::new(b, points, m).and_then(|p| decide(&p, &DecideOptions::default())) {
            Ok(v) => v,
            Err(e) => {
                notes.push(format!("trial {}: {e}", trial - 1));
                continue;
            }
        };
        if v.tag != Tag::NonUnique {
            notes.push(format!("trial {}: {:?}", trial - 1, v.tag));
            continue;
        }
        worst_ratio = worst_ratio.min(v.pick.lambda_min() / v.pick.lambda_max());
        if let Certificate::PositiveDefiniteExtension {
            completion,
            round_trip_residual,
            even_points: even,
            ..
        } = &v.certificate
        {
            let scale = completion
                .modified
                .matrix
                .iter()
                .fold(0.0f64, |a, z| a.max(z.norm()))
                .max(1.0);
            worst_modified = worst_modified.min(completion.modified_lambda_min / scale);
            worst_round_trip = worst_round_trip.max(*round_trip_residual);
            even_points += even.len();
        }
    }
    let ok = notes.is_empty() && worst_ratio > PD_TOL && worst_modified > 0.0 && worst_round_trip <= ROUND_TRIP_TOL;
    let mut detail = format!(
        "50 cases ({even_points} even-order points): min lambda_min/lambda_max of P {worst_ratio:.2e} (limit {PD_TOL:.0e}), min scaled lambda_min of completed matrix {worst_modified:.2e}, max round trip {worst_round_trip:.2e} (limit {ROUND_TRIP_TOL:.0e})"
    );
    if !notes.is_empty() {
        detail += &format!(" ({})", notes.join("; "));
    }
    outcome(ok, detail)
}

fn angular_derivative() -> Outcome {
    let mut worst: f64 = 0.0;
    for trial in 0..100u64 {
        let mut rng = trial_rng(SEED + 3, trial);
        let d = rng.random_range(1..=8usize);
        let b = random_blaschke(&mut rng, d, ZERO_RADIUS);
        let t = random_unimodular(&mut rng);
        let oracle: f64 = b
            .zeros()
            .iter()
            .map(|a| (1.0 - a.norm_sqr()) / (t - a).norm_sqr())
            .sum();
        let s = sp_boundary_structured(&boundary_jets(&b, &[t], &[1]).unwrap(), &[1])
            .unwrap()
            .flat[(0, 0)];
        let r = sp_via_realization(&realize(&b), &[t], &[1]).unwrap().flat[(0, 0)];
        worst = worst.max((s - oracle).norm()).max((r - oracle).norm());
    }
    outcome(
        worst <= CJ_TOL,
        format!("100 cases, max |P - sum (1-|a|^2)/|t-a|^2| = {worst:.2e} over both routes (limit {CJ_TOL:.0e})"),
    )
}

fn completion_example() -> Outcome {
    let m = CMatrix::from_fn(2, 2, |i, j| Complex64::new([[1.0, 2.0], [2.0, 1.0]][i][j], 0.0));
    let c = complete_to_pd(&PickMatrix::new(m, vec![2]).unwrap(), &[0], 1.0).unwrap();
    let expected = CMatrix::from_fn(2, 2, |i, j| Complex64::new([[1.0, 2.0], [2.0, 5.0]][i][j], 0.0));
    let mm = &c.modified.matrix;
    let det = (mm[(0, 0)] * mm[(1, 1)] - mm[(0, 1)] * mm[(1, 0)]).re;
    let schur = c.schur_lambda_min.unwrap_or(f64::NAN);
    let ok = (c.rho - 4.0).abs() <= 1e-14
        && max_abs_diff(mm, &expected) <= 1e-14
        && (det - 1.0).abs() <= 1e-14
        && (schur + 3.0).abs() <= 1e-14
        && c.modified_lambda_min > 0.0;
    outcome(
        ok,
        format!(
            "rho {}, Schur complement {schur}, det {det}, lambda_min {:.4}",
            c.rho, c.modified_lambda_min
        ),
    )
}

fn realization_integrity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rank_failures = 0;
    for trial in 0..100u64 {
        let mut rng = trial_rng(SEED + 4, trial);
        let d = rng.random_range(0..=10usize);
        let b = random_blaschke(&mut rng, d, ZERO_RADIUS);
        let r = realize(&b);
        worst = worst.max(r.unitarity_defect());
        if observability_rank(&r, OBSERVABILITY_TOL) != d {
            rank_failures += 1;
        }
    }
    outcome(
        worst <= UNITARITY_TOL && rank_failures == 0,
        format!(
            "100 products d <= 10: max unitarity defect {worst:.2e} (limit {UNITARITY_TOL:.0e}), {rank_failures} observability rank failures (cutoff {OBSERVABILITY_TOL:.0e} * sigma_max)"
        ),
    )
}

fn main() {
    let suite = suite();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("rank law", Box::new(|| rank_law(&suite))),
        ("route agreement", Box::new(|| route_agreement(&suite))),
        ("hermitianness", Box::new(|| hermitianness(&suite))),
        ("identity, third-order contact", Box::new(single_point_identity)),
        ("level-set family", Box::new(level_set_family)),
        ("sharpness", Box::new(sharpness)),
        ("angular derivative", Box::new(angular_derivative)),
        ("positive definite completion", Box::new(completion_example)),
        ("realization integrity", Box::new(realization_integrity)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {}: {}",
            i + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
