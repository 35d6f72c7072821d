//! The ten primary acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;

use crossprod::commutant::{
    commutant_part, commutator_norm, e0_projection, generating_functions, in_commutant, is_maximal_abelian,
    nontrivial_commutant_element, trig_commutant_degrees,
};
use crossprod::fixtures;
use crossprod::ideals::{
    build_ejintp, build_intp, build_isolbana, intersect_with_subalgebra, mellankompl_report, separation_replay,
    IntersectOptions, MellanBranch, MellanCase, Region, SubalgebraSpec,
};
use crossprod::random::{ideal_battery, random_element, random_positive, rng, ElementShape, DEFAULT_SEED};
use crossprod::reps::{direct_sum_split, single_orbit_iso, SymbolicRepMatrix};
use crossprod::scalar::unit;
use crossprod::{
    operator_norm, pure_state, rep_periodic, ArcSet, CrossedProduct, DynSystem, GenPoly, NormOptions, Point,
    SampleGrid, Turn,
};

type Cp = CrossedProduct<f64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = run();
    let _ = writeln!(
        std::io::stderr(),
        "{} [{id}] {name}: {} ({:.1}s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.pass
}

fn norm_opts() -> NormOptions {
    NormOptions { grid: SampleGrid::new(64, 16), tol: 1e-5, max_evals: 100_000, window: 64 }
}

/// Points `y` to sample: every point of a finite system, a few circle points otherwise.
fn sample_points(cp: &Cp, r: &mut impl Rng, k: usize) -> Vec<Point<f64>> {
    match cp.system() {
        DynSystem::Finite(fs) => (0..fs.len()).map(Point::Index).collect(),
        _ => (0..k).map(|_| Point::Circle(r.gen_range(0.0..1.0))).collect(),
    }
}

fn commutant_characterization() -> Outcome {
    let mut r = rng(DEFAULT_SEED);
    let fx: Vec<(&str, Cp)> = vec![
        ("swap", CrossedProduct::new(fixtures::swap())),
        ("swap+fixed", CrossedProduct::new(fixtures::swap_and_fixed())),
        ("two-2-cycles", CrossedProduct::new(fixtures::two_two_cycles())),
        ("rot-1/3", CrossedProduct::new(fixtures::rotation(1, 3))),
    ];
    let opts = norm_opts();
    let mut disagreements = 0;
    let mut members = 0;
    for (_, cp) in &fx {
        for i in 0..50 {
            let raw = random_element(cp, &ElementShape::dense(3), &mut r);
            let a = match i % 3 {
                0 => raw,
                1 => commutant_part(cp, &raw).unwrap(),
                _ => {
                    let c = commutant_part(cp, &raw).unwrap();
                    let stray = GenPoly::monomial(1, cp.one_fn()).scale_real(1e-3);
                    if c.is_zero() { raw } else { c.add(&stray).unwrap() }
                }
            };
            if a.is_zero() {
                continue;
            }
            let symbolic = in_commutant(cp, &a).unwrap();
            let numeric = generating_functions(cp)
                .iter()
                .map(|f| commutator_norm(cp, &a, f, &opts).unwrap())
                .all(|n| n.estimate <= 1e-8);
            members += usize::from(symbolic);
            disagreements += usize::from(symbolic != numeric);
        }
    }
    Outcome {
        pass: disagreements == 0,
        detail: format!("{disagreements} disagreements over 200 elements ({members} in the commutant)"),
    }
}

fn cesaro_convergence() -> Outcome {
    let mut r = rng(DEFAULT_SEED ^ 2);
    let opts = norm_opts();
    let mut worst_radius: f64 = 0.0;
    let mut failures = Vec::new();
    let mut final_worst: f64 = 0.0;
    for (name, cp) in fixtures::periodic::<f64>() {
        for _ in 0..10 {
            let raw = random_element(&cp, &ElementShape::dense(4), &mut r);
            let top = raw.terms().map(|(_, f)| f.sup_bound()).fold(0.0, f64::max);
            let a = raw.scale_real(1.0 / top);
            let degree = a.degree_bound();
            for n in 0..=64u64 {
                let diff = a.cesaro(n).sub(&a).unwrap();
                let est = operator_norm(&cp, &diff, &opts).unwrap();
                worst_radius = worst_radius.max(est.rigor);
                if est.estimate > a.cesaro_error_bound(n) * (1.0 + 1e-12) + 1e-15 {
                    failures.push(format!("{name} n={n}"));
                }
            }
            let n = 400 * degree.max(1);
            let est = operator_norm(&cp, &a.cesaro(n).sub(&a).unwrap(), &opts).unwrap();
            worst_radius = worst_radius.max(est.rigor);
            final_worst = final_worst.max(est.estimate + est.rigor);
            if est.estimate + est.rigor >= 1e-2 {
                failures.push(format!("{name} n=400·deg"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty() && worst_radius <= 1e-3,
        detail: format!(
            "50 elements scaled to max sup|a(i)| = 1, bound violations {:?}, worst ‖σ_(400·deg)(a) − a‖ ≤ {final_worst:.2e}, worst radius {worst_radius:.1e}",
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn maximal_abelian() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, cp) in fixtures::finite::<f64>() {
        let cutoff = 2 * cp.system().as_finite().unwrap().period_lcm() as u64;
        let cert = is_maximal_abelian(&cp, cutoff).unwrap();
        pass &= cert.maximal && cert.pairwise_commute;
        details.push(format!("{name}@{cutoff}: {}", cert.maximal));
    }
    Outcome { pass, detail: details.join(", ") }
}

fn representations() -> Outcome {
    let mut r = rng(DEFAULT_SEED ^ 4);
    let mut worst: f64 = 0.0;
    for (_, cp) in fixtures::periodic::<f64>() {
        for _ in 0..100 {
            let a = random_element(&cp, &ElementShape::dense(3), &mut r);
            let b = random_element(&cp, &ElementShape::dense(3), &mut r);
            let ab = cp.mul(&a, &b).unwrap();
            let a_star = cp.adjoint(&a).unwrap();
            let ys = sample_points(&cp, &mut r, 1);
            let y = ys[r.gen_range(0..ys.len())];
            for _ in 0..8 {
                let t = unit(r.gen_range(0.0..1.0));
                let pa = rep_periodic(&cp, y, t, &a).unwrap();
                let pb = rep_periodic(&cp, y, t, &b).unwrap();
                worst = worst.max(rep_periodic(&cp, y, t, &ab).unwrap().sub(&pa.matmul(&pb)).max_abs());
                worst = worst.max(rep_periodic(&cp, y, t, &a_star).unwrap().sub(&pa.adjoint()).max_abs());
            }
        }
    }
    let mut iso_ok = true;
    for sigma in [vec![1, 0], vec![1, 2, 0]] {
        let cp: Cp = CrossedProduct::new(DynSystem::finite(sigma.clone()).unwrap());
        iso_ok &= single_orbit_iso(&cp, &cp.delta(1)).unwrap() == SymbolicRepMatrix::shift(sigma.len());
    }
    let mut split_gap: f64 = 0.0;
    let opts = norm_opts();
    for (cp, first) in [
        (CrossedProduct::<f64>::new(fixtures::swap_and_fixed()), BTreeSet::from([0, 1])),
        (CrossedProduct::new(fixtures::two_two_cycles()), BTreeSet::from([0, 1])),
    ] {
        let split = direct_sum_split(&cp, &first).unwrap();
        for _ in 0..10 {
            let a = random_element(&cp, &ElementShape::dense(3), &mut r);
            let (a1, a2) = split.split(&a).unwrap();
            let n = operator_norm(&cp, &a, &opts).unwrap();
            let n1 = operator_norm(&split.parts[0], &a1, &opts).unwrap();
            let n2 = operator_norm(&split.parts[1], &a2, &opts).unwrap();
            let slack = n.rigor + n1.rigor.max(n2.rigor);
            split_gap = split_gap.max((n.estimate - n1.estimate.max(n2.estimate)).abs() - slack);
        }
    }
    Outcome {
        pass: worst <= 1e-10 && iso_ok && split_gap <= 1e-12,
        detail: format!(
            "homomorphism defect {worst:.1e}, single-orbit δ ↦ u(z): {iso_ok}, split norm gap beyond enclosure {:.1e}",
            split_gap.max(0.0)
        ),
    }
}

fn totality() -> Outcome {
    let mut r = rng(DEFAULT_SEED ^ 5);
    let ts: Vec<Complex<f64>> = SampleGrid::new(64, 1).t_values();
    let mut missed = 0;
    let mut converse_bad = 0;
    let mut smallest_peak = f64::INFINITY;
    for (_, cp) in fixtures::periodic::<f64>() {
        let ys: Vec<Point<f64>> = match cp.system() {
            DynSystem::Finite(fs) => (0..fs.len()).map(Point::Index).collect(),
            _ => (0..64).map(|i| Point::Circle(i as f64 / 64.0)).collect(),
        };
        for _ in 0..50 {
            let p = random_positive(&cp, &ElementShape::dense(2), &mut r);
            for scaled in [p.clone(), p.scale_real(1e-14)] {
                let peak = ys
                    .iter()
                    .flat_map(|&y| ts.iter().map(move |&t| (y, t)))
                    .map(|(y, t)| pure_state(&cp, y, t, &scaled).unwrap().norm())
                    .fold(0.0, f64::max);
                if peak <= 1e-12 && scaled.max_abs_coeff() > 1e-10 {
                    converse_bad += 1;
                }
                if scaled == p {
                    smallest_peak = smallest_peak.min(peak);
                    missed += usize::from(peak <= 1e-8);
                }
            }
        }
    }
    Outcome {
        pass: missed == 0 && converse_bad == 0,
        detail: format!(
            "250 positive elements, {missed} invisible to the states, smallest peak {smallest_peak:.2e}, converse violations {converse_bad}"
        ),
    }
}

fn commutant_intersection() -> Outcome {
    let opts = IntersectOptions::default();
    let mut found = 0;
    let mut smallest: f64 = f64::INFINITY;
    let mut total = 0;
    for (_, cp) in fixtures::periodic::<f64>() {
        for ideal in ideal_battery(&cp, DEFAULT_SEED, 20) {
            total += 1;
            if let Ok(crossprod::IntersectionOutcome::Witness { norm_lower, .. }) =
                intersect_with_subalgebra(&cp, &ideal, &SubalgebraSpec::FullCommutant, &opts)
            {
                smallest = smallest.min(norm_lower);
                found += usize::from(norm_lower >= 1e-6);
            }
        }
    }
    Outcome {
        pass: found == total,
        detail: format!("{found}/{total} ideals with a witness of norm ≥ 1e-6 (smallest {smallest:.3e})"),
    }
}

fn intermediate_subalgebras() -> Outcome {
    let opts = IntersectOptions::default();
    let mut notes = Vec::new();
    let two: Cp = CrossedProduct::new(fixtures::two_two_cycles());
    let ej = build_ejintp(&two, 2, Region::Indices([0, 1].into())).unwrap();
    let ej_ok = intersect_with_subalgebra(&two, &ej.ideal, &ej.b, &opts).unwrap().is_certified_empty();
    notes.push(format!("ejintp certified-empty: {ej_ok}"));

    let half: Cp = CrossedProduct::new(fixtures::rotation(1, 2));
    let intp = build_intp(&half, Turn::from_integer(0)).unwrap();
    let battery = ideal_battery(&half, DEFAULT_SEED, 20);
    let intp_hits = battery
        .iter()
        .filter(|i| intersect_with_subalgebra(&half, i, &intp, &opts).unwrap().is_witness())
        .count();
    notes.push(format!("intp witnesses {intp_hits}/20"));

    let swap: Cp = CrossedProduct::new(fixtures::swap());
    let c1 = ArcSet::arc(Turn::from_integer(0), Turn::new(1, 2)).unwrap();
    let iso = build_isolbana(&swap, 0, Turn::new(1, 4), Turn::new(3, 4), c1, None).unwrap();
    let battery = ideal_battery(&swap, DEFAULT_SEED, 20);
    let b1_hits = battery
        .iter()
        .filter(|i| intersect_with_subalgebra(&swap, i, &iso.b1, &opts).unwrap().is_witness())
        .count();
    let b2_ok = intersect_with_subalgebra(&swap, &iso.ideal, &iso.b2, &opts).unwrap().is_certified_empty();
    notes.push(format!("isolbana B₁ witnesses {b1_hits}/20, B₂ certified-empty: {b2_ok}"));

    let mut classified = 0;
    let all = fixtures::all::<f64>();
    for (name, cp) in &all {
        let battery = ideal_battery(cp, DEFAULT_SEED, 20);
        let battery = if cp.system().is_periodic_type() { battery } else { Vec::new() };
        let rep = mellankompl_report(cp, &battery, &opts).unwrap();
        let expected = match cp.system() {
            DynSystem::Finite(_) => (MellanCase::NotTopologicallyFree, Some(MellanBranch::IsolatedOrbit)),
            DynSystem::RationalRotation { .. } => (MellanCase::NotTopologicallyFree, Some(MellanBranch::NonIsolatedPoint)),
            DynSystem::IrrationalRotation { .. } => (MellanCase::TopologicallyFree, None),
        };
        if rep.consistent() && (rep.case, rep.branch) == expected {
            classified += 1;
        } else {
            notes.push(format!("{name} misclassified"));
        }
    }
    notes.push(format!("classified {classified}/{}", all.len()));
    Outcome {
        pass: ej_ok && intp_hits == 20 && b1_hits == 20 && b2_ok && classified == all.len(),
        detail: notes.join(", "),
    }
}

fn e0_projection_checks() -> Outcome {
    let mut r = rng(DEFAULT_SEED ^ 8);
    let opts = norm_opts();
    let mut fails = Vec::new();
    let mut worst_state: f64 = 0.0;
    for (name, cp) in [
        ("rot-1/3", CrossedProduct::<f64>::new(fixtures::rotation(1, 3))),
        ("two-2-cycles", CrossedProduct::new(fixtures::two_two_cycles())),
    ] {
        for _ in 0..50 {
            let a = random_element(&cp, &ElementShape::dense(4), &mut r);
            let e = e0_projection(&cp, &a).unwrap();
            if e0_projection(&cp, &e).unwrap() != e {
                fails.push(format!("{name}: idempotence"));
            }
            let c = commutant_part(&cp, &a).unwrap();
            if e0_projection(&cp, &c).unwrap() != c {
                fails.push(format!("{name}: identity on commutant"));
            }
            let na = operator_norm(&cp, &a, &opts).unwrap();
            let ne = operator_norm(&cp, &e, &opts).unwrap();
            if ne.estimate > na.estimate + na.rigor + 1e-12 {
                fails.push(format!("{name}: contraction"));
            }
            let p = cp.mul(&cp.adjoint(&a).unwrap(), &a).unwrap();
            if operator_norm(&cp, &e0_projection(&cp, &p).unwrap(), &opts).unwrap().estimate <= 1e-12 {
                fails.push(format!("{name}: faithfulness"));
            }
            for y in sample_points(&cp, &mut r, 4) {
                for _ in 0..4 {
                    let t = unit(r.gen_range(0.0..1.0));
                    let d = pure_state(&cp, y, t, &a).unwrap() - pure_state(&cp, y, t, &e).unwrap();
                    worst_state = worst_state.max(d.norm());
                }
            }
        }
    }
    Outcome {
        pass: fails.is_empty() && worst_state <= 1e-10,
        detail: format!("failures {:?}, worst |φ(a) − φ(E₀a)| {worst_state:.1e}", fails.iter().take(3).collect::<Vec<_>>()),
    }
}

fn dichotomy() -> Outcome {
    let golden: Cp = CrossedProduct::new(fixtures::golden_rotation());
    let degrees = trig_commutant_degrees(&golden, 6, 6).unwrap();
    let mut witnesses = 0;
    let periodic = fixtures::periodic::<f64>();
    for (_, cp) in &periodic {
        if let Some(w) = nontrivial_commutant_element(cp) {
            if in_commutant(cp, &w).unwrap() && w.degrees().any(|n| n != 0) {
                witnesses += 1;
            }
        }
    }
    Outcome {
        pass: degrees == [0] && witnesses == periodic.len(),
        detail: format!("irrational commutant degrees {degrees:?}, witnesses in C(X)′ \\ C(X): {witnesses}/{}", periodic.len()),
    }
}

fn separation() -> Outcome {
    let cp: Cp = CrossedProduct::new(fixtures::rotation(1, 2));
    let rep = separation_replay(&cp, &SampleGrid::new(64, 16)).unwrap();
    let s2 = unit(2.0 * rep.s_turns) - Complex::new(0.0, 1.0);
    Outcome {
        pass: (rep.k, rep.l, rep.r) == (4, 2, 2)
            && s2.norm() < 1e-12
            && rep.value_error < 1e-12
            && rep.restriction_onto_base
            && rep.s_values_real,
        detail: format!(
            "k={}, l={}, r={}, γ(y,s)(fδ^k) = {:.3}{:+.3}i, S restricts onto X: {}, S-values real: {}",
            rep.k, rep.l, rep.r, rep.value[0], rep.value[1], rep.restriction_onto_base, rep.s_values_real
        ),
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let results = [
        report(1, "commutant characterization", commutant_characterization),
        report(2, "cesaro convergence", cesaro_convergence),
        report(3, "maximal abelian", maximal_abelian),
        report(4, "representation correctness", representations),
        report(5, "totality of pure states", totality),
        report(6, "intersection property of the commutant", commutant_intersection),
        report(7, "intermediate subalgebras", intermediate_subalgebras),
        report(8, "conditional expectation E0", e0_projection_checks),
        report(9, "free/commutant dichotomy", dichotomy),
        report(10, "character separation replay", separation),
    ];
    let _ = writeln!(std::io::stderr(), "total {:.1}s", start.elapsed().as_secs_f64());
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, &ok)| !ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
