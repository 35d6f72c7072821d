use std::collections::BTreeSet;

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use num_complex::Complex;
use serde_json::json;

use crossprod::commutant::{
    ad_delta, ad_delta_inv, commutant_part, commutator_norm, e0_exists, e0_projection, generating_functions,
    in_commutant, is_maximal_abelian, nontrivial_commutant_element, trig_commutant_degrees,
};
use crossprod::ideals::{
    build_ejintp, build_intp, build_isolbana, inclusion_witnesses, intersect_with_subalgebra, mellankompl_report,
    separation_replay, MellanCase, Region,
};
use crossprod::random::{ideal_battery, random_element, random_positive, rng, ElementShape};
use crossprod::reps::{single_orbit_iso, SymbolicRepMatrix};
use crossprod::scalar::{cone, unit};
use crossprod::{
    operator_norm, pure_state, rep_periodic, ArcSet, CoefficientFunction, CrossedProduct, DynSystem, GenPoly,
    IdealSpec, IntersectionOutcome, LaurentPoly, Point, SubalgebraSpec, Turn,
};

use crate::config::RunConfig;
use crate::report::Check;

type Cp = CrossedProduct<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Commutant,
    Ideals,
    E0,
    Reps,
}

const IRRATIONAL_IDEALS: &str = "the crossed product of an irrational rotation is simple; every nonzero ideal is the whole algebra";
const NO_PERIODIC_POINTS: &str = "an irrational rotation has no periodic points";

fn guard(name: &'static str, anchor: &'static str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, anchor, e))
}

pub fn run(cp: &Cp, suite: Suite, cfg: &RunConfig, cutoff: Option<u64>) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Commutant) {
        out.extend(commutant_suite(cp, cfg, cutoff));
    }
    if matches!(suite, Suite::All | Suite::Reps) {
        out.extend(reps_suite(cp, cfg));
    }
    if matches!(suite, Suite::All | Suite::E0) {
        out.extend(e0_suite(cp, cfg));
    }
    if matches!(suite, Suite::All | Suite::Ideals) {
        out.extend(ideals_suite(cp, cfg));
    }
    out
}

/// Sampled base points: all points of a finite system, an even grid on the circle.
fn base_points(cp: &Cp, k: usize) -> Vec<Point<f64>> {
    match cp.system() {
        DynSystem::Finite(fs) => (0..fs.len()).map(Point::Index).collect(),
        _ => (0..k).map(|i| Point::Circle((i as f64 + 0.37) / k as f64)).collect(),
    }
}

fn t_points(k: usize) -> Vec<Complex<f64>> {
    (0..k).map(|j| unit((j as f64 + 0.5) / k as f64)).collect()
}

fn shift_ideal(cp: &Cp) -> Option<(i64, IdealSpec<f64>)> {
    let l = match cp.system() {
        DynSystem::Finite(fs) => fs.period_lcm() as i64,
        DynSystem::RationalRotation { q, .. } => *q as i64,
        DynSystem::IrrationalRotation { .. } => return None,
    };
    let g = cp.one().sub(&cp.delta(l)).ok()?;
    Some((l, IdealSpec::Generated(vec![g])))
}

fn commutant_suite(cp: &Cp, cfg: &RunConfig, cutoff: Option<u64>) -> Vec<Check> {
    let sys = cp.system();
    let mut out = Vec::new();

    let c = cutoff.unwrap_or(2);
    out.push(guard("support-condition", "a ∈ C(X)′ iff supp a(n) ⊆ Per^n(σ) for all n", || {
        let mut mismatches = Vec::new();
        let mut dims = serde_json::Map::new();
        for n in -(c as i64)..=(c as i64) {
            let mut dim = 0;
            let probes: Vec<(CoefficientFunction<f64>, bool)> = match sys {
                DynSystem::Finite(fs) => (0..fs.len())
                    .map(|x| (CoefficientFunction::indicator(fs.len(), [x]), fs.apply(x, n) == x))
                    .collect(),
                DynSystem::RationalRotation { q, .. } => vec![(cp.one_fn(), n % *q as i64 == 0)],
                DynSystem::IrrationalRotation { .. } => vec![(cp.one_fn(), n == 0)],
            };
            for (f, expected) in probes {
                let got = in_commutant(cp, &GenPoly::monomial(n, f))?;
                dim += usize::from(got);
                if got != expected {
                    mismatches.push(n);
                }
            }
            dims.insert(n.to_string(), json!(dim));
        }
        Ok(Check::verdict(
            "support-condition",
            "a ∈ C(X)′ iff supp a(n) ⊆ Per^n(σ) for all n",
            mismatches.is_empty(),
            json!({"cutoff": c, "monomial_dims": dims, "mismatched_degrees": mismatches}),
        ))
    }));

    out.push(guard("membership-matches-commutators", "C(X)′ is the commutant of C(X)", || {
        let mut r = rng(cfg.seed);
        let opts = cfg.norm_options();
        let gens = generating_functions(cp);
        let (mut members, mut disagreements) = (0usize, Vec::new());
        for i in 0..30 {
            let raw = random_element(cp, &ElementShape::dense(3), &mut r);
            let a = if i % 2 == 0 { raw } else { commutant_part(cp, &raw)? };
            if a.is_zero() {
                continue;
            }
            let symbolic = in_commutant(cp, &a)?;
            let mut worst: f64 = 0.0;
            for f in &gens {
                worst = worst.max(commutator_norm(cp, &a, f, &opts)?.estimate);
            }
            members += usize::from(symbolic);
            if symbolic != (worst <= 1e-8) {
                disagreements.push(json!({"sample": i, "max_commutator_norm": worst}));
            }
        }
        Ok(Check::verdict(
            "membership-matches-commutators",
            "C(X)′ is the commutant of C(X)",
            disagreements.is_empty(),
            json!({"samples": 30, "members": members, "disagreements": disagreements}),
        ))
    }));

    let anchor = "C(X)′ is maximal abelian";
    out.push(match sys.as_finite() {
        Some(fs) => guard("maximal-abelian", anchor, || {
            let cutoff = cutoff.unwrap_or(2 * fs.period_lcm() as u64);
            let cert = is_maximal_abelian(cp, cutoff)?;
            Ok(Check::verdict("maximal-abelian", anchor, cert.maximal && cert.pairwise_commute, json!(cert)))
        }),
        None => Check::skipped("maximal-abelian", anchor, "exact centralizer elimination needs a finite system"),
    });

    out.push(guard("ad-delta-invariance", "C(X)′ is invariant under a ↦ δaδ* and a ↦ δ*aδ", || {
        let mut r = rng(cfg.seed ^ 1);
        let mut bad = 0;
        for _ in 0..10 {
            let c = commutant_part(cp, &random_element(cp, &ElementShape::dense(3), &mut r))?;
            bad += usize::from(!in_commutant(cp, &ad_delta(cp, &c)?)? || !in_commutant(cp, &ad_delta_inv(cp, &c)?)?);
        }
        Ok(Check::verdict(
            "ad-delta-invariance",
            "C(X)′ is invariant under a ↦ δaδ* and a ↦ δ*aδ",
            bad == 0,
            json!({"samples": 10, "escapes": bad}),
        ))
    }));

    out.push(guard("free-iff-commutant-trivial", "σ is topologically free iff C(X) = C(X)′", || {
        let anchor = "σ is topologically free iff C(X) = C(X)′";
        if sys.is_topologically_free() {
            let degrees = trig_commutant_degrees(cp, 6, 6)?;
            Ok(Check::verdict(
                "free-iff-commutant-trivial",
                anchor,
                degrees == [0],
                json!({"topologically_free": true, "commutant_degrees": degrees}),
            ))
        } else {
            let w = nontrivial_commutant_element(cp).ok_or_else(|| anyhow!("no witness for a non-free system"))?;
            let ok = in_commutant(cp, &w)? && w.degrees().any(|n| n != 0);
            Ok(Check::verdict(
                "free-iff-commutant-trivial",
                anchor,
                ok,
                json!({"topologically_free": false, "witness": crossprod::io::element_value(&w)}),
            ))
        }
    }));
    out
}

fn reps_suite(cp: &Cp, cfg: &RunConfig) -> Vec<Check> {
    let sys = cp.system();
    let mut out = Vec::new();
    let periodic = sys.is_periodic_type();

    let anchor = "π_{y,t} is a *-representation";
    out.push(if periodic {
        guard("rep-star-homomorphism", anchor, || {
            let mut r = rng(cfg.seed ^ 2);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let a = random_element(cp, &ElementShape::dense(3), &mut r);
                let b = random_element(cp, &ElementShape::dense(3), &mut r);
                let ab = cp.mul(&a, &b)?;
                let a_star = cp.adjoint(&a)?;
                for y in base_points(cp, 4) {
                    for t in t_points(8) {
                        let pa = rep_periodic(cp, y, t, &a)?;
                        let pb = rep_periodic(cp, y, t, &b)?;
                        worst = worst.max(rep_periodic(cp, y, t, &ab)?.sub(&pa.matmul(&pb)).max_abs());
                        worst = worst.max(rep_periodic(cp, y, t, &a_star)?.sub(&pa.adjoint()).max_abs());
                    }
                }
            }
            Ok(Check::verdict("rep-star-homomorphism", anchor, worst <= 1e-10, json!({"pairs": 20, "max_defect": worst})))
        })
    } else {
        Check::skipped("rep-star-homomorphism", anchor, NO_PERIODIC_POINTS)
    });

    let anchor = "a single orbit of period p gives C(T, M_p)";
    out.push(match sys.as_finite() {
        Some(fs) => guard("single-orbit-isomorphism", anchor, || {
            let mut periods = Vec::new();
            let mut ok = true;
            for o in fs.orbits() {
                let (sub, _) = fs.restrict(&o.points.iter().copied().collect::<BTreeSet<_>>())?;
                let cp_o: Cp = CrossedProduct::new(DynSystem::Finite(sub));
                ok &= single_orbit_iso(&cp_o, &cp_o.delta(1))? == SymbolicRepMatrix::shift(o.period);
                ok &= single_orbit_iso(&cp_o, &cp_o.one())? == SymbolicRepMatrix::diag(vec![LaurentPoly::monomial(0, cone()); o.period]);
                periods.push(o.period);
            }
            Ok(Check::verdict("single-orbit-isomorphism", anchor, ok, json!({"orbit_periods": periods})))
        }),
        None => Check::skipped("single-orbit-isomorphism", anchor, "needs a finite system"),
    });

    let anchor = "the states φ_{y,t} are nonnegative on a*a and detect it";
    out.push(if periodic {
        guard("states-detect-positive-elements", anchor, || {
            let mut r = rng(cfg.seed ^ 3);
            let (mut smallest_peak, mut most_negative) = (f64::INFINITY, 0.0f64);
            for _ in 0..20 {
                let p = random_positive(cp, &ElementShape::dense(2), &mut r);
                let mut peak: f64 = 0.0;
                for y in base_points(cp, 32) {
                    for t in t_points(32) {
                        let v = pure_state(cp, y, t, &p)?;
                        peak = peak.max(v.re);
                        most_negative = most_negative.min(v.re);
                    }
                }
                smallest_peak = smallest_peak.min(peak);
            }
            Ok(Check::verdict(
                "states-detect-positive-elements",
                anchor,
                smallest_peak > 1e-8 && most_negative >= -1e-10,
                json!({"samples": 20, "smallest_peak": smallest_peak, "most_negative": most_negative}),
            ))
        })
    } else {
        Check::skipped("states-detect-positive-elements", anchor, NO_PERIODIC_POINTS)
    });

    out.push(guard("delta-is-unitary", "δ is unitary, ‖δ‖ = 1", || {
        let est = operator_norm(cp, &cp.delta(1), &cfg.norm_options())?;
        let ok = est.estimate <= 1.0 + 1e-12 && est.estimate + est.rigor >= 1.0 - 1e-12 + if est.lower_bound_only { -cfg.tol } else { 0.0 };
        Ok(Check::verdict("delta-is-unitary", "δ is unitary, ‖δ‖ = 1", ok, json!(est)))
    }));

    out.push(guard("cesaro-error-bound", "‖σ_n(a) − a‖ ≤ Σ_i |i|/(n+1) sup|a(i)|", || {
        let mut r = rng(cfg.seed ^ 4);
        let opts = cfg.norm_options();
        let mut violations = Vec::new();
        let mut worst_ratio: f64 = 0.0;
        for s in 0..5 {
            let a = random_element(cp, &ElementShape::dense(4), &mut r);
            for n in [0u64, 1, 2, 4, 8, 16, 32] {
                let est = operator_norm(cp, &a.cesaro(n).sub(&a)?, &opts)?;
                let bound = a.cesaro_error_bound(n);
                if bound > 0.0 {
                    worst_ratio = worst_ratio.max(est.estimate / bound);
                }
                if est.estimate > bound * (1.0 + 1e-12) + 1e-14 {
                    violations.push(json!({"sample": s, "n": n, "norm": est.estimate, "bound": bound}));
                }
            }
        }
        Ok(Check::verdict(
            "cesaro-error-bound",
            "‖σ_n(a) − a‖ ≤ Σ_i |i|/(n+1) sup|a(i)|",
            violations.is_empty(),
            json!({"samples": 5, "worst_norm_to_bound": worst_ratio, "violations": violations}),
        ))
    }));
    out
}

fn e0_suite(cp: &Cp, cfg: &RunConfig) -> Vec<Check> {
    const NAMES: [(&str, &str); 6] = [
        ("e0-idempotent", "E₀ is a projection onto C(X)′"),
        ("e0-fixes-commutant", "E₀ is the identity on C(X)′"),
        ("e0-contractive", "E₀ is contractive"),
        ("e0-faithful", "E₀ is faithful"),
        ("e0-preserves-states", "φ_{y,t} ∘ E₀ = φ_{y,t}"),
        ("e0-matches-support-projection", "E₀ keeps exactly the degrees divisible by the common period"),
    ];
    let unavailable = match e0_exists(cp.system()) {
        Ok(e) if !e.exists => Some("Per_k(σ)⁰ is not closed for some k".to_string()),
        Err(e) => Some(e.to_string()),
        Ok(_) => e0_projection(cp, &cp.one()).err().map(|e| e.to_string()),
    };
    if let Some(reason) = unavailable {
        return NAMES.iter().map(|&(n, a)| Check::skipped(n, a, reason.clone())).collect();
    }
    let run = || -> Result<Vec<Check>> {
        let mut r = rng(cfg.seed ^ 5);
        let opts = cfg.norm_options();
        let mut fails = [0usize; 6];
        let mut worst_state: f64 = 0.0;
        let mut worst_excess: f64 = 0.0;
        for _ in 0..20 {
            let a = random_element(cp, &ElementShape::dense(4), &mut r);
            let e = e0_projection(cp, &a)?;
            fails[0] += usize::from(e0_projection(cp, &e)? != e || !in_commutant(cp, &e)?);
            let c = commutant_part(cp, &a)?;
            fails[1] += usize::from(e0_projection(cp, &c)? != c);
            let na = operator_norm(cp, &a, &opts)?;
            let ne = operator_norm(cp, &e, &opts)?;
            worst_excess = worst_excess.max(ne.estimate - na.estimate);
            fails[2] += usize::from(ne.estimate > na.estimate + na.rigor + 1e-12);
            let p = cp.mul(&cp.adjoint(&a)?, &a)?;
            fails[3] += usize::from(operator_norm(cp, &e0_projection(cp, &p)?, &opts)?.estimate <= 1e-12);
            if cp.system().is_periodic_type() {
                for y in base_points(cp, 4) {
                    for t in t_points(4) {
                        worst_state = worst_state.max((pure_state(cp, y, t, &a)? - pure_state(cp, y, t, &e)?).norm());
                    }
                }
            }
            fails[5] += usize::from(e != c);
        }
        fails[4] = usize::from(worst_state > 1e-10);
        let evidence = [
            json!({"samples": 20, "failures": fails[0]}),
            json!({"samples": 20, "failures": fails[1]}),
            json!({"samples": 20, "failures": fails[2], "max_norm_excess": worst_excess}),
            json!({"samples": 20, "failures": fails[3]}),
            json!({"max_state_difference": worst_state}),
            json!({"samples": 20, "failures": fails[5]}),
        ];
        Ok(NAMES
            .iter()
            .zip(fails)
            .zip(evidence)
            .map(|((&(n, a), f), ev)| Check::verdict(n, a, f == 0, ev))
            .collect())
    };
    run().unwrap_or_else(|e| {
        let msg = format!("{e:#}");
        NAMES.iter().map(|&(n, a)| Check::errored(n, a, anyhow!(msg.clone()))).collect()
    })
}

fn ideals_suite(cp: &Cp, cfg: &RunConfig) -> Vec<Check> {
    let sys = cp.system();
    let opts = cfg.intersect_options();
    let mut out = Vec::new();
    let irrational = !sys.is_periodic_type();

    let anchor = "C(X)′ has the intersection property for ideals";
    out.push(if irrational {
        Check::skipped("commutant-meets-every-ideal", anchor, IRRATIONAL_IDEALS)
    } else {
        guard("commutant-meets-every-ideal", anchor, || {
            let battery = ideal_battery(cp, cfg.seed, 20);
            let mut smallest = f64::INFINITY;
            let mut misses = Vec::new();
            for (i, ideal) in battery.iter().enumerate() {
                match intersect_with_subalgebra(cp, ideal, &SubalgebraSpec::FullCommutant, &opts)? {
                    IntersectionOutcome::Witness { norm_lower, .. } if norm_lower >= 1e-6 => {
                        smallest = smallest.min(norm_lower)
                    }
                    other => misses.push(json!({"ideal": i, "outcome": other})),
                }
            }
            Ok(Check::verdict(
                "commutant-meets-every-ideal",
                anchor,
                misses.is_empty(),
                json!({"ideals": battery.len(), "smallest_witness_norm": smallest, "misses": misses}),
            ))
        })
    });

    let anchor = "C(X) misses the ideal generated by 1 − δ^L when every point has period dividing L";
    out.push(match shift_ideal(cp) {
        None => Check::skipped("base-misses-shift-ideal", anchor, IRRATIONAL_IDEALS),
        Some((l, ideal)) => guard("base-misses-shift-ideal", anchor, || {
            let outcome = intersect_with_subalgebra(cp, &ideal, &SubalgebraSpec::BaseCx, &opts)?;
            Ok(Check::verdict(
                "base-misses-shift-ideal",
                anchor,
                outcome.is_certified_empty(),
                json!({"L": l, "outcome": outcome}),
            ))
        }),
    });

    let anchor = "support-restricted subalgebra between C(X) and C(X)′ without the intersection property";
    let ejintp_input = match sys {
        DynSystem::Finite(fs) => {
            let orbits = fs.orbits();
            (orbits.len() >= 2).then(|| (fs.period_lcm() as i64, Region::Indices(orbits[0].points.iter().copied().collect())))
        }
        DynSystem::RationalRotation { q, .. } => {
            let q = *q as i64;
            let arcs: Vec<(Turn, Turn)> = (0..q).map(|j| (Turn::new(j, q), Turn::new(3 * j + 1, 3 * q))).collect();
            ArcSet::from_arcs(&arcs).ok().map(|a| (q, Region::Arcs(a)))
        }
        DynSystem::IrrationalRotation { .. } => None,
    };
    out.push(match ejintp_input {
        None if irrational => Check::skipped("support-restricted-subalgebra", anchor, IRRATIONAL_IDEALS),
        None => Check::skipped("support-restricted-subalgebra", anchor, "needs two orbits inside Per^n(σ)"),
        Some((n, u1)) => guard("support-restricted-subalgebra", anchor, || {
            let c = build_ejintp(cp, n, u1)?;
            let strict = inclusion_witnesses(cp, &c.b)?;
            let outcome = intersect_with_subalgebra(cp, &c.ideal, &c.b, &opts)?;
            Ok(Check::verdict(
                "support-restricted-subalgebra",
                anchor,
                strict.lower_strict && strict.upper_strict && outcome.is_certified_empty(),
                json!({"subalgebra": c.b, "lower_strict": strict.lower_strict, "upper_strict": strict.upper_strict, "outcome": outcome}),
            ))
        }),
    });

    let anchor = "subalgebra vanishing at a point has the intersection property";
    out.push(match sys {
        DynSystem::RationalRotation { .. } => guard("point-condition-subalgebra", anchor, || {
            let b = build_intp(cp, Turn::from_integer(0))?;
            let battery = ideal_battery(cp, cfg.seed, 20);
            let mut misses = 0;
            for ideal in &battery {
                misses += usize::from(!intersect_with_subalgebra(cp, ideal, &b, &opts)?.is_witness());
            }
            let strict = inclusion_witnesses(cp, &b)?;
            Ok(Check::verdict(
                "point-condition-subalgebra",
                anchor,
                misses == 0 && strict.lower_strict && strict.upper_strict,
                json!({"subalgebra": b, "ideals": battery.len(), "misses": misses}),
            ))
        }),
        _ => Check::skipped("point-condition-subalgebra", anchor, "built for rational rotations"),
    });

    let anchor = "an isolated orbit yields subalgebras with and without the intersection property";
    out.push(match sys.as_finite() {
        None => Check::skipped("isolated-orbit-subalgebras", anchor, "needs an isolated orbit (finite system)"),
        Some(fs) => guard("isolated-orbit-subalgebras", anchor, || {
            let base = fs.orbits()[0].base();
            let c1 = ArcSet::arc(Turn::from_integer(0), Turn::new(1, 2))?;
            let iso = build_isolbana(cp, base, Turn::new(1, 4), Turn::new(3, 4), c1, None)?;
            let battery = ideal_battery(cp, cfg.seed, 20);
            let mut misses = 0;
            for ideal in &battery {
                misses += usize::from(!intersect_with_subalgebra(cp, ideal, &iso.b1, &opts)?.is_witness());
            }
            let b2 = intersect_with_subalgebra(cp, &iso.ideal, &iso.b2, &opts)?;
            Ok(Check::verdict(
                "isolated-orbit-subalgebras",
                anchor,
                misses == 0 && b2.is_certified_empty(),
                json!({"b1": iso.b1, "b1_misses": misses, "b2": iso.b2, "b2_outcome": b2}),
            ))
        }),
    });

    out.push(guard("intermediate-subalgebra-classification", "topologically free iff no intermediate subalgebra fails the intersection property", || {
        let anchor = "topologically free iff no intermediate subalgebra fails the intersection property";
        let battery = if irrational { Vec::new() } else { ideal_battery(cp, cfg.seed, 20) };
        let rep = mellankompl_report(cp, &battery, &opts)?;
        let expected = if sys.is_topologically_free() { MellanCase::TopologicallyFree } else { MellanCase::NotTopologicallyFree };
        Ok(Check::verdict(
            "intermediate-subalgebra-classification",
            anchor,
            rep.consistent() && rep.case == expected,
            json!({"case": rep.case, "branch": rep.branch, "commutant_equals_base": rep.commutant_equals_base}),
        ))
    }));

    let anchor = "a closed invariant set of characters restricting onto X still separates C(X)′ from C(X)";
    out.push(if irrational {
        Check::skipped("character-separation", anchor, NO_PERIODIC_POINTS)
    } else {
        guard("character-separation", anchor, || {
            let rep = separation_replay(cp, &cfg.sample_grid())?;
            Ok(Check::verdict(
                "character-separation",
                anchor,
                rep.value_error < 1e-12 && rep.restriction_onto_base && rep.s_values_real,
                json!(rep),
            ))
        })
    });
    out
}
