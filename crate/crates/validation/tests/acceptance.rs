//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use evgame::analysis::{case_a_condition, case_b_condition, metrics, Group, GroupCheck, Preference};
use evgame::equilibrium::{c_nash_closed_form, c_nash_via_kkt, check_lemma1, nash_closed_form};
use evgame::format::{run_sweep, sweep_csv, three_station_table};
use evgame::oracle::{best_response_equilibrium, kkt_residual};
use evgame::scenarios::{
    build_mixed_random, build_section43, random_instance, InstanceBounds, InstanceKind, SeededRng,
    Section43Sweep, SweepSpec,
};
use evgame::{CoalitionStructure, Scenario};

const INSTANCES: u64 = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{} [{:.2}s]", out.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            out.pass = false;
            out.detail = format!("{} exceeds {}s limit", out.detail, limit.as_secs());
        }
    }
    out
}

fn random_suite() -> Vec<(Scenario, CoalitionStructure)> {
    let bounds = InstanceBounds::default();
    (0..INSTANCES)
        .map(|seed| random_instance(&bounds, seed).expect("valid bounds"))
        .collect()
}

fn solver_equivalence() -> Outcome {
    let mut worst_diff: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    for (s, c) in random_suite() {
        let closed = c_nash_closed_form(&s, &c).expect("closed form");
        let kkt = c_nash_via_kkt(&s, &c).expect("kkt");
        let br = best_response_equilibrium(&s, &c).expect("best response");
        let br_res = kkt_residual(&s, &c, &br).expect("residual");
        worst_diff = worst_diff
            .max(closed.profile.max_abs_diff(&kkt.profile))
            .max(closed.profile.max_abs_diff(&br))
            .max(kkt.profile.max_abs_diff(&br));
        worst_res = worst_res.max(closed.kkt_residual).max(kkt.kkt_residual).max(br_res);
    }
    Outcome::new(
        worst_diff <= 1e-6 && worst_res <= 1e-8,
        format!("max pairwise diff {worst_diff:.2e} (≤1e-6), max KKT residual {worst_res:.2e} (≤1e-8)"),
    )
}

fn positive_definiteness() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for (s, c) in random_suite() {
        let r = check_lemma1(&s, &c).expect("lemma report");
        if !r.q_pd {
            failures += 1;
        }
        worst = worst.max(r.gamma_identity_error);
    }
    Outcome::new(
        failures == 0 && worst <= 1e-10,
        format!("{failures} factorization failures, max ‖Γ·Q/T − I‖ {worst:.2e} (≤1e-10)"),
    )
}

fn singleton_collapse() -> Outcome {
    let mut worst: f64 = 0.0;
    for (s, c) in random_suite() {
        let nash = nash_closed_form(&s).expect("nash");
        let split = c_nash_closed_form(&s, &c.to_singletons()).expect("singletons");
        worst = worst.max(nash.profile.max_abs_diff(&split.profile));
    }
    Outcome::new(worst <= 1e-12, format!("max deviation {worst:.2e} (≤1e-12)"))
}

fn flat_prices_uniform_profiles() -> Outcome {
    let mut worst: f64 = 0.0;
    for (s, c) in random_suite() {
        let a0 = s.price_intercepts()[0];
        let flat = Scenario::with_uniform_nominal(
            vec![a0; s.horizon()],
            s.price_slope(),
            s.sensitivities().iter().copied().collect(),
            s.demands().iter().copied().collect(),
        )
        .expect("valid scenario");
        let target = flat.uniform_profile();
        for profile in [
            nash_closed_form(&flat).expect("nash").profile,
            c_nash_closed_form(&flat, &c).expect("c-nash").profile,
        ] {
            worst = worst.max(profile.max_abs_diff(&target));
        }
    }
    Outcome::new(worst <= 1e-12, format!("max |x − d/T| {worst:.2e} (≤1e-12)"))
}

/// Counts verdict/direct-comparison disagreements with `|gap| ≥ 1e-9`.
fn sign_mismatches(checks: &[&GroupCheck]) -> (usize, usize) {
    let mut compared = 0;
    let mut mismatched = 0;
    for g in checks {
        if g.condition_gap.abs() < 1e-9 {
            continue;
        }
        compared += 1;
        let nash_preferred = g.cost_nash <= g.cost_cnash;
        if (g.verdict == Preference::Nash) != nash_preferred {
            mismatched += 1;
        }
    }
    (compared, mismatched)
}

fn single_coalition_bounds(kind: InstanceKind) -> InstanceBounds {
    InstanceBounds {
        coalitions: (1, 1),
        horizon: (2, 24),
        ..InstanceBounds::default()
    }
    .with_kind(kind)
}

fn case_a_iff() -> Outcome {
    let bounds = single_coalition_bounds(InstanceKind::CaseA);
    let groups = Group::standard();
    let (mut compared, mut mismatched) = (0, 0);
    let mut worst_invariance: f64 = 0.0;
    for seed in 0..INSTANCES {
        let (s, c) = random_instance(&bounds, seed).expect("instance");
        let rep = case_a_condition(&s, &c, &groups).expect("case A hypotheses");
        let (k, m) = sign_mismatches(&rep.groups.iter().collect::<Vec<_>>());
        compared += k;
        mismatched += m;

        // Same (μ, b, d); new horizon, profile shape and intercept level.
        let mut rng = SeededRng::new(seed ^ 0x9e37_79b9_7f4a_7c15);
        let horizon = rng.int_in(2, 24);
        let variant = Scenario::with_alpha(
            vec![rng.uniform_in(-1.0, 3.0); horizon],
            s.price_slope(),
            s.sensitivities().iter().copied().collect(),
            s.demands().iter().copied().collect(),
            &rng.simplex(horizon),
        )
        .expect("variant");
        let rep2 = case_a_condition(&variant, &c, &groups).expect("case A hypotheses");
        for (g1, g2) in rep.groups.iter().zip(&rep2.groups) {
            let scale = g1.condition_gap.abs().max(g2.condition_gap.abs());
            if scale > 0.0 {
                worst_invariance = worst_invariance.max((g1.condition_gap - g2.condition_gap).abs() / scale);
            }
        }
    }
    Outcome::new(
        mismatched == 0 && worst_invariance <= 1e-10,
        format!(
            "{mismatched} sign mismatches in {compared} non-tie comparisons; max relative gap change {worst_invariance:.2e} (≤1e-10)"
        ),
    )
}

fn case_b_iff() -> Outcome {
    let bounds = single_coalition_bounds(InstanceKind::CaseB);
    let groups = Group::standard();
    let (mut compared, mut mismatched, mut flips) = (0, 0, 0);
    for seed in 0..INSTANCES {
        let (s, c) = random_instance(&bounds, seed).expect("instance");
        let rep = case_b_condition(&s, &c, &groups).expect("case B hypotheses");
        let checks: Vec<&GroupCheck> = rep.groups.iter().map(|g| &g.check).collect();
        let (k, m) = sign_mismatches(&checks);
        compared += k;
        mismatched += m;

        let scaled = s.with_scaled_demands(3.7).expect("scaled");
        let rep2 = case_b_condition(&scaled, &c, &groups).expect("case B hypotheses");
        flips += rep
            .groups
            .iter()
            .zip(&rep2.groups)
            .filter(|(g1, g2)| g1.check.verdict != g2.check.verdict)
            .count();
    }
    Outcome::new(
        mismatched == 0 && flips == 0,
        format!("{mismatched} sign mismatches in {compared} non-tie comparisons; {flips} verdict changes under demand rescaling"),
    )
}

fn below(m: Option<f64>) -> bool {
    m.is_some_and(|v| v < 1.0)
}

fn above(m: Option<f64>) -> bool {
    m.is_some_and(|v| v > 1.0)
}

fn section43_reproduction() -> Outcome {
    let t = 10.0;
    let sizes = [1, 2, 3, 4, 5];
    let fig2: Vec<_> = build_section43(&sizes, 0.4 / t, 1.6 / t, 0.0, 0)
        .expect("step-profile family")
        .iter()
        .map(|(s, c)| metrics(s, c).expect("metrics"))
        .collect();
    let fig2_coalition = fig2.iter().position(|m| below(m.m_coalition));
    let fig2_all = fig2
        .iter()
        .position(|m| m.triple().iter().all(|&v| below(v)));
    let fig3: Vec<_> = build_section43(&sizes, 1.0 / t, 1.0 / t, 0.4, 2024)
        .expect("noisy-price family")
        .iter()
        .map(|(s, c)| metrics(s, c).expect("metrics"))
        .collect();
    let fig3_split = fig3
        .iter()
        .position(|m| below(m.m_coalition) && above(m.m_outside));
    let size = |p: Option<usize>| p.map_or("none".to_string(), |i| sizes[i].to_string());
    Outcome::new(
        fig2_coalition.is_some() && fig2_all.is_some() && fig3_split.is_some(),
        format!(
            "step profile: M_C<1 at size {}, all<1 at size {}; noisy prices: M_C<1 & M_out>1 at size {}",
            size(fig2_coalition),
            size(fig2_all),
            size(fig3_split)
        ),
    )
}

fn three_station_table_reproduction() -> Outcome {
    let rows = three_station_table().expect("table");
    let mut ok = true;
    let mut notes = Vec::new();
    for r in &rows {
        let m = [r.m_all, r.m_coalition, r.m_outside];
        if r.coalition == "HH" && r.outsider == "L" {
            let pass = m.iter().all(|&v| below(v));
            ok &= pass;
            notes.push(format!("HH|L all<1: {pass}"));
        }
        if r.coalition.contains('H') && r.outsider == "H" {
            let pass = m.iter().all(|&v| above(v));
            ok &= pass;
            notes.push(format!("{}|H all>1: {pass}", r.coalition));
        }
    }
    Outcome::new(ok, notes.join(", "))
}

fn mixed_random_direction() -> Outcome {
    let seeds = 50;
    let hits = (0..seeds)
        .filter(|&seed| {
            let (s, c) = build_mixed_random(5, 10, 0.2, 2, seed).expect("mixed instance");
            let m = metrics(&s, &c).expect("metrics");
            m.triple().iter().all(|&v| below(v))
        })
        .count();
    Outcome::new(
        hits * 5 >= seeds as usize * 4,
        format!("all metrics < 1 at size 2 for {hits}/{seeds} seeds (need ≥ 80%)"),
    )
}

fn determinism() -> Outcome {
    let spec = |seed| {
        SweepSpec::Section43(Section43Sweep {
            coalition_sizes: vec![1, 2, 3, 4, 5],
            eta1: 0.1,
            eta2: 0.1,
            delta: 0.4,
            seed,
        })
    };
    let run = |seed| sweep_csv(&run_sweep(&spec(seed)).expect("sweep"));
    let first = run(7);
    let second = run(7);
    let other = run(8);
    Outcome::new(
        first.as_bytes() == second.as_bytes() && first != other,
        format!(
            "same seed byte-identical: {}, different seed differs: {}",
            first == second,
            first != other
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("1 solver equivalence", Some(60), solver_equivalence),
        ("2 positive definiteness and Γ identity", None, positive_definiteness),
        ("3 singleton collapse", None, singleton_collapse),
        ("4 flat prices give uniform schedules", None, flat_prices_uniform_profiles),
        ("5 constant-price condition iff", None, case_a_iff),
        ("6 uniform-profile condition iff", None, case_b_iff),
        ("7 five-station sweep directions", Some(5), section43_reproduction),
        ("8 three-station table", Some(1), three_station_table_reproduction),
        ("9 random-type sweep direction", None, mixed_random_direction),
        ("10 deterministic sweep CSV", None, determinism),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let out = timed(limit.map(Duration::from_secs), run);
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name}: {}", out.detail);
        if !out.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
