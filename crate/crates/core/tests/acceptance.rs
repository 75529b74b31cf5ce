//! End-to-end acceptance battery. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{battery, fixture, Case};
use debate_core::*;

struct Outcome {
    passed: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn within_time(out: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    if out.passed && elapsed > limit {
        fail(format!("{} but took {elapsed:.2?} (limit {limit:?})", out.detail))
    } else {
        Outcome {
            detail: format!("{} in {elapsed:.2?}", out.detail),
            ..out
        }
    }
}

fn posterior_ordering(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    for c in cases {
        let s = match posterior_means(&c.config) {
            Ok(s) => s,
            Err(e) => return fail(format!("{}: {e}", c.name)),
        };
        let mean = c.config.prior().mean();
        let mixture = s.win_mass * s.mean_given_win + (1.0 - s.win_mass) * s.mean_given_loss;
        if !(s.mean_given_win > mean && mean > s.mean_given_loss) || (mixture - mean).abs() > 1e-8 {
            return fail(format!("{}: {s:?}", c.name));
        }
    }
    within_time(
        pass(format!("{} fixtures ordered, mixture identity within 1e-8", cases.len())),
        start.elapsed(),
        Duration::from_secs(10),
    )
}

fn jensen_direction(cases: &[Case]) -> Outcome {
    let (mut concave, mut convex, mut affine, mut mixed) = (0, 0, 0, 0);
    let mut games: Vec<(String, GameConfig)> =
        cases.iter().map(|c| (c.name.clone(), c.config.clone())).collect();
    for f in ["f1-uniform.json", "f1-normal.json", "nodebate-negexp.json"] {
        games.push((f.to_string(), fixture(f)));
    }
    for (name, config) in &games {
        let r = match check_posterior_ordering(config) {
            Ok(r) => r,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        match r.jensen_direction {
            Curvature::Concave => concave += 1,
            Curvature::Convex => convex += 1,
            Curvature::Affine => affine += 1,
            Curvature::Mixed => mixed += 1,
        }
        if r.jensen_holds == Some(false) {
            return fail(format!(
                "{name}: {:?} but debate {} vs no debate {}",
                r.jensen_direction, r.debate_payoff, r.no_debate_payoff
            ));
        }
    }
    let f1 = check_posterior_ordering(&fixture("f1-uniform.json")).unwrap();
    if f1.jensen_direction != Curvature::Affine
        || (f1.debate_payoff - f1.no_debate_payoff).abs() > 1e-10
    {
        return fail(format!("f1-uniform not affine-equal: {f1:?}"));
    }
    if concave == 0 || convex == 0 {
        return fail(format!("battery lacks a curvature class: {concave} concave, {convex} convex"));
    }
    pass(format!(
        "{concave} concave, {convex} convex, {affine} affine (within 1e-10), {mixed} mixed skipped"
    ))
}

fn classification() -> Outcome {
    // Independent oracles: tabulated standard normal CDF and closed-form exponentials.
    let phi_1 = 0.841_344_746_068_542_9;
    let phi_m_half = 0.308_537_538_725_986_9;
    let normal_margin = phi_1 / 3.0 + 2.0 * phi_m_half / 3.0 - 0.5;
    let negexp_margin =
        (-0.6f64).exp() / 7.0 + 6.0 * (1.0f64 / 6.0 - 1.0).exp() / 7.0 - (-0.8f64).exp();

    let n = classify_equilibrium(&fixture("f1-normal.json")).unwrap();
    let z = classify_equilibrium(&fixture("nodebate-negexp.json")).unwrap();
    let u = classify_equilibrium(&fixture("f1-uniform.json")).unwrap();
    let checks = [
        (n.regime == Regime::Debate, "f1-normal regime"),
        ((n.margin + 0.01389).abs() <= 1e-4, "f1-normal margin vs -0.01389"),
        ((n.margin - normal_margin).abs() <= 1e-12, "f1-normal margin vs normal CDF oracle"),
        (z.regime == Regime::NoDebate, "no-debate regime"),
        ((z.margin - 0.00158).abs() <= 1e-4, "no-debate margin vs +0.00158"),
        ((z.margin - negexp_margin).abs() <= 1e-12, "no-debate margin vs exponential oracle"),
        (u.regime == Regime::KnifeEdge, "f1-uniform regime"),
        (u.margin.abs() <= 1e-10, "f1-uniform margin"),
    ];
    for (ok, what) in checks {
        if !ok {
            return fail(format!("{what}: margins {} / {} / {}", n.margin, z.margin, u.margin));
        }
    }
    pass(format!(
        "margins {:.6} (Debate), {:+.6} (NoDebate), {:.1e} (KnifeEdge)",
        n.margin, z.margin, u.margin
    ))
}

fn pooling_uniqueness(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut scanned = 0;
    for c in cases {
        let grid = default_strategy_grid(&c.config).unwrap();
        let r = match threshold_consistency_scan(&c.config, &grid) {
            Ok(r) => r,
            Err(e) => return fail(format!("{}: {e}", c.name)),
        };
        scanned += r.checks.len();
        let missing_witness = r
            .checks
            .iter()
            .any(|s| s.strategy != ThresholdStrategy::AlwaysP && s.consistent == s.witness.is_some());
        if !r.always_p_unique || missing_witness {
            failures.push(format!("{} (consistent: {:?})", c.name, r.consistent));
        }
    }
    let out = if failures.is_empty() {
        pass(format!("always-P unique on {} fixtures, {scanned} rules checked", cases.len()))
    } else {
        fail(format!(
            "{} of {} fixtures admit another consistent rule, first: {}",
            failures.len(),
            cases.len(),
            failures[0]
        ))
    };
    within_time(out, start.elapsed(), Duration::from_secs(60))
}

fn crossing(cases: &[Case]) -> Outcome {
    let q = crossing_quality(&fixture("f1-normal.json")).unwrap();
    if (q - 0.5).abs() > 1e-10 {
        return fail(format!("f1 crossing {q}"));
    }
    for c in cases {
        let q = match crossing_quality(&c.config) {
            Ok(q) => q,
            Err(e) => return fail(format!("{}: {e}", c.name)),
        };
        if !(q > 0.0 && q < c.config.prior().mean()) {
            return fail(format!("{}: crossing {q} outside (0, mean)", c.name));
        }
    }
    pass(format!("f1 crossing {q:.12}; inside (0, mean) on {} fixtures", cases.len()))
}

fn informativeness() -> Outcome {
    let c = fixture("f1-uniform.json");
    let expect = [
        (0.0, 0.125, 0.25, Label::Informative),
        (4.0, 0.325, 0.5, Label::Informative),
        (1.0, 0.0625, 0.0, Label::Noisy),
    ];
    for (q, d, n, label) in expect {
        let r = classify_debate(q, &c).unwrap();
        if (r.debate_error - d).abs() > 1e-12 || (r.no_debate_error - n).abs() > 1e-12 || r.label != label {
            return fail(format!("q_C = {q}: {r:?}"));
        }
    }
    let t = informativeness_thresholds(&c).unwrap();
    match (t.q_l, t.q_h) {
        (Some(l), Some(h)) if 0.0 < l && l < 1.0 && 1.0 < h && h < 4.0 => {
            pass(format!("errors match; q_L = {l:.6}, q_H = {h:.6}"))
        }
        _ => fail(format!("thresholds {t:?}")),
    }
}

fn sequence_invariance(cases: &[Case]) -> Outcome {
    use Announcement::{NP, P};
    let mut checked = 0;
    let mut no_debate = 0;
    let mut games: Vec<(String, GameConfig)> =
        cases.iter().map(|c| (c.name.clone(), c.config.clone())).collect();
    games.push(("nodebate-negexp.json".into(), fixture("nodebate-negexp.json")));
    for (name, config) in &games {
        let r = match sequence_invariance_check(config) {
            Ok(r) => r,
            Err(e) => return fail(format!("{name}: {e}")),
        };
        if r.refused {
            continue;
        }
        checked += 1;
        if !r.invariant {
            return fail(format!("{name}: not invariant ({:?})", r.regime));
        }
        if r.regime == Regime::NoDebate {
            no_debate += 1;
            let expected: [&[(Announcement, Announcement)]; 3] = [
                &[(NP, P)],
                &[(NP, P), (NP, NP)],
                &[(P, NP), (NP, P), (NP, NP)],
            ];
            for (s, want) in r.sequences.iter().zip(expected) {
                let got: Vec<_> = s.equilibria.iter().map(|e| (e.incumbent, e.challenger)).collect();
                if got != want {
                    return fail(format!("{name} {:?}: {got:?}", s.sequence));
                }
            }
        }
    }
    pass(format!("{checked} non-knife-edge games invariant; {no_debate} no-debate sets exact"))
}

fn monte_carlo() -> Outcome {
    let n = 1_000_000;
    let mut worst: f64 = 0.0;
    for f in ["f1-uniform.json", "f1-normal.json", "nodebate-negexp.json", "gamma-normal.json"] {
        let c = fixture(f);
        let start = Instant::now();
        let r = oracle_check(&c, n, 42).unwrap();
        let elapsed = start.elapsed();
        if !r.all_pass {
            let bad: Vec<_> = r.comparisons.iter().filter(|c| c.verdict != Verdict::Pass).collect();
            return fail(format!("{f}: {bad:?}"));
        }
        if elapsed > Duration::from_secs(30) {
            return fail(format!("{f}: took {elapsed:.2?}"));
        }
        for cmp in &r.comparisons {
            worst = worst.max((cmp.analytic - cmp.estimate).abs() / cmp.stderr);
        }
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| serde_json::to_string(&oracle_check(&c, 200_000, 7).unwrap()).unwrap());
        let b = many.install(|| serde_json::to_string(&oracle_check(&c, 200_000, 7).unwrap()).unwrap());
        if a != b {
            return fail(format!("{f}: reports differ across thread counts"));
        }
    }
    pass(format!("4 fixtures, largest deviation {worst:.2} stderr; thread-count reproducible"))
}

fn quadrature() -> Outcome {
    let s = NumericSettings::default();
    let priors = [
        ("gamma(2,0.5)", ChallengerPrior::gamma(2.0, 0.5, &s).unwrap(), 1.0),
        ("gamma(3,0.7)", ChallengerPrior::gamma(3.0, 0.7, &s).unwrap(), 2.1),
        ("lognormal(0,0.5)", ChallengerPrior::lognormal(0.0, 0.5, &s).unwrap(), 0.125f64.exp()),
        ("lognormal(0.3,0.3)", ChallengerPrior::lognormal(0.3, 0.3, &s).unwrap(), (0.3 + 0.045f64).exp()),
    ];
    let mut worst_mean: f64 = 0.0;
    let mut worst_payoff: f64 = 0.0;
    for (name, prior, closed) in priors {
        let m = expect_over_prior(|q| q, &prior, &s).unwrap();
        worst_mean = worst_mean.max((m - closed).abs());
        if (m - closed).abs() > 1e-8 {
            return fail(format!("{name}: mean {m} vs {closed}"));
        }
        for shock in [ShockDistribution::standard_normal(), ShockDistribution::gumbel(0.0, 0.8).unwrap()] {
            let c = GameConfig::basic(0.6, prior.clone(), shock, ContestSuccess::Tullock).unwrap();
            let full = BeliefState::full_prior(c.prior());
            let aggregated = expect_over_prior(
                |q| challenger_debate_payoff(q, &full, &c).unwrap(),
                c.prior(),
                &s,
            )
            .unwrap();
            let direct = incumbent_debate_payoff(&c).unwrap();
            worst_payoff = worst_payoff.max((aggregated - direct).abs());
            if (aggregated - direct).abs() > 1e-8 {
                return fail(format!("{name}: aggregated {aggregated} vs direct {direct}"));
            }
        }
    }
    pass(format!("mean error {worst_mean:.1e}, payoff gap {worst_payoff:.1e}"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() {
    let cases = battery();
    let criteria: Vec<Criterion> = vec![
        ("1 posterior ordering", Box::new(|| posterior_ordering(&cases))),
        ("2 curvature direction", Box::new(|| jensen_direction(&cases))),
        ("3 regime classification", Box::new(classification)),
        ("4 pooling uniqueness", Box::new(|| pooling_uniqueness(&cases))),
        ("5 crossing quality", Box::new(|| crossing(&cases))),
        ("6 informativeness", Box::new(informativeness)),
        ("7 order invariance", Box::new(|| sequence_invariance(&cases))),
        ("8 Monte Carlo oracle", Box::new(monte_carlo)),
        ("9 quadrature consistency", Box::new(quadrature)),
    ];
    println!("acceptance battery: {} randomized games", cases.len());
    let mut failed = 0;
    for (name, run) in criteria {
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {name}: {}", out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
