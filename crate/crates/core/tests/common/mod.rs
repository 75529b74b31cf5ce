#![allow(dead_code)]

use std::path::PathBuf;

use debate_core::{ChallengerPrior, ContestSuccess, GameConfig, NumericSettings, ShockDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> GameConfig {
    GameConfig::from_path(fixture_path(name)).unwrap()
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub struct Case {
    pub name: String,
    pub config: GameConfig,
}

fn random_discrete(rng: &mut ChaCha8Rng) -> ChallengerPrior {
    let k = rng.random_range(2..=6);
    let mut qs: Vec<f64> = Vec::new();
    if rng.random_bool(0.5) {
        qs.push(0.0);
    }
    while qs.len() < k {
        let q = (rng.random_range(0.05..3.0f64) * 20.0).round() / 20.0;
        if !qs.contains(&q) {
            qs.push(q);
        }
    }
    let atoms: Vec<(f64, f64)> = qs
        .into_iter()
        .map(|q| (q, rng.random_range(0.1..1.0)))
        .collect();
    ChallengerPrior::discrete(&atoms).unwrap()
}

fn priors() -> Vec<(String, ChallengerPrior)> {
    let s = NumericSettings::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for i in 0..4 {
        out.push((format!("discrete#{i}"), random_discrete(&mut rng)));
    }
    out.push(("gamma(2,0.5)".into(), ChallengerPrior::gamma(2.0, 0.5, &s).unwrap()));
    out.push(("gamma(1.5,1)".into(), ChallengerPrior::gamma(1.5, 1.0, &s).unwrap()));
    out.push(("lognormal(0,0.5)".into(), ChallengerPrior::lognormal(0.0, 0.5, &s).unwrap()));
    out.push(("lognormal(-0.5,0.4)".into(), ChallengerPrior::lognormal(-0.5, 0.4, &s).unwrap()));
    out.push(("truncexp(1.5,3)".into(), ChallengerPrior::truncated_exponential(1.5, 3.0, &s).unwrap()));
    out.push(("truncexp(0.5,4)".into(), ChallengerPrior::truncated_exponential(0.5, 4.0, &s).unwrap()));
    out.push((
        "grid-triangle".into(),
        ChallengerPrior::grid_density(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 0.0], &s).unwrap(),
    ));
    out.push((
        "grid-bimodal".into(),
        ChallengerPrior::grid_density(
            vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5],
            vec![0.2, 1.0, 0.3, 0.3, 1.0, 0.1],
            &s,
        )
        .unwrap(),
    ));
    out
}

fn csfs() -> Vec<(String, ContestSuccess)> {
    vec![
        ("tullock".into(), ContestSuccess::Tullock),
        ("power(0.5)".into(), ContestSuccess::power_tullock(0.5).unwrap()),
        ("power(0.8)".into(), ContestSuccess::power_tullock(0.8).unwrap()),
    ]
}

fn shocks() -> Vec<(String, ShockDistribution)> {
    vec![
        ("normal(0,1)".into(), ShockDistribution::standard_normal()),
        ("logistic(0,0.6)".into(), ShockDistribution::logistic(0.0, 0.6).unwrap()),
        ("gumbel(0,0.8)".into(), ShockDistribution::gumbel(0.0, 0.8).unwrap()),
        ("uniform(-4,4)".into(), ShockDistribution::uniform(-4.0, 4.0).unwrap()),
    ]
}

pub const Q_I_GRID: [f64; 3] = [0.25, 0.5, 1.0];

/// 12 priors × 3 contest functions × 3 incumbent qualities × 2 shocks
/// (rotating through four families) = 216 games.
pub fn battery() -> Vec<Case> {
    let shocks = shocks();
    let mut out = Vec::new();
    let mut k = 0;
    for (pn, prior) in priors() {
        for (cn, csf) in csfs() {
            for q_i in Q_I_GRID {
                for j in 0..2 {
                    let (sn, shock) = &shocks[(k + j) % shocks.len()];
                    let config = GameConfig::basic(q_i, prior.clone(), *shock, csf.clone()).unwrap();
                    out.push(Case {
                        name: format!("{pn} / {cn} / q_I={q_i} / {sn}"),
                        config,
                    });
                }
                k += 1;
            }
        }
    }
    out
}
