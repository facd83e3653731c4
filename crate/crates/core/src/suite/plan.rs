use std::time::Instant;

use serde::Serialize;

use super::{Check, Config, Record, Report, Status, SuiteError};
use crate::groups::{catalog, Scenario};

/// One entry of the acceptance plan.
#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub criterion: u8,
    pub check: Check,
    pub config: Config,
}

fn step(
    criterion: u8,
    check: Check,
    scenario: Option<&str>,
    q: Option<u64>,
    m: Option<i64>,
    i: Option<i64>,
) -> Step {
    let config = Config {
        scenario: scenario.map(str::to_string),
        q,
        m,
        i,
        ..Default::default()
    };
    Step {
        criterion,
        check,
        config,
    }
}

/// The acceptance suite in dependency order.
pub fn acceptance_plan() -> Vec<Step> {
    use Check::*;
    let mut v = vec![];
    for (s, q) in [("gl2", 2), ("gl2", 3), ("gl3", 2), ("so5-u2", 3)] {
        v.push(step(12, Satake, Some(s), Some(q), None, None));
    }
    for q in [2, 3] {
        v.push(step(2, HeckePoly, Some("gl2"), Some(q), None, None));
    }
    for (s, q) in [
        ("gl2", 2),
        ("gl2", 3),
        ("gl2", 5),
        ("gl3", 2),
        ("gl3", 3),
        ("so5-u2", 3),
    ] {
        v.push(step(1, SeedCheck, Some(s), Some(q), None, None));
    }
    for s in ["gl1", "gl2", "gl3", "so3-gl1-split", "so5-gl2-split"] {
        for q in [3, 5] {
            v.push(step(3, Tame, Some(s), Some(q), None, None));
        }
    }
    v.push(step(
        5,
        Comparison,
        Some("so5-u2"),
        Some(3),
        Some(1),
        Some(1),
    ));
    for (s, m, i) in [("so3-u1", 1, 1), ("so3-u1", 2, 2)] {
        v.push(step(12, Comparison, Some(s), Some(3), Some(m), Some(i)));
    }
    for (s, m) in [
        ("so5-u2", 1),
        ("so5-u2", 2),
        ("so3-u1", 1),
        ("gsp4", 1),
        ("ggp-gl-n2", 1),
    ] {
        v.push(step(6, Cmi, Some(s), Some(3), Some(m), Some(1)));
    }
    for s in ["so3-u1", "so5-u2", "gsp4", "ggp-gl-n2"] {
        for m in [1, 2] {
            v.push(step(7, Conductor, Some(s), Some(3), Some(m), None));
        }
    }
    v.push(step(6, Norm, Some("so3-u1"), Some(3), Some(1), None));
    // Sampling is the whole check only where no lattice certificate exists.
    for info in catalog() {
        for m in [1, 2] {
            let mut st = step(8, Stabilizer, Some(info.name), None, Some(m), None);
            let certified =
                Scenario::build(info.name, None, None).map_or(false, |s| s.h.linear_span.is_some());
            st.config.samples = Some(if certified { 2_000 } else { 10_000 });
            v.push(st);
        }
    }
    for s in ["gl3-so3-theta", "diag-gl2"] {
        v.push(step(8, SymmetricPair, Some(s), None, Some(1), None));
    }
    v.push(step(11, OrdinaryChain, None, Some(3), None, None));
    v.push(step(12, Filtration, None, Some(3), None, None));
    for s in ["so3-u1", "so5-u2"] {
        v.push(step(9, PropertyA, Some(s), Some(3), None, None));
    }
    for f in super::FAMILIES {
        let mut st = step(9, PropertyA, Some(f), Some(3), None, None);
        st.config.breaks = Some(2);
        v.push(st);
    }
    v.push(step(10, Counterexample, None, Some(3), None, None));
    v
}

/// Runs the plan. Run-wide settings in `cfg` (budget, seed, samples) apply
/// to every step; `--scenario` restricts the plan to that scenario.
pub fn run_all(cfg: &Config) -> Result<Report, SuiteError> {
    cfg.validate()?;
    let mut plan = acceptance_plan();
    if let Some(s) = &cfg.scenario {
        if !catalog().iter().any(|i| i.name == s) && !super::FAMILIES.contains(&s.as_str()) {
            return Err(SuiteError::UnknownScenario(s.clone()));
        }
        plan.retain(|st| st.config.scenario.as_deref() == Some(s.as_str()));
    }
    let shared = Config {
        budget: cfg.budget,
        rng_seed: cfg.rng_seed,
        samples: cfg.samples,
        ..Default::default()
    };
    let mut done: Vec<(Check, Status)> = vec![];
    let mut records = vec![];
    for st in plan {
        let blocked = st.check.prerequisites().iter().find(|pre| {
            done.iter()
                .any(|(c, s)| c == *pre && *s == Status::Falsified)
        });
        let step_cfg = st.config.overlay(&shared);
        if let Some(pre) = blocked {
            let start = Instant::now();
            let name = format!(
                "{} {}",
                st.check.name(),
                st.config.scenario.as_deref().unwrap_or("")
            );
            let rec = Record::new(
                name.trim_end(),
                st.check.anchor(),
                st.config.scenario.as_deref(),
            )
            .inconclusive(format!(
                "skipped: prerequisite {} was falsified",
                pre.name()
            ))
            .timed(start);
            done.push((st.check, rec.status));
            records.push(rec);
            continue;
        }
        for rec in st.check.run(&step_cfg)? {
            log::info!("{}", rec.summary());
            done.push((st.check, rec.status));
            records.push(rec);
        }
    }
    Ok(Report::new("all", cfg.resolved(), records))
}
