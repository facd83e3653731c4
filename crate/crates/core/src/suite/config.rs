use serde::{Deserialize, Serialize};

use super::SuiteError;

pub const DEFAULT_BUDGET: usize = 2_000_000;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_BREAKS: i64 = 3;
pub const DEFAULT_CHAIN_LENGTH: usize = 5;
pub const DEFAULT_TOWERS: usize = 100;
pub const DEFAULT_MODULUS: u64 = 81;

/// Run parameters. Every field is optional so that a TOML file and command
/// line flags can be layered; `resolved` fills in the defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub scenario: Option<String>,
    pub q: Option<u64>,
    pub p: Option<u64>,
    pub mu: Option<Vec<i64>>,
    pub m: Option<i64>,
    pub i: Option<i64>,
    pub breaks: Option<i64>,
    pub length: Option<usize>,
    pub budget: Option<usize>,
    pub rng_seed: Option<u64>,
    pub precision: Option<i64>,
    pub samples: Option<usize>,
    pub towers: Option<usize>,
    pub modulus: Option<u64>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Config { $($f: $top.$f.or($base.$f)),* }
    };
}

impl Config {
    /// Values in `top` win.
    pub fn overlay(&self, top: &Config) -> Config {
        let (base, top) = (self.clone(), top.clone());
        overlay!(
            base, top, scenario, q, p, mu, m, i, breaks, length, budget, rng_seed, precision,
            samples, towers, modulus
        )
    }

    /// The residue field size; `--q` and `--p` name the same prime here.
    pub fn prime(&self) -> Result<Option<u64>, SuiteError> {
        match (self.q, self.p) {
            (Some(q), Some(p)) if q != p => Err(SuiteError::Config(format!(
                "q = {} and p = {} disagree (residue fields are prime)",
                q, p
            ))),
            (q, p) => Ok(q.or(p)),
        }
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        let prime = self.prime()?;
        if let Some(q) = prime {
            if q < 2 || !(2..q).take_while(|d| d * d <= q).all(|d| q % d != 0) {
                return Err(SuiteError::Config(format!("q: {} is not a prime", q)));
            }
        }
        if let Some(m) = self.m {
            if m < 0 {
                return Err(SuiteError::Config(format!("m: level {} is negative", m)));
            }
        }
        if let Some(i) = self.i {
            if i < 0 {
                return Err(SuiteError::Config(format!("i: step {} is negative", i)));
            }
        }
        if let Some(b) = self.breaks {
            if b < 0 {
                return Err(SuiteError::Config(format!(
                    "breaks: bound {} is negative",
                    b
                )));
            }
        }
        if self.length == Some(0) {
            return Err(SuiteError::Config("length: must be positive".into()));
        }
        if self.budget == Some(0) {
            return Err(SuiteError::Config("budget: must be positive".into()));
        }
        if let Some(n) = self.modulus {
            if n < 2 {
                return Err(SuiteError::Config(format!("modulus: {} is below 2", n)));
            }
        }
        if let (Some(pr), m) = (self.precision, self.m.unwrap_or(1)) {
            if pr <= m {
                return Err(SuiteError::Config(format!(
                    "precision: {} does not exceed the level m = {}",
                    pr, m
                )));
            }
        }
        Ok(())
    }

    /// Global defaults filled in; scenario-dependent values stay unset.
    pub fn resolved(&self) -> Config {
        Config {
            budget: Some(self.budget.unwrap_or(DEFAULT_BUDGET)),
            rng_seed: Some(self.rng_seed.unwrap_or(0)),
            samples: Some(self.samples.unwrap_or(DEFAULT_SAMPLES)),
            breaks: Some(self.breaks.unwrap_or(DEFAULT_BREAKS)),
            towers: Some(self.towers.unwrap_or(DEFAULT_TOWERS)),
            modulus: Some(self.modulus.unwrap_or(DEFAULT_MODULUS)),
            ..self.clone()
        }
    }

    pub fn budget(&self) -> usize {
        self.budget.unwrap_or(DEFAULT_BUDGET)
    }

    pub fn seed(&self) -> u64 {
        self.rng_seed.unwrap_or(0)
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_top() {
        let base = Config {
            scenario: Some("gl2".into()),
            q: Some(3),
            m: Some(1),
            ..Default::default()
        };
        let top = Config {
            q: Some(5),
            ..Default::default()
        };
        let c = base.overlay(&top);
        assert_eq!(
            (c.scenario.as_deref(), c.q, c.m),
            (Some("gl2"), Some(5), Some(1))
        );
    }

    #[test]
    fn q_and_p_alias() {
        assert_eq!(
            Config {
                p: Some(7),
                ..Default::default()
            }
            .prime()
            .unwrap(),
            Some(7)
        );
        assert!(Config {
            q: Some(3),
            p: Some(5),
            ..Default::default()
        }
        .prime()
        .is_err());
    }

    #[test]
    fn validation_messages_name_the_field() {
        let err = |c: Config| match c.validate() {
            Err(SuiteError::Config(s)) => s,
            other => panic!("{:?}", other),
        };
        assert!(err(Config {
            q: Some(9),
            ..Default::default()
        })
        .starts_with("q:"));
        assert!(err(Config {
            m: Some(-1),
            ..Default::default()
        })
        .starts_with("m:"));
        assert!(err(Config {
            m: Some(3),
            precision: Some(3),
            ..Default::default()
        })
        .starts_with("precision:"));
        assert!(Config {
            q: Some(2),
            m: Some(2),
            precision: Some(6),
            ..Default::default()
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"scenario": "gl2", "rng-seed": 4}"#).is_ok());
        assert!(serde_json::from_str::<Config>(r#"{"bogus": 1}"#).is_err());
    }
}
