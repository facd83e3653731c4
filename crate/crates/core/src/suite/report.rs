use std::time::Instant;

use serde::Serialize;

use super::Config;

pub const SCHEMA_VERSION: u32 = 1;
pub const SATAKE_NORMALIZATION: &str =
    "Sat(T_lambda)(nu) = q^(-<rho, nu>) * #{cosets of K lambda(p) K with Iwasawa component nu}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Inconclusive,
    Falsified,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Verified => 0,
            Status::Falsified => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub name: String,
    pub anchor: String,
    pub scenario: Option<String>,
    pub status: Status,
    pub witnesses: Vec<String>,
    pub message: Option<String>,
    pub counts: serde_json::Value,
    pub timing_ms: u64,
}

impl Record {
    pub(crate) fn new(name: impl Into<String>, anchor: &str, scenario: Option<&str>) -> Self {
        Record {
            name: name.into(),
            anchor: anchor.to_string(),
            scenario: scenario.map(str::to_string),
            status: Status::Inconclusive,
            witnesses: vec![],
            message: None,
            counts: serde_json::Value::Null,
            timing_ms: 0,
        }
    }

    /// `Verified` when `ok`, otherwise `Falsified` carrying `witness`.
    pub(crate) fn decide(mut self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            self.status = Status::Verified;
        } else {
            self.status = Status::Falsified;
            self.witnesses.push(witness());
        }
        self
    }

    pub(crate) fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Inconclusive;
        self.message = Some(why.into());
        self
    }

    pub(crate) fn counts<T: Serialize>(mut self, c: &T) -> Self {
        self.counts = serde_json::to_value(c).unwrap_or(serde_json::Value::Null);
        self
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_millis() as u64;
        self
    }

    /// One line for terminal output.
    pub fn summary(&self) -> String {
        let status = match self.status {
            Status::Verified => "verified",
            Status::Falsified => "FALSIFIED",
            Status::Inconclusive => "inconclusive",
        };
        let mut line = format!("{:<12} {}", status, self.name);
        if let Some(m) = &self.message {
            line.push_str(&format!(": {}", m));
        }
        for w in &self.witnesses {
            line.push_str(&format!("\n             witness: {}", w));
        }
        line
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub satake_normalization: String,
    pub command: String,
    pub config: Config,
    pub records: Vec<Record>,
    pub verdict: Status,
}

impl Report {
    pub fn new(command: &str, config: Config, records: Vec<Record>) -> Self {
        let verdict = if records.is_empty() {
            Status::Inconclusive
        } else {
            records.iter().map(|r| r.status).max().unwrap()
        };
        Report {
            schema: SCHEMA_VERSION,
            tool: "tamenorm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            satake_normalization: SATAKE_NORMALIZATION.into(),
            command: command.into(),
            config,
            records,
            verdict,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: Status) -> Record {
        let mut r = Record::new("x", "anchor", None);
        r.status = s;
        r
    }

    #[test]
    fn verdict_is_the_worst_status() {
        let r = Report::new(
            "t",
            Config::default(),
            vec![rec(Status::Verified), rec(Status::Inconclusive)],
        );
        assert_eq!((r.verdict, r.exit_code()), (Status::Inconclusive, 2));
        let r = Report::new(
            "t",
            Config::default(),
            vec![rec(Status::Inconclusive), rec(Status::Falsified)],
        );
        assert_eq!((r.verdict, r.exit_code()), (Status::Falsified, 1));
        assert_eq!(
            Report::new("t", Config::default(), vec![]).verdict,
            Status::Inconclusive
        );
    }

    #[test]
    fn json_carries_the_header() {
        let v: serde_json::Value = serde_json::from_str(
            &Report::new("t", Config::default(), vec![rec(Status::Verified)]).to_json(),
        )
        .unwrap();
        assert_eq!(v["schema"], SCHEMA_VERSION);
        assert_eq!(v["verdict"], "verified");
        assert_eq!(v["records"][0]["status"], "verified");
    }
}
