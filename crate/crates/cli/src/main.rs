//! `tamenorm`: run verification checks and write JSON reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tamenorm::groups::catalog;
use tamenorm::suite::{run_all, run_check, Check, Config, Report, SuiteError, FAMILIES};

#[derive(Parser)]
#[command(
    name = "tamenorm",
    version,
    about = "Verification engine for local Hecke, coset and filtration identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hep_mu(U_mu) annihilates 1_bK on the default probes.
    SeedCheck(RunArgs),
    /// Hecke polynomial by both Satake routes.
    HeckePoly(RunArgs),
    /// Satake transform round trip on a box of dominant cocharacters.
    Satake(RunArgs),
    /// Divisibility by q - 1 and the lifted tame relation.
    Tame(RunArgs),
    /// Norm relation at level m.
    Norm(RunArgs),
    /// Coset comparison N_m/N_(m+i) against H_m/H_(m+i).
    Comparison(RunArgs),
    /// Fiber size c(m, i), brute force against the closed form.
    Cmi(RunArgs),
    /// Conductor con(m) of the abelianized level subgroup.
    Conductor(RunArgs),
    /// H(F) ∩ tau^m K tau^-m ⊆ K.
    Stabilizer(RunArgs),
    /// Big-cell factorization for pairs with an involution.
    SymmetricPair(RunArgs),
    /// Trace compatibility of ordinary chains on synthetic towers.
    OrdinaryChain(RunArgs),
    /// Scalar product identities for filtrations.
    Filtration(RunArgs),
    /// Non-positivity of <F, F_zeta> over H-filtrations.
    PropertyA(RunArgs),
    /// The diagonal pair where non-positivity fails.
    Counterexample(RunArgs),
    /// The acceptance suite in dependency order.
    All(RunArgs),
    /// The scenario catalog.
    ListScenarios {
        /// Show a single scenario.
        #[arg(long)]
        scenario: Option<String>,
        /// One JSON object per line.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    scenario: Option<String>,
    /// TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Residue field size (a prime).
    #[arg(long)]
    q: Option<u64>,
    /// Same as --q.
    #[arg(long)]
    p: Option<u64>,
    /// Cocharacter exponents, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Option<Vec<i64>>,
    #[arg(long)]
    m: Option<i64>,
    #[arg(long)]
    i: Option<i64>,
    /// Break bound for filtration sweeps.
    #[arg(long)]
    breaks: Option<i64>,
    /// Chain length, flag length or filtration dimension.
    #[arg(long)]
    length: Option<usize>,
    /// Enumeration budget (cosets or elements).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Probe precision for conductors; search bound for the counterexample.
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    towers: Option<usize>,
    #[arg(long)]
    modulus: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
}

impl RunArgs {
    fn flags(&self) -> Config {
        Config {
            scenario: self.scenario.clone(),
            q: self.q,
            p: self.p,
            mu: self.mu.clone(),
            m: self.m,
            i: self.i,
            breaks: self.breaks,
            length: self.length,
            budget: self.budget,
            rng_seed: self.rng_seed,
            precision: self.precision,
            samples: self.samples,
            towers: self.towers,
            modulus: self.modulus,
        }
    }
}

fn load_config(path: &Path) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

fn known_names() -> Vec<&'static str> {
    catalog()
        .iter()
        .map(|s| s.name)
        .chain(FAMILIES.iter().copied())
        .collect()
}

fn suggestion(name: &str) -> Option<&'static str> {
    known_names()
        .into_iter()
        .map(|k| (strsim::levenshtein(name, k), k))
        .filter(|(d, k)| *d <= k.len().max(3) / 2 + 1)
        .min()
        .map(|(_, k)| k)
}

fn unknown_scenario(name: &str) -> ExitCode {
    match suggestion(name) {
        Some(s) => eprintln!("error: unknown scenario `{}`; did you mean `{}`?", name, s),
        None => eprintln!(
            "error: unknown scenario `{}`; see `tamenorm list-scenarios`",
            name
        ),
    }
    ExitCode::from(2)
}

#[derive(Serialize)]
struct Listing {
    name: &'static str,
    anchor: &'static str,
    ambient: &'static str,
    subgroup: &'static str,
    kind: String,
    default_q: Option<u64>,
    default_mu: Option<&'static [i64]>,
    tame_mu: Option<&'static [i64]>,
    parameters: Vec<&'static str>,
}

fn listings() -> Vec<Listing> {
    let mut v: Vec<Listing> = catalog()
        .iter()
        .map(|s| Listing {
            name: s.name,
            anchor: s.anchor,
            ambient: s.ambient,
            subgroup: s.subgroup,
            kind: format!("{:?}", s.kind),
            default_q: Some(s.default_p),
            default_mu: Some(s.default_mu),
            tame_mu: s.tame_mu,
            parameters: vec![
                "q",
                "mu",
                "m",
                "i",
                "budget",
                "samples",
                "rng-seed",
                "precision",
            ],
        })
        .collect();
    for f in FAMILIES {
        let model = tamenorm::suite::family(f, 3).expect("listed family");
        v.push(Listing {
            name: f,
            anchor: "property-a, positive family",
            ambient: model.name,
            subgroup: model.name,
            kind: "FiltrationFamily".into(),
            default_q: Some(3),
            default_mu: None,
            tame_mu: None,
            parameters: vec!["q", "breaks", "rng-seed"],
        });
    }
    v
}

fn list(scenario: Option<String>, json: bool) -> ExitCode {
    let mut all = listings();
    if let Some(name) = scenario {
        all.retain(|l| l.name == name);
        if all.is_empty() {
            return unknown_scenario(&name);
        }
    }
    for l in &all {
        if json {
            println!("{}", serde_json::to_string(l).expect("listing serializes"));
        } else {
            let mu = l.default_mu.map_or("-".to_string(), |m| format!("{:?}", m));
            println!(
                "{:<15} {:<45} q={} mu={}",
                l.name,
                l.anchor,
                l.default_q.unwrap_or(3),
                mu
            );
        }
    }
    ExitCode::SUCCESS
}

fn print_report(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json());
        return;
    }
    println!("tamenorm {} {}", report.version, report.command);
    for r in &report.records {
        println!("{}", r.summary());
    }
    println!("verdict: {:?}", report.verdict);
}

fn run(name: &str, args: RunArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => match load_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: config {}", e);
                return ExitCode::from(2);
            }
        },
        None => Config::default(),
    };
    cfg = cfg.overlay(&args.flags());
    let result = match Check::from_name(name) {
        Some(check) => run_check(check, &cfg),
        None => run_all(&cfg),
    };
    let report = match result {
        Ok(r) => r,
        Err(SuiteError::UnknownScenario(n)) => return unknown_scenario(&n),
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    print_report(&report, args.json);
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, args) = match cli.command {
        Command::ListScenarios { scenario, json } => return list(scenario, json),
        Command::SeedCheck(a) => ("seed-check", a),
        Command::HeckePoly(a) => ("hecke-poly", a),
        Command::Satake(a) => ("satake", a),
        Command::Tame(a) => ("tame", a),
        Command::Norm(a) => ("norm", a),
        Command::Comparison(a) => ("comparison", a),
        Command::Cmi(a) => ("cmi", a),
        Command::Conductor(a) => ("conductor", a),
        Command::Stabilizer(a) => ("stabilizer", a),
        Command::SymmetricPair(a) => ("symmetric-pair", a),
        Command::OrdinaryChain(a) => ("ordinary-chain", a),
        Command::Filtration(a) => ("filtration", a),
        Command::PropertyA(a) => ("property-a", a),
        Command::Counterexample(a) => ("counterexample", a),
        Command::All(a) => ("all", a),
    };
    run(name, args)
}
