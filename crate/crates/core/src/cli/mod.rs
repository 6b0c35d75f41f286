//! Command-line front end. Every subcommand writes one artifact (CSV or
//! JSON) that carries the resolved configuration and the library version.

mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::gate::{
    expected_uses, factory_cost, factory_grid, factory_minimum, gate_budget, klm_concat, klm_resource_bound,
    p_gate_cnot, p_gate_single, primitive_counts, reference, FactoryCostModel, GateConfig, TeleporterSpec,
};
use crate::mc::mc_report;

pub use output::{Artifact, Table};

/// Exit status on success.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification or statistical gate fails.
pub const EXIT_VERIFY_FAILED: i32 = 1;
/// Exit status for invalid flags, config files or output paths.
pub const EXIT_CONFIG: i32 = 2;

pub const PROVENANCE_FORMULA: &str = "formula";
pub const PROVENANCE_MC: &str = "monte-carlo";
pub const PROVENANCE_REFERENCE: &str = "paper-reference";

#[derive(Debug, Parser)]
#[command(name = "parity-loqc", version, about = "Parity-encoded linear-optics gate analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Gate budget against encoding width for a family of teleporter choices (CSV).
    Figscale,
    /// Expected stage uses, primitive counts and factory states for one configuration.
    Resources,
    /// Factory-state cost at the minimum width over encoder orders 2..=5 (CSV).
    Factory,
    /// Monte Carlo comparison of simulated tallies with analytic values.
    Mc,
    /// Fock-level and parity-code golden checks.
    Verify,
    /// Concatenated-code failure iteration and resource bound.
    KlmCompare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Figscale => "figscale",
            Command::Resources => "resources",
            Command::Factory => "factory",
            Command::Mc => "mc",
            Command::Verify => "verify",
            Command::KlmCompare => "klm-compare",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Figscale | Command::Factory => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Target total success probability [default: 0.99 for figscale, 0.95 otherwise]
    #[arg(long, global = true)]
    pub ptot: Option<f64>,
    /// Encoder teleporter order for adding a component [default: 3]
    #[arg(long, global = true)]
    pub na: Option<u32>,
    /// Encoder teleporter order for re-encoding [default: 2]
    #[arg(long, global = true)]
    pub nr: Option<u32>,
    /// Gate teleporter order [default: 1]
    #[arg(long, global = true)]
    pub nt: Option<u32>,
    /// Encoding width; the largest width for figscale [default: 4, figscale 30]
    #[arg(long, global = true)]
    pub w: Option<u32>,
    /// Monte Carlo trials [default: 100000]
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Monte Carlo seed [default: 1]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent. CSV files get a `.meta.json` sidecar.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format [default: csv for figscale and factory, json otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file. All keys are optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub command: Option<Command>,
    pub ptot: Option<f64>,
    pub na: Option<u32>,
    pub nr: Option<u32>,
    pub nt: Option<u32>,
    pub w: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub factory_model: Option<FactoryCostModel>,
}

/// Fully resolved run configuration, echoed into every artifact.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub ptot: f64,
    pub na: u32,
    pub nr: u32,
    pub nt: u32,
    pub w: u32,
    pub trials: u64,
    pub seed: u64,
    pub format: Format,
    pub factory_model: FactoryCostModel,
    /// Set when the teleporter orders were given explicitly.
    #[serde(skip)]
    pub explicit_orders: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Verification(_) => EXIT_VERIFY_FAILED,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

/// Merges flags over the config file over the defaults.
pub fn resolve(command: Command, flags: &Flags, file: &FileConfig) -> Result<RunConfig, CliError> {
    if let Some(c) = file.command {
        if c != command {
            return Err(config_err(format!("config is for `{}`, not `{}`", c.name(), command.name())));
        }
    }
    let figscale = command == Command::Figscale;
    let na = flags.na.or(file.na);
    let nr = flags.nr.or(file.nr);
    let nt = flags.nt.or(file.nt);
    let cfg = RunConfig {
        command,
        ptot: flags.ptot.or(file.ptot).unwrap_or(if figscale { 0.99 } else { 0.95 }),
        explicit_orders: na.is_some() || nr.is_some() || nt.is_some(),
        na: na.unwrap_or(3),
        nr: nr.unwrap_or(2),
        nt: nt.unwrap_or(1),
        w: flags.w.or(file.w).unwrap_or(if figscale { 30 } else { 4 }),
        trials: flags.trials.or(file.trials).unwrap_or(100_000),
        seed: flags.seed.or(file.seed).unwrap_or(1),
        format: flags.format.or(file.format).unwrap_or(command.default_format()),
        factory_model: file.factory_model.unwrap_or_default(),
        out: flags.out.clone().or_else(|| file.out.clone()),
    };
    cfg.factory_model.validate().map_err(config_err)?;
    cfg.gate_config()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn gate_config(&self) -> Result<GateConfig, CliError> {
        GateConfig::new(self.na, self.nr, self.nt, self.w, self.ptot).map_err(config_err)
    }
}

/// Result of one subcommand before formatting.
struct Outcome {
    table: Table,
    body: serde_json::Value,
    /// Failure message when a gate did not pass.
    failure: Option<String>,
}

fn budget_value(cfg: &GateConfig) -> Result<f64, CliError> {
    Ok(gate_budget(cfg).map_err(config_err)?.finite().unwrap_or(f64::INFINITY))
}

/// Teleporter orders plotted by figscale: the half encoder for comparison,
/// then encoders of order 2..=4 with re-encoders and gate teleporters of
/// order up to the encoder's.
fn figscale_combos() -> Vec<(u32, u32, u32)> {
    let mut v = vec![(1, 1, 1), (1, 1, 2)];
    for na in 2..=4u32 {
        for nr in 2..=na {
            for nt in 1..=na {
                v.push((na, nr, nt));
            }
        }
    }
    v
}

fn figscale(rc: &RunConfig) -> Result<Outcome, CliError> {
    let combos = if rc.explicit_orders { vec![(rc.na, rc.nr, rc.nt)] } else { figscale_combos() };
    let mut table = Table::new(&["n_a", "n_r", "n_t", "w", "gate_budget"]);
    let mut rows = Vec::new();
    for (na, nr, nt) in combos {
        for w in 1..=rc.w {
            let cfg = GateConfig::new(na, nr, nt, w, rc.ptot).map_err(config_err)?;
            let b = budget_value(&cfg)?;
            table.push(vec![na.to_string(), nr.to_string(), nt.to_string(), w.to_string(), output::num(b)]);
            rows.push(json!({"n_a": na, "n_r": nr, "n_t": nt, "w": w, "gate_budget": output::json_num(b)}));
        }
    }
    table.provenance("gate_budget", PROVENANCE_FORMULA);
    Ok(Outcome { table, body: json!({ "rows": rows }), failure: None })
}

fn value_rows(rows: &[(&str, f64, &str)]) -> (Table, serde_json::Value) {
    let mut table = Table::new(&["quantity", "value", "provenance"]);
    let mut list = Vec::new();
    for (q, v, p) in rows {
        table.push(vec![q.to_string(), output::num(*v), p.to_string()]);
        list.push(json!({"quantity": q, "value": output::json_num(*v), "provenance": p}));
    }
    (table, serde_json::Value::Array(list))
}

fn resources(rc: &RunConfig) -> Result<Outcome, CliError> {
    let cfg = rc.gate_config()?;
    let uses = expected_uses(&cfg).map_err(config_err)?;
    let prim = primitive_counts(&cfg).map_err(config_err)?;
    let states = factory_cost(&cfg, &rc.factory_model).map_err(config_err)?;
    let f = PROVENANCE_FORMULA;
    let r = PROVENANCE_REFERENCE;
    let rows = [
        ("p_gate_single", p_gate_single(&cfg).map_err(config_err)?, f),
        ("p_gate_cnot", p_gate_cnot(&cfg).map_err(config_err)?, f),
        ("gate_budget", budget_value(&cfg)?, f),
        ("e_add", uses.e_add, f),
        ("e_re", uses.e_re, f),
        ("t_g", uses.t_g, f),
        ("n_cs", prim.n_cs, f),
        ("n_elim", prim.n_elim, f),
        ("bell_states", states.bell_states, f),
        ("elim_states", states.elim_states, f),
        ("e_add", reference::E_ADD, r),
        ("e_re", reference::E_RE, r),
        ("t_g", reference::T_G, r),
        ("n_cs", reference::N_CS, r),
        ("n_elim", reference::N_ELIM, r),
    ];
    let (table, list) = value_rows(&rows);
    Ok(Outcome { table, body: json!({ "rows": list }), failure: None })
}

fn factory(rc: &RunConfig) -> Result<Outcome, CliError> {
    let rows = factory_grid(rc.ptot, 2..=5, rc.nt, &rc.factory_model).map_err(config_err)?;
    let cols = ["n_a", "n_r", "n_t", "w", "e_add", "e_re", "t_g", "bell_states", "elim_states", "total_states"];
    let mut table = Table::new(&cols);
    for r in &rows {
        table.push(vec![
            r.n_a.to_string(),
            r.n_r.to_string(),
            r.n_t.to_string(),
            r.w.to_string(),
            output::num(r.e_add),
            output::num(r.e_re),
            output::num(r.t_g),
            output::num(r.bell_states),
            output::num(r.elim_states),
            output::num(r.total_states()),
        ]);
    }
    for c in &cols[4..] {
        table.provenance(c, PROVENANCE_FORMULA);
    }
    let min = factory_minimum(&rows).copied();
    let body = json!({
        "rows": rows,
        "minimum": min,
        "minimum_provenance": PROVENANCE_FORMULA,
        "reference": {
            "bell_states": reference::FACTORY_BELL,
            "elim_states": reference::FACTORY_ELIM,
            "provenance": PROVENANCE_REFERENCE,
        },
    });
    table.summary = body.clone();
    table.summary.as_object_mut().expect("object").remove("rows");
    Ok(Outcome { table, body, failure: None })
}

fn monte_carlo(rc: &RunConfig) -> Result<Outcome, CliError> {
    let cfg = rc.gate_config()?;
    let report = mc_report(&cfg, rc.trials, rc.seed, &rc.factory_model).map_err(config_err)?;
    let cols = ["quantity", "source", "analytic", "empirical_mean", "empirical_stderr", "z", "gated", "pass"];
    let mut table = Table::new(&cols);
    for r in &report.rows {
        let opt = |x: Option<f64>| x.map_or_else(String::new, output::num);
        table.push(vec![
            r.quantity.to_string(),
            serde_json::to_value(r.source).expect("enum").as_str().unwrap_or_default().to_string(),
            output::num(r.analytic),
            opt(r.empirical.map(|e| e.mean)),
            opt(r.empirical.map(|e| e.stderr)),
            opt(r.z),
            r.gated.to_string(),
            r.pass.map_or_else(String::new, |p| p.to_string()),
        ]);
    }
    table.provenance("analytic", "per-row source");
    table.provenance("empirical_mean", PROVENANCE_MC);
    table.provenance("empirical_stderr", PROVENANCE_MC);
    let failure = (!report.passed).then(|| {
        let names: Vec<_> = report.failures().map(|r| format!("{} ({:?})", r.quantity, r.source)).collect();
        format!("|z| > {} for {}", report.z_gate, names.join(", "))
    });
    let body = serde_json::to_value(&report).map_err(config_err)?;
    Ok(Outcome { table, body, failure })
}

fn verify_cmd() -> Result<Outcome, CliError> {
    let checks = verify::run_checks();
    let mut table = Table::new(&["check", "passed", "detail"]);
    for c in &checks {
        table.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
    }
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let failure = (!failed.is_empty()).then(|| failed.join(", "));
    Ok(Outcome { table, body: json!({ "checks": checks, "passed": failed.is_empty() }), failure })
}

fn klm_compare(rc: &RunConfig) -> Result<Outcome, CliError> {
    // a basic teleport fails with probability 1/4 at order 3
    let f0 = 1.0 - TeleporterSpec::new(3).map_err(config_err)?.prob();
    let levels = klm_concat(f0, 6);
    let mut table = Table::new(&["level", "f", "cs_success"]);
    for l in &levels {
        table.push(vec![l.level.to_string(), output::num(l.f), output::num(l.cs_success)]);
    }
    table.provenance("f", PROVENANCE_FORMULA);
    table.provenance("cs_success", PROVENANCE_FORMULA);
    let cfg = rc.gate_config()?;
    let prim = primitive_counts(&cfg).map_err(config_err)?;
    let bound = klm_resource_bound();
    let body = json!({
        "levels": levels,
        "klm_bound": { "elim": bound.elim, "cs": bound.cs, "provenance": PROVENANCE_FORMULA },
        "parity": { "n_cs": prim.n_cs, "n_elim": prim.n_elim, "provenance": PROVENANCE_FORMULA },
    });
    table.summary = json!({ "klm_bound": body["klm_bound"].clone(), "parity": body["parity"].clone() });
    Ok(Outcome { table, body, failure: None })
}

fn execute(rc: &RunConfig) -> Result<Outcome, CliError> {
    match rc.command {
        Command::Figscale => figscale(rc),
        Command::Resources => resources(rc),
        Command::Factory => factory(rc),
        Command::Mc => monte_carlo(rc),
        Command::Verify => verify_cmd(),
        Command::KlmCompare => klm_compare(rc),
    }
}

/// Runs one command line and returns its exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
                return EXIT_OK;
            }
            let _ = write!(stderr, "{text}");
            return EXIT_CONFIG;
        }
    };
    match run_parsed(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.exit_code()
        }
    }
}

fn run_parsed(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.flags.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let rc = resolve(cli.command, &cli.flags, &file)?;
    let outcome = execute(&rc)?;
    let artifact = Artifact::new(&rc, outcome.body, outcome.table);
    artifact.write(&rc, stdout)?;
    match outcome.failure {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn flags_win_over_file() {
        let file: FileConfig = serde_json::from_str(r#"{"seed": 42, "w": 5}"#).unwrap();
        let f = Flags { seed: Some(7), ..flags() };
        let rc = resolve(Command::Mc, &f, &file).unwrap();
        assert_eq!(rc.seed, 7);
        assert_eq!(rc.w, 5);
    }

    #[test]
    fn empty_file_gives_defaults() {
        let file: FileConfig = serde_json::from_str("{}").unwrap();
        let rc = resolve(Command::Resources, &flags(), &file).unwrap();
        assert_eq!((rc.na, rc.nr, rc.nt, rc.w, rc.seed, rc.trials), (3, 2, 1, 4, 1, 100_000));
        assert_eq!(rc.format, Format::Json);
        assert_eq!(resolve(Command::Figscale, &flags(), &file).unwrap().ptot, 0.99);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = serde_json::from_str::<FileConfig>(r#"{"bogus": 1}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Verification("x".into()).exit_code(), EXIT_VERIFY_FAILED);
        assert_eq!(CliError::Config("x".into()).exit_code(), EXIT_CONFIG);
    }

    #[test]
    fn mismatched_command_rejected() {
        let file = FileConfig { command: Some(Command::Mc), ..Default::default() };
        assert!(resolve(Command::Factory, &flags(), &file).is_err());
    }
}
