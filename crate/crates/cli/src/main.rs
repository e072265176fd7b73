mod commands;
mod config;
mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Arg, ArgMatches, Command};

use config::{read_config, RunConfig, KEYS};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fdl_core::Error),
    #[error("{0}")]
    Output(String),
}

fn help(key: &str) -> &'static str {
    match key {
        "j" => "dyadic level",
        "alpha" => "approximation exponent (weak-type level for `verify maximal`)",
        "p" => "norm exponent, a float >= 1 or inf",
        "q" => "second norm exponent for nikolsky",
        "n" => "log-saturator degree",
        "N" => "largest scale",
        "s" => "family size",
        "R" => "half-width of the coefficient cube",
        "r" => "family member index",
        "k" => "comb teeth",
        "omega" => "comb sharpness",
        "eps" => "rate",
        "eta" => "witness rate",
        "delta" => "localization lower bound",
        "degree" => "degree of a random source polynomial",
        "trials" => "number of seeded trials",
        "depth" => "dyadic depth of the probe test points",
        "grid" => "grid size M (power of two)",
        "interior" => "interior disk samples",
        "jmax" => "top level of the family",
        "seed" => "master seed (default: FDL_SEED or a fixed constant)",
        "beta" => "divergence exponent",
        "M_thresh" => "growth threshold for the probe",
        "strategy" => "constant, random or greedy",
        "x" => "comma-separated evaluation points",
        "betas" => "comma-separated exponents",
        "tolerance" => "level-set half-width",
        "box_lo" => "coarsest box scale 2^-box_lo",
        "box_hi" => "finest box scale 2^-box_hi",
        "source" => "function under study: zero, family, rademacher, decaying or file",
        "source_seed" => "seed of a random source polynomial",
        "input" => "JSON file holding a polynomial (or an object with a \"poly\" field)",
        "out" => "JSON output path (default: stdout)",
        "csv" => "CSV output path",
        _ => "",
    }
}

fn cli() -> Command {
    let mut root = Command::new("fdl")
        .about("Partial sums of Fourier series: constructions, inequality checks and divergence estimates")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg(Arg::new("config").long("config").global(true).value_name("PATH").help("key = value file; flags override it"))
        .arg(
            Arg::new("threads")
                .long("threads")
                .global(true)
                .value_name("N")
                .value_parser(clap::value_parser!(usize))
                .help("worker threads (default: machine parallelism)"),
        );
    for key in KEYS {
        root = root.arg(Arg::new(*key).long(*key).global(true).value_name("VALUE").help(help(key)));
    }
    let mut groups: Vec<(&str, Command)> = Vec::new();
    for (command, sub, _) in commands::COMMANDS {
        let leaf = Command::new(*sub);
        match groups.iter_mut().find(|(c, _)| c == command) {
            Some((_, group)) => *group = group.clone().subcommand(leaf),
            None => groups.push((command, Command::new(*command).subcommand_required(true).subcommand(leaf))),
        }
    }
    for (_, group) in groups {
        root = root.subcommand(group);
    }
    root
}

fn flag_values(m: &ArgMatches) -> BTreeMap<String, String> {
    KEYS.iter()
        .filter_map(|k| m.get_one::<String>(k).map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn run<I, T>(argv: I) -> Result<bool, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match cli().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Ok(true);
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string().trim_start_matches("error: ").to_string())),
    };
    let (command, group) = matches.subcommand().expect("subcommand required");
    let (sub, leaf) = group.subcommand().expect("subcommand required");

    if let Some(&n) = leaf.get_one::<usize>("threads") {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    let file = match leaf.get_one::<String>("config") {
        Some(path) => read_config(path.as_ref())?,
        None => BTreeMap::new(),
    };
    let allowed = commands::allowed(command, sub).expect("grammar matches the command table");
    let mut cfg = RunConfig::new(command, sub, flag_values(leaf), file, allowed)?;
    let result = commands::execute(&mut cfg, command, sub)?;
    let out = cfg.out();
    let csv = cfg.csv();
    if let Some(path) = &csv {
        match &result.csv {
            Some(text) => output::emit_csv(text, path)?,
            None => return Err(CliError::Usage(format!("`{command} {sub}` has no CSV output"))),
        }
    }
    let mut json = result.json;
    json["config"] = cfg.to_json();
    json["passed"] = result.passed.into();
    output::emit_json(json, out.as_deref())?;
    Ok(result.passed)
}

fn main() -> ExitCode {
    match run(std::env::args_os()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("fdl: assertion failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("fdl: {}", e.to_string().trim_end());
            ExitCode::from(1)
        }
    }
}
