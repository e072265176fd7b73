use fdl_core::analysis::{
    default_schedule, divergence_index, level_set, prevalence_probe, spectrum_csv, spectrum_curve, ProbeConfig,
    SpectrumSettings,
};
use fdl_core::constructions::{
    certify_pj, default_jmax, disjoint_family, eps_floor, log_saturator, residual_witness, saturator_pj,
    spectrum_constant, tail_bound, Certificate, HoloKernelParams,
};
use fdl_core::random::{rademacher_poly, rng};
use fdl_core::setlib::{box_dimension, DyadicFamilyParams};
use fdl_core::trig::{lp_norm, NormExponent, TrigPoly};
use fdl_core::verify::{
    check_holo_bounds, check_variable_dirichlet, fmt_sig, holo_sweep, run_derivative, run_localization,
    run_nikolsky, run_weak_maximal, sweep_omega, Strategy, VerificationReport,
};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

pub struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub passed: bool,
}

/// Subcommands and the parameters each accepts.
pub const COMMANDS: &[(&str, &str, &[&str])] = &[
    ("construct", "pj", &["j", "alpha", "p", "grid"]),
    ("construct", "family", &["s", "alpha", "p", "jmax", "grid"]),
    ("construct", "holo", &["k", "omega", "grid", "interior", "seed"]),
    ("construct", "logsat", &["n", "eps"]),
    ("construct", "witness", &["j", "eta", "eps", "degree", "source_seed"]),
    ("verify", "dirichlet", &["N", "strategy", "trials", "seed"]),
    ("verify", "maximal", &["N", "alpha", "trials", "seed"]),
    ("verify", "nikolsky", &["N", "p", "q", "trials", "seed"]),
    ("verify", "derivative", &["N", "p", "trials", "seed"]),
    ("verify", "localization", &["p", "eps", "trials", "delta", "seed"]),
    ("verify", "holo", &["N", "grid", "interior", "seed"]),
    ("analyze", "index", &["source", "degree", "source_seed", "input", "s", "alpha", "p", "jmax", "grid", "r", "x"]),
    (
        "analyze",
        "levelset",
        &[
            "source", "degree", "source_seed", "input", "s", "alpha", "p", "jmax", "grid", "r", "beta", "tolerance",
            "box_lo", "box_hi",
        ],
    ),
    (
        "analyze",
        "spectrum",
        &[
            "source", "degree", "source_seed", "input", "s", "alpha", "p", "jmax", "grid", "r", "betas", "tolerance",
            "box_lo", "box_hi",
        ],
    ),
    (
        "probe",
        "prevalence",
        &["s", "alpha", "p", "R", "M_thresh", "trials", "depth", "seed", "beta", "source", "degree", "source_seed", "input"],
    ),
];

pub fn allowed(command: &str, sub: &str) -> Option<&'static [&'static str]> {
    COMMANDS.iter().find(|(c, s, _)| *c == command && *s == sub).map(|(_, _, keys)| *keys)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn shifted(base: usize, shift: u32) -> Result<usize, CliError> {
    if shift > 26 {
        return Err(usage(format!("level {shift} is too large for an in-memory grid")));
    }
    Ok(base << shift)
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "norm": c.norm,
        "min_on_target_set": c.min_on_target_set,
        "bound_required": c.bound_required,
        "margin": c.margin,
    })
}

/// The function under study for `analyze` and `probe`.
fn source(cfg: &mut RunConfig, default: &str, family: bool) -> Result<TrigPoly, CliError> {
    let kind: String = cfg.get("source", default.to_string())?;
    match kind.as_str() {
        "zero" => Ok(TrigPoly::zero()),
        "rademacher" | "decaying" => {
            let d: i64 = cfg.get("degree", 256)?;
            if d < 1 {
                return Err(usage("degree must be >= 1"));
            }
            let seed = cfg.get("source_seed", 5u64)?;
            let f = rademacher_poly(&mut rng(seed), -d, d);
            if kind == "rademacher" {
                return Ok(f);
            }
            // ±1/|k| with no constant term
            Ok(TrigPoly::from_coeffs(
                f.iter().filter(|&(k, _)| k != 0).map(|(k, c)| (k, c / k.unsigned_abs() as f64)),
            ))
        }
        "family" if family => {
            let s = cfg.get("s", 3u32)?;
            let alpha = cfg.get("alpha", 2.0f64)?;
            let p = cfg.get("p", NormExponent::two())?;
            let grid = cfg.get("grid", 1usize << 20)?;
            let jmax = cfg.get("jmax", 14u32)?;
            let r = cfg.get("r", 1u32)?;
            if r == 0 || r > s {
                return Err(usage(format!("member r must lie in 1..={s}, got {r}")));
            }
            Ok(disjoint_family(s, alpha, p, jmax, grid)?.member(r).clone())
        }
        "file" => {
            let path: String = cfg.get("input", String::new())?;
            if path.is_empty() {
                return Err(usage("source = file needs --input"));
            }
            let text = std::fs::read_to_string(&path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            let poly = v.get("poly").cloned().unwrap_or(v);
            serde_json::from_value(poly).map_err(|e| usage(format!("{path}: not a trigonometric polynomial: {e}")))
        }
        other => Err(usage(format!("unknown source {other:?}"))),
    }
}

pub fn execute(cfg: &mut RunConfig, command: &str, sub: &str) -> Result<Outcome, CliError> {
    match (command, sub) {
        ("construct", "pj") => construct_pj(cfg),
        ("construct", "family") => construct_family(cfg),
        ("construct", "holo") => construct_holo(cfg),
        ("construct", "logsat") => construct_logsat(cfg),
        ("construct", "witness") => construct_witness(cfg),
        ("verify", _) => verify(cfg, sub),
        ("analyze", _) => analyze(cfg, sub),
        ("probe", "prevalence") => probe(cfg),
        _ => Err(usage(format!("unknown command `{command} {sub}`"))),
    }
}

fn construct_pj(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let j = cfg.get("j", 10u32)?;
    let alpha = cfg.get("alpha", 2.0f64)?;
    let p = cfg.get("p", NormExponent::one())?;
    let params = DyadicFamilyParams::new(j, alpha)?;
    let grid = cfg.get("grid", shifted(16, j)?)?;
    let pj = saturator_pj(params, p, grid)?;
    let cert = certify_pj(params, p, &pj, grid)?;
    Ok(Outcome {
        passed: cert.norm <= 1.0 + 1e-9 && cert.holds(1e-6),
        json: json!({
            "J": params.big_j(),
            "spectrum": {"lo": 0, "hi": (1u64 << (j + 1)) - 1},
            "poly": pj,
            "certificates": certificate_json(&cert),
        }),
        csv: None,
    })
}

fn construct_family(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let s = cfg.get("s", 3u32)?;
    let alpha = cfg.get("alpha", 2.0f64)?;
    let p = cfg.get("p", NormExponent::two())?;
    let grid = cfg.get("grid", 1usize << 16)?;
    let jmax = cfg.get("jmax", default_jmax(s, alpha, grid)?)?;
    let family = disjoint_family(s, alpha, p, jmax, grid)?;
    let mut certificates = Vec::new();
    let mut passed = family.blocks_disjoint();
    for b in &family.blocks {
        let params = DyadicFamilyParams::new(b.j, alpha)?;
        let poly = family.block_poly(b.j, b.r).expect("listed block");
        let cert = Certificate::new(
            lp_norm(&poly.to_grid(grid)?, p),
            family.min_block_modulus(b.j, b.r, grid)?,
            fdl_core::constructions::block_certificate(params, p),
        );
        passed &= cert.holds(1e-6);
        let mut row = certificate_json(&cert);
        row["j"] = json!(b.j);
        row["r"] = json!(b.r);
        row["m"] = json!(b.m);
        row["n"] = json!(b.n);
        certificates.push(row);
    }
    Ok(Outcome {
        passed,
        json: json!({
            "family": family,
            "tail_bound": tail_bound(jmax),
            "spectrum_constant": spectrum_constant(s),
            "blocks_disjoint": family.blocks_disjoint(),
            "certificates": certificates,
        }),
        csv: None,
    })
}

fn construct_holo(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let k = cfg.get("k", 16u64)?;
    let omega = cfg.get("omega", sweep_omega(k))?;
    let grid = cfg.get("grid", 1usize << 14)?;
    let interior = cfg.get("interior", 1000usize)?;
    let seed = cfg.seed()?;
    let params = HoloKernelParams::new(k, omega)?;
    let bounds = check_holo_bounds(&params, grid, interior, seed)?;
    let boundary = fdl_core::constructions::boundary_values(&params, grid)?.to_trig_poly();
    // certified claim: Re f > 0 on the sampled closed disk
    let cert = Certificate::new(bounds.c3 * omega, bounds.min_re_boundary.min(bounds.min_re_interior), 0.0);
    Ok(Outcome {
        passed: bounds.real_part_positive() && bounds.log_derivative_ok(),
        json: json!({
            "params": {"k": k, "omega": omega, "eps": params.eps()},
            "bounds": bounds,
            "poly": boundary,
            "certificates": certificate_json(&cert),
        }),
        csv: None,
    })
}

fn construct_logsat(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let n = cfg.get("n", 1024u64)?;
    let eps = cfg.get("eps", 0.0f64)?;
    let ls = log_saturator(n, eps)?;
    let cert = ls.certificate()?;
    let per_tooth = ls.params().comb().points_per_tooth(ls.grid);
    Ok(Outcome {
        passed: cert.norm <= 1.0 + 1e-9 && cert.margin >= 0.0,
        json: json!({
            "n": ls.n,
            "eps_n": ls.eps_n,
            "floored": ls.floored,
            "omega": ls.omega,
            "k": ls.k,
            "grid": ls.grid,
            "points_per_tooth": per_tooth,
            "negative_energy": ls.negative_energy,
            "spectrum": ls.spectrum(),
            "poly": ls.poly,
            "certificates": certificate_json(&cert),
        }),
        csv: None,
    })
}

fn construct_witness(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let j = cfg.get("j", 1024u64)?;
    let eps = cfg.get("eps", 0.0f64)?;
    let eta = cfg.get("eta", eps.max(if j >= 3 { eps_floor(j) } else { 0.0 }))?;
    let degree = cfg.get("degree", 0i64)?;
    let g = if degree > 0 {
        let seed = cfg.get("source_seed", 5u64)?;
        rademacher_poly(&mut rng(seed), -degree, degree)
    } else {
        TrigPoly::zero()
    };
    let w = residual_witness(&g, j, eta, eps)?;
    let cert = w.certificate()?;
    Ok(Outcome {
        passed: cert.margin >= 0.0,
        json: json!({
            "j": w.j,
            "eta": w.eta,
            "eps_n": w.saturator.eps_n,
            "floored": w.saturator.floored,
            "poly": w.h,
            "certificates": certificate_json(&cert),
        }),
        csv: None,
    })
}

fn report_outcome(report: VerificationReport, extra: Option<(&str, Value)>) -> Outcome {
    let csv = report.to_csv();
    let passed = report.passed();
    let mut json = json!({ "report": report });
    if let Some((k, v)) = extra {
        json[k] = v;
    }
    Outcome { json, csv: Some(csv), passed }
}

fn verify(cfg: &mut RunConfig, sub: &str) -> Result<Outcome, CliError> {
    match sub {
        "dirichlet" => {
            let n = cfg.get("N", 1024u64)?;
            let strategy = cfg.get("strategy", Strategy::Greedy)?;
            let trials = cfg.get("trials", 16u64)?;
            let seed = cfg.seed()?;
            Ok(report_outcome(check_variable_dirichlet(n, strategy, trials, seed)?, None))
        }
        "maximal" => {
            let n = cfg.get("N", 1024u64)?;
            let a = cfg.get("alpha", 0.5f64)?;
            let trials = cfg.get("trials", 100u64)?;
            let seed = cfg.seed()?;
            Ok(report_outcome(run_weak_maximal(n, a, trials, seed)?, None))
        }
        "nikolsky" => {
            let n = cfg.get("N", 8192u64)?;
            let p = cfg.get("p", NormExponent::two())?;
            let q = cfg.get("q", NormExponent::Infinity)?;
            let trials = cfg.get("trials", 100u64)?;
            let seed = cfg.seed()?;
            Ok(report_outcome(run_nikolsky(n, p, q, trials, seed)?, None))
        }
        "derivative" => {
            let n = cfg.get("N", 8192u64)?;
            let p = cfg.get("p", NormExponent::two())?;
            let trials = cfg.get("trials", 100u64)?;
            let seed = cfg.seed()?;
            Ok(report_outcome(run_derivative(n, p, trials, seed)?, None))
        }
        "localization" => {
            let p = cfg.get("p", NormExponent::one())?;
            let eps = cfg.get("eps", 0.5f64)?;
            let trials = cfg.get("trials", 20u64)?;
            let delta = cfg.get("delta", 0.01f64)?;
            let seed = cfg.seed()?;
            Ok(report_outcome(run_localization(p, eps, trials, delta, seed)?, None))
        }
        "holo" => {
            let n = cfg.get("N", 256u64)?;
            let grid = cfg.get("grid", 1usize << 14)?;
            let interior = cfg.get("interior", 1000usize)?;
            let seed = cfg.seed()?;
            if n < 8 {
                return Err(usage(format!("holo sweep needs N >= 8, got {n}")));
            }
            let ks: Vec<u64> = (3..64).map(|e| 1u64 << e).take_while(|&k| k <= n).collect();
            let (bounds, report) = holo_sweep(&ks, grid, interior, seed)?;
            Ok(report_outcome(report, Some(("bounds", json!(bounds)))))
        }
        other => Err(usage(format!("unknown inequality {other:?}"))),
    }
}

fn analyze(cfg: &mut RunConfig, sub: &str) -> Result<Outcome, CliError> {
    let f = source(cfg, "family", true)?;
    let schedule = default_schedule(&f);
    match sub {
        "index" => {
            let default: Vec<String> = (0..32).map(|k| fmt_sig(k as f64 / 32.0)).collect();
            let xs: Vec<f64> = cfg.list("x", &default.join(","))?;
            let mut csv = String::from("x,beta_hat,r2,vanishing\n");
            let mut rows = Vec::new();
            for &x in &xs {
                let est = divergence_index(&f, x, &schedule)?;
                csv.push_str(&format!("{},{},{},{}\n", fmt_sig(x), fmt_sig(est.beta_hat), fmt_sig(est.r2), est.vanishing));
                rows.push(json!({"x": x, "estimate": est}));
            }
            Ok(Outcome { json: json!({ "schedule": schedule, "points": rows }), csv: Some(csv), passed: true })
        }
        "levelset" => {
            let beta = cfg.get("beta", 0.25f64)?;
            let tolerance = cfg.get("tolerance", 0.05f64)?;
            let grid = cfg.get("grid", 1usize << 20)?;
            let box_lo = cfg.get("box_lo", 5u32)?;
            let box_hi = cfg.get("box_hi", 14u32)?;
            if (1usize << box_hi.min(62)) > grid {
                return Err(usage(format!("box scale 2^-{box_hi} is finer than the {grid}-point grid")));
            }
            let set = level_set(&f, beta, tolerance, grid, &schedule)?;
            let estimate = box_dimension(&set, box_lo, box_hi)?;
            let mut csv = String::from("index,x\n");
            for (i, _) in set.marks().iter().enumerate().filter(|(_, &m)| m) {
                csv.push_str(&format!("{i},{}\n", fmt_sig(i as f64 / grid as f64)));
            }
            Ok(Outcome {
                json: json!({
                    "schedule": schedule,
                    "points": set.count(),
                    "fraction": set.count() as f64 / grid as f64,
                    "estimate": estimate,
                }),
                csv: Some(csv),
                passed: true,
            })
        }
        "spectrum" => {
            let betas: Vec<f64> = cfg.list("betas", "0,0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5")?;
            let p = cfg.get("p", NormExponent::two())?;
            let settings = SpectrumSettings {
                tolerance: cfg.get("tolerance", 0.05f64)?,
                grid: cfg.get("grid", 1usize << 20)?,
                box_lo: cfg.get("box_lo", 5u32)?,
                box_hi: cfg.get("box_hi", 14u32)?,
            };
            if settings.box_hi > 62 {
                return Err(usage("box_hi must be <= 62"));
            }
            let curve = spectrum_curve(&f, &betas, p, settings, &schedule)?;
            Ok(Outcome { csv: Some(spectrum_csv(&curve)), json: json!({ "schedule": schedule, "curve": curve }), passed: true })
        }
        other => Err(usage(format!("unknown analysis {other:?}"))),
    }
}

fn probe(cfg: &mut RunConfig) -> Result<Outcome, CliError> {
    let defaults = ProbeConfig::default();
    let config = ProbeConfig {
        s: cfg.get("s", defaults.s)?,
        alpha: cfg.get("alpha", defaults.alpha)?,
        p: cfg.get("p", defaults.p)?,
        r: cfg.get("R", defaults.r)?,
        m_thresh: cfg.opt("M_thresh")?,
        trials: cfg.get("trials", defaults.trials)?,
        depth: cfg.get("depth", defaults.depth)?,
        seed: cfg.seed()?,
        beta: cfg.opt("beta")?,
    };
    let f = source(cfg, "zero", false)?;
    let result = prevalence_probe(&f, &config)?;
    let mut json = serde_json::to_value(&result).expect("serializable");
    json["probe"] = json.get("config").cloned().unwrap_or(Value::Null);
    Ok(Outcome { json, csv: None, passed: true })
}
