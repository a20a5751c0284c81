use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use supersinglet::config::{OutputFormat, RunConfig};
use supersinglet::detection::{aux_pass_and_measure, certified_vacuum_protocol, optimal_aux_time, DetectionSpec};
use supersinglet::metrics::{fidelity, supersinglet as supersinglet_state};
use supersinglet::protocol::{run_three_atom_protocol, JointState, ProtocolTimes};
use supersinglet::report::{
    amplitude_entries, format_sig, records_to_csv, write_surface_csv, DetectReport, DetectionSummary, ProtocolReport,
};
use supersinglet::search::{
    refine_optimum, reproduce_table, scan, scan_surface, sweep_detuning, table, Axis, AxisRange, FixedParams, GridSpec,
    RefineOptions, ScanRecord,
};
use supersinglet::{ode, InteractionParams};

/// Cavity-QED supersinglet protocol: simulate, scan, and validate.
///
/// Couplings and detuning are angular frequencies in rad/µs and times are in
/// µs, so a coupling quoted as "g = 1 MHz" is passed as `--g 1`.
#[derive(Parser)]
#[command(name = "supersinglet", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// `key = value` configuration file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Common coupling g1 = g2 in rad/µs.
    #[arg(long, global = true, visible_alias = "mhz-angular")]
    g: Option<f64>,
    /// Coupling of the e <-> f transition (rad/µs).
    #[arg(long, global = true)]
    g1: Option<f64>,
    /// Coupling of the f <-> g transition (rad/µs).
    #[arg(long, global = true)]
    g2: Option<f64>,
    /// Detuning in rad/µs.
    #[arg(long, global = true, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Detuning as a multiple of g1 (e.g. 0.1).
    #[arg(long, global = true, allow_hyphen_values = true, conflicts_with = "delta")]
    delta_over_g: Option<f64>,
    /// Photon-number cutoff of the cavity.
    #[arg(long, global = true)]
    cutoff: Option<u32>,
    /// Output format (csv or json).
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Output file; relative paths go under $SUPERSINGLET_OUTPUT_DIR when set.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Projection {
    /// Ideal projective measurement of the cavity vacuum.
    Ideal,
    /// Vacuum certified by auxiliary ground-state atoms.
    Aux,
}

#[derive(Args, Clone)]
struct AuxArgs {
    /// Interaction time of each auxiliary atom (µs).
    #[arg(long)]
    t_prime: Option<f64>,
    /// Pick t' maximizing one-photon absorption inside LO:HI (µs).
    #[arg(long, value_parser = parse_window)]
    t_prime_window: Option<(f64, f64)>,
    /// Number of auxiliary atoms.
    #[arg(long, default_value_t = 1)]
    num_aux: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Run the three-atom protocol and report fidelity and success probability.
    Protocol {
        /// Interaction times t1,t2,t3 in µs.
        #[arg(long)]
        times: ProtocolTimes,
        #[arg(long, value_enum, default_value_t = Projection::Ideal)]
        project: Projection,
        #[command(flatten)]
        aux: AuxArgs,
        /// Also write the full atoms-plus-cavity state (JSON) to this file.
        #[arg(long)]
        dump_joint: Option<PathBuf>,
    },
    /// Grid scan; each of --t1/--t2/--t3 is a value or START:STOP:STEP.
    Scan {
        #[arg(long)]
        t1: AxisRange,
        #[arg(long)]
        t2: AxisRange,
        #[arg(long)]
        t3: AxisRange,
        /// Detuning range (rad/µs); defaults to the configured detuning.
        #[arg(long)]
        delta_range: Option<AxisRange>,
    },
    /// Fidelity versus detuning at fixed times.
    SweepDetuning {
        #[arg(long)]
        times: ProtocolTimes,
        /// START:STOP:STEP of the detuning.
        #[arg(long)]
        delta_range: AxisRange,
        /// Interpret the detuning range in units of g.
        #[arg(long)]
        relative: bool,
    },
    /// Fidelity over the (t2, t3) plane at fixed t1.
    Surface {
        #[arg(long)]
        t1: f64,
        #[arg(long)]
        t2: AxisRange,
        #[arg(long)]
        t3: AxisRange,
    },
    /// Local coordinate-ascent polish of a set of interaction times.
    Refine {
        #[arg(long)]
        times: ProtocolTimes,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Auxiliary-atom vacuum detection on a Fock state, a protocol state, or a
    /// joint-state JSON file.
    Detect {
        /// `fock:N`, `protocol:T1,T2,T3`, or a path to a joint-state JSON file.
        #[arg(long)]
        input: String,
        #[command(flatten)]
        aux: AuxArgs,
    },
    /// Compare closed-form propagators with direct RK4 integration.
    OracleCheck {
        /// Random points instead of the standard validation grid.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 20.0)]
        g_max: f64,
        /// Largest accepted entrywise deviation.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Recompute one of the four reference tables as CSV.
    Reproduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        table: u8,
    },
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    Ok((lo, hi))
}

fn resolve_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply(&text).with_context(|| format!("in {}", path.display()))?;
    }
    if let Some(g) = args.g {
        cfg.g1 = g;
        cfg.g2 = g;
    }
    if let Some(g1) = args.g1 {
        cfg.g1 = g1;
    }
    if let Some(g2) = args.g2 {
        cfg.g2 = g2;
    }
    if let Some(d) = args.delta {
        cfg.delta = d;
    }
    if let Some(r) = args.delta_over_g {
        cfg.delta = r * cfg.g1;
    }
    if let Some(c) = args.cutoff {
        cfg.photon_cutoff = c;
    }
    if let Some(f) = args.format {
        cfg.format = Some(f);
    }
    if let Some(o) = &args.output {
        cfg.output = Some(o.clone());
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn common_g(cfg: &RunConfig) -> Result<f64> {
    if cfg.g1 != cfg.g2 {
        bail!("scans use a common coupling; got g1 = {} and g2 = {}", cfg.g1, cfg.g2);
    }
    Ok(cfg.g1)
}

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match cfg.resolved_output() {
        Some(path) => write_file(&path, body),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit_records(cfg: &RunConfig, records: &[ScanRecord]) -> Result<()> {
    match cfg.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => emit(cfg, &records_to_csv(records)),
        OutputFormat::Json => emit(cfg, &to_json(&records)?),
    }
}

fn aux_spec(aux: &AuxArgs, params: InteractionParams) -> Result<DetectionSpec> {
    let t_prime = match (aux.t_prime, aux.t_prime_window) {
        (Some(t), None) => t,
        (None, Some((lo, hi))) => optimal_aux_time(&params, lo, hi)?,
        (Some(_), Some(_)) => bail!("give either --t-prime or --t-prime-window, not both"),
        (None, None) => bail!("auxiliary detection needs --t-prime or --t-prime-window"),
    };
    Ok(DetectionSpec::new(t_prime, aux.num_aux, params)?)
}

fn cmd_protocol(
    cfg: &RunConfig,
    times: ProtocolTimes,
    project: Projection,
    aux: &AuxArgs,
    dump_joint: Option<&Path>,
) -> Result<()> {
    let params = cfg.params()?;
    let joint = run_three_atom_protocol(times, &params, cfg.photon_cutoff)?;
    if let Some(path) = dump_joint {
        let mut json = joint.to_json();
        json.push('\n');
        write_file(path, &json)?;
    }
    let target = supersinglet_state(3)?;
    let (atoms, success_prob, detection) = match project {
        Projection::Ideal => {
            let (atoms, p) = joint.project_cavity(0)?;
            (atoms, p, None)
        }
        Projection::Aux => {
            let spec = aux_spec(aux, params)?;
            let c = certified_vacuum_protocol(&joint, &spec)?;
            let (_, p_vacuum) = joint.project_cavity(0)?;
            let summary = DetectionSummary::from_certified(spec.times(), &c);
            (c.atomic, p_vacuum, Some(summary))
        }
    };
    let record = ScanRecord {
        t1: times.t1,
        t2: times.t2,
        t3: times.t3,
        g: params.g1(),
        delta: params.delta(),
        fidelity: fidelity(&atoms, &target)?,
        success_prob,
    };
    match cfg.format {
        Some(OutputFormat::Json) => {
            let report = ProtocolReport {
                record,
                g1: params.g1(),
                g2: params.g2(),
                projection: format!("{project:?}").to_lowercase(),
                detection,
                amplitudes: amplitude_entries(&atoms),
            };
            emit(cfg, &to_json(&report)?)
        }
        Some(OutputFormat::Csv) => emit(cfg, &records_to_csv(&[record])),
        None => {
            let mut text = String::new();
            text += &format!("times_us        {times}\n");
            text += &format!("g1, g2, delta   {} {} {}\n", params.g1(), params.g2(), params.delta());
            text += &format!("projection      {}\n", format!("{project:?}").to_lowercase());
            text += &format!("fidelity        {}\n", format_sig(record.fidelity, 9));
            text += &format!("success_prob    {}\n", format_sig(record.success_prob, 9));
            if let Some(d) = &detection {
                text += &format!("t_prime_us      {:?}\n", d.t_prime_us);
                text += &format!("prob_all_g      {}\n", format_sig(d.prob_all_g, 9));
                text += &format!("error_bound     {}\n", format_sig(d.error_bound, 9));
                text += &format!("vacuum_conf     {}\n", format_sig(d.vacuum_confidence, 9));
            }
            text += "amplitudes\n";
            text += &atoms.to_string();
            emit(cfg, &text)
        }
    }
}

fn load_detect_input(input: &str, cfg: &RunConfig, params: &InteractionParams) -> Result<JointState> {
    if let Some(n) = input.strip_prefix("fock:") {
        let n: u32 = n.trim().parse().context("photon number after fock:")?;
        return Ok(JointState::fock(n, cfg.photon_cutoff)?);
    }
    if let Some(t) = input.strip_prefix("protocol:") {
        let times: ProtocolTimes = t.parse()?;
        return Ok(run_three_atom_protocol(times, params, cfg.photon_cutoff)?);
    }
    let text = fs::read_to_string(input).with_context(|| format!("reading {input}"))?;
    Ok(JointState::from_json(&text)?)
}

fn cmd_detect(cfg: &RunConfig, input: &str, aux: &AuxArgs) -> Result<()> {
    let params = cfg.params()?;
    let state = load_detect_input(input, cfg, &params)?;
    let spec = aux_spec(aux, params)?;
    let outcome = aux_pass_and_measure(&state, &spec)?;
    let report = DetectReport::new(spec.times(), &outcome);
    let certified = if state.num_atoms() > 0 { certified_vacuum_protocol(&state, &spec).ok() } else { None };
    match cfg.format {
        Some(OutputFormat::Json) => {
            let mut value = serde_json::to_value(&report)?;
            if let Some(c) = &certified {
                value["certified"] = serde_json::to_value(DetectionSummary::from_certified(spec.times(), c))?;
            }
            emit(cfg, &to_json(&value)?)
        }
        _ => {
            let mut text = String::from("aux,t_prime_us,prob_all_g,residual_nonvacuum\n");
            for (i, (s, t)) in outcome.steps.iter().zip(spec.times()).enumerate() {
                text += &format!(
                    "{},{},{},{}\n",
                    i + 1,
                    format_sig(*t, 9),
                    format_sig(s.prob_g, 9),
                    format_sig(s.residual_nonvacuum, 9)
                );
            }
            if let Some(c) = &certified {
                text += &format!("# error_bound {}\n", format_sig(c.error_bound, 9));
                text += &format!("# vacuum_confidence {}\n", format_sig(c.vacuum_confidence, 9));
                if c.atomic.num_atoms() == 3 {
                    let f = fidelity(&c.atomic, &supersinglet_state(3)?)?;
                    text += &format!("# fidelity {}\n", format_sig(f, 9));
                }
            }
            emit(cfg, &text)
        }
    }
}

fn cmd_oracle_check(cfg: &RunConfig, samples: Option<usize>, t_max: f64, g_max: f64, tolerance: f64) -> Result<bool> {
    let results = match samples {
        Some(n) => ode::check_random(n, cfg.seed, t_max, g_max)?,
        None => ode::check_validation_grid(&ode::OdeConfig::default())?,
    };
    let worst = results
        .iter()
        .max_by(|a, b| a.max_deviation.total_cmp(&b.max_deviation))
        .ok_or_else(|| anyhow!("no comparison points"))?;
    let failures = results.iter().filter(|r| r.max_deviation > tolerance).count();
    let worst_unitarity = results.iter().map(|r| r.unitarity_defect).fold(0.0, f64::max);
    let body = match cfg.format {
        Some(OutputFormat::Json) => to_json(&results)?,
        _ => format!(
            "points {}\nfailures {}\ntolerance {:e}\nmax_deviation {:e} (n={}, t={}, g1={}, g2={}, delta={})\nmax_unitarity_defect {:e}\n",
            results.len(),
            failures,
            tolerance,
            worst.max_deviation,
            worst.n,
            worst.t,
            worst.g1,
            worst.g2,
            worst.delta,
            worst_unitarity
        ),
    };
    emit(cfg, &body)?;
    Ok(failures == 0)
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = resolve_config(&cli.common)?;
    match cli.command {
        Command::Protocol { times, project, aux, dump_joint } => {
            cmd_protocol(&cfg, times, project, &aux, dump_joint.as_deref())?
        }
        Command::Scan { t1, t2, t3, delta_range } => {
            let g = common_g(&cfg)?;
            let mut grid = GridSpec::new();
            let mut fixed = FixedParams::new(g);
            for (axis, range) in [(Axis::T1, t1), (Axis::T2, t2), (Axis::T3, t3)] {
                if range.len() == 1 {
                    fixed = fixed.set(axis, range.values()[0]);
                } else {
                    grid = grid.with(axis, range);
                }
            }
            match delta_range {
                Some(r) => grid = grid.with(Axis::Delta, r),
                None => fixed = fixed.set(Axis::Delta, cfg.delta),
            }
            emit_records(&cfg, &scan(&grid, &fixed)?)?
        }
        Command::SweepDetuning { times, delta_range, relative } => {
            let g = common_g(&cfg)?;
            let scale = if relative { g } else { 1.0 };
            let deltas: Vec<f64> = delta_range.values().into_iter().map(|d| d * scale).collect();
            emit_records(&cfg, &sweep_detuning(times, g, &deltas)?)?
        }
        Command::Surface { t1, t2, t3 } => {
            let g = common_g(&cfg)?;
            let surface = scan_surface(t1, &t2, &t3, g, cfg.delta)?;
            match cfg.format {
                Some(OutputFormat::Json) => emit(&cfg, &to_json(&surface)?)?,
                _ => {
                    let mut buf = Vec::new();
                    write_surface_csv(&mut buf, &surface)?;
                    emit(&cfg, &String::from_utf8(buf)?)?
                }
            }
        }
        Command::Refine { times, radius, tol } => {
            let g = common_g(&cfg)?;
            let opts = RefineOptions { radius, tol, ..RefineOptions::default() };
            emit_records(&cfg, &[refine_optimum(times, g, cfg.delta, &opts)?])?
        }
        Command::Detect { input, aux } => cmd_detect(&cfg, &input, &aux)?,
        Command::OracleCheck { samples, t_max, g_max, tolerance } => {
            return cmd_oracle_check(&cfg, samples, t_max, g_max, tolerance)
        }
        Command::Reproduce { table: number } => {
            let t = table(number).ok_or_else(|| anyhow!("no table {number}"))?;
            let records = reproduce_table(t.number)?;
            emit_records(&cfg, &records)?
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
