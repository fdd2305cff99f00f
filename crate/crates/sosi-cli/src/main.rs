mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sosi_core::coop::{self, Allocation};
use sosi_core::engine::{self, TableMethod, DEFAULT_ORACLE_BOUND};
use sosi_core::io::{self, GenSpec};
use sosi_core::rational::{format_rational, parse_rational};
use sosi_core::sched::{self, Coalition, Instance, PlayerId};
use sosi_core::Error as CoreError;

use report::{Report, Timer};

/// Exit codes: 0 success, 1 verification violation, 2 usage or parse
/// error, 3 size-bound error.
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_SIZE: u8 = 3;

#[derive(Parser)]
#[command(name = "sosi", version, about = "Step out-Step in sequencing games", max_term_width = 100)]
struct Cli {
    /// Emit the report as canonical JSON instead of human-readable text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArg {
    /// Path to a JSON instance file
    #[arg(long)]
    instance: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the value of one coalition
    Value {
        #[command(flatten)]
        instance: InstanceArg,
        /// Comma-separated 1-based player indices, or "all"; empty for the
        /// empty coalition
        #[arg(long, default_value = "all")]
        coalition: String,
        /// greedy or brute
        #[arg(long, default_value = "greedy")]
        method: String,
        /// Print the per-move greedy trace
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        oracle_bound: usize,
    },
    /// Compute the full value table over all 2^n coalitions
    Table {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, default_value = "greedy")]
        method: String,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        oracle_bound: usize,
    },
    /// Verify greedy vs oracle, supermodularity, monotonicity, and the
    /// structural greedy invariants on one instance
    Verify {
        #[command(flatten)]
        instance: InstanceArg,
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        oracle_bound: usize,
        /// Corrupt one table entry before checking (forces a failure; for
        /// exercising the violation path)
        #[arg(long, hide = true)]
        self_test_corrupt: bool,
    },
    /// Compute the exact Shapley allocation
    Shapley {
        #[command(flatten)]
        instance: InstanceArg,
    },
    /// Test an allocation for core membership
    Core {
        #[command(flatten)]
        instance: InstanceArg,
        /// Comma-separated rationals, one payoff per player
        #[arg(long)]
        allocation: String,
    },
    /// Generate a seeded random instance file
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        p_min: i64,
        #[arg(long, default_value_t = 10)]
        p_max: i64,
        #[arg(long, default_value_t = 0)]
        w_min: i64,
        #[arg(long, default_value_t = 10)]
        w_max: i64,
        #[arg(long)]
        name: Option<String>,
        /// Output path; stdout if omitted
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time greedy evaluation on a generated instance
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random coalitions to time
        #[arg(long, default_value_t = 10)]
        repeat: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command, json) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<CoreError>() {
                Some(CoreError::SizeLimit { .. }) => ExitCode::from(EXIT_SIZE),
                _ => ExitCode::from(EXIT_USAGE),
            }
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run(command: Command, json: bool) -> Result<ExitCode, AnyError> {
    match command {
        Command::Value {
            instance,
            coalition,
            method,
            trace,
            oracle_bound,
        } => cmd_value(&instance, &coalition, &method, trace, oracle_bound, json),
        Command::Table {
            instance,
            method,
            oracle_bound,
        } => cmd_table(&instance, &method, oracle_bound, json),
        Command::Verify {
            instance,
            oracle_bound,
            self_test_corrupt,
        } => cmd_verify(&instance, oracle_bound, self_test_corrupt, json),
        Command::Shapley { instance } => cmd_shapley(&instance, json),
        Command::Core {
            instance,
            allocation,
        } => cmd_core(&instance, &allocation, json),
        Command::Gen {
            n,
            seed,
            p_min,
            p_max,
            w_min,
            w_max,
            name,
            output,
        } => cmd_gen(n, seed, (p_min, p_max), (w_min, w_max), name, output, json),
        Command::Bench { n, seed, repeat } => cmd_bench(n, seed, repeat, json),
    }
}

fn load_instance(arg: &InstanceArg) -> Result<(Instance, String), AnyError> {
    let text = std::fs::read_to_string(&arg.instance)
        .map_err(|e| format!("cannot read {}: {e}", arg.instance.display()))?;
    let inst = io::parse_instance(&text)?;
    let digest = report::digest(&io::write_instance(&inst));
    Ok((inst, digest))
}

fn parse_coalition(inst: &Instance, spec: &str) -> Result<Coalition, AnyError> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(Coalition::full(inst.n()));
    }
    if spec.is_empty() {
        return Ok(Coalition::empty(inst.n()));
    }
    let mut members = Vec::new();
    for part in spec.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("bad player index {:?} in coalition spec", part.trim()))?;
        if idx == 0 || idx > inst.n() {
            return Err(format!("player index {idx} out of range 1..={}", inst.n()).into());
        }
        members.push(PlayerId(idx - 1));
    }
    Ok(Coalition::from_players(inst.n(), members)?)
}

fn parse_allocation(inst: &Instance, spec: &str) -> Result<Allocation, AnyError> {
    let payoffs = spec
        .split(',')
        .map(|part| parse_rational("allocation", part.trim()))
        .collect::<sosi_core::Result<Vec<_>>>()?;
    if payoffs.len() != inst.n() {
        return Err(format!(
            "allocation has {} entries, instance has {} players",
            payoffs.len(),
            inst.n()
        )
        .into());
    }
    Ok(Allocation { payoffs })
}

fn parse_method(method: &str, oracle_bound: usize) -> Result<TableMethod, AnyError> {
    match method {
        "greedy" => Ok(TableMethod::Greedy),
        "brute" => Ok(TableMethod::Brute { oracle_bound }),
        other => Err(format!("unknown method {other:?} (expected greedy or brute)").into()),
    }
}

fn cmd_value(
    arg: &InstanceArg,
    coalition: &str,
    method: &str,
    trace: bool,
    oracle_bound: usize,
    json: bool,
) -> Result<ExitCode, AnyError> {
    let (inst, digest) = load_instance(arg)?;
    let s = parse_coalition(&inst, coalition)?;
    let method = parse_method(method, oracle_bound)?;
    let timer = Timer::start();

    let mut report = Report::new("value", &digest);
    report.set("coalition", report::coalition_json(&s));
    match method {
        TableMethod::Greedy => {
            let out = engine::greedy_value(&inst, &s);
            report.set("method", "greedy".into());
            report.set("value", format_rational(&out.value).into());
            report.set("order", report::order_json(&out.final_order));
            if trace {
                report.set("trace", report::trace_json(&out.trace));
            }
        }
        TableMethod::Brute { oracle_bound } => {
            let out = engine::brute_force_value(&inst, &s, oracle_bound)?;
            report.set("method", "brute".into());
            report.set("value", format_rational(&out.value).into());
            report.set("order", report::order_json(&out.optimal_order));
        }
    }
    report.finish(timer);
    report.print(json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(
    arg: &InstanceArg,
    method: &str,
    oracle_bound: usize,
    json: bool,
) -> Result<ExitCode, AnyError> {
    let (inst, digest) = load_instance(arg)?;
    let method = parse_method(method, oracle_bound)?;
    let timer = Timer::start();
    let table = engine::value_table(&inst, method)?;

    let mut report = Report::new("table", &digest);
    report.set("n", inst.n().into());
    report.set("rows", report::table_json(&table));
    report.finish(timer);
    report.print(json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_shapley(arg: &InstanceArg, json: bool) -> Result<ExitCode, AnyError> {
    let (inst, digest) = load_instance(arg)?;
    let timer = Timer::start();
    let table = engine::value_table(&inst, TableMethod::Greedy)?;
    let shap = coop::shapley(&table);

    let mut report = Report::new("shapley", &digest);
    report.set("allocation", report::allocation_json(&shap));
    report.set(
        "grand_value",
        format_rational(table.grand_value()).into(),
    );
    report.finish(timer);
    report.print(json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_core(arg: &InstanceArg, allocation: &str, json: bool) -> Result<ExitCode, AnyError> {
    let (inst, digest) = load_instance(arg)?;
    let x = parse_allocation(&inst, allocation)?;
    let timer = Timer::start();
    let table = engine::value_table(&inst, TableMethod::Greedy)?;
    let verdict = coop::in_core(&table, &x)?;

    let mut report = Report::new("core", &digest);
    report.set("allocation", report::allocation_json(&x));
    let violation = verdict.err();
    report.set("in_core", violation.is_none().into());
    if let Some(v) = &violation {
        report.set("violation", report::violation_json(v));
    }
    report.finish(timer);
    report.print(json);
    Ok(if violation.is_none() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn cmd_verify(
    arg: &InstanceArg,
    oracle_bound: usize,
    self_test_corrupt: bool,
    json: bool,
) -> Result<ExitCode, AnyError> {
    let (inst, digest) = load_instance(arg)?;
    let timer = Timer::start();
    let mut report = Report::new("verify", &digest);
    let mut phases = Vec::new();
    let mut violations = 0usize;

    let mut greedy_table = engine::value_table(&inst, TableMethod::Greedy)?;
    if self_test_corrupt {
        greedy_table = report::corrupt_table(&greedy_table);
        phases.push(report::phase("self-test-corruption", true, Some("one table entry perturbed".into())));
    }

    // oracle phase, skipped with a warning when n exceeds the bound
    if inst.n() <= oracle_bound {
        let brute_table = engine::value_table(
            &inst,
            TableMethod::Brute { oracle_bound },
        )?;
        let mismatch = greedy_table
            .iter()
            .zip(brute_table.iter())
            .find(|((_, g), (_, b))| g != b);
        match mismatch {
            None => phases.push(report::phase("greedy-vs-oracle", true, None)),
            Some(((mask, g), (_, b))) => {
                violations += 1;
                phases.push(report::phase(
                    "greedy-vs-oracle",
                    false,
                    Some(format!(
                        "coalition mask {mask}: greedy {} != oracle {}",
                        format_rational(g),
                        format_rational(b)
                    )),
                ));
            }
        }
    } else {
        phases.push(report::skipped_phase(
            "greedy-vs-oracle",
            format!("n = {} exceeds oracle bound {oracle_bound}", inst.n()),
        ));
    }

    for (name, verdict) in [
        ("supermodularity", coop::is_supermodular(&greedy_table)),
        ("monotonicity", coop::is_monotone(&greedy_table)),
    ] {
        match verdict {
            Ok(()) => phases.push(report::phase(name, true, None)),
            Err(v) => {
                violations += 1;
                phases.push(report::phase(name, false, Some(report::violation_text(&v))));
            }
        }
    }

    // structural greedy checks: admissibility of output, Smith's rule
    // within components, grand-coalition identity
    let mut structural_ok = true;
    let mut witness = None;
    for (mask, _) in greedy_table.iter() {
        let s = Coalition::from_mask(inst.n(), mask);
        let out = engine::greedy_value(&inst, &s);
        if !engine::is_admissible(&inst, &s, &out.final_order) {
            structural_ok = false;
            witness = Some(format!("coalition mask {mask}: greedy order not admissible"));
            break;
        }
        if let Some(text) = report::smith_within_components(&inst, &s, &out.final_order) {
            structural_ok = false;
            witness = Some(format!("coalition mask {mask}: {text}"));
            break;
        }
    }
    let grand = engine::greedy_value(&inst, &Coalition::full(inst.n()));
    let smith_cost = sched::coalition_cost(&inst, &sched::smith_order(&inst), &Coalition::full(inst.n()));
    let base_cost = sched::coalition_cost(&inst, inst.sigma0(), &Coalition::full(inst.n()));
    if grand.value != base_cost - smith_cost {
        structural_ok = false;
        witness = Some("v(N) differs from C_N(sigma0) - C_N(smith)".into());
    }
    if structural_ok {
        phases.push(report::phase("greedy-structure", true, None));
    } else {
        violations += 1;
        phases.push(report::phase("greedy-structure", false, witness));
    }

    report.set("phases", phases.into());
    report.set("violations", violations.into());
    report.finish(timer);
    report.print(json);
    Ok(if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn cmd_gen(
    n: usize,
    seed: u64,
    p_range: (i64, i64),
    w_range: (i64, i64),
    name: Option<String>,
    output: Option<PathBuf>,
    json: bool,
) -> Result<ExitCode, AnyError> {
    let spec = GenSpec {
        n,
        seed,
        p_range,
        w_range,
    };
    let inst = io::generate_instance(&spec)?;
    let doc = io::InstanceDocument::from_instance(&inst, name);
    let text = io::write_document(&doc);
    match &output {
        Some(path) => {
            std::fs::write(path, &text)?;
            let mut report = Report::new("gen", &report::digest(&text));
            report.set("path", path.display().to_string().into());
            report.set("n", n.into());
            report.set("seed", seed.into());
            report.print(json);
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(n: usize, seed: u64, repeat: usize, json: bool) -> Result<ExitCode, AnyError> {
    if n == 0 {
        return Err("bench requires n >= 1".into());
    }
    let spec = GenSpec {
        n,
        seed,
        p_range: (1, 10),
        w_range: (0, 10),
    };
    let inst = io::generate_instance(&spec)?;

    let grand = Coalition::full(n);
    let started = Instant::now();
    let grand_out = engine::greedy_value_untraced(&inst, &grand);
    let grand_ms = started.elapsed().as_secs_f64() * 1e3;

    // random coalitions from a distinct, documented seed stream
    let mut times_ms = Vec::with_capacity(repeat);
    for i in 0..repeat {
        let s = report::random_coalition(n, seed.wrapping_add(i as u64 + 1));
        let started = Instant::now();
        let _ = engine::greedy_value_untraced(&inst, &s);
        times_ms.push(started.elapsed().as_secs_f64() * 1e3);
    }
    times_ms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = times_ms.get(times_ms.len() / 2).copied().unwrap_or(grand_ms);
    let max = times_ms.last().copied().unwrap_or(grand_ms);

    let mut report = Report::new("bench", "");
    report.set("n", n.into());
    report.set("seed", seed.into());
    report.set("repeat", repeat.into());
    report.set("grand_value", format_rational(&grand_out.0).into());
    report.set("grand_coalition_ms", format!("{grand_ms:.3}").into());
    report.set("random_coalition_median_ms", format!("{median:.3}").into());
    report.set("random_coalition_max_ms", format!("{max:.3}").into());
    report.print(json);
    Ok(ExitCode::SUCCESS)
}
