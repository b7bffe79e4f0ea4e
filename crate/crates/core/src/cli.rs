//! Command-line front end: `check` runs formulas against a net, `bench`
//! times them under the optimization toggles and prints a TSV table.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::buchi::DEFAULT_TOUGHNESS_COEFF;
use crate::codec::{plan_encoding, Scheme};
use crate::explore::{check, CheckOptions, CheckOutcome, Move, Verdict};
use crate::ltl::{parse_formula_file, parse_ltl, Formula};
use crate::petri::{parse_pnml, PetriNet};

/// Exit code: every formula decided.
pub const EXIT_DECIDED: i32 = 0;
/// Exit code: some formula hit a limit or overflowed the encoding.
pub const EXIT_UNDECIDED: i32 = 1;
/// Exit code: bad usage or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ptltl", version, about = "LTL model checking of place/transition nets")]
#[command(subcommand_negates_reqs = true, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    check: CheckArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check each formula and print one result line per formula (default).
    Check(CheckArgs),
    /// Run each formula under the baseline and each single optimization
    /// and print a TSV comparison.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Encoding {
    Auto,
    Default,
    Safe,
    Nupn,
    Pinv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Human,
    Machine,
}

#[derive(Debug, Clone, Args)]
struct Input {
    /// PNML file of the net.
    #[arg(long, required = true)]
    net: Option<PathBuf>,
    /// File with one formula per line (`#` starts a comment).
    #[arg(long, conflicts_with = "ltl", required_unless_present = "ltl")]
    formula: Option<PathBuf>,
    /// A single formula given inline.
    #[arg(long)]
    ltl: Option<String>,
}

#[derive(Debug, Clone, Args)]
struct Limits {
    #[arg(long, value_enum, default_value = "auto")]
    encoding: Encoding,
    /// Weight of one atom in the Büchi toughness term.
    #[arg(long = "hba-coeff", default_value_t = DEFAULT_TOUGHNESS_COEFF)]
    hba_coeff: f64,
    /// First depth bound of the outer search; 0 disables bounding.
    #[arg(long, default_value_t = 10_000)]
    bound: u64,
    /// Factor applied to the bound after a truncated round.
    #[arg(long, default_value_t = 10)]
    growth: u64,
    /// Time limit per formula and configuration, in seconds.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    /// Memory cap, e.g. `16GiB`, `512MiB` or a byte count.
    #[arg(long = "mem-cap", default_value = "16GiB", value_parser = parse_bytes)]
    mem_cap: u64,
}

#[derive(Debug, Clone, Args)]
struct CheckArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    limits: Limits,
    /// Dynamic fireset.
    #[arg(long = "dyn", value_enum, default_value = "on")]
    dynamic: Switch,
    /// Direct read/write on packed markings.
    #[arg(long, value_enum, default_value = "on")]
    drw: Switch,
    /// Heuristic ordering of Büchi successors.
    #[arg(long, value_enum, default_value = "on")]
    hba: Switch,
    #[arg(long, value_enum, default_value = "human")]
    output: Output,
    /// Print the marking layout as TSV to standard error.
    #[arg(long = "dump-layout")]
    dump_layout: bool,
    /// Print each formula's Büchi automaton to standard error.
    #[arg(long = "dump-buchi")]
    dump_buchi: bool,
}

#[derive(Debug, Clone, Args)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    limits: Limits,
}

/// Parses sizes such as `1024`, `64K`, `512MiB` or `16GB` (binary units).
fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (num, unit) = s.split_at(split);
    let n: u64 = num.parse().map_err(|_| format!("invalid size '{s}'"))?;
    let shift = match unit.trim().to_ascii_lowercase().as_str() {
        "" | "b" => 0,
        "k" | "kb" | "kib" => 10,
        "m" | "mb" | "mib" => 20,
        "g" | "gb" | "gib" => 30,
        "t" | "tb" | "tib" => 40,
        _ => return Err(format!("invalid size unit in '{s}'")),
    };
    n.checked_mul(1 << shift).ok_or_else(|| format!("size '{s}' too large"))
}

fn scheme_of(e: Encoding) -> Option<Scheme> {
    match e {
        Encoding::Auto => None,
        Encoding::Default => Some(Scheme::Default16),
        Encoding::Safe => Some(Scheme::OneSafe),
        Encoding::Nupn => Some(Scheme::Nupn),
        Encoding::Pinv => Some(Scheme::PInvariant),
    }
}

fn options(limits: &Limits, dynamic: bool, drw: bool, hba: bool) -> CheckOptions {
    CheckOptions {
        scheme: scheme_of(limits.encoding),
        dynamic_fireset: dynamic,
        direct_rw: drw,
        heuristic: hba,
        heuristic_coeff: limits.hba_coeff,
        bound: limits.bound,
        growth: limits.growth,
        timeout: Some(Duration::from_secs_f64(limits.timeout.max(0.0))),
        memory_cap: usize::try_from(limits.mem_cap).ok(),
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_DECIDED };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        None => run_check(&cli.check, out, err),
        Some(Command::Check(a)) => run_check(&a, out, err),
        Some(Command::Bench(a)) => run_bench(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn load(input: &Input) -> Result<(PetriNet, Vec<Formula>), String> {
    let path = input.net.as_deref().ok_or("missing --net")?;
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let net = parse_pnml(&bytes).map_err(|e| format!("{}: {e}", path.display()))?.net;
    let formulas = match (&input.formula, &input.ltl) {
        (Some(f), _) => {
            let text = std::fs::read_to_string(f).map_err(|e| format!("{}: {e}", f.display()))?;
            parse_formula_file(&text).map_err(|e| format!("{}: {e}", f.display()))?
        }
        (None, Some(text)) => vec![parse_ltl(text).map_err(|e| format!("formula: {e}"))?],
        (None, None) => return Err("missing --formula or --ltl".into()),
    };
    for f in &formulas {
        f.bind(&net).map_err(|e| format!("formula '{}': {e}", f.render()))?;
    }
    Ok((net, formulas))
}

/// One machine-mode result line.
#[derive(Debug, Serialize)]
struct Record<'a> {
    index: usize,
    formula: String,
    verdict: &'static str,
    states: usize,
    product_states: u64,
    rounds: u32,
    peak_bound: Option<u64>,
    wall_seconds: f64,
    peak_bytes: usize,
    scheme: Option<&'a str>,
    counterexample: Option<Lasso>,
    reason: Option<&'a str>,
}

#[derive(Debug, Serialize)]
struct Lasso {
    prefix: Vec<String>,
    cycle: Vec<String>,
}

fn step_names(net: &PetriNet, steps: &[crate::explore::Step]) -> Vec<String> {
    steps
        .iter()
        .map(|s| match s.mv {
            Move::Fire(t) => net.transitions()[t].name.clone(),
            Move::Stutter => "-".to_string(),
        })
        .collect()
}

fn run_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let (net, formulas) = load(&args.input)?;
    let opts = options(&args.limits, args.dynamic.on(), args.drw.on(), args.hba.on());
    if args.dump_layout {
        let plan = plan_encoding(&net, opts.scheme).map_err(|e| e.to_string())?;
        let _ = write!(err, "{}", plan.layout_tsv(&net));
    }
    let mut code = EXIT_DECIDED;
    for (i, f) in formulas.iter().enumerate() {
        let outcome = check(&net, f, &opts).map_err(|e| e.to_string())?;
        if args.dump_buchi {
            let _ = writeln!(err, "# formula {}", i + 1);
            let _ = write!(err, "{}", outcome.automaton.dump());
        }
        if !outcome.verdict.is_decided() {
            code = EXIT_UNDECIDED;
        }
        match args.output {
            Output::Human => write_human(out, &net, i + 1, f, &outcome),
            Output::Machine => write_machine(out, &net, i + 1, f, &outcome),
        }
        .map_err(|e| e.to_string())?;
    }
    Ok(code)
}

fn write_human(
    out: &mut dyn Write,
    net: &PetriNet,
    index: usize,
    f: &Formula,
    o: &CheckOutcome,
) -> std::io::Result<()> {
    let s = &o.stats;
    let detail = match &o.verdict {
        Verdict::CannotHandle(r) => format!(" ({r})"),
        _ => String::new(),
    };
    writeln!(
        out,
        "formula {index}: {}{detail}  [states {}, product states {}, rounds {}, {:.3} s]  {}",
        o.verdict.name(),
        s.states,
        s.product_states,
        s.rounds,
        s.wall_seconds,
        f.render()
    )?;
    if let Verdict::Violated(run) = &o.verdict {
        writeln!(out, "  counterexample: {}", run.display(net))?;
    }
    Ok(())
}

fn write_machine(
    out: &mut dyn Write,
    net: &PetriNet,
    index: usize,
    f: &Formula,
    o: &CheckOutcome,
) -> std::io::Result<()> {
    let s = &o.stats;
    let record = Record {
        index,
        formula: f.render(),
        verdict: o.verdict.name(),
        states: s.states,
        product_states: s.product_states,
        rounds: s.rounds,
        peak_bound: s.peak_bound,
        wall_seconds: s.wall_seconds,
        peak_bytes: s.peak_bytes,
        scheme: s.scheme.as_deref(),
        counterexample: match &o.verdict {
            Verdict::Violated(run) => Some(Lasso {
                prefix: step_names(net, &run.prefix),
                cycle: step_names(net, &run.cycle),
            }),
            _ => None,
        },
        reason: match &o.verdict {
            Verdict::CannotHandle(r) => Some(r.as_str()),
            _ => None,
        },
    };
    let line = serde_json::to_string(&record).map_err(std::io::Error::other)?;
    writeln!(out, "{line}")
}

/// Header of the bench table.
pub const BENCH_HEADER: &str = "formula\tverdict\tT_ORI\tM_ORI\tN_ORI\tT_DYN\tM_DYN\tN_DYN\t\
T_DRW\tM_DRW\tN_DRW\tT_HBA\tM_HBA\tN_HBA\tdT1\tdM1\tdT2\tdM2\tdN\tlimited";

/// One bench measurement: time, memory, expansions and whether a limit
/// stopped it.
struct Measure {
    t: f64,
    m: usize,
    n: u64,
    verdict: Verdict,
}

fn ratio(a: f64, b: f64) -> String {
    if b > 0.0 {
        format!("{:.2}", a / b)
    } else {
        "-".to_string()
    }
}

fn run_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<i32, String> {
    let (net, formulas) = load(&args.input)?;
    let limit = args.limits.timeout;
    let configs = [
        ("ORI", false, false, false),
        ("DYN", true, false, false),
        ("DRW", false, true, false),
        ("HBA", false, false, true),
    ];
    let io = |e: std::io::Error| e.to_string();
    writeln!(out, "{BENCH_HEADER}").map_err(io)?;
    let mut code = EXIT_DECIDED;
    for (i, f) in formulas.iter().enumerate() {
        let mut ms = Vec::new();
        for &(_, d, r, h) in &configs {
            let o = check(&net, f, &options(&args.limits, d, r, h)).map_err(|e| e.to_string())?;
            let timed_out = matches!(o.verdict, Verdict::ResourceLimit(_));
            ms.push(Measure {
                // limited runs count as the limit, as in the averaging
                // convention of the comparison tables
                t: if timed_out { limit } else { o.stats.wall_seconds },
                m: o.stats.peak_bytes,
                n: o.stats.product_states,
                verdict: o.verdict,
            });
        }
        let limited: Vec<&str> = configs
            .iter()
            .zip(&ms)
            .filter(|(_, m)| !m.verdict.is_decided())
            .map(|(c, _)| c.0)
            .collect();
        if !limited.is_empty() {
            code = EXIT_UNDECIDED;
        }
        let verdict = ms
            .iter()
            .find(|m| m.verdict.is_decided())
            .map_or(ms[0].verdict.name(), |m| m.verdict.name());
        let mut row = vec![(i + 1).to_string(), verdict.to_string()];
        for m in &ms {
            row.push(format!("{:.3}", m.t));
            row.push(m.m.to_string());
            row.push(m.n.to_string());
        }
        let (ori, dy, drw, hba) = (&ms[0], &ms[1], &ms[2], &ms[3]);
        row.push(ratio(ori.t, dy.t));
        row.push(ratio(ori.m as f64, dy.m as f64));
        row.push(ratio(ori.t, drw.t));
        row.push(ratio(ori.m as f64, drw.m as f64));
        row.push(ratio(ori.n as f64, hba.n as f64));
        row.push(if limited.is_empty() { "-".to_string() } else { limited.join(",") });
        writeln!(out, "{}", row.join("\t")).map_err(io)?;
    }
    Ok(code)
}

/// Reads a PNML file; convenience for examples and tests.
pub fn load_net(path: &Path) -> Result<PetriNet, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_pnml(&bytes).map_err(|e| e.to_string())?.net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_bytes("1024"), Ok(1024));
        assert_eq!(parse_bytes("16GiB"), Ok(16 << 30));
        assert_eq!(parse_bytes("512M"), Ok(512 << 20));
        assert!(parse_bytes("12XB").is_err());
        assert!(parse_bytes("GiB").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["ptltl", "--bogus"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["ptltl", "check"], &mut out, &mut err), EXIT_USAGE);
        let code = run(["ptltl", "--net", "/nonexistent.pnml", "--ltl", "true"], &mut out, &mut err);
        assert_eq!(code, EXIT_USAGE);
        assert!(String::from_utf8_lossy(&err).contains("nonexistent"));
    }
}
