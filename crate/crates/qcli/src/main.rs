//! `qcli`: command-line front end for bundles, modules and Horrocks triples
//! on the quadric P¹×P¹.
//!
//! Exit codes: 0 success, 1 property failure, 2 parse or validation error,
//! 3 unmet precondition.

use std::fmt;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use horrocks_core::bipoly::BiDegree;
use horrocks_core::exactla::Field;
use horrocks_core::fixtures::{fixture, fixtures};
use horrocks_core::flmod::module_iso;
use horrocks_core::formats::{parse_file, print_bundle, print_module, print_triple, FileData};
use horrocks_core::horrocks::{extract, gamma_normalize, roundtrip, synthesize, triple_iso, BundleRep, HorrocksTriple};
use horrocks_core::presheaf::{strip_acm, table_shifts};
use horrocks_core::random::{random_module, random_small_module, random_triple};
use horrocks_core::stability::le_potier_check;
use horrocks_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "qcli", version, about = "Horrocks correspondence on the quadric P1 x P1")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Field for built-in examples and random instances: p=<prime> or rationals.
    #[arg(long, global = true, default_value = "p=32003")]
    field: Field,
    /// Degree window lo..hi for cohomology tables.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    /// Random trials for isomorphism searches.
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cohomology table of a bundle over diagonal and spinor twists.
    Cohomology { input: String },
    /// The Horrocks triple (M, W, V) of a bundle, as a triple file.
    Invariants { input: String },
    /// A monad for the bundle of a triple file.
    Synthesize {
        input: String,
        /// Also rewrite the monad as a kernel presentation (experimental).
        #[arg(long)]
        gamma: bool,
    },
    /// Synthesize, extract and compare with the input triple.
    Roundtrip { input: String },
    /// Split off ACM line bundle summands of a kernel presentation.
    StripAcm { input: String },
    /// Search for an isomorphism between two modules or two triples.
    Iso { first: String, second: String },
    /// Le Potier stability and jumping determinants of a rank-two bundle.
    Stability { input: String },
    /// A seeded random module; `--dims 2,3@-1` puts dims 2 and 3 in degrees -1, 0.
    RandomModule(RandomModuleArgs),
    /// A seeded random triple with random socle subspaces.
    RandomTriple(RandomModuleArgs),
    /// Print a built-in example bundle; `--list` shows the names.
    Example {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct RandomModuleArgs {
    #[arg(long, value_parser = parse_dims)]
    dims: Option<(Vec<usize>, i64)>,
    /// Use this module file instead of a random module (random-triple only).
    #[arg(long)]
    module: Option<String>,
    #[arg(long, default_value_t = 2)]
    max_len: usize,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo = a.trim().parse().map_err(|_| format!("bad bound `{a}`"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad bound `{b}`"))?;
    if lo > hi {
        return Err("empty window".into());
    }
    Ok((lo, hi))
}

fn parse_dims(s: &str) -> Result<(Vec<usize>, i64), String> {
    let (list, lo) = s.split_once('@').unwrap_or((s, "0"));
    let lo = lo.trim().parse().map_err(|_| format!("bad degree `{lo}`"))?;
    let dims = list
        .split(',')
        .map(|d| d.trim().parse().map_err(|_| format!("bad dimension `{d}`")))
        .collect::<Result<Vec<usize>, String>>()?;
    Ok((dims, lo))
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> CliError {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn input(e: impl fmt::Display) -> CliError {
        CliError::new(2, e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match e {
            Error::Parse(_) | Error::InvalidModule(_) => 2,
            Error::NotMinimalGamma(_)
            | Error::HasAcmSummands(_)
            | Error::Unsupported(_)
            | Error::PrereqVanishingFailed(_)
            | Error::Shape(_) => 3,
            _ => 1,
        };
        let hint = match e {
            Error::NotMinimalGamma(_) | Error::HasAcmSummands(_) => "\nhint: run `qcli strip-acm` on the input first",
            _ => "",
        };
        CliError::new(code, format!("{e}{hint}"))
    }
}

type CliResult = Result<(), CliError>;

/// Reads a path, `-` for standard input, or `example:<name>`.
fn load(opts: &Opts, input: &str) -> Result<FileData, CliError> {
    if let Some(name) = input.strip_prefix("example:") {
        return fixture(opts.field, name).map(|p| FileData::Bundle(BundleRep::Gamma(p))).map_err(CliError::input);
    }
    let mut text = String::new();
    if input == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(CliError::input)?;
    } else {
        text = std::fs::read_to_string(input).map_err(|e| CliError::input(format!("{input}: {e}")))?;
    }
    parse_file(&text).map_err(CliError::input)
}

fn load_bundle(opts: &Opts, input: &str) -> Result<BundleRep, CliError> {
    match load(opts, input)? {
        FileData::Bundle(b) => Ok(b),
        _ => Err(CliError::input(format!("{input}: expected a bundle file"))),
    }
}

fn load_triple(opts: &Opts, input: &str) -> Result<HorrocksTriple, CliError> {
    match load(opts, input)? {
        FileData::Triple(t) => Ok(t),
        _ => Err(CliError::input(format!("{input}: expected a triple file"))),
    }
}

fn rng(opts: &Opts) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed)
}

fn twist(t: BiDegree) -> String {
    format!("({},{})", t.a, t.b)
}

fn cmd_cohomology(opts: &Opts, input: &str) -> CliResult {
    let rep = load_bundle(opts, input)?;
    let (lo, hi) = opts.window.unwrap_or((-4, 4));
    let mut rows = Vec::new();
    for d in lo..=hi {
        let mut row = Vec::new();
        for e in table_shifts(d) {
            row.push((e, rep.h_dims(e)?));
        }
        rows.push((d, row));
    }
    if opts.format == Format::Records {
        for (d, row) in &rows {
            for (name, (e, h)) in ["O", "S1", "S2"].iter().zip(row) {
                println!("cohomology\td={d}\tseries={name}\ttwist={}\th0={}\th1={}\th2={}", twist(*e), h[0], h[1], h[2]);
            }
        }
        return Ok(());
    }
    println!("rank {}, c1 = {}", rep.rank(), twist(rep.c1()));
    println!("{:>4} | {:^14} | {:^14} | {:^14}", "d", "E(d,d)", "E(d+1,d)", "E(d,d+1)");
    for (d, row) in rows {
        let cells: Vec<String> = row.iter().map(|(_, h)| format!("{:>4}{:>5}{:>5}", h[0], h[1], h[2])).collect();
        println!("{d:>4} | {} | {} | {}", cells[0], cells[1], cells[2]);
    }
    Ok(())
}

fn cmd_invariants(opts: &Opts, input: &str) -> CliResult {
    let rep = load_bundle(opts, input)?;
    let t = extract(&rep)?;
    if opts.format == Format::Records {
        for (d, n) in t.module().dims_map() {
            println!("module\td={d}\tdim={n}");
        }
        for (name, dims) in [("W", t.w.dims_by_degree()), ("V", t.v.dims_by_degree())] {
            for (d, n) in dims {
                println!("{name}\td={d}\tdim={n}");
            }
        }
        return Ok(());
    }
    print!("{}", print_triple(&t));
    Ok(())
}

fn cmd_synthesize(opts: &Opts, input: &str, gamma: bool) -> CliResult {
    let t = load_triple(opts, input)?;
    let m = synthesize(&t)?;
    if gamma {
        let p = gamma_normalize(&m)?;
        print!("{}", print_bundle(&BundleRep::Gamma(p)));
    } else {
        print!("{}", print_bundle(&BundleRep::Monad(m)));
    }
    Ok(())
}

fn cmd_roundtrip(opts: &Opts, input: &str) -> CliResult {
    let t = load_triple(opts, input)?;
    let report = roundtrip(&t, opts.trials, &mut rng(opts));
    if opts.format == Format::Records {
        for s in &report.stages {
            println!("stage\tname={}\tok={}\tdetail={}", s.name, s.ok, s.detail);
        }
        println!("roundtrip\tpassed={}", report.passed());
    } else {
        println!("{report}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::new(1, "roundtrip failed"))
    }
}

fn cmd_strip(opts: &Opts, input: &str) -> CliResult {
    let BundleRep::Gamma(p) = load_bundle(opts, input)? else {
        return Err(CliError::new(3, "strip-acm needs a kernel presentation (bundle gamma)"));
    };
    let report = strip_acm(&p)?;
    for t in &report.removed {
        println!("# removed O{t}");
    }
    print!("{}", print_bundle(&BundleRep::Gamma(report.presentation)));
    Ok(())
}

fn cmd_iso(opts: &Opts, first: &str, second: &str) -> CliResult {
    let mut rng = rng(opts);
    let found = match (load(opts, first)?, load(opts, second)?) {
        (FileData::Module(a), FileData::Module(b)) => module_iso(&a, &b, opts.trials, &mut rng).is_some(),
        (FileData::Triple(a), FileData::Triple(b)) => triple_iso(&a, &b, opts.trials, &mut rng)?.is_some(),
        _ => return Err(CliError::input("iso compares two module files or two triple files")),
    };
    if found {
        println!("isomorphic");
        Ok(())
    } else {
        println!("no isomorphism found in {} trials", opts.trials);
        Err(CliError::new(1, "not isomorphic"))
    }
}

fn cmd_stability(opts: &Opts, input: &str) -> CliResult {
    let BundleRep::Gamma(p) = load_bundle(opts, input)? else {
        return Err(CliError::new(3, "stability needs a kernel presentation (bundle gamma)"));
    };
    let r = le_potier_check(&p)?;
    if opts.format == Format::Records {
        println!("h0\ttwist=(0,0)\tdim={}", r.h0);
        println!("h0\ttwist=(1,-1)\tdim={}", r.h0_plus_minus);
        println!("h0\ttwist=(-1,1)\tdim={}", r.h0_minus_plus);
        println!("stable\t{}", r.stable);
        if let Some(d) = &r.determinants {
            for (name, b) in [("g1", &d.g1), ("g2", &d.g2)] {
                println!("det\tblock={name}\tform={}\tmultiplicities={:?}", b.form, b.multiplicities);
            }
        }
    } else {
        println!("{r}");
    }
    Ok(())
}

fn make_module(opts: &Opts, args: &RandomModuleArgs, rng: &mut ChaCha8Rng) -> Result<horrocks_core::flmod::FinLengthModule, CliError> {
    if let Some(path) = &args.module {
        return match load(opts, path)? {
            FileData::Module(m) => Ok(m),
            _ => Err(CliError::input(format!("{path}: expected a module file"))),
        };
    }
    Ok(match &args.dims {
        Some((dims, lo)) => random_module(opts.field, *lo, dims, rng),
        None => random_small_module(opts.field, args.max_len.max(1), args.max_dim.max(1), rng),
    })
}

fn cmd_random_module(opts: &Opts, args: &RandomModuleArgs) -> CliResult {
    let mut rng = rng(opts);
    print!("{}", print_module(&make_module(opts, args, &mut rng)?));
    Ok(())
}

fn cmd_random_triple(opts: &Opts, args: &RandomModuleArgs) -> CliResult {
    let mut rng = rng(opts);
    let m = make_module(opts, args, &mut rng)?;
    print!("{}", print_triple(&random_triple(&m, &mut rng)?));
    Ok(())
}

fn cmd_example(opts: &Opts, name: Option<&str>, list: bool) -> CliResult {
    match name {
        Some(name) if !list => {
            let p = fixture(opts.field, name).map_err(CliError::input)?;
            print!("{}", print_bundle(&BundleRep::Gamma(p)));
        }
        _ => {
            for f in fixtures() {
                println!("{:<18} {}", f.name, f.summary);
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    let opts = &cli.opts;
    match &cli.cmd {
        Cmd::Cohomology { input } => cmd_cohomology(opts, input),
        Cmd::Invariants { input } => cmd_invariants(opts, input),
        Cmd::Synthesize { input, gamma } => cmd_synthesize(opts, input, *gamma),
        Cmd::Roundtrip { input } => cmd_roundtrip(opts, input),
        Cmd::StripAcm { input } => cmd_strip(opts, input),
        Cmd::Iso { first, second } => cmd_iso(opts, first, second),
        Cmd::Stability { input } => cmd_stability(opts, input),
        Cmd::RandomModule(args) => cmd_random_module(opts, args),
        Cmd::RandomTriple(args) => cmd_random_triple(opts, args),
        Cmd::Example { name, list } => cmd_example(opts, name.as_deref(), *list),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
