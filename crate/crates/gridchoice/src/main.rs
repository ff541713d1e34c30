//! Command-line front end: build, evaluate, decompose, convert, enumerate,
//! verify, and render rules. Results go to stdout, diagnostics to stderr.
//! Exit codes: 0 success, 2 invalid input, 3 violated invariant, 4 resource
//! cap exceeded.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gridchoice::ablist::{decompose, enumerate_ablists, AbList};
use gridchoice::error::Error;
use gridchoice::grid::{enumerate_grid_functions, Grid, GridFunction};
use gridchoice::profiles::{find_manipulation, Profile, ScfOracle, SweepConfig};
use gridchoice::quota::{
    eval_quota_regions, q_from_quotas, quotas_from_q, ConversionMatrix, QuotaSequence,
};
use gridchoice::render::{render_ascii, render_svg, SvgOptions};
use gridchoice::rng::SplitMix64;

#[derive(Parser)]
#[command(
    name = "gridchoice",
    version,
    about = "Anonymous strategy-proof binary voting rules on the tally grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    /// Exhaustive sweep over every grid function: monotone count,
    /// strategy-proofness equivalence, grid-level agreement, TFAE.
    Full,
    /// Enumerate all lists: count, round-trips, monotonicity.
    Lists,
    /// Quota conversions: round-trips, matrix vs formula, region oracle.
    Quotas,
    /// Randomized TFAE agreement on sampled functions.
    Tfae,
}

#[derive(Subcommand)]
enum Command {
    /// Build the function table named by a list.
    Build {
        #[arg(long)]
        n: usize,
        /// Comma-separated list terms, e.g. 5,3,2,6,1,4
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a rule on a profile string over 'a', 'b', '-'.
    Eval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<String>,
        /// Comma-separated quota sequence, e.g. 8,14,7,19,3,21
        #[arg(long)]
        k: Option<String>,
        /// Ballot characters, one per voter: 'a', 'b', or '-' for
        /// indifference.
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
    },
    /// Convert a list to its quota sequence or vice versa, checking that
    /// both name the same rule on every grid point.
    Convert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        k: Option<String>,
    },
    /// Read a function-table JSON (stdin, or a file) and print its list.
    Decompose {
        /// Path to the table JSON; defaults to stdin.
        #[arg(long)]
        table: Option<String>,
    },
    /// Print every list for a grid size, one JSON object per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Print only the number of lists.
        #[arg(long)]
        count_only: bool,
    },
    /// Render a rule as a text or SVG diagram.
    Render {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a self-check suite and print one line per property.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: VerifyMode,
        /// Seed for the randomized modes.
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Sample count for the randomized modes.
        #[arg(long, default_value = "10000")]
        samples: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::Internal(_) => 3,
                Error::ResourceCap(_) => 4,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn parse_numbers(what: &str, s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("invalid {what} entry {t:?}: {e}")))
        })
        .collect()
}

fn parse_list(n: usize, s: &str) -> Result<AbList, Error> {
    AbList::new(n, parse_numbers("list", s)?)
}

fn parse_quotas(n: usize, s: &str) -> Result<QuotaSequence, Error> {
    QuotaSequence::new(n, parse_numbers("quota", s)?)
}

fn emit(out: Option<&str>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, content).map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))
        }
        None => {
            print!("{content}");
            if !content.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn formatted_table(f: &GridFunction, format: Format) -> Result<String, Error> {
    Ok(match format {
        Format::Json => f.to_json(),
        Format::Ascii => render_ascii(f)?,
        Format::Svg => render_svg(f, &SvgOptions::default()),
    })
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Build { n, q, format, out } => {
            let f = parse_list(n, &q)?.to_grid_function();
            emit(out.as_deref(), &formatted_table(&f, format)?)
        }
        Command::Eval { n, q, k, profile } => {
            let p: Profile = profile.parse()?;
            if p.len() != n {
                return Err(Error::ProfileLength {
                    got: p.len(),
                    want: n,
                });
            }
            let outcome = match (q, k) {
                (Some(q), None) => {
                    let f = parse_list(n, &q)?.to_grid_function();
                    gridchoice::profiles::eval_scf(&f, &p)?
                }
                (None, Some(k)) => eval_quota_regions(&parse_quotas(n, &k)?, p.tally())?,
                _ => return Err(Error::Parse("pass exactly one of --q and --k".into())),
            };
            println!("{outcome}");
            Ok(())
        }
        Command::Convert { n, q, k } => match (q, k) {
            (Some(q), None) => {
                let list = parse_list(n, &q)?;
                let seq = quotas_from_q(&list);
                check_equivalence(&list.to_grid_function(), &seq)?;
                println!("{}", seq.to_json());
                Ok(())
            }
            (None, Some(k)) => {
                let seq = parse_quotas(n, &k)?;
                let list = q_from_quotas(&seq)?;
                check_equivalence(&list.to_grid_function(), &seq)?;
                println!("{}", list.to_json());
                Ok(())
            }
            _ => Err(Error::Parse("pass exactly one of --q and --k".into())),
        },
        Command::Decompose { table } => {
            let text = match table {
                Some(path) => fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
                    buf
                }
            };
            let f = GridFunction::from_json(text.trim())?;
            println!("{}", decompose(&f)?.to_json());
            Ok(())
        }
        Command::Enumerate { n, count_only } => {
            if n > 24 {
                return Err(Error::ResourceCap(format!(
                    "enumerating 2^{} lists for n={n} is past the cap of n <= 24",
                    n + 1
                )));
            }
            if count_only {
                println!("{}", enumerate_ablists(Grid::new(n)).count());
            } else {
                for q in enumerate_ablists(Grid::new(n)) {
                    println!("{}", q.to_json());
                }
            }
            Ok(())
        }
        Command::Render { n, q, format, out } => {
            let f = parse_list(n, &q)?.to_grid_function();
            emit(out.as_deref(), &formatted_table(&f, format)?)
        }
        Command::Verify {
            n,
            mode,
            seed,
            samples,
        } => match mode {
            VerifyMode::Full => verify_full(n),
            VerifyMode::Lists => verify_lists(n),
            VerifyMode::Quotas => verify_quotas(n),
            VerifyMode::Tfae => verify_tfae(n, seed, samples),
        },
    }
}

/// Check that a quota sequence and a built table name the same rule on all
/// grid points; disagreement is an internal equivalence failure.
fn check_equivalence(f: &GridFunction, seq: &QuotaSequence) -> Result<(), Error> {
    let grid = f.grid();
    let total = grid.point_count();
    for pt in grid.points() {
        let direct = eval_quota_regions(seq, pt)?;
        if direct != f.get(pt) {
            return Err(Error::Internal(format!(
                "representations disagree at {pt}: regions give {direct}, table gives {}",
                f.get(pt)
            )));
        }
    }
    eprintln!("equivalence check: OK ({total}/{total} grid points)");
    Ok(())
}

struct Report {
    failures: usize,
}

impl Report {
    fn new() -> Self {
        Report { failures: 0 }
    }

    fn line(&mut self, ok: bool, text: &str) {
        println!("{text}: {}", if ok { "OK" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }

    fn finish(self) -> Result<(), Error> {
        if self.failures == 0 {
            Ok(())
        } else {
            Err(Error::Internal(format!(
                "{} propert{} failed",
                self.failures,
                if self.failures == 1 { "y" } else { "ies" }
            )))
        }
    }
}

fn verify_full(n: usize) -> Result<(), Error> {
    if n > 4 {
        return Err(Error::ResourceCap(format!(
            "full mode sweeps all 2^|G| functions and 3^n profiles; capped at n <= 4, got n={n}"
        )));
    }
    let grid = Grid::new(n);
    let total: u64 = 1 << grid.point_count();
    let mut monotone = 0u64;
    let mut sp_mismatches = 0u64;
    let mut grid_check_mismatches = 0u64;
    let mut tfae_mismatches = 0u64;
    let sweep = SweepConfig::default();
    for f in enumerate_grid_functions(grid) {
        let monotone_here = f.is_dually_monotone();
        if monotone_here {
            monotone += 1;
        }
        let oracle = ScfOracle::from_grid_function(&f);
        let manipulation_free = find_manipulation(&oracle, &sweep)?.is_none();
        if manipulation_free != monotone_here {
            sp_mismatches += 1;
        }
        if gridchoice::profiles::grid_manipulation_check(&f) != manipulation_free {
            grid_check_mismatches += 1;
        }
        let [c1, c2, c3, c4] = f.tfae_check();
        if !(c1 == c2 && c2 == c3 && c3 == c4) {
            tfae_mismatches += 1;
        }
    }
    let expected: u64 = 1 << (n + 1);
    let mut report = Report::new();
    report.line(
        monotone == expected,
        &format!("dually-monotone count {monotone}/{total} (expected {expected})"),
    );
    report.line(
        sp_mismatches == 0,
        &format!("SP-equivalence (manipulation-free <=> dually monotone) over {total} functions"),
    );
    report.line(
        grid_check_mismatches == 0,
        "grid-level deviation check agrees with the profile oracle",
    );
    report.line(
        tfae_mismatches == 0,
        "TFAE conditions agree on every function",
    );
    report.finish()
}

fn verify_lists(n: usize) -> Result<(), Error> {
    if n > 16 {
        return Err(Error::ResourceCap(format!(
            "lists mode builds all 2^{} rules; capped at n <= 16, got n={n}",
            n + 1
        )));
    }
    let mut count = 0u64;
    let mut round_trip_failures = 0u64;
    let mut monotonicity_failures = 0u64;
    for q in enumerate_ablists(Grid::new(n)) {
        count += 1;
        let f = q.to_grid_function();
        if !f.is_dually_monotone() {
            monotonicity_failures += 1;
        }
        if decompose(&f)? != q {
            round_trip_failures += 1;
        }
    }
    let expected: u64 = 1 << (n + 1);
    let mut report = Report::new();
    report.line(
        count == expected,
        &format!("2^{} = {expected} lists enumerated, got {count}", n + 1),
    );
    report.line(
        round_trip_failures == 0,
        &format!("all {count} lists round-trip through build/decompose"),
    );
    report.line(
        monotonicity_failures == 0,
        "every built rule is dually monotone",
    );
    report.finish()
}

fn verify_quotas(n: usize) -> Result<(), Error> {
    if n > 12 {
        return Err(Error::ResourceCap(format!(
            "quotas mode converts all 2^{} rules both ways; capped at n <= 12, got n={n}",
            n + 1
        )));
    }
    let grid = Grid::new(n);
    let mut count = 0u64;
    let mut round_trip_failures = 0u64;
    let mut region_mismatches = 0u64;
    for q in enumerate_ablists(grid) {
        count += 1;
        let seq = quotas_from_q(&q);
        if q_from_quotas(&seq)? != q {
            round_trip_failures += 1;
        }
        let f = q.to_grid_function();
        for pt in grid.points() {
            if eval_quota_regions(&seq, pt)? != f.get(pt) {
                region_mismatches += 1;
            }
        }
    }
    let mut identity_ok = true;
    for order in 1..=20 {
        let t = ConversionMatrix::new(order);
        for i in 0..order {
            for j in 0..order {
                let entry: i64 = (0..order)
                    .map(|l| t.forward()[i][l] * t.inverse()[l][j])
                    .sum();
                if entry != i64::from(i == j) {
                    identity_ok = false;
                }
            }
        }
    }
    let mut report = Report::new();
    report.line(
        round_trip_failures == 0,
        &format!("all {count} quota sequences round-trip through the conversions"),
    );
    report.line(
        region_mismatches == 0,
        &format!(
            "region evaluation matches the converted rule on {} points per sequence",
            grid.point_count()
        ),
    );
    report.line(identity_ok, "T * T^-1 = identity for orders 1..=20");
    report.finish()
}

fn verify_tfae(n: usize, seed: u64, samples: u64) -> Result<(), Error> {
    if n > 100 {
        return Err(Error::ResourceCap(format!(
            "tfae mode is capped at n <= 100, got n={n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut mismatches = 0u64;
    for _ in 0..samples {
        let f = GridFunction::sample(n, &mut rng);
        let [c1, c2, c3, c4] = f.tfae_check();
        if !(c1 == c2 && c2 == c3 && c3 == c4) {
            mismatches += 1;
        }
    }
    let mut report = Report::new();
    report.line(
        mismatches == 0,
        &format!("TFAE conditions agree on {samples} sampled functions (n={n}, seed {seed})"),
    );
    report.finish()
}
