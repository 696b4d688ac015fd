//! Command-line front end.
//!
//! Exit codes: 0 pass, prime or verified; 1 composite or rejected; 2 usage
//! or input error; 3 inconclusive.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use chebprime_core::arith::{trial_division_oracle, OddModulus, OracleStatus};
use chebprime_core::primality::{self, FamilyOptions, FamilySpec, Reason, Status, Verdict};
use chebprime_core::search::{self, CoverSpec, PrimitiveDivisor};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde_json::Value;

use crate::output::{dec, factor_string, inputs, write_record, OutputRecord, Table};
use crate::{parallel, verify};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_COMPOSITE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Trial-division bound used to label passing inputs as pseudoprimes.
const LABEL_ORACLE_BOUND: u64 = 1_000_000;

#[derive(Debug, Parser)]
#[command(name = "chebprime", version, about = "Chebyshev-polynomial primality tests and scans")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the base, strong, weak or mod-Q² test on one integer
    Test(TestArgs),
    /// Certify a member of a special family
    Family(FamilyArgs),
    /// Batch scans
    #[command(subcommand)]
    Search(SearchCmd),
    /// Verification sweeps
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct TestArgs {
    /// Odd integer to test (decimal)
    q: String,
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    base: String,
    #[arg(long)]
    strong: bool,
    #[arg(long)]
    weak: bool,
    #[arg(long = "mod-square")]
    mod_square: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyKind {
    Mersenne,
    Wagstaff,
    Genmersenne,
    Genwagstaff,
    ThreePow,
    Cubic,
    Riesel,
    Twelveq,
    Proth,
    Fermat,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    kind: FamilyKind,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    r: Option<u64>,
    /// +1 or -1
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    base: Option<String>,
    #[arg(long)]
    sufficiency: bool,
    #[arg(long = "base-cap", default_value_t = primality::PROTH_BASE_CAP)]
    base_cap: u64,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Jsonl,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum SearchCmd {
    /// Composite Q passing the test to one base
    Pseudoprimes {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        base: i64,
        #[arg(long, default_value_t = 20_000)]
        limit: u64,
        #[arg(long)]
        strong: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check a covering set for k·2^n + 1
    SierpinskiCover {
        #[arg(long)]
        k: u64,
        #[arg(long, value_delimiter = ',')]
        cover: Vec<u64>,
        #[arg(long)]
        period: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Chebyshev test on k·2^n + 1 over a range of n
    SierpinskiScan {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        base: i64,
        #[arg(long, default_value_t = 3)]
        nmin: u64,
        #[arg(long, default_value_t = 20)]
        nmax: u64,
        #[arg(long = "oracle-bound", default_value_t = 10_000_000)]
        oracle_bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Primitive prime divisors of U_n(a)
    PrimitiveDivisors {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        base: i64,
        #[arg(long, default_value_t = 20)]
        nmax: u32,
        #[arg(long, default_value_t = 1 << 24)]
        bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cyclotomic residues and their digit counts
    Dip {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long = "a", alias = "base", default_value_t = 2, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        pmax: u64,
        #[arg(long = "oracle-bound", default_value_t = 10_000_000)]
        oracle_bound: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Non-squarefree Q passing both congruences
    Nonsquarefree {
        #[arg(long, default_value_t = 20_000)]
        limit: u64,
        #[arg(long, value_delimiter = ',', default_value = "2", allow_hyphen_values = true)]
        bases: Vec<i64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Theorem1,
    Modsquare,
    ProthOracle,
    Profiles,
    WeakUniversal,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Inclusive range of q, e.g. -6..6
    #[arg(long, default_value = "-6..6", allow_hyphen_values = true)]
    qrange: String,
    #[arg(long, default_value_t = 13)]
    pmax: u64,
    /// Inclusive range of bases; defaults to 2..6 for theorem1 and 2..20 for modsquare
    #[arg(long, allow_hyphen_values = true)]
    arange: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    qmax: u64,
    /// Upper bound for the Proth sweep
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    #[arg(long = "base-cap", default_value_t = primality::PROTH_BASE_CAP)]
    base_cap: u64,
    #[arg(long = "weak-limit", default_value_t = 5_000)]
    weak_limit: u64,
    /// Newline-separated known weak-universal composites
    #[arg(long = "oeis-a175530")]
    oeis_a175530: Option<PathBuf>,
}

/// Parses `lo..hi` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim(), hi.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: i64 = lo.parse().with_context(|| format!("bad range start in {s:?}"))?;
    let hi: i64 = hi.parse().with_context(|| format!("bad range end in {s:?}"))?;
    if lo > hi {
        bail!("empty range {s:?}");
    }
    Ok((lo, hi))
}

fn parse_sign(s: &str) -> Result<i8> {
    match s.trim() {
        "+1" | "1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => bail!("sign must be +1 or -1, got {other:?}"),
    }
}

fn status_exit(s: Status) -> i32 {
    match s {
        Status::ProvedPrime | Status::ProbablePrime => EXIT_PASS,
        Status::ProvedComposite => EXIT_COMPOSITE,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

/// Combines exit codes: composite beats inconclusive beats pass.
fn worst(a: i32, b: i32) -> i32 {
    let rank = |c| match c {
        EXIT_USAGE => 3,
        EXIT_COMPOSITE => 2,
        EXIT_INCONCLUSIVE => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn elapsed(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX)
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Test(a) => cmd_test(a, out),
        Command::Family(a) => cmd_family(a, out),
        Command::Search(s) => cmd_search(s, out),
        Command::Verify(a) => cmd_verify(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn emit_error(out: &mut dyn Write, command: &str, inp: BTreeMap<String, String>, msg: &str) -> Result<i32> {
    write_record(out, &OutputRecord::error(command, inp, msg))?;
    eprintln!("error: {msg}");
    Ok(EXIT_USAGE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TestKind {
    Base,
    Strong,
    Weak,
    ModSquare,
}

impl TestKind {
    fn name(self) -> &'static str {
        match self {
            TestKind::Base => "base",
            TestKind::Strong => "strong",
            TestKind::Weak => "weak",
            TestKind::ModSquare => "mod-square",
        }
    }
}

/// Verdict string for a passing input: oracle-composite inputs are
/// flagged as pseudoprime candidates.
fn pass_label(q: &BigUint, rec: &mut OutputRecord) -> &'static str {
    let oracle = trial_division_oracle(q, Some(LABEL_ORACLE_BOUND));
    let label = match oracle.status {
        OracleStatus::Composite => "composite",
        OracleStatus::Prime => "prime",
        OracleStatus::Unknown => "unknown",
    };
    rec.cert_entry("oracle", Value::String(label.into()));
    if let Some(f) = &oracle.witness_factor {
        rec.cert_entry("oracle_factor", dec(f));
    }
    if oracle.is_composite() {
        "pseudoprime-candidate"
    } else {
        "probable-prime"
    }
}

fn verdict_record(v: &Verdict, q: &BigUint, rec: &mut OutputRecord) -> i32 {
    rec.absorb(v, q);
    rec.verdict = if v.status == Status::ProbablePrime {
        pass_label(q, rec).into()
    } else {
        v.status.as_str().into()
    };
    status_exit(v.status)
}

fn cmd_test(args: TestArgs, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let mut inp = inputs([("Q", args.q.clone()), ("base", args.base.clone())]);
    let q: BigUint = match args.q.trim().parse() {
        Ok(q) => q,
        Err(_) => return emit_error(out, "test", inp, "Q must be a nonnegative decimal integer"),
    };
    let a: BigInt = match args.base.trim().parse() {
        Ok(a) => a,
        Err(_) => return emit_error(out, "test", inp, "base must be a decimal integer"),
    };
    inp.insert("Q".into(), q.to_string());
    inp.insert("base".into(), a.to_string());
    let m = match OddModulus::new(q.clone()) {
        Ok(m) => m,
        Err(e) => return emit_error(out, "test", inp, &e.to_string()),
    };
    let mut kinds = Vec::new();
    if args.strong {
        kinds.push(TestKind::Strong);
    }
    if args.weak {
        kinds.push(TestKind::Weak);
    }
    if args.mod_square {
        kinds.push(TestKind::ModSquare);
    }
    if kinds.is_empty() {
        kinds.push(TestKind::Base);
    }
    let mut code = EXIT_PASS;
    for kind in kinds {
        let mut this_inp = inp.clone();
        if kind != TestKind::Base && kind != TestKind::Strong {
            this_inp.insert("test".into(), kind.name().into());
        }
        if kind == TestKind::Strong {
            this_inp.insert("test".into(), kind.name().into());
        }
        let mut rec = OutputRecord::new("test", this_inp.clone());
        let c = match kind {
            TestKind::Base | TestKind::Strong => {
                let r = if kind == TestKind::Base {
                    primality::chebyshev_test(&m, &a)
                } else {
                    primality::strong_test(&m, &a)
                };
                match r {
                    Ok(v) => verdict_record(&v, &q, &mut rec),
                    Err(e) => {
                        code = worst(code, emit_error(out, "test", this_inp, &e.to_string())?);
                        continue;
                    }
                }
            }
            TestKind::Weak => {
                if primality::weak_test(&m, &a) {
                    rec.verdict = pass_label(&q, &mut rec).into();
                    EXIT_PASS
                } else {
                    rec.verdict = Status::ProvedComposite.as_str().into();
                    rec.cert_entry("reason", Value::String(Reason::FailedCongruence.as_str().into()));
                    EXIT_COMPOSITE
                }
            }
            TestKind::ModSquare => match primality::mod_square_check(&m, &a) {
                Ok(true) => {
                    rec.verdict = "pass".into();
                    EXIT_PASS
                }
                Ok(false) => {
                    rec.verdict = "fail".into();
                    EXIT_COMPOSITE
                }
                Err(e) => {
                    code = worst(code, emit_error(out, "test", this_inp, &e.to_string())?);
                    continue;
                }
            },
        };
        rec.elapsed_ms = elapsed(start);
        write_record(out, &rec)?;
        code = worst(code, c);
    }
    Ok(code)
}

fn family_spec(args: &FamilyArgs) -> Result<(FamilySpec, BTreeMap<String, String>)> {
    let need = |v: Option<u64>, flag: &str| v.ok_or_else(|| anyhow!("--{flag} is required"));
    let mut inp = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        inp.insert(k.to_string(), v);
    };
    let spec = match args.kind {
        FamilyKind::Mersenne => {
            let p = need(args.p, "p")?;
            put("p", p.to_string());
            FamilySpec::Mersenne { p }
        }
        FamilyKind::Wagstaff => {
            let p = need(args.p, "p")?;
            put("p", p.to_string());
            FamilySpec::Wagstaff { p }
        }
        FamilyKind::Genmersenne | FamilyKind::Genwagstaff => {
            let (q, p) = (need(args.q, "q")?, need(args.p, "p")?);
            put("q", q.to_string());
            put("p", p.to_string());
            if matches!(args.kind, FamilyKind::Genmersenne) {
                FamilySpec::GenMersenne { q, p }
            } else {
                FamilySpec::GenWagstaff { q, p }
            }
        }
        FamilyKind::ThreePow | FamilyKind::Cubic => {
            let sign = parse_sign(args.sign.as_deref().ok_or_else(|| anyhow!("--sign is required"))?)?;
            put("sign", sign.to_string());
            if matches!(args.kind, FamilyKind::ThreePow) {
                let n = need(args.n, "n")?;
                put("n", n.to_string());
                FamilySpec::ThreeTimesPow { n, sign }
            } else {
                let p = need(args.p, "p")?;
                put("p", p.to_string());
                FamilySpec::Cubic { p, sign }
            }
        }
        FamilyKind::Riesel => {
            let (r, n) = (need(args.r, "r")?, need(args.n, "n")?);
            put("r", r.to_string());
            put("n", n.to_string());
            FamilySpec::Riesel { r, n }
        }
        FamilyKind::Twelveq => {
            let (q, n) = (need(args.q, "q")?, need(args.n, "n")?);
            put("q", q.to_string());
            put("n", n.to_string());
            FamilySpec::TwelveQ { q, n }
        }
        FamilyKind::Proth => {
            let k: BigUint = args
                .k
                .as_deref()
                .ok_or_else(|| anyhow!("--k is required"))?
                .trim()
                .parse()
                .map_err(|_| anyhow!("--k must be a decimal integer"))?;
            let n = need(args.n, "n")?;
            put("k", k.to_string());
            put("n", n.to_string());
            FamilySpec::Proth { k, n }
        }
        FamilyKind::Fermat => {
            let n = need(args.n, "n")?;
            put("n", n.to_string());
            FamilySpec::Fermat { n }
        }
    };
    inp.insert("family".into(), spec.name().into());
    if let Some(b) = &args.base {
        inp.insert("base".into(), b.clone());
    }
    if args.sufficiency {
        inp.insert("sufficiency".into(), "true".into());
    }
    Ok((spec, inp))
}

fn cmd_family(args: FamilyArgs, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    let (spec, inp) = match family_spec(&args) {
        Ok(x) => x,
        Err(e) => return emit_error(out, "family", BTreeMap::new(), &format!("{e:#}")),
    };
    let base = match args.base.as_deref().map(|b| b.trim().parse::<BigInt>()) {
        None => None,
        Some(Ok(b)) => Some(b),
        Some(Err(_)) => return emit_error(out, "family", inp, "base must be a decimal integer"),
    };
    let opts = FamilyOptions {
        base,
        sufficiency: args.sufficiency,
        base_cap: args.base_cap,
    };
    let target = match spec.target() {
        Ok(t) => t,
        Err(e) => return emit_error(out, "family", inp, &e.to_string()),
    };
    let v = match primality::family_test(&spec, &opts) {
        Ok(v) => v,
        Err(e) => return emit_error(out, "family", inp, &e.to_string()),
    };
    let mut rec = OutputRecord::new("family", inp);
    rec.absorb(&v, &target);
    rec.verdict = v.status.as_str().into();
    rec.cert_entry("value", dec(&target));
    rec.elapsed_ms = elapsed(start);
    write_record(out, &rec)?;
    Ok(status_exit(v.status))
}

fn open_out<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(stdout),
    })
}

fn yes_no(b: bool) -> String {
    b.to_string()
}

fn opt_str<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn oracle_str(s: OracleStatus) -> String {
    match s {
        OracleStatus::Prime => "true",
        OracleStatus::Composite => "false",
        OracleStatus::Unknown => "unknown",
    }
    .into()
}

fn cmd_search(cmd: SearchCmd, stdout: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    match cmd {
        SearchCmd::Pseudoprimes {
            base,
            limit,
            strong,
            output,
        } => {
            let name = "search pseudoprimes";
            let inp = inputs([
                ("base", base.to_string()),
                ("limit", limit.to_string()),
                ("strong", strong.to_string()),
            ]);
            let hits = match parallel::pseudoprimes(base, limit, strong) {
                Ok(h) => h,
                Err(e) => return emit_error(stdout, name, inp, &format!("{e:#}")),
            };
            let header = ["Q", "base", "factorization", "strong_pass", "profile"];
            let mut w = open_out(&output.out, stdout)?;
            let mut t = Table::new(name, &header, &mut w, matches!(output.format, Format::Csv))?;
            for h in &hits {
                let q = BigUint::from(h.q);
                let profile: Vec<String> =
                    h.profile.signed_entries(&q).iter().map(|x| x.to_string()).collect();
                t.row(&[
                    h.q.to_string(),
                    h.base.to_string(),
                    factor_string(&h.factors),
                    yes_no(h.strong_pass),
                    profile.join(";"),
                ])?;
            }
            let mut s = OutputRecord::new(name, inp);
            s.verdict = "complete".into();
            s.cert_entry("count", dec(&hits.len()));
            s.elapsed_ms = elapsed(start);
            t.finish(&s)?;
            Ok(EXIT_PASS)
        }
        SearchCmd::SierpinskiCover {
            k,
            cover,
            period,
            output,
        } => {
            let name = "search sierpinski-cover";
            let cover_str = cover.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
            let inp = inputs([
                ("k", k.to_string()),
                ("cover", cover_str),
                ("period", period.to_string()),
            ]);
            let spec = CoverSpec {
                k,
                primes: cover,
                period,
            };
            let ok = match search::sierpinski_cover_verify(&spec) {
                Ok(ok) => ok,
                Err(e) => return emit_error(stdout, name, inp, &e.to_string()),
            };
            let mut w = open_out(&output.out, stdout)?;
            let mut s = OutputRecord::new(name, inp);
            s.verdict = if ok { "verified" } else { "not-covered" }.into();
            s.cert_entry("verified", Value::Bool(ok));
            s.elapsed_ms = elapsed(start);
            write_record(&mut w, &s)?;
            w.flush()?;
            Ok(if ok { EXIT_PASS } else { EXIT_COMPOSITE })
        }
        SearchCmd::SierpinskiScan {
            k,
            base,
            nmin,
            nmax,
            oracle_bound,
            output,
        } => {
            let name = "search sierpinski-scan";
            let inp = inputs([
                ("k", k.to_string()),
                ("base", base.to_string()),
                ("nmin", nmin.to_string()),
                ("nmax", nmax.to_string()),
            ]);
            let rows = match search::sierpinski_cheb_scan(k, base, nmin, nmax, Some(oracle_bound)) {
                Ok(r) => r,
                Err(e) => return emit_error(stdout, name, inp, &e.to_string()),
            };
            let header = [
                "n",
                "N",
                "square_root",
                "shared_factor",
                "t_holds",
                "u_holds",
                "t_square_holds",
                "passes",
                "N_is_prime",
            ];
            let mut w = open_out(&output.out, stdout)?;
            let mut t = Table::new(name, &header, &mut w, matches!(output.format, Format::Csv))?;
            let mut passing = 0u64;
            for r in &rows {
                passing += u64::from(r.passes());
                t.row(&[
                    r.n.to_string(),
                    r.value.to_string(),
                    opt_str(&r.square_root),
                    opt_str(&r.shared_factor),
                    yes_no(r.t_holds),
                    yes_no(r.u_holds),
                    yes_no(r.t_square_holds),
                    yes_no(r.passes()),
                    oracle_str(r.oracle),
                ])?;
            }
            let mut s = OutputRecord::new(name, inp);
            s.verdict = "complete".into();
            s.cert_entry("rows", dec(&rows.len()));
            s.cert_entry("passing", dec(&passing));
            s.elapsed_ms = elapsed(start);
            t.finish(&s)?;
            Ok(EXIT_PASS)
        }
        SearchCmd::PrimitiveDivisors {
            base,
            nmax,
            bound,
            output,
        } => {
            let name = "search primitive-divisors";
            let inp = inputs([("base", base.to_string()), ("nmax", nmax.to_string())]);
            let rows = match search::primitive_divisor_check(base, nmax, bound) {
                Ok(r) => r,
                Err(e) => return emit_error(stdout, name, inp, &e.to_string()),
            };
            let header = ["n", "U_n", "status", "primitive_divisor"];
            let mut w = open_out(&output.out, stdout)?;
            let mut t = Table::new(name, &header, &mut w, matches!(output.format, Format::Csv))?;
            let mut violations = 0u64;
            for r in &rows {
                let (status, value) = match &r.outcome {
                    PrimitiveDivisor::Found(p) => ("found", p.to_string()),
                    PrimitiveDivisor::Violation => {
                        violations += 1;
                        ("violation", String::new())
                    }
                    PrimitiveDivisor::Unresolved(c) => ("unresolved", c.to_string()),
                };
                t.row(&[r.n.to_string(), r.u_n.to_string(), status.into(), value])?;
            }
            let mut s = OutputRecord::new(name, inp);
            s.verdict = if violations == 0 { "complete" } else { "violations" }.into();
            s.cert_entry("violations", dec(&violations));
            s.elapsed_ms = elapsed(start);
            t.finish(&s)?;
            Ok(if violations == 0 { EXIT_PASS } else { EXIT_COMPOSITE })
        }
        SearchCmd::Dip {
            q,
            a,
            pmax,
            oracle_bound,
            output,
        } => {
            let name = "search dip";
            let inp = inputs([("q", q.to_string()), ("a", a.to_string()), ("pmax", pmax.to_string())]);
            let rows = match search::digit_dip_scan(q, a, pmax, Some(oracle_bound)) {
                Ok(r) => r,
                Err(e) => return emit_error(stdout, name, inp, &e.to_string()),
            };
            let header = ["p", "phi", "residue_digits", "phi_is_prime"];
            let mut w = open_out(&output.out, stdout)?;
            let mut t = Table::new(name, &header, &mut w, matches!(output.format, Format::Csv))?;
            for r in &rows {
                t.row(&[
                    r.p.to_string(),
                    r.phi.to_string(),
                    r.residue_digits.to_string(),
                    oracle_str(r.phi_status),
                ])?;
            }
            let mut s = OutputRecord::new(name, inp);
            s.verdict = "complete".into();
            s.cert_entry("rows", dec(&rows.len()));
            s.elapsed_ms = elapsed(start);
            t.finish(&s)?;
            Ok(EXIT_PASS)
        }
        SearchCmd::Nonsquarefree {
            limit,
            bases,
            output,
        } => {
            let name = "search nonsquarefree";
            let base_str = bases.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
            let inp = inputs([("limit", limit.to_string()), ("bases", base_str)]);
            let hits = parallel::nonsquarefree(limit, &bases)?;
            let header = ["Q", "factorization", "bases", "prime_square"];
            let mut w = open_out(&output.out, stdout)?;
            let mut t = Table::new(name, &header, &mut w, matches!(output.format, Format::Csv))?;
            for h in &hits {
                t.row(&[
                    h.q.to_string(),
                    factor_string(&h.factors),
                    h.bases.iter().map(i64::to_string).collect::<Vec<_>>().join(";"),
                    yes_no(h.is_prime_square()),
                ])?;
            }
            let others = hits.iter().filter(|h| !h.is_prime_square()).count();
            let mut s = OutputRecord::new(name, inp);
            s.verdict = "complete".into();
            s.cert_entry("count", dec(&hits.len()));
            s.cert_entry("not_prime_squares", dec(&others));
            s.elapsed_ms = elapsed(start);
            t.finish(&s)?;
            Ok(EXIT_PASS)
        }
    }
}

fn range_list(s: &str) -> Result<Vec<i64>> {
    let (lo, hi) = parse_range(s)?;
    Ok((lo..=hi).collect())
}

fn report_suite(out: &mut dyn Write, r: &verify::SuiteReport, start: Instant) -> Result<()> {
    for v in &r.violations {
        let mut inp = v.subject.clone();
        inp.insert("suite".into(), r.suite.into());
        let mut rec = OutputRecord::new("verify", inp);
        rec.verdict = "violation".into();
        rec.cert_entry("detail", Value::String(v.detail.clone()));
        write_record(out, &rec)?;
    }
    let mut rec = OutputRecord::new("verify", inputs([("suite", r.suite.to_string())]));
    rec.verdict = if r.passed() { "verified" } else { "violations" }.into();
    rec.cert_entry("checked", dec(&r.checked));
    rec.cert_entry("skipped", dec(&r.skipped));
    rec.cert_entry("violations", dec(&r.violations.len()));
    for (k, v) in &r.notes {
        rec.cert_entry(k, Value::String(v.clone()));
    }
    rec.elapsed_ms = elapsed(start);
    write_record(out, &rec)
}

fn cmd_verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let suites: Vec<Suite> = if args.suite == Suite::All {
        vec![
            Suite::Theorem1,
            Suite::Modsquare,
            Suite::ProthOracle,
            Suite::Profiles,
            Suite::WeakUniversal,
        ]
    } else {
        vec![args.suite]
    };
    let known = match &args.oeis_a175530 {
        Some(p) => Some(verify::read_integer_list(p)?),
        None => None,
    };
    let mut code = EXIT_PASS;
    for suite in suites {
        let start = Instant::now();
        let report = match suite {
            Suite::Theorem1 => verify::theorem1(
                &range_list(&args.qrange)?,
                args.pmax,
                &range_list(args.arange.as_deref().unwrap_or("2..6"))?,
            )?,
            Suite::Modsquare => verify::modsquare(
                args.qmax,
                &range_list(args.arange.as_deref().unwrap_or("2..20"))?,
            )?,
            Suite::ProthOracle => verify::proth_oracle(args.limit, args.base_cap)?,
            Suite::Profiles => verify::profiles()?,
            Suite::WeakUniversal => verify::weak_universal(args.weak_limit, known.as_deref())?,
            Suite::All => unreachable!("expanded above"),
        };
        report_suite(out, &report, start)?;
        if !report.passed() {
            code = EXIT_COMPOSITE;
        }
    }
    Ok(code)
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let code = run(std::env::args_os(), &mut lock);
    let _ = lock.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-6..6").unwrap(), (-6, 6));
        assert_eq!(parse_range("2..=20").unwrap(), (2, 20));
        assert_eq!(parse_range("5").unwrap(), (5, 5));
        assert!(parse_range("6..2").is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(parse_sign("-1").unwrap(), -1);
        assert_eq!(parse_sign("+1").unwrap(), 1);
        assert!(parse_sign("2").is_err());
    }

    #[test]
    fn worst_code_ordering() {
        assert_eq!(worst(EXIT_PASS, EXIT_INCONCLUSIVE), EXIT_INCONCLUSIVE);
        assert_eq!(worst(EXIT_INCONCLUSIVE, EXIT_COMPOSITE), EXIT_COMPOSITE);
        assert_eq!(worst(EXIT_COMPOSITE, EXIT_PASS), EXIT_COMPOSITE);
    }
}
