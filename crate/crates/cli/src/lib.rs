//! The `mullin` command line.
//!
//! Exit codes: 0 for success (proven, verified), 2 for a legitimate negative
//! answer (undecided, not found), 1 for errors and rejected certificates.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use mullin_core::certificate::{CertificateDocument, CertificateKind};
use mullin_core::charsearch::{burgess_exponent, sign_search, theorem1_exponent, QuadraticCharacter};
use mullin_core::cvp_sieve::{prove_omitted, sweep, verify_certificate, CvpOutcome, SweepReport};
use mullin_core::density_lab::{density_csv, density_segments, euler_product, DensityReport, PowerResidueQuery};
use mullin_core::gen_sieve::{prove_omitted_gen, verify_gen_certificate, GenOutcome};
use mullin_core::ntheory::{FactorBudget, FactorMap, Natural, PrimalityPolicy};
use mullin_core::sequences::{
    generate, greedy_sets, pomerance, sylvester, SequenceKind, SequenceState,
};
use mullin_core::terms::{content_hash, parse_terms, KnownTerms, TermsFormat};
use mullin_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mullin", version, about = "Euclid-Mullin sequences and omission certificates")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the randomized primality and factoring routines.
    #[arg(long, global = true, env = "MULLIN_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate terms of a sequence.
    Compute {
        #[arg(long)]
        kind: SequenceKind,
        #[arg(long)]
        count: usize,
        /// Brent rho iterations per attempt.
        #[arg(long)]
        budget_rho: Option<u64>,
        /// Trial division bound.
        #[arg(long)]
        budget_trial: Option<u64>,
    },
    /// Prove a prime omitted with the GF(2) character method.
    Sieve {
        #[arg(long)]
        target: Natural,
        #[arg(long)]
        terms: PathBuf,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Prove a prime omitted with discrete-log constraints modulo P_i.
    GenSieve {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        target: Natural,
        #[arg(long)]
        terms: PathBuf,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Run the GF(2) method on every prime up to a limit.
    Sweep {
        #[arg(long)]
        limit: Natural,
        #[arg(long)]
        terms: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a certificate from scratch.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        terms: PathBuf,
    },
    /// Find a squarefree integer with prescribed character signs.
    Charsearch {
        /// Comma-separated fundamental discriminants.
        #[arg(long, allow_hyphen_values = true)]
        discs: String,
        /// Comma-separated signs (+1 or -1), one per discriminant.
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
        /// Largest prime tried as a subset witness.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// Sample the density of primes modulo which q is an m-th power.
    Density {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 10)]
        segments: u64,
        /// Write the per-segment CSV report here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the numerical constants.
    Constants,
    /// Convert an OEIS b-file into a validated JSON terms file.
    Ingest {
        #[arg(long)]
        bfile: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = Result<i32, Failure>;

struct Ctx<'a> {
    json: bool,
    budget: FactorBudget,
    policy: PrimalityPolicy,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str, value: Value) -> Result<(), Failure> {
        let rendered = if self.json {
            let mut s = serde_json::to_string_pretty(&value).expect("json value");
            s.push('\n');
            s
        } else {
            text.to_string()
        };
        self.out.write_all(rendered.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
    }

    fn terms(&self, path: &Path) -> Result<KnownTerms, Failure> {
        Ok(parse_terms(path, None, &self.policy)?)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

/// Parses `args` (including the program name) and runs the command, writing
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        budget: FactorBudget::with_seed(cli.seed),
        policy: PrimalityPolicy::with_seed(cli.seed),
        out,
    };
    let result = dispatch(cli.command, &mut ctx);
    match result {
        Ok(code) => code,
        Err(failure) => {
            let message = match failure {
                Failure::Core(e) => format!("error: {e}\n"),
                Failure::Io(e) => format!("error: {e}\n"),
                Failure::Rejected(reasons) => format!("rejected: {reasons}\n"),
            };
            let _ = err.write_all(message.as_bytes());
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> CmdResult {
    match command {
        Command::Compute { kind, count, budget_rho, budget_trial } => {
            let base = ctx.budget;
            ctx.budget = FactorBudget::new(
                budget_trial.unwrap_or(base.trial_bound),
                budget_rho.unwrap_or(base.rho_iterations),
                base.rho_restarts,
                base.seed,
            )?;
            compute(kind, count, ctx)
        }
        Command::Sieve { target, terms, cert_out } => sieve(&target, &terms, cert_out.as_deref(), ctx),
        Command::GenSieve { i, target, terms, cert_out } => gen_sieve(i, &target, &terms, cert_out.as_deref(), ctx),
        Command::Sweep { limit, terms, report } => sweep_cmd(&limit, &terms, report.as_deref(), ctx),
        Command::Verify { cert, terms } => verify(&cert, &terms, ctx),
        Command::Charsearch { discs, signs, cap } => charsearch(&discs, &signs, cap, ctx),
        Command::Density { q, m, limit, segments, csv } => density(q, m, limit, segments, csv.as_deref(), ctx),
        Command::Constants => constants(ctx),
        Command::Ingest { bfile, out } => ingest(&bfile, &out, ctx),
    }
}

fn factors_json(f: &FactorMap) -> Value {
    Value::Array(f.iter().map(|(p, e)| json!([p.to_string(), e])).collect())
}

fn relations_json(state: &SequenceState) -> Value {
    Value::Array(
        state
            .relations()
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "value": r.value.to_string(),
                    "factors": factors_json(&r.factors),
                    "cofactor": r.cofactor.to_string(),
                })
            })
            .collect(),
    )
}

fn lines<T: ToString>(items: &[T]) -> String {
    items.iter().map(|t| format!("{}\n", t.to_string())).collect()
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn compute(kind: SequenceKind, count: usize, ctx: &mut Ctx<'_>) -> CmdResult {
    match kind {
        SequenceKind::First | SequenceKind::Second => {
            let state = generate(kind, count, &ctx.budget, &ctx.policy)?;
            let value = json!({
                "kind": kind.name(),
                "terms": strings(state.terms()),
                "relations": relations_json(&state),
            });
            ctx.emit(&lines(state.terms()), value)?;
        }
        SequenceKind::Sylvester => {
            if count == 0 {
                return Err(Error::Domain("count must be positive".into()).into());
            }
            let terms = sylvester(count);
            ctx.emit(&lines(&terms), json!({ "kind": kind.name(), "terms": strings(&terms) }))?;
        }
        SequenceKind::Greedy => {
            let sets = greedy_sets(count, &ctx.budget, &ctx.policy)?;
            let text: String = sets
                .iter()
                .enumerate()
                .map(|(n, s)| format!("{n}:{}\n", s.iter().map(|p| format!(" {p}")).collect::<String>()))
                .collect();
            let value: Vec<Vec<String>> = sets.iter().map(|s| s.iter().map(ToString::to_string).collect()).collect();
            ctx.emit(&text, json!({ "kind": kind.name(), "sets": value }))?;
        }
        SequenceKind::Pomerance => {
            let terms = pomerance(count)?;
            ctx.emit(&lines(&terms), json!({ "kind": kind.name(), "terms": strings(&terms) }))?;
        }
    }
    Ok(EXIT_OK)
}

fn sieve(target: &Natural, terms: &Path, cert_out: Option<&Path>, ctx: &mut Ctx<'_>) -> CmdResult {
    let known = ctx.terms(terms)?;
    match prove_omitted(target, &known, &ctx.policy)? {
        CvpOutcome::Omitted(cert) => {
            let doc = CertificateDocument::from(&cert);
            if let Some(path) = cert_out {
                write_file(path, &doc.to_json())?;
            }
            let d = &cert.discriminant;
            let text = format!(
                "{target} omitted\ndiscriminant {} (support: {})\ncandidates: {}\n",
                d.value,
                if d.support.is_empty() { "empty".to_string() } else { strings(&d.support).join(" ") },
                strings(&cert.candidates).join(" "),
            );
            let value: Value = serde_json::from_str(&doc.to_json()).expect("own output");
            ctx.emit(&text, value)?;
            Ok(EXIT_OK)
        }
        CvpOutcome::Undecided { rank, witness } => {
            let text = format!(
                "{target} undecided (rank {rank}); inconsistent candidates: {}\n",
                strings(&witness).join(" ")
            );
            let value = json!({
                "target": target.to_string(),
                "status": "undecided",
                "rank": rank,
                "witness": strings(&witness),
            });
            ctx.emit(&text, value)?;
            Ok(EXIT_UNDECIDED)
        }
    }
}

fn gen_sieve(i: usize, target: &Natural, terms: &Path, cert_out: Option<&Path>, ctx: &mut Ctx<'_>) -> CmdResult {
    let known = ctx.terms(terms)?;
    match prove_omitted_gen(i, target, &known, &ctx.budget, &ctx.policy)? {
        GenOutcome::Omitted(cert) => {
            let doc = CertificateDocument::from(&cert);
            if let Some(path) = cert_out {
                write_file(path, &doc.to_json())?;
            }
            let combination: Vec<String> =
                cert.js.iter().zip(&cert.coefficients).map(|(j, c)| format!("{c}*v_{i},{j}")).collect();
            let text = format!(
                "{target} omitted (mod P_{i} = {})\nb_{i} = {}\n",
                cert.known_terms[i - 1],
                if combination.is_empty() { "0".to_string() } else { combination.join(" + ") },
            );
            let value: Value = serde_json::from_str(&doc.to_json()).expect("own output");
            ctx.emit(&text, value)?;
            Ok(EXIT_OK)
        }
        GenOutcome::Undecided { rank, skipped } => {
            let text = format!("{target} undecided mod P_{i} (rank {rank}, skipped {skipped:?})\n");
            let value = json!({
                "target": target.to_string(),
                "i": i,
                "status": "undecided",
                "rank": rank,
                "skipped": skipped,
            });
            ctx.emit(&text, value)?;
            Ok(EXIT_UNDECIDED)
        }
    }
}

fn sweep_json(report: &SweepReport) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| match &e.outcome {
            CvpOutcome::Omitted(cert) => json!({
                "target": e.target.to_string(),
                "status": "omitted",
                "discriminant": cert.discriminant.value.to_string(),
                "support": strings(&cert.discriminant.support),
            }),
            CvpOutcome::Undecided { rank, witness } => json!({
                "target": e.target.to_string(),
                "status": "undecided",
                "rank": rank,
                "witness": strings(witness),
            }),
        })
        .collect();
    json!({ "limit": report.limit.to_string(), "terms": report.provenance, "entries": entries })
}

fn sweep_cmd(limit: &Natural, terms: &Path, report_path: Option<&Path>, ctx: &mut Ctx<'_>) -> CmdResult {
    let known = ctx.terms(terms)?;
    let report = sweep(limit, &known, &ctx.policy)?;
    let value = sweep_json(&report);
    if let Some(path) = report_path {
        let body = if ctx.json {
            serde_json::to_string_pretty(&value).expect("json value") + "\n"
        } else {
            report.to_text()
        };
        write_file(path, &body)?;
    }
    ctx.emit(&report.to_text(), value)?;
    Ok(if report.undecided().is_empty() { EXIT_OK } else { EXIT_UNDECIDED })
}

fn verify(cert: &Path, terms: &Path, ctx: &mut Ctx<'_>) -> CmdResult {
    let known = ctx.terms(terms)?;
    let doc = CertificateDocument::parse(&read_file(cert)?)?;
    let verdict = match doc.kind {
        CertificateKind::CvpF2 => verify_certificate(&doc.to_cvp()?, &known, &ctx.policy),
        CertificateKind::GenModp => verify_gen_certificate(&doc.to_gen()?, &known, &ctx.budget, &ctx.policy),
    };
    let codes: Vec<&str> = verdict.reasons().iter().map(|r| r.code()).collect();
    let value = json!({
        "kind": doc.kind.to_string(),
        "target": doc.target,
        "accepted": verdict.accepted(),
        "reasons": codes,
    });
    ctx.emit(&format!("{} {}: {verdict}\n", doc.kind, doc.target), value)?;
    if verdict.accepted() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::Rejected(codes.join(" ")))
    }
}

fn parse_list<T: std::str::FromStr>(csv: &str, what: &str) -> Result<Vec<T>, Failure> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.trim_start_matches('+').parse().map_err(|_| Failure::Core(Error::Domain(format!("bad {what} {s:?}")))))
        .collect()
}

fn charsearch(discs: &str, signs: &str, cap: u64, ctx: &mut Ctx<'_>) -> CmdResult {
    let discs: Vec<i64> = parse_list(discs, "discriminant")?;
    let signs: Vec<i8> = parse_list(signs, "sign")?;
    let characters = discs.iter().map(|&d| QuadraticCharacter::primitive(d)).collect::<Result<Vec<_>, _>>()?;
    match sign_search(&characters, &signs, cap) {
        Ok(found) => {
            let text = format!(
                "n = {} (primes: {})\n",
                found.n,
                if found.primes.is_empty() { "none".to_string() } else { strings(&found.primes).join(" ") }
            );
            let witnesses: Vec<Value> = found
                .basis
                .iter()
                .map(|w| json!({ "subset": w.subset, "n_s": w.n_s.to_string(), "w_s": w.w_s.to_bools() }))
                .collect();
            let value = json!({ "n": found.n.to_string(), "primes": strings(&found.primes), "basis": witnesses });
            ctx.emit(&text, value)?;
            Ok(EXIT_OK)
        }
        Err(Error::NotFound(cap)) => {
            ctx.emit(&format!("not found below {cap}\n"), json!({ "status": "not-found", "cap": cap }))?;
            Ok(EXIT_UNDECIDED)
        }
        Err(e) => Err(e.into()),
    }
}

fn density_json(r: &DensityReport) -> Value {
    serde_json::to_value(r).expect("plain struct")
}

fn density(q: i64, m: u64, limit: u64, segments: u64, csv: Option<&Path>, ctx: &mut Ctx<'_>) -> CmdResult {
    let query = PowerResidueQuery::new(q, m, limit)?;
    let reports = density_segments(&query, segments)?;
    if let Some(path) = csv {
        write_file(path, &density_csv(&reports))?;
    }
    let total = reports.last().expect("cumulative report");
    let text = format!(
        "q = {q}, m = {m}, primes <= {limit}: {} of {} hits, empirical {:.6}, predicted {:.6}, deviation {:.6}\n",
        total.hits, total.sample_count, total.empirical, total.predicted, total.deviation
    );
    let value = json!({
        "query": { "q": q, "m": m, "limit": limit },
        "total": density_json(total),
        "segments": reports[..reports.len() - 1].iter().map(density_json).collect::<Vec<_>>(),
    });
    ctx.emit(&text, value)?;
    Ok(EXIT_OK)
}

fn constants(ctx: &mut Ctx<'_>) -> CmdResult {
    let euler = euler_product(KnownTerms::table1().terms())?;
    let text = format!(
        "theorem1_exponent 1/(4*sqrt(e)-1) = {:.10}\nburgess_exponent 1/(4*sqrt(e)) = {:.10}\neuler_product table-1 = {:.6}\n",
        theorem1_exponent(),
        burgess_exponent(),
        euler
    );
    let value = json!({
        "theorem1_exponent": theorem1_exponent(),
        "burgess_exponent": burgess_exponent(),
        "euler_product_table1": euler,
    });
    ctx.emit(&text, value)?;
    Ok(EXIT_OK)
}

fn ingest(bfile: &Path, out: &Path, ctx: &mut Ctx<'_>) -> CmdResult {
    let known = parse_terms(bfile, Some(TermsFormat::BFile), &ctx.policy)?;
    let json_doc = known.to_json();
    write_file(out, &json_doc)?;
    let text = format!(
        "ingested {} terms ({}) into {} [sha256:{}]\n",
        known.len(),
        known.provenance(),
        out.display(),
        content_hash(json_doc.as_bytes())
    );
    let value = json!({ "terms": known.len(), "provenance": known.provenance(), "out": out.display().to_string() });
    ctx.emit(&text, value)?;
    Ok(EXIT_OK)
}
