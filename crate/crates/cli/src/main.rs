//! `fgtop`: build generic chains, run the verification suites, answer
//! basis queries and export certificates.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage, IO or format
//! error, 3 element not yet separated.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fgtop_core::filter::{ChainState, FilterError, Outcome, Preset, Schedule, StepRecord};
use fgtop_core::nbhd::{Budget, CanonicalRep, MembershipAnswer};
use fgtop_core::poset::{witness, Cert, Condition, ConjCert, CycCert, DenseDescriptor, Mode};
use fgtop_core::suites::{run_all, run_cancellation, SuiteConfig, VerifyReport};
use fgtop_core::word::Word;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fgtop", version, about = "Group topologies on free groups, built and checked symbolically")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct BudgetArgs {
    /// longest explicit leaf word
    #[arg(long, default_value_t = Budget::default().leaf_len)]
    budget_leaf: usize,
    /// largest exponent into cyclic bases
    #[arg(long, default_value_t = Budget::default().exp)]
    budget_exp: u32,
    /// search node cap
    #[arg(long, default_value_t = Budget::default().nodes)]
    budget_nodes: usize,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget {
            leaf_len: self.budget_leaf,
            exp: self.budget_exp,
            nodes: self.budget_nodes,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build (or extend) a chain and write the state file
    Build {
        #[arg(long, default_value = "full")]
        preset: Preset,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// paper | test:k
        #[arg(long, default_value = "test:2")]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        /// extend this state instead of starting from p0
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long, default_value = "chain.json")]
        out: PathBuf,
        /// per-step extension reports (JSON)
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every verification suite
    Verify {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// leave one power of g0 unreduced in the η suite
        #[arg(long)]
        inject_bug: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the collapse, same-sign and η suites
    VerifyCancellation {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// fixed number of fresh letters (default: cycle 2..=6)
        #[arg(long)]
        k: Option<u64>,
        /// largest number of g0 factors
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        inject_bug: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Ask the basis of a built chain
    Query {
        #[arg(long, default_value = "chain.json")]
        state: PathBuf,
        /// write the state back when a query had to step the chain
        #[arg(long)]
        save: bool,
        #[command(subcommand)]
        query: Query,
    },
    /// Replay the basis claims on the last condition
    CheckAxioms {
        #[arg(long, default_value = "chain.json")]
        state: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Write stored certificates and step reports
    Export {
        #[arg(long, default_value = "chain.json")]
        state: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Meet one dense set from a state (or from p0)
    Witness {
        /// e.g. "E(1, {a, b}, a, b)"
        descriptor: DenseDescriptor,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long, default_value = "test:2")]
        mode: Mode,
        #[command(flatten)]
        budget: BudgetArgs,
        /// write the extended state here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Query {
    /// Is the word in U_n?
    Member {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        word: Word,
    },
    /// First stage separating g from the identity
    Separate {
        #[arg(long)]
        g: Word,
    },
    /// f with f·g·f⁻¹ ∈ U_n·h
    Conj {
        #[arg(long)]
        g: Word,
        #[arg(long, default_value = "e")]
        h: Word,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Factorization of g into elements with cyclic subgroups inside U_n
    Assgp {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        g: Word,
    },
}

enum Fail {
    Verify(String),
    Usage(String),
    NotSeparated(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verify(_) => 1,
            Fail::Usage(_) => 2,
            Fail::NotSeparated(_) => 3,
        }
    }
}

impl From<FilterError> for Fail {
    fn from(e: FilterError) -> Fail {
        match e {
            FilterError::NotYetSeparated(_) => Fail::NotSeparated(e.to_string()),
            FilterError::WitnessFailed(_) | FilterError::Poset(_) => Fail::Verify(e.to_string()),
            FilterError::TrivialG | FilterError::Format(_) => Fail::Usage(e.to_string()),
        }
    }
}

type Res = Result<(), Fail>;

/// `println!` that exits quietly once stdout is closed.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

fn read_state(path: &Path) -> Result<ChainState, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    ChainState::deserialize(&text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Res {
    fs::write(path, text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Res {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    write_file(path, &s)
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

/// Product of the flattened derivation, by multiplication only.
fn rep_recomputes(rep: &CanonicalRep) -> bool {
    Word::product(rep.flatten().iter()) == rep.word
}

fn conj_recomputes(c: &ConjCert) -> bool {
    c.conjugator.conjugate(&c.g).mul(&c.h) == c.word && rep_recomputes(&c.rep) && c.rep.word == c.word
}

fn cyc_recomputes(c: &CycCert) -> bool {
    Word::product(c.factors.iter().map(|f| &f.word)) == c.target
        && c.factors
            .iter()
            .all(|f| f.generator.pow(f.exponent) == f.word && rep_recomputes(&f.rep))
}

fn record_line(r: &StepRecord) -> String {
    let outcome = match &r.outcome {
        Outcome::Met => "met".to_string(),
        Outcome::AlreadyMet => "already met".to_string(),
        Outcome::Failed { reason, retry } => {
            format!("FAILED{} ({reason})", if *retry { ", retry queued" } else { "" })
        }
    };
    let attempt = if r.attempt > 0 { format!(" attempt {}", r.attempt + 1) } else { String::new() };
    format!("{:>4}  {}{attempt}  {outcome}  {}", r.stage, r.descriptor, r.report.summary())
}

#[allow(clippy::too_many_arguments)]
fn cmd_build(
    preset: Preset,
    steps: usize,
    mode: Mode,
    seed: u64,
    budget: Budget,
    from: Option<PathBuf>,
    out: &Path,
    report: Option<PathBuf>,
) -> Res {
    let mut st = match from {
        Some(p) => read_state(&p)?,
        None => ChainState::new(Schedule::new(preset, seed), mode, budget),
    };
    let first = st.records.len();
    for _ in 0..steps {
        let r = st.step();
        outln!("{}", record_line(r));
    }
    write_file(out, &st.serialize())?;
    let fresh = &st.records[first..];
    if let Some(p) = report {
        write_json(&p, &fresh)?;
    }
    let last = st.last();
    outln!(
        "{} conditions; last: X = {{{}}}, n = {}; state written to {}",
        st.chain.len(),
        last.x,
        last.n,
        out.display()
    );
    let bad = fresh.iter().filter(|r| !r.report.passed()).count();
    if bad > 0 {
        return Err(Fail::Verify(format!("{bad} extension report(s) failed")));
    }
    Ok(())
}

fn finish_verify(rep: &VerifyReport, report: Option<PathBuf>) -> Res {
    for s in &rep.suites {
        outln!("{}", s.line());
        for c in &s.counterexamples {
            outln!("    trial {}: {}", c.trial, c.detail);
        }
    }
    if let Some(p) = report {
        write_json(&p, rep)?;
    }
    if rep.vacuous() {
        outln!("no case was checked: vacuous pass");
    }
    if rep.ok() {
        Ok(())
    } else {
        Err(Fail::Verify("counterexamples found".into()))
    }
}

fn answer_json(a: &MembershipAnswer) -> Value {
    match a {
        MembershipAnswer::Yes(r) => json!({ "verdict": "yes", "certificate": r, "recomputes": rep_recomputes(r) }),
        MembershipAnswer::No(reason) => json!({ "verdict": "no", "reason": reason }),
        MembershipAnswer::Unknown => json!({ "verdict": "unknown" }),
    }
}

fn cmd_query(path: &Path, save: bool, q: Query) -> Res {
    let mut st = read_state(path)?;
    let before = st.chain.len();
    let out = match q {
        Query::Member { n, word } => {
            let a = st.basis_member(n, &word);
            if let MembershipAnswer::Yes(r) = &a.answer {
                if !rep_recomputes(r) {
                    return Err(Fail::Verify(format!("certificate for {word} does not recompute")));
                }
            }
            let mut v = answer_json(&a.answer);
            v["word"] = json!(word);
            v["n"] = json!(n);
            v["stage"] = json!(a.stage);
            v
        }
        Query::Separate { g } => {
            let s = st.separation_index(&g)?;
            json!({
                "g": g,
                "stage": s.stage,
                "n": s.n,
                "reason": s.reason,
                "conditional_on_reports": !s.reports_pass,
                "reports_pass": s.reports_pass,
            })
        }
        Query::Conj { g, h, n } => {
            let a = st.conj_density_witness(&g, &h, n)?;
            if !conj_recomputes(&a.cert) || !rep_recomputes(&a.rep) {
                return Err(Fail::Verify("conjugacy certificate does not recompute".into()));
            }
            json!({ "g": g, "h": h, "n": n, "stage": a.stage, "f": a.f, "certificate": a.cert, "level_n": a.rep })
        }
        Query::Assgp { n, g } => {
            let a = st.assgp_certificate(n, &g)?;
            if !cyc_recomputes(&a.cert) {
                return Err(Fail::Verify("factorization does not recompute".into()));
            }
            json!({ "g": g, "n": n, "stage": a.stage, "certificate": a.cert })
        }
    };
    print_json(&out);
    if st.chain.len() != before {
        if save {
            write_file(path, &st.serialize())?;
            eprintln!("chain stepped to stage {}; state saved", st.stage());
        } else {
            eprintln!("chain stepped to stage {} in memory; use --save to keep it", st.stage());
        }
    }
    Ok(())
}

fn cmd_check_axioms(path: &Path, budget: Budget, report: Option<PathBuf>) -> Res {
    let st = read_state(path)?;
    let r = st.check_group_axioms(budget);
    for claim in ["product", "symmetry", "conjugation"] {
        let all: Vec<_> = r.checks.iter().filter(|c| c.claim == claim).collect();
        let bad = all.iter().filter(|c| !c.passed).count();
        outln!(
            "{} {claim}: {} checked, {bad} failed{}",
            if bad == 0 { "PASS" } else { "FAIL" },
            all.len(),
            if all.is_empty() { " (vacuous)" } else { "" }
        );
        for c in all.iter().filter(|c| !c.passed) {
            outln!("    level {}: {}: {}", c.level, c.word, c.note);
        }
    }
    if let Some(p) = report {
        write_json(&p, &r)?;
    }
    if r.passed() {
        Ok(())
    } else {
        Err(Fail::Verify("group-axiom check failed".into()))
    }
}

fn cmd_export(path: &Path, out: Option<PathBuf>) -> Res {
    let st = read_state(path)?;
    for sc in &st.certs {
        let ok = match &sc.cert {
            Cert::Conj(c) => conj_recomputes(c),
            Cert::Cyc(c) => cyc_recomputes(c),
            Cert::Separation { .. } => true,
        };
        if !ok {
            return Err(Fail::Verify(format!("certificate for {} does not recompute", sc.descriptor)));
        }
    }
    let v = json!({
        "format": "fgtop-certs",
        "version": 1,
        "certs": st.certs,
        "records": st.records,
    });
    match out {
        Some(p) => write_json(&p, &v)?,
        None => print_json(&v),
    }
    Ok(())
}

fn cmd_witness(d: DenseDescriptor, state: Option<PathBuf>, mode: Mode, budget: Budget, out: Option<PathBuf>) -> Res {
    match state {
        Some(p) => {
            let mut st = read_state(&p)?;
            let r = st.step_with(d, "witness command").clone();
            outln!("{}", record_line(&r));
            let certs: Vec<_> = st.certs.iter().filter(|c| c.stage == r.stage).collect();
            print_json(&json!({ "record": r, "certs": certs }));
            if let Some(o) = out {
                write_file(&o, &st.serialize())?;
            }
            match r.outcome {
                Outcome::Failed { reason, .. } => Err(Fail::Verify(reason)),
                _ if !r.report.passed() => Err(Fail::Verify(r.report.summary())),
                _ => Ok(()),
            }
        }
        None => {
            if out.is_some() {
                return Err(Fail::Usage("--out needs --state".into()));
            }
            let p = Condition::initial();
            let w = witness(&p, &d, mode, budget).map_err(|e| Fail::Verify(e.to_string()))?;
            let last = &w.condition;
            print_json(&json!({
                "descriptor": d,
                "unchanged": w.unchanged,
                "alphabet": last.x.to_string(),
                "depth": last.n,
                "report": w.report,
                "thresholds": w.thresholds,
                "certs": w.certs,
            }));
            if w.report.passed() {
                Ok(())
            } else {
                Err(Fail::Verify(w.report.summary()))
            }
        }
    }
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Build {
            preset,
            steps,
            mode,
            seed,
            budget,
            from,
            out,
            report,
        } => cmd_build(preset, steps, mode, seed, budget.budget(), from, &out, report),
        Cmd::Verify {
            trials,
            seed,
            inject_bug,
            budget,
            report,
        } => {
            let cfg = SuiteConfig {
                seed,
                trials,
                inject_bug,
                budget: budget.budget(),
                ..SuiteConfig::default()
            };
            finish_verify(&run_all(&cfg), report)
        }
        Cmd::VerifyCancellation {
            trials,
            seed,
            k,
            n_max,
            inject_bug,
            report,
        } => {
            if k.is_some_and(|k| k < 2) {
                return Err(Fail::Usage("k must be at least 2".into()));
            }
            let cfg = SuiteConfig {
                seed,
                trials,
                inject_bug,
                k,
                n_max,
                ..SuiteConfig::default()
            };
            finish_verify(&run_cancellation(&cfg), report)
        }
        Cmd::Query { state, save, query } => cmd_query(&state, save, query),
        Cmd::CheckAxioms { state, budget, report } => cmd_check_axioms(&state, budget.budget(), report),
        Cmd::Export { state, out } => cmd_export(&state, out),
        Cmd::Witness {
            descriptor,
            state,
            mode,
            budget,
            out,
        } => cmd_witness(descriptor, state, mode, budget.budget(), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Fail::Verify(m) | Fail::Usage(m) | Fail::NotSeparated(m) => m,
            };
            eprintln!("fgtop: {msg}");
            ExitCode::from(f.code())
        }
    }
}
