use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use swf_core::certify::{self, CheckReport};
use swf_core::rational::{parse_rational, to_f64};
use swf_core::rules::{self, Rule, Swf};
use swf_core::{AnonymousProfile, Ballot, Candidate, Error, FiniteElection, Ranking, WeakOrder};

/// Exact social welfare functions: evaluate rules, check axioms, and
/// classify Condorcet-cycle rules.
#[derive(Parser)]
#[command(name = "swf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rule on a profile or an election.
    Eval {
        /// maskin, maskin:X, borda, borda:W, tie, cc:GSTRING, a JSON file or inline JSON.
        #[arg(long)]
        rule: String,
        /// Profile JSON (file or inline).
        #[arg(long, conflicts_with = "election", required_unless_present = "election")]
        profile: Option<String>,
        /// Election as a JSON array of rankings, one per voter (file or inline).
        #[arg(long)]
        election: Option<String>,
        /// Add an approximate decimal column.
        #[arg(long)]
        decimal: bool,
    },
    /// Run axiom checks over every election with n voters from a ballot.
    Check {
        #[arg(long)]
        rule: String,
        /// full3, full4, cc, or a JSON file/array of rankings.
        #[arg(long)]
        ballot: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Axiom::All)]
        axiom: Axiom,
        /// Grid denominator for the intermediate-value check.
        #[arg(long, default_value_t = 4)]
        grid: u64,
    },
    /// Classify Condorcet-cycle rules on n voters.
    ClassifyCc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pareto: bool,
        #[arg(long)]
        pr: bool,
    },
    /// Enumerate functions on {0..l} consistent on every triple summing to m.
    VerifyNumberline {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        m: usize,
    },
    /// Search for a profile where Maskin's rule and positive Borda disagree.
    Disagree {
        #[arg(long)]
        n: u64,
        #[arg(long = "X", default_value = "2")]
        x: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axiom {
    Miia,
    Anon,
    Neutral,
    Pareto,
    Pr,
    Prm,
    Ivm,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Incompatible(_) | Error::Assembly(_) => 3,
        Error::Guard { .. } | Error::Precondition(_) => 4,
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Eval {
            rule,
            profile,
            election,
            decimal,
        } => eval(&parse_rule(&rule)?, profile, election, decimal),
        Command::Check {
            rule,
            ballot,
            n,
            axiom,
            grid,
        } => check(&parse_rule(&rule)?, &parse_ballot(&ballot)?, n, axiom, grid),
        Command::ClassifyCc { n, pareto, pr } => classify(n, pareto, pr),
        Command::VerifyNumberline { l, m } => numberline(l, m),
        Command::Disagree { n, x } => disagree(n, &x),
    }
}

/// Reads `arg` as a file when such a file exists, else as inline text.
fn file_or_inline(arg: &str) -> Result<String, Error> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['{', '[']) && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_rule(arg: &str) -> Result<Rule, Error> {
    let (name, param) = match arg.split_once(':') {
        Some((name, param)) => (name, Some(param)),
        None => (arg, None),
    };
    let as_parse = |e: Error| Error::Parse(e.to_string());
    match (name, param) {
        ("maskin", None) => Ok(Rule::maskin_default()),
        ("maskin", Some(x)) => Rule::maskin(parse_rational(x)?).map_err(as_parse),
        ("borda", None) => Ok(Rule::borda(parse_rational("1")?)),
        ("borda", Some(w)) => Ok(Rule::borda(parse_rational(w)?)),
        ("tie", None) => Ok(Rule::Tie),
        ("cc", Some(g)) => {
            let g: certify::GFunction = g.parse()?;
            Ok(certify::cc_rule_from_g(&g))
        }
        _ => Rule::from_json(&file_or_inline(arg)?),
    }
}

fn parse_ballot(arg: &str) -> Result<Ballot, Error> {
    match arg {
        "full3" => Ballot::full(3),
        "full4" => Ballot::full(4),
        "cc" => Ok(Ballot::condorcet()),
        _ => Ballot::from_json(&file_or_inline(arg)?),
    }
}

fn parse_election(arg: &str) -> Result<FiniteElection, Error> {
    let text = file_or_inline(arg)?;
    let votes: Vec<String> =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("election JSON: {e}")))?;
    let votes = votes
        .iter()
        .map(|v| v.parse::<Ranking>())
        .collect::<Result<Vec<_>, _>>()?;
    FiniteElection::new(votes).map_err(|e| Error::Parse(e.to_string()))
}

fn eval(
    rule: &Rule,
    profile: Option<String>,
    election: Option<String>,
    decimal: bool,
) -> Result<ExitCode, Error> {
    let (order, profile): (WeakOrder, Option<AnonymousProfile>) = match (profile, election) {
        (Some(p), _) => {
            let p = AnonymousProfile::from_json(&file_or_inline(&p)?)?;
            (rule.evaluate(&p)?, Some(p))
        }
        (None, Some(e)) => {
            let e = parse_election(&e)?;
            let order = rule.apply(&e)?;
            let p = match rule {
                Rule::WeightedBordaFinite { .. } => None,
                _ => Some(swf_core::profile::tau(&e)),
            };
            (order, p)
        }
        (None, None) => return Err(Error::Parse("eval needs --profile or --election".into())),
    };
    println!("rule: {rule}");
    println!("order: {order}");
    let header = if decimal {
        "pair\toutcome\tdifferential\tapprox (decimal, inexact)"
    } else {
        "pair\toutcome\tdifferential"
    };
    println!("{header}");
    for i in Candidate::all(order.k()) {
        for j in Candidate::all(order.k()).filter(|j| *j > i) {
            let outcome = order.rel(i, j)?;
            let score = match &profile {
                Some(p) => rule.relative_score(&p.project(i, j)?)?,
                None => None,
            };
            let mut line = format!("{i},{j}\t{outcome}");
            match score {
                Some(s) => {
                    line.push_str(&format!("\t{s}"));
                    if decimal {
                        line.push_str(&format!("\t~{:.9}", to_f64(&s)));
                    }
                }
                None => line.push_str("\t-"),
            }
            println!("{line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn check(rule: &Rule, ballot: &Ballot, n: usize, axiom: Axiom, grid: u64) -> Result<ExitCode, Error> {
    let selected: Vec<Axiom> = match axiom {
        Axiom::All => vec![
            Axiom::Miia,
            Axiom::Anon,
            Axiom::Neutral,
            Axiom::Pareto,
            Axiom::Pr,
            Axiom::Prm,
            Axiom::Ivm,
        ],
        one => vec![one],
    };
    let f: &dyn Swf = rule;
    let mut reports: Vec<CheckReport> = Vec::new();
    for a in selected {
        let report = match a {
            Axiom::Miia => certify::check_miia(f, ballot, n),
            Axiom::Anon => certify::check_anonymity(f, ballot, n),
            Axiom::Neutral => certify::check_neutrality(f, ballot, n),
            Axiom::Pareto => certify::check_pareto(f, ballot, n),
            Axiom::Pr => certify::check_pr_raw(f, ballot, n),
            Axiom::Prm => certify::check_prm_exhaustive(f, ballot, n),
            Axiom::Ivm => match certify::check_ivm(rule, grid) {
                Err(Error::Incompatible(msg)) if axiom == Axiom::All => {
                    eprintln!("skipping ivm: {msg}");
                    continue;
                }
                other => other,
            },
            Axiom::All => unreachable!("expanded above"),
        }?;
        println!("{}", report.to_json());
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn classify(n: usize, pareto: bool, pr: bool) -> Result<ExitCode, Error> {
    let classes = certify::classify_cc(n, pareto, pr)?;
    println!("g\tkappa\trule");
    for c in &classes {
        println!("{}\t{}\t{}", c.g, signed(c.kappa), c.label);
    }
    Ok(ExitCode::SUCCESS)
}

fn numberline(l: usize, m: usize) -> Result<ExitCode, Error> {
    let solutions = certify::numberline_solutions(l, m)?;
    println!("l={l} m={m} solutions={}", solutions.len());
    for s in &solutions {
        match s.kappa {
            Some(k) => println!("{}\tkappa={}", s.g, signed(k)),
            None => println!("{}\tnot threshold form", s.g),
        }
    }
    let pass = solutions.iter().all(|s| s.kappa.is_some());
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn disagree(n: u64, x: &str) -> Result<ExitCode, Error> {
    let x = parse_rational(x)?;
    Rule::maskin(x.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    match rules::disagreement_search(n, &x)? {
        None => println!("none"),
        Some(w) => {
            let out = json!({
                "n": n,
                "X": x.to_string(),
                "alpha": w.alpha,
                "maskin": w.maskin.to_string(),
                "borda": w.borda.to_string(),
                "profile": w.realize().normalize().to_json(),
            });
            println!("{out}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn signed(k: i8) -> String {
    if k > 0 {
        format!("+{k}")
    } else {
        k.to_string()
    }
}
