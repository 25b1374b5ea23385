//! `superpoint`: spaces, forms, field theories, concordance and the action classifier.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
//! input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use superpoint::classify::{
    exhaustive_search, match_family, search_fp, verify_action, DenseCandidate, Monoid, SearchReport,
};
use superpoint::coaction::{canonical_coaction, coaction_to_cdga, verify_coaction, CdgaStructure};
use superpoint::fieldtheory::{degree_twist_membership, Candidate, FieldTheoryQuery, Geometry};
use superpoint::forms::{mapping_space_ring, SullivanForm};
use superpoint::homology::{
    concordance_check, form_cohomology, integration_cochain, is_exact, CochainComplex, Notion,
};
use superpoint::io;
use superpoint::simplicial::{standard, SimplicialSet};
use superpoint::{Coefficient, Rational};

const DEFAULT_MAX_CELLS: usize = 10_000;

#[derive(Parser)]
#[command(name = "superpoint", version, about = "Exact 0|1-dimensional field theories on simplicial sets")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load, validate or generate simplicial sets.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Check or generate forms.
    #[command(subcommand)]
    Form(FormCommand),
    /// Field-theory membership.
    #[command(subcommand)]
    Qft(QftCommand),
    /// Simplicial cohomology, optionally against bounded-degree forms.
    Cohomology {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        degree: usize,
        /// Also compare with closed forms of this polynomial degree.
        #[arg(long)]
        polydeg_bound: Option<usize>,
    },
    /// Decide concordance of two closed forms.
    Concordance {
        /// One of cohomologous, cochain, algebraic, simplicial; all four when omitted.
        #[arg(long)]
        notion: Option<Notion>,
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        form0: PathBuf,
        #[arg(long)]
        form1: PathBuf,
        #[arg(long, default_value_t = 2)]
        polydeg_bound: usize,
    },
    /// Coaction axioms.
    #[command(subcommand)]
    Coaction(CoactionCommand),
    /// Actions of the superpoint monoids on the 1|1 affine space.
    #[command(subcommand)]
    Classify(ClassifyCommand),
    /// Worked examples.
    Demo {
        /// s1-fundamental-class or torus-classes.
        name: String,
    },
}

#[derive(Args)]
struct SpaceArg {
    /// A space JSON file, or a standard name such as torus, sphere2, simplex3, boundary2.
    #[arg(long)]
    space: String,
}

#[derive(Subcommand)]
enum SpaceCommand {
    Validate {
        #[command(flatten)]
        space: SpaceArg,
    },
    /// Print a standard space as JSON.
    Standard { name: String },
}

#[derive(Subcommand)]
enum FormCommand {
    Check {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        form: PathBuf,
    },
    /// A seeded pseudorandom compatible form, as JSON.
    Random {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        polydeg_bound: usize,
    },
}

#[derive(Subcommand)]
enum QftCommand {
    Check {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        twist: PathBuf,
        /// The form, or `ω` for twists taking a pair.
        #[arg(long, visible_alias = "form")]
        form0: PathBuf,
        /// `α` for twists taking a pair.
        #[arg(long)]
        form1: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CoactionCommand {
    Verify {
        /// The canonical coaction on the mapping-space ring with N even and Q odd coordinates.
        #[arg(long, num_args = 2, value_names = ["N", "Q"], conflicts_with = "coaction")]
        ring: Option<Vec<usize>>,
        /// A coaction JSON file.
        #[arg(long, required_unless_present = "ring")]
        coaction: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ClassifyCommand {
    Verify {
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long)]
        monoid: Monoid,
    },
    Search {
        /// Degree bound in each variable, at most 3.
        #[arg(long)]
        degree: usize,
        /// Prime field size.
        #[arg(long, default_value_t = 101, conflicts_with = "grid")]
        field: u32,
        /// Search integer coefficients in [-N, N] over the rationals instead.
        #[arg(long)]
        grid: Option<i64>,
        /// A single monoid; all three when omitted.
        #[arg(long)]
        monoid: Option<Monoid>,
    },
}

enum Failure {
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// A report and whether its checks passed.
struct Outcome {
    report: Value,
    passed: bool,
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: invalid JSON: {e}", path.display())))
}

fn max_cells() -> Result<usize, Failure> {
    match std::env::var("SUPERPOINT_MAX_CELLS") {
        Ok(v) => v.parse().map_err(|_| Failure::Usage(format!("SUPERPOINT_MAX_CELLS={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

fn load_space(arg: &SpaceArg) -> Result<Arc<SimplicialSet>, Failure> {
    let path = Path::new(&arg.space);
    let x = if path.exists() {
        io::space_from_json(&read_json(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    } else {
        standard(&arg.space).map_err(|_| {
            Failure::Usage(format!("--space {:?}: no such file and not a standard space name", arg.space))
        })?
    };
    let limit = max_cells()?;
    if x.total_count() > limit {
        return Err(Failure::Usage(format!(
            "space has {} nondegenerate simplices, above SUPERPOINT_MAX_CELLS={limit}",
            x.total_count()
        )));
    }
    Ok(Arc::new(x))
}

fn load_form(path: &Path, x: &Arc<SimplicialSet>) -> Result<SullivanForm, Failure> {
    io::form_from_json(&read_json(path)?, Some(x)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn counts(x: &SimplicialSet) -> Value {
    json!((0..x.dim().map_or(0, |d| d + 1)).map(|n| x.count(n)).collect::<Vec<_>>())
}

fn space_validate(x: &Arc<SimplicialSet>) -> Outcome {
    let r = x.validate();
    Outcome {
        passed: r.is_valid(),
        report: json!({
            "command": "space validate",
            "valid": r.is_valid(),
            "identities_checked": r.identities_checked,
            "violations": r.violations,
            "simplices": counts(x),
            "pi0": x.pi0(),
        }),
    }
}

fn form_check(a: &SullivanForm) -> Outcome {
    let r = a.check_compatibility();
    Outcome {
        passed: r.is_compatible(),
        report: json!({
            "command": "form check",
            "compatible": r.is_compatible(),
            "checked": r.checked,
            "violations": r.violations,
            "degrees": a.degrees(),
            "closed": a.is_closed(),
        }),
    }
}

fn qft_check(
    x: &Arc<SimplicialSet>,
    twist: &Path,
    form0: &Path,
    form1: Option<&PathBuf>,
) -> Result<Outcome, Failure> {
    let spec = io::twist_from_json(&read_json(twist)?).map_err(|e| Failure::Usage(format!("{}: {e}", twist.display())))?;
    let w = load_form(form0, x)?;
    let candidate = match (spec.takes_pair(), form1) {
        (true, Some(p)) => Candidate::Pair(w, load_form(p, x)?),
        (true, None) => return Err(Failure::Usage("this twist takes a pair: pass --form1".into())),
        (false, Some(_)) => return Err(Failure::Usage("this twist takes a single form: drop --form1".into())),
        (false, None) => Candidate::Single(w),
    };
    let r = FieldTheoryQuery { twist: spec.clone(), candidate }.evaluate()?;
    Ok(Outcome {
        passed: r.holds,
        report: json!({
            "command": "qft check",
            "twist": io::twist_to_json(&spec),
            "holds": r.holds,
            "violations": r.violations,
        }),
    })
}

fn cohomology(x: &Arc<SimplicialSet>, degree: usize, polydeg: Option<usize>) -> Result<Outcome, Failure> {
    let complex = CochainComplex::new(x);
    let mut report = json!({
        "command": "cohomology",
        "degree": degree,
        "betti": complex.betti(degree),
        "betti_numbers": complex.betti_numbers(),
    });
    let mut passed = true;
    if let Some(d) = polydeg {
        let f = form_cohomology(x, degree, d)?;
        passed = f.matches();
        report["forms"] = json!({
            "polydeg_bound": f.polydeg_bound,
            "closed": f.closed,
            "exact": f.exact,
            "quotient_rank": f.quotient_rank(),
            "integration_rank": f.integration_rank,
            "matches": f.matches(),
        });
    }
    Ok(Outcome { report, passed })
}

fn concordance(
    x: &Arc<SimplicialSet>,
    notion: Option<Notion>,
    form0: &Path,
    form1: &Path,
    bound: usize,
) -> Result<Outcome, Failure> {
    let (w0, w1) = (load_form(form0, x)?, load_form(form1, x)?);
    let notions: Vec<Notion> = notion.map_or(Notion::ALL.to_vec(), |n| vec![n]);
    let mut verdicts = Vec::new();
    let mut holds = Vec::new();
    for n in notions {
        let v = concordance_check(n, &w0, &w1, bound)?;
        if v.holds && !v.reverify(&w0, &w1) {
            return Err(Failure::Usage(format!("internal error: the {n} witness does not re-verify")));
        }
        holds.push(v.holds);
        verdicts.push(io::verdict_to_json(&v));
    }
    let agree = holds.windows(2).all(|w| w[0] == w[1]);
    let concordant = holds[0] && agree;
    let mut report = json!({"command": "concordance", "concordant": concordant, "notions_agree": agree});
    if verdicts.len() == 1 {
        report["verdict"] = verdicts.pop().expect("one verdict");
    } else {
        report["verdicts"] = Value::Array(verdicts);
    }
    Ok(Outcome { report, passed: concordant })
}

fn coaction_verify(ring: Option<&Vec<usize>>, file: Option<&PathBuf>) -> Result<Outcome, Failure> {
    let (c, expected) = match (ring, file) {
        (Some(nq), _) => {
            let ring = mapping_space_ring(nq[0], nq[1]);
            (canonical_coaction(&ring), Some(CdgaStructure::of_ring(&ring)))
        }
        (None, Some(p)) => {
            let c = io::coaction_from_json(&read_json(p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            (c, None)
        }
        (None, None) => return Err(Failure::Usage("pass --ring N Q or --coaction FILE".into())),
    };
    let r = verify_coaction(&c);
    let mut report = json!({
        "command": "coaction verify",
        "coaction": io::coaction_to_json(&c),
        "passes": r.passes(),
        "checked": r.checked,
        "parity": r.parity,
        "coassociativity": r.coassociativity,
        "counit": r.counit,
    });
    let mut passed = r.passes();
    match coaction_to_cdga(&c) {
        Ok(s) => {
            report["cdga"] = json!({
                "degrees": s.degrees(),
                "differential": s.differential().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            });
            if let Some(e) = expected {
                let matches = s == e;
                report["matches_forms"] = json!(matches);
                passed &= matches;
            }
        }
        Err(e) => report["cdga_error"] = json!(e.to_string()),
    }
    Ok(Outcome { report, passed })
}

fn classify_verify(path: &Path, monoid: Monoid) -> Result<Outcome, Failure> {
    let c = io::candidate_from_json(&read_json(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let r = verify_action(&c, monoid);
    let width = |p: &superpoint::Poly, i: usize| p.terms().map(|(m, _)| m.evens()[i] as usize).max().unwrap_or(0) + 1;
    let nx = c.polys().iter().map(|p| width(p, 0)).max().unwrap_or(1);
    let ny = c.polys().iter().map(|p| width(p, 1)).max().unwrap_or(1).max(2);
    let family = DenseCandidate::from_candidate(&c, nx, ny).and_then(|d| match_family(&d, monoid));
    Ok(Outcome {
        passed: r.passes(),
        report: json!({
            "command": "classify verify",
            "monoid": monoid.name(),
            "candidate": io::candidate_to_json(&c),
            "passes": r.passes(),
            "checked": r.checked,
            "discrepancies": r.discrepancies.iter().map(|(c, d)| json!({"condition": c, "difference": d})).collect::<Vec<_>>(),
            "family": family.as_ref().map(|f| f.to_string()),
            "tabulated": family.as_ref().map(|f| f.kind.tabulated()),
        }),
    })
}

fn classify_search(degree: usize, field: u32, grid: Option<i64>, monoid: Option<Monoid>) -> Result<Outcome, Failure> {
    let monoids: Vec<Monoid> = monoid.map_or(Monoid::ALL.to_vec(), |m| vec![m]);
    let mut reports: Vec<SearchReport> = Vec::new();
    for m in monoids {
        reports.push(match grid {
            Some(n) if n >= 0 => {
                let domain: Vec<Rational> = (-n..=n).map(Rational::from_i64).collect();
                exhaustive_search(m, degree, &domain)?
            }
            Some(n) => return Err(Failure::Usage(format!("--grid {n} must be non-negative"))),
            None => search_fp(m, degree, field)?,
        });
    }
    let passed = reports.iter().all(SearchReport::explained);
    Ok(Outcome {
        passed,
        report: json!({
            "command": "classify search",
            "all_explained": passed,
            "all_tabulated": reports.iter().all(SearchReport::complete),
            "reports": reports.iter().map(io::search_report_to_json).collect::<Vec<_>>(),
        }),
    })
}

fn demo(name: &str) -> Result<Outcome, Failure> {
    match name {
        "s1-fundamental-class" => {
            let x = Arc::new(standard("sphere1")?);
            // dx1 on the edge, 0 on the vertex
            let a = SullivanForm::from_fn(&x, false, |r, t| {
                if r.dim == 1 {
                    superpoint::Poly::odd_var(t, 0)
                } else {
                    superpoint::Poly::zero(t)
                }
            });
            let integral = integration_cochain(&a, 1);
            let exact = is_exact(&a)?;
            let member = degree_twist_membership(Geometry::Topological, 1, &a);
            Ok(Outcome {
                passed: !exact && integral == vec![Rational::from_i64(1)],
                report: json!({
                    "command": "demo s1-fundamental-class",
                    "form": a.value(x.simplices(1).next().expect("an edge")).to_string(),
                    "closed": a.is_closed(),
                    "integral": io::rational_to_string(&integral[0]),
                    "exactness": if exact { "exact" } else { "not exact" },
                    "topological_degree_1_theory": member,
                }),
            })
        }
        "torus-classes" => {
            let x = Arc::new(standard("torus")?);
            let f = form_cohomology(&x, 1, 1)?;
            Ok(Outcome {
                passed: f.matches(),
                report: json!({
                    "command": "demo torus-classes",
                    "space": "torus",
                    "degree": 1,
                    "closed_forms": f.closed,
                    "exact_forms": f.exact,
                    "concordance_classes_rank": f.quotient_rank(),
                    "betti": f.betti,
                    "integration_rank": f.integration_rank,
                }),
            })
        }
        other => Err(Failure::Usage(format!("unknown demo {other:?} (expected s1-fundamental-class or torus-classes)"))),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Space(SpaceCommand::Validate { space }) => Ok(space_validate(&load_space(space)?)),
        Command::Space(SpaceCommand::Standard { name }) => {
            let x = standard(name)?;
            Ok(Outcome { report: io::space_to_json(&x), passed: true })
        }
        Command::Form(FormCommand::Check { space, form }) => {
            let x = load_space(space)?;
            Ok(form_check(&load_form(form, &x)?))
        }
        Command::Form(FormCommand::Random { space, degree, polydeg_bound }) => {
            let x = load_space(space)?;
            let a = SullivanForm::random(&x, *degree, *polydeg_bound, cli.seed)?;
            Ok(Outcome { report: io::form_to_json(&a), passed: true })
        }
        Command::Qft(QftCommand::Check { space, twist, form0, form1 }) => {
            qft_check(&load_space(space)?, twist, form0, form1.as_ref())
        }
        Command::Cohomology { space, degree, polydeg_bound } => cohomology(&load_space(space)?, *degree, *polydeg_bound),
        Command::Concordance { notion, space, form0, form1, polydeg_bound } => {
            concordance(&load_space(space)?, *notion, form0, form1, *polydeg_bound)
        }
        Command::Coaction(CoactionCommand::Verify { ring, coaction }) => coaction_verify(ring.as_ref(), coaction.as_ref()),
        Command::Classify(ClassifyCommand::Verify { candidate, monoid }) => classify_verify(candidate, *monoid),
        Command::Classify(ClassifyCommand::Search { degree, field, grid, monoid }) => {
            classify_search(*degree, *field, *grid, *monoid)
        }
        Command::Demo { name } => demo(name),
    }
}

/// Commands whose report is itself a data file print JSON either way.
fn is_data(cli: &Cli) -> bool {
    matches!(
        cli.command,
        Command::Space(SpaceCommand::Standard { .. }) | Command::Form(FormCommand::Random { .. })
    )
}

fn human(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = report {
        for (k, v) in map {
            let text = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {text}\n"));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.json || is_data(&cli) {
                println!("{}", serde_json::to_string_pretty(&outcome.report).expect("JSON values serialize"));
            } else {
                print!("{}", human(&outcome.report));
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
