use std::collections::BTreeMap;
use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use ks_alg::formality::{
    formality_verdict, is_massey_admissible3, is_massey_admissible3_single, massey3, verdict_table, Evidence,
    FormalityVerdict, HomClass, HomologyCache, VerdictOptions,
};
use ks_alg::homology::{degrees_for_pair, theorem_basis, verify_splitting, PieceHomology};
use ks_alg::quiver::{to_dot, verify_presentation};
use ks_alg::sample::Sampler;
use ks_alg::symmetry::symmetry_report;
use ks_alg::{AlgebraContext, Flavor, LineSet};

const SCHEMA: &str = "ks-alg/1";

/// `println!` that exits quietly when stdout is closed.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser, Debug)]
#[command(name = "ks-alg", version, about = "Kauffman-states dg algebras over F2")]
struct Cli {
    /// Seed for the randomized checks in `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ContextArgs {
    /// Number of lines.
    #[arg(short = 'n')]
    n: usize,
    /// Number of dots in each I-state.
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    /// Oriented lines, comma separated.
    #[arg(short = 'S', long = "orientation", default_value = "")]
    s: String,
    #[arg(long, default_value = "b")]
    flavor: Flavor,
    /// Cap on the sum of the doubled Alexander gradings.
    #[arg(long, default_value_t = 12)]
    cap: i32,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    /// Run over every k in 0..=n+1.
    #[arg(long)]
    all_k: bool,
    /// Run over every orientation set the flavor allows.
    #[arg(long = "all-S")]
    all_s: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of the nonzero graded pieces.
    Enumerate(ContextArgs),
    /// Product of two elements.
    Multiply {
        #[command(flatten)]
        ctx: ContextArgs,
        a: String,
        b: String,
    },
    /// Differential of an element.
    Diff {
        #[command(flatten)]
        ctx: ContextArgs,
        a: String,
    },
    /// Homology ranks per piece, next to the closed-form counts.
    Homology(ContextArgs),
    /// Triple Massey product of three homogeneous cycles.
    Massey {
        #[command(flatten)]
        ctx: ContextArgs,
        a1: String,
        a2: String,
        a3: String,
    },
    /// Formality verdict with its certificate.
    Formality {
        #[command(flatten)]
        ctx: ContextArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        /// Compute evidence only up to this many lines.
        #[arg(long, default_value_t = 4)]
        cert_bound: usize,
    },
    /// Run every check suite; exits nonzero on the first failing context.
    Verify {
        #[command(flatten)]
        ctx: ContextArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Graphviz rendering of the quiver.
    ExportDot(ContextArgs),
}

/// Exit status 2 for bad input, 1 for failed checks.
#[derive(Debug)]
enum Failure {
    Input(String),
    Check(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Check(m) => f.write_str(m),
        }
    }
}

impl From<ks_alg::Error> for Failure {
    fn from(e: ks_alg::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl ContextArgs {
    fn orientation(&self) -> Result<LineSet, Failure> {
        Ok(LineSet::parse_list(self.n, &self.s)?)
    }

    fn context(&self) -> Result<AlgebraContext, Failure> {
        Ok(AlgebraContext::new(self.n, self.k, self.orientation()?, self.flavor)?)
    }

    fn contexts(&self, sweep: &SweepArgs) -> Result<Vec<AlgebraContext>, Failure> {
        let base = self.context()?;
        if !sweep.all_k && !sweep.all_s {
            return Ok(vec![base]);
        }
        let mut out = Vec::new();
        for ctx in AlgebraContext::all(self.n, self.flavor)? {
            let k_ok = sweep.all_k || ctx.size() == base.size();
            let s_ok = sweep.all_s || ctx.orientation() == base.orientation();
            if k_ok && s_ok {
                out.push(ctx);
            }
        }
        Ok(out)
    }
}

fn header(ctx: &AlgebraContext) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("n".into(), json!(ctx.width()));
    m.insert("k".into(), json!(ctx.size()));
    m.insert("S".into(), json!(ctx.orientation().iter().collect::<Vec<_>>()));
    m.insert("flavor".into(), json!(ctx.flavor().name()));
    m
}

fn print_json(v: &impl Serialize) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn ranks_json(ranks: &BTreeMap<i32, usize>) -> Value {
    Value::Object(ranks.iter().map(|(m, r)| (m.to_string(), json!(r))).collect())
}

fn cmd_enumerate(args: &ContextArgs) -> Outcome {
    let ctx = args.context()?;
    let mut rows = Vec::new();
    for (x, y) in ctx.pairs() {
        for alex2 in degrees_for_pair(&x, &y, args.cap) {
            let dim = ctx.graded_piece_basis(&x, &y, &alex2)?.len();
            if dim > 0 {
                rows.push((x, y, alex2, dim));
            }
        }
    }
    if args.json {
        let mut out = header(&ctx);
        let pieces: Vec<Value> = rows
            .iter()
            .map(|(x, y, a, d)| json!({"x": x.to_string(), "y": y.to_string(), "alex2": a, "dim": d}))
            .collect();
        out.insert("pieces".into(), Value::Array(pieces));
        print_json(&out);
    } else {
        say!("{ctx}: {} pieces with sum(alex2) <= {}", rows.len(), args.cap);
        for (x, y, a, d) in rows {
            say!("{x} {y} {a:?} {d}");
        }
    }
    Ok(())
}

fn cmd_multiply(args: &ContextArgs, a: &str, b: &str) -> Outcome {
    let ctx = args.context()?;
    let product = ctx.parse_element(a)?.checked_mul(&ctx.parse_element(b)?)?;
    if args.json {
        let mut out = header(&ctx);
        out.insert("product".into(), json!(product.to_string()));
        print_json(&out);
    } else {
        say!("{product}");
    }
    Ok(())
}

fn cmd_diff(args: &ContextArgs, a: &str) -> Outcome {
    let ctx = args.context()?;
    let d = ctx.parse_element(a)?.differential();
    if args.json {
        let mut out = header(&ctx);
        out.insert("differential".into(), json!(d.to_string()));
        print_json(&out);
    } else {
        say!("{d}");
    }
    Ok(())
}

struct HomologyRow {
    x: String,
    y: String,
    alex2: Vec<i32>,
    ranks: BTreeMap<i32, usize>,
    theorem: BTreeMap<i32, usize>,
}

fn homology_rows(ctx: &AlgebraContext, cap: i32) -> Result<Vec<HomologyRow>, Failure> {
    let mut rows = Vec::new();
    for (x, y) in ctx.pairs() {
        for alex2 in degrees_for_pair(&x, &y, cap) {
            let h = PieceHomology::build(ctx, &x, &y, &alex2)?;
            let ranks = h.ranks();
            let theorem = if ctx.is_quotient() {
                let mut t = BTreeMap::new();
                for e in theorem_basis(ctx, &x, &y, &alex2)? {
                    *t.entry(ctx.maslov(&e.representative)).or_default() += 1;
                }
                t
            } else {
                // no differential: homology is the chain group
                h.complex().dimensions().into_iter().filter(|(_, d)| *d > 0).collect()
            };
            if ranks.is_empty() && theorem.is_empty() {
                continue;
            }
            rows.push(HomologyRow {
                x: x.to_string(),
                y: y.to_string(),
                alex2,
                ranks,
                theorem,
            });
        }
    }
    Ok(rows)
}

fn cmd_homology(args: &ContextArgs) -> Outcome {
    let ctx = args.context()?;
    let rows = homology_rows(&ctx, args.cap)?;
    let mismatches = rows.iter().filter(|r| r.ranks != r.theorem).count();
    if args.json {
        let mut out = header(&ctx);
        let pieces: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "x": r.x, "y": r.y, "alex2": r.alex2,
                    "ranks": ranks_json(&r.ranks),
                    "theorem": ranks_json(&r.theorem),
                    "match": r.ranks == r.theorem,
                })
            })
            .collect();
        out.insert("pieces".into(), Value::Array(pieces));
        out.insert("matches".into(), json!(mismatches == 0));
        print_json(&out);
    } else {
        say!("{ctx}: {} nonzero pieces, {mismatches} mismatches", rows.len());
        for r in &rows {
            let flag = if r.ranks == r.theorem { "ok" } else { "MISMATCH" };
            say!("{} {} {:?} ranks {:?} closed form {:?} {flag}", r.x, r.y, r.alex2, r.ranks, r.theorem);
        }
    }
    if mismatches == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{mismatches} pieces disagree with the closed form")))
    }
}

fn cmd_massey(args: &ContextArgs, texts: [&str; 3]) -> Outcome {
    let ctx = args.context()?;
    let mut classes = Vec::new();
    for t in texts {
        classes.push(HomClass::new(ctx.parse_element(t)?)?);
    }
    let seq: [HomClass; 3] = classes.try_into().expect("three classes");
    let mut cache = HomologyCache::new(ctx);
    let adm = is_massey_admissible3(&mut cache, &seq)?;
    let single = is_massey_admissible3_single(&mut cache, &seq)?;
    let product = if adm.admissible() { Some(massey3(&mut cache, &seq)?) } else { None };
    if args.json {
        let mut out = header(&ctx);
        out.insert("admissible".into(), json!(adm));
        out.insert("single_graded_admissible".into(), json!(single));
        if let Some(p) = &product {
            out.insert(
                "product".into(),
                json!({"value": p.value.to_string(), "maslov": p.maslov, "alex2": p.alex2,
                       "xi02": p.xi02.to_string(), "xi13": p.xi13.to_string()}),
            );
        }
        print_json(&out);
    } else {
        say!("admissible: {}", adm.admissible());
        say!("admissible with the single Alexander grading: {}", single.admissible());
        if let Some(p) = &product {
            say!("xi02 = {}", p.xi02);
            say!("xi13 = {}", p.xi13);
            say!("mu3 = {} (maslov {}, alex2 {:?})", p.value, p.maslov, p.alex2);
        }
    }
    Ok(())
}

fn describe(v: &FormalityVerdict) -> String {
    let label = if v.formal { "formal" } else { "non-formal" };
    let evidence = match &v.evidence {
        Evidence::Empty => "no vertices".to_string(),
        Evidence::Massey { certificate: c } => format!(
            "{} ({}) -> {}",
            c.family,
            c.classes.join(" "),
            c.value
        ),
        Evidence::MissingCertificate => "no certificate found".to_string(),
        Evidence::QuasiIso { map, clearance } => format!(
            "{} map on {} pieces ({} failures); {} edge, {} low-degree and {} family triples, {} nonzero",
            map.map,
            map.pieces,
            map.failures.len(),
            clearance.edge_admissible,
            clearance.low_degree_admissible,
            clearance.family_admissible,
            clearance.nonzero.len()
        ),
        Evidence::Clearance { clearance } => format!(
            "{} edge, {} low-degree and {} family triples admissible, {} nonzero",
            clearance.edge_admissible,
            clearance.low_degree_admissible,
            clearance.family_admissible,
            clearance.nonzero.len()
        ),
        Evidence::TableOnly => "table only".to_string(),
    };
    format!("{}: {label}; {evidence}", v.context)
}

fn cmd_formality(args: &ContextArgs, sweep: &SweepArgs, cert_bound: usize) -> Outcome {
    let contexts = args.contexts(sweep)?;
    let opts = VerdictOptions { cert_bound, cap: args.cap };
    let verdicts = verdict_table(&contexts, &opts)?;
    if args.json {
        print_json(&json!({"schema": SCHEMA, "verdicts": verdicts}));
    } else {
        for v in &verdicts {
            say!("{}", describe(v));
        }
    }
    match verdicts.iter().find(|v| !v.verified()) {
        Some(v) => Err(Failure::Check(format!("unverified verdict: {}", describe(v)))),
        None => Ok(()),
    }
}

/// `d^2 = 0` and the Leibniz rule on seeded random pairs.
fn random_differential_check(ctx: &AlgebraContext, seed: u64) -> Option<String> {
    if ctx.states().is_empty() {
        return None;
    }
    let mut sampler = Sampler::new(*ctx, seed, 2);
    for _ in 0..200 {
        let (a, b) = (sampler.element(3), sampler.element(3));
        if !a.differential().differential().is_zero() {
            return Some(format!("d^2({a}) is not zero"));
        }
        let rhs = &(&a.differential() * &b) + &(&a * &b.differential());
        if (&a * &b).differential() != rhs {
            return Some(format!("Leibniz rule fails on ({a}) * ({b})"));
        }
    }
    None
}

fn verify_one(ctx: &AlgebraContext, cap: i32, seed: u64) -> Result<Vec<(&'static str, Option<String>)>, Failure> {
    let first = |f: &[String]| f.first().cloned();
    let mut out = vec![("differential", random_differential_check(ctx, seed))];
    let rep = verify_presentation(ctx)?;
    out.push(("presentation", first(&rep.failures)));
    if ctx.is_quotient() {
        let mut split = None;
        for (x, y) in ctx.pairs() {
            let rep = verify_splitting(ctx, &x, &y, cap)?;
            if split.is_none() {
                split = first(&rep.failures);
            }
        }
        out.push(("splitting", split));
    }
    let rep = symmetry_report(ctx, cap)?;
    out.push(("symmetry", first(&rep.failures)));
    let rows = homology_rows(ctx, cap)?;
    let bad = rows
        .iter()
        .find(|r| r.ranks != r.theorem)
        .map(|r| format!("{}->{} {:?}: {:?} vs {:?}", r.x, r.y, r.alex2, r.ranks, r.theorem));
    out.push(("homology", bad));
    let v = formality_verdict(ctx, &VerdictOptions { cert_bound: 4, cap })?;
    out.push(("formality", (!v.verified()).then(|| describe(&v))));
    Ok(out)
}

fn cmd_verify(args: &ContextArgs, sweep: &SweepArgs, seed: u64) -> Outcome {
    let mut failure = None;
    let mut report = Vec::new();
    for ctx in args.contexts(sweep)? {
        let suites = verify_one(&ctx, args.cap, seed)?;
        let passed = suites.iter().all(|(_, f)| f.is_none());
        if !args.json {
            let names: Vec<String> = suites
                .iter()
                .map(|(name, f)| format!("{name} {}", if f.is_none() { "ok" } else { "FAILED" }))
                .collect();
            say!("{ctx}: {}", names.join(", "));
        }
        if failure.is_none() {
            if let Some((name, Some(detail))) = suites.iter().find(|(_, f)| f.is_some()) {
                failure = Some(format!("{ctx} {name}: {detail}"));
            }
        }
        let suites: BTreeMap<&str, Option<String>> = suites.into_iter().collect();
        report.push(json!({"context": ctx.to_string(), "passed": passed, "suites": suites}));
    }
    if args.json {
        print_json(&json!({"schema": SCHEMA, "contexts": report, "passed": failure.is_none()}));
    }
    match failure {
        Some(f) => Err(Failure::Check(f)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Multiply { ctx, a, b } => cmd_multiply(ctx, a, b),
        Command::Diff { ctx, a } => cmd_diff(ctx, a),
        Command::Homology(a) => cmd_homology(a),
        Command::Massey { ctx, a1, a2, a3 } => cmd_massey(ctx, [a1, a2, a3]),
        Command::Formality { ctx, sweep, cert_bound } => cmd_formality(ctx, sweep, *cert_bound),
        Command::Verify { ctx, sweep } => cmd_verify(ctx, sweep, cli.seed),
        Command::ExportDot(a) => {
            say!("{}", to_dot(&a.context()?).trim_end());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
    }
}
