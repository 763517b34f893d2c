use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use tracing::{info, warn};

use horn_envelope::harness::{
    demo_nontermination, learn_once, run_experiment, AttributeSchema, EqStrategy, ExperimentConfig, LearnSpec,
    OracleSource,
};
use horn_envelope::logic::{closure, models_of, Formula, Model, ModelSet, VariableUniverse};
use horn_envelope::oracle::{wire, Endpoint, ExactEquivalence, FormulaOracle, SampleSpace};
use horn_envelope::reduction::{encode_formula, learn_cnf_via_envelope, one_step_envelope, ExtendedUniverse};
use horn_envelope::text::{
    parse_formula, parse_formula_in, parse_model_file, render_clause, render_formula, render_metaclauses,
};

type Error = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(
    name = "hornenv",
    version,
    about = "Learn Horn envelopes with membership and equivalence queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the envelope learner once and print the learned Horn rules.
    Learn(LearnArgs),
    /// Repeat the learner with seeds seed..seed+N and count extracted rules.
    Experiment(ExperimentArgs),
    /// Intersection closure of a model list, or the envelope of a formula.
    Closure { file: PathBuf },
    /// Encode a CNF into Horn form and print its Horn envelope.
    Reduce {
        file: PathBuf,
        /// Also learn the CNF back through the envelope learner.
        #[arg(long)]
        learn: bool,
    },
    /// Show the classic Horn learner cycling on a non-Horn target.
    DemoNontermination {
        #[arg(long, default_value_t = 30)]
        cap: u64,
        #[arg(long)]
        json: bool,
    },
    /// Answer membership queries for a formula over the wire protocol.
    Serve {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Listen on HOST:PORT instead of stdin/stdout.
        #[arg(long)]
        tcp: Option<String>,
    },
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// Formula file answering membership queries in process.
    #[arg(long, group = "source")]
    target: Option<PathBuf>,
    /// Shell command speaking the wire protocol on stdin/stdout.
    #[arg(long, group = "source")]
    oracle_cmd: Option<String>,
    /// Wire-protocol oracle at HOST:PORT.
    #[arg(long, group = "source")]
    oracle_tcp: Option<String>,
}

#[derive(Args)]
struct CommonArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Attribute schema (JSON); fixes the universe and the sampler's blocks.
    #[arg(long)]
    schema: Option<PathBuf>,
    /// `exact` or `sampled`
    #[arg(long, value_parser = parse_eq_mode)]
    eq_mode: Option<EqStrategy>,
    /// Stop after this many equivalence queries
    #[arg(long)]
    eq_budget: Option<u64>,
    /// Models per sampled equivalence query
    #[arg(long, default_value_t = 640)]
    batch: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the result as JSON to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Confirm a clean sampled batch with the exact oracle.
    #[arg(long)]
    final_exact_check: bool,
}

#[derive(Args)]
struct LearnArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also print the quasi-Horn clauses Q.
    #[arg(long)]
    show_quasi: bool,
    /// Write one JSON record per equivalence query.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 10)]
    iterations: usize,
    /// Minimum number of runs a rule must appear in to be reported
    #[arg(long, default_value_t = 7)]
    threshold: usize,
    /// Worker threads (default: one per core)
    #[arg(long)]
    jobs: Option<usize>,
}

fn parse_eq_mode(s: &str) -> Result<EqStrategy, String> {
    s.parse()
        .map_err(|e: horn_envelope::harness::HarnessError| e.to_string())
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

/// Universe, oracle source and schema from the common flags. Without a
/// schema the universe comes from the target file.
fn resolve(args: &CommonArgs) -> Result<(VariableUniverse, OracleSource, Option<AttributeSchema>), Error> {
    let schema = args.schema.as_deref().map(AttributeSchema::load).transpose()?;
    let src = &args.source;
    let (universe, source) = match (&schema, &src.target) {
        (Some(s), Some(t)) => {
            let u = s.universe()?;
            let f = parse_formula_in(&read(t)?, &u)?;
            (u, OracleSource::Formula(f))
        }
        (None, Some(t)) => {
            let (u, f) = parse_formula(&read(t)?)?;
            (u, OracleSource::Formula(f))
        }
        (Some(s), None) => {
            let endpoint = match (&src.oracle_cmd, &src.oracle_tcp) {
                (Some(c), _) => Endpoint::Command(c.clone()),
                (_, Some(t)) => Endpoint::Tcp(t.clone()),
                _ => unreachable!("clap requires one source"),
            };
            (s.universe()?, OracleSource::Endpoint(endpoint))
        }
        (None, None) => return Err("an external oracle needs --schema to fix the universe".into()),
    };
    Ok((universe, source, schema))
}

fn learn(args: LearnArgs) -> Result<(), Error> {
    let c = &args.common;
    let (universe, source, schema) = resolve(c)?;
    let eq_mode = c.eq_mode.unwrap_or(if schema.is_some() {
        EqStrategy::Sampled
    } else {
        EqStrategy::Exact
    });
    let spec = LearnSpec {
        universe: &universe,
        oracle: &source,
        eq_mode,
        eq_budget: c.eq_budget,
        batch_size: c.batch,
        seed: c.seed,
        space: schema
            .as_ref()
            .map_or(SampleSpace::AllSubsets, AttributeSchema::sample_space),
        final_exact_check: c.final_exact_check,
        check_invariants: false,
    };
    let mut log = args.log.as_deref().map(File::create).transpose()?.map(BufWriter::new);
    let outcome = learn_once(&spec, log.as_mut().map(|w| w as &mut dyn Write))?;
    if let Some(mut w) = log {
        w.flush()?;
    }
    let res = &outcome.result;

    let mut text = render_metaclauses(res.horn(), &universe);
    if args.show_quasi && !res.quasi().is_empty() {
        text.push_str("# quasi-Horn part\n");
        for q in res.quasi() {
            text.push_str(&render_clause(q, &universe));
            text.push('\n');
        }
    }
    print!("{text}");
    eprintln!(
        "{:?}: {} EQs, {} MQs, {} oracle calls, |H|={}, |Q|={}",
        res.termination,
        res.stats.eq_count,
        res.stats.mq_count,
        outcome.oracle_calls,
        res.horn().len(),
        res.quasi().len()
    );
    if let Some(out) = &c.out {
        let rules: Vec<String> = res
            .horn()
            .iter()
            .map(|m| horn_envelope::harness::render_rule(m, &universe))
            .collect();
        let quasi: Vec<String> = res.quasi().iter().map(|q| render_clause(q, &universe)).collect();
        let doc = json!({
            "termination": res.termination,
            "stats": res.stats,
            "oracle_calls": outcome.oracle_calls,
            "rules": rules,
            "quasi": quasi,
        });
        fs::write(out, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), Error> {
    let c = &args.common;
    let (_, source, schema) = resolve(c)?;
    let schema = schema.unwrap_or_else(AttributeSchema::biographies);
    let mut cfg = ExperimentConfig::new(schema, source);
    if let Some(m) = c.eq_mode {
        cfg.eq_mode = m;
    }
    if let Some(b) = c.eq_budget {
        cfg.eq_budget = b;
    }
    cfg.batch_size = c.batch;
    cfg.iterations = args.iterations;
    cfg.seed = c.seed;
    cfg.final_exact_check = c.final_exact_check;
    cfg.threshold = args.threshold;
    cfg.parallelism = args.jobs;
    let report = run_experiment(&cfg)?;
    print!("{}", report.to_text());
    if let Some(out) = &c.out {
        fs::write(out, report.to_json() + "\n")?;
    }
    Ok(())
}

fn print_models(universe: &VariableUniverse, set: &ModelSet) {
    for m in set.iter() {
        let names: Vec<&str> = universe.names_in(m).collect();
        println!(
            "{}",
            if names.is_empty() {
                "-".to_string()
            } else {
                names.join(" ")
            }
        );
    }
}

fn closure_cmd(file: &Path) -> Result<(), Error> {
    let text = read(file)?;
    let is_formula = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .any(|l| l.contains("->") || l.contains("=>"));
    let (universe, models): (VariableUniverse, Vec<Model>) = if is_formula {
        let (u, f) = parse_formula(&text)?;
        let m = models_of(&f)?;
        (u, m.iter().cloned().collect())
    } else {
        parse_model_file(&text)?
    };
    let base = ModelSet::from_models(universe.len(), models)?;
    let cl = closure(&base);
    println!("vars: {}", universe.names().join(" "));
    println!(
        "# {} models, {} in the closure, {} added",
        base.len(),
        cl.len(),
        cl.len() - base.len()
    );
    print_models(&universe, &cl);
    Ok(())
}

fn reduce(file: &Path, learn: bool) -> Result<(), Error> {
    let (universe, phi) = parse_formula(&read(file)?)?;
    let ext = ExtendedUniverse::for_files(universe.clone())?;
    println!("# enc");
    print!("{}", render_formula(&encode_formula(&phi).to_formula(), ext.combined()));
    println!("# envelope of enc");
    print!("{}", render_formula(&one_step_envelope(&phi), ext.combined()));
    if learn {
        let mut mo = FormulaOracle::new(phi.clone());
        let mut eo = ExactEquivalence::plain(phi.clone())?;
        let learned = learn_cnf_via_envelope(&mut mo, &mut eo, &universe)?;
        let ok = horn_envelope::logic::BruteForce::default().equivalent(&learned.formula, &phi)?;
        println!(
            "# learned through the envelope learner ({} EQs)",
            learned.run.stats.eq_count
        );
        print!("{}", render_formula(&learned.formula, &universe));
        println!("# equivalent to the input: {ok}");
    }
    Ok(())
}

fn serve(target: &Path, schema: Option<&Path>, tcp: Option<&str>) -> Result<(), Error> {
    let text = read(target)?;
    let (universe, phi): (VariableUniverse, Formula) = match schema {
        Some(s) => {
            let u = AttributeSchema::load(s)?.universe()?;
            let f = parse_formula_in(&text, &u)?;
            (u, f)
        }
        None => parse_formula(&text)?,
    };
    let mut oracle = FormulaOracle::new(phi);
    match tcp {
        None => {
            let stats = wire::serve(&mut oracle, universe.names(), io::stdin().lock(), io::stdout().lock())?;
            info!(queries = stats.queries, errors = stats.errors, "session closed");
        }
        Some(addr) => {
            let listener = TcpListener::bind(addr)?;
            eprintln!("listening on {}", listener.local_addr()?);
            for conn in listener.incoming() {
                let conn = conn?;
                let reader = BufReader::new(conn.try_clone()?);
                match wire::serve(&mut oracle, universe.names(), reader, conn) {
                    Ok(s) => info!(queries = s.queries, errors = s.errors, "session closed"),
                    Err(e) => warn!(error = %e, "session failed"),
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Learn(a) => learn(a),
        Command::Experiment(a) => experiment(a),
        Command::Closure { file } => closure_cmd(&file),
        Command::Reduce { file, learn } => reduce(&file, learn),
        Command::DemoNontermination { cap, json } => demo_nontermination(cap).map_err(Error::from).and_then(|d| {
            if json {
                println!("{}", serde_json::to_string_pretty(&d)?);
            } else {
                print!("{d}");
            }
            Ok(())
        }),
        Command::Serve { target, schema, tcp } => serve(&target, schema.as_deref(), tcp.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
