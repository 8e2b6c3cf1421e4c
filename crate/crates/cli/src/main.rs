use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use commsync::automata::io::{parse_dfa, parse_partial_dfa, parse_semi_automaton, serialize_semi_automaton, to_dot};
use commsync::automata::{Alphabet, PartialDfa, StateSet};
use commsync::commutative::{
    commutation_defect, decomposition_to_dfa, Decomposition, DecompositionError, ShuffleComponent,
};
use commsync::gadgets::{
    np_gadget_case_i, np_gadget_case_ii, pspace_gadget, GadgetOutput, NpGadgetInput, Pinning, PspaceGadgetInput,
};
use commsync::random;
use commsync::solvers::{
    exact_constrained, solve_auto, solve_constraint_auto, solve_exact_decomposition, SolveResult, SolverConfig,
};
use commsync::unary::UnaryComponent;
use commsync::vectors::{classify, classify_constraint, ClassificationReport, ClassifyError, VectorSetDoc};

#[derive(Parser)]
#[command(name = "commsync", version, about = "Constrained synchronization under commutative constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity class of a constraint language.
    Classify {
        #[command(flatten)]
        source: ConstraintSource,
        #[arg(long)]
        json: bool,
    },
    /// Shuffle decomposition of a commutative constraint automaton.
    Decompose {
        #[arg(long)]
        constraint: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a synchronizing word inside the constraint language.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        source: ConstraintSource,
        #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
        method: SolveMethod,
        #[arg(long)]
        max_space: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Build a reduction instance.
    Gadget(GadgetArgs),
    /// Test whether a constraint automaton accepts a commutative language.
    CheckCommutative {
        #[arg(long)]
        constraint: PathBuf,
    },
    /// Compare the dispatching solver with exhaustive search on random instances.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        cases: usize,
        #[arg(long, default_value_t = 6)]
        max_states: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct ConstraintSource {
    /// Constraint automaton, decomposition or vector-set document.
    #[arg(long)]
    constraint: Option<PathBuf>,
    /// Vector-set document.
    #[arg(long)]
    from_vectors: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMethod {
    Auto,
    Exact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GadgetKind {
    #[value(name = "np-i")]
    NpI,
    #[value(name = "np-ii")]
    NpIi,
    Pspace,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    /// Unary DFA documents (np-i, np-ii).
    #[arg(long, num_args = 1.., conflicts_with_all = ["input", "subset"])]
    automata: Vec<PathBuf>,
    /// Semi-automaton over two letters (pspace).
    #[arg(long, requires = "subset")]
    input: Option<PathBuf>,
    /// Comma-separated target states (pspace).
    #[arg(long, requires = "input", value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    #[arg(long)]
    m: u64,
    /// Vector-set document whose pinned vector drives the construction.
    #[arg(long, requires = "pin")]
    with_pchains: Option<PathBuf>,
    #[arg(long, requires = "with_pchains")]
    pin: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Also write a Graphviz rendering.
    #[arg(long)]
    dot: bool,
}

enum Constraint {
    Automaton(PartialDfa),
    Decomposition(Decomposition),
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Dispatches on the document's keys: `transitions`, `components` or `vectors`.
fn load_constraint(path: &Path) -> Result<Constraint> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    let has = |key: &str| value.get(key).is_some();
    let parsed = if has("transitions") {
        Constraint::Automaton(parse_partial_dfa(&text)?)
    } else if has("components") {
        Constraint::Decomposition(Decomposition::from_json(&text)?)
    } else if has("vectors") {
        Constraint::Decomposition(load_vectors_text(&text)?)
    } else {
        bail!("{}: expected an automaton, decomposition or vector-set document", path.display());
    };
    Ok(parsed)
}

fn load_vectors_text(text: &str) -> Result<Decomposition> {
    let (alphabet, set) = VectorSetDoc::from_json(text)?;
    Ok(set.to_decomposition(&alphabet)?)
}

fn load_source(source: &ConstraintSource) -> Result<Constraint> {
    match (&source.constraint, &source.from_vectors) {
        (Some(path), None) => load_constraint(path),
        (None, Some(path)) => Ok(Constraint::Decomposition(load_vectors_text(&read(path)?)?)),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn render_part(letter: &str, part: &UnaryComponent) -> String {
    match *part {
        UnaryComponent::Singleton { n } => format!("{letter}^{n}"),
        UnaryComponent::Progression { first, period: 1 } => format!("{letter}^{{{first}+t}}"),
        UnaryComponent::Progression { first, period } => format!("{letter}^{{{first}+{period}t}}"),
    }
}

fn render_component(alphabet: &Alphabet, c: &ShuffleComponent) -> String {
    c.parts
        .iter()
        .enumerate()
        .map(|(x, p)| render_part(alphabet.name(x), p))
        .collect::<Vec<_>>()
        .join(" ⧢ ")
}

fn print_report(report: &ClassificationReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
        return;
    }
    let alphabet = report.components.alphabet();
    println!("commutative: yes");
    println!("components: {}", report.components.components().len());
    for c in report.components.components() {
        println!("  {}", render_component(alphabet, c));
    }
    let list = |vs: &[commsync::vectors::ConstraintVector]| {
        vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    };
    println!("vectors: {}", list(&report.vectors));
    println!("maximal vectors: {}", list(&report.maximal_vectors));
    if let Some(w) = &report.warning {
        println!("warning: {w}");
    }
    println!("{}", report.complexity);
}

fn print_non_commutative(alphabet: &Alphabet, defect: Option<(usize, usize, usize)>, json: bool) {
    let defect = defect.map(|(q, x, y)| (q, alphabet.name(x).to_string(), alphabet.name(y).to_string()));
    if json {
        let witness = defect.map(|(q, x, y)| json!({"state": q, "letters": [x, y]}));
        println!("{}", json!({"commutative": false, "defect": witness}));
    } else {
        match defect {
            Some((q, x, y)) => println!("not commutative: {x}{y} and {y}{x} lead to different states from minimal state {q}"),
            None => println!("not commutative"),
        }
    }
}

fn classify_cmd(source: &ConstraintSource, json: bool) -> Result<ExitCode> {
    let report = match load_source(source)? {
        Constraint::Decomposition(dec) => ClassificationReport::from_decomposition(dec),
        Constraint::Automaton(b) => match classify_constraint(&b) {
            Ok(report) => report,
            Err(ClassifyError::Decomposition(DecompositionError::NonCommutative)) => {
                let d = b.complete();
                print_non_commutative(b.alphabet(), commutation_defect(&d), json);
                return Ok(ExitCode::from(1));
            }
            Err(e) => return Err(e.into()),
        },
    };
    print_report(&report, json);
    Ok(ExitCode::SUCCESS)
}

fn decompose_cmd(path: &Path, json: bool) -> Result<ExitCode> {
    let b = parse_partial_dfa(&read(path)?)?;
    let dec = match commsync::commutative::decompose(&b) {
        Ok(dec) => dec,
        Err(DecompositionError::NonCommutative) => {
            print_non_commutative(b.alphabet(), commutation_defect(&b.complete()), json);
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };
    if json {
        println!("{}", dec.to_json());
    } else if dec.is_empty_language() {
        println!("empty language");
    } else {
        for c in dec.components() {
            println!("{}", render_component(dec.alphabet(), c));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn solve_cmd(
    input: &Path,
    source: &ConstraintSource,
    method: SolveMethod,
    max_space: Option<usize>,
    json: bool,
) -> Result<ExitCode> {
    let sa = parse_semi_automaton(&read(input)?)?;
    let mut config = SolverConfig::default();
    if let Some(limit) = max_space {
        config.max_space = limit;
    }
    let result: SolveResult = match (load_source(source)?, method) {
        (Constraint::Automaton(b), SolveMethod::Exact) => exact_constrained(&sa, &b, &config)?,
        (Constraint::Automaton(b), SolveMethod::Auto) => solve_constraint_auto(&sa, &b, &config)?,
        (Constraint::Decomposition(dec), SolveMethod::Exact) => solve_exact_decomposition(&sa, &dec, &config)?,
        (Constraint::Decomposition(dec), SolveMethod::Auto) => solve_auto(&sa, &dec, &config)?,
    };
    if json {
        println!("{}", result.to_json(sa.alphabet()));
    } else {
        match result.witness() {
            Some(w) => println!(
                "yes\nwitness: \"{}\"\nmethod: {}\nexplored: {}",
                w.render(sa.alphabet()),
                result.method(),
                result.explored()
            ),
            None => println!("no\nmethod: {}\nexplored: {}", result.method(), result.explored()),
        }
    }
    Ok(if result.is_yes() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn load_pinning(args: &GadgetArgs) -> Result<Option<Pinning>> {
    let (Some(path), Some(pinned)) = (&args.with_pchains, args.pin) else {
        return Ok(None);
    };
    let doc: VectorSetDoc = serde_json::from_str(&read(path)?).with_context(|| format!("{}", path.display()))?;
    Ok(Some(Pinning {
        alphabet: Alphabet::new(doc.alphabet)?,
        vectors: doc.vectors,
        pinned,
    }))
}

fn gadget_cmd(args: &GadgetArgs) -> Result<ExitCode> {
    let pinning = load_pinning(args)?;
    let output: GadgetOutput = match args.kind {
        GadgetKind::NpI | GadgetKind::NpIi => {
            if args.automata.is_empty() {
                bail!("--automata is required for {}", if args.kind == GadgetKind::NpI { "np-i" } else { "np-ii" });
            }
            let automata = args
                .automata
                .iter()
                .map(|p| parse_dfa(&read(p)?).with_context(|| format!("{}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let inp = NpGadgetInput {
                automata,
                m: args.m,
                pinning,
            };
            if args.kind == GadgetKind::NpI {
                np_gadget_case_i(&inp)?
            } else {
                np_gadget_case_ii(&inp)?
            }
        }
        GadgetKind::Pspace => {
            let (Some(input), Some(subset)) = (&args.input, &args.subset) else {
                bail!("--input and --subset are required for pspace");
            };
            let automaton = parse_semi_automaton(&read(input)?)?;
            let n = automaton.num_states();
            if let Some(&q) = subset.iter().find(|&&q| q >= n) {
                bail!("subset state {q} out of range for {n} states");
            }
            pspace_gadget(&PspaceGadgetInput {
                automaton,
                subset: StateSet::from_states(subset.iter().copied()),
                m: args.m,
                pinning,
            })?
        }
    };

    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let write = |name: &str, contents: String| -> Result<()> {
        let path = args.out.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
    };
    write("automaton.json", serialize_semi_automaton(&output.automaton))?;
    write("constraint.json", output.constraint.to_json())?;
    write("names.json", serde_json::to_string_pretty(&output.names)?)?;
    if args.dot {
        write("automaton.dot", to_dot(&output.automaton, None, &[], Some(&output.names)))?;
    }
    println!(
        "{} states, constraint {} ({}), written to {}",
        output.automaton.num_states(),
        render_component(output.constraint.alphabet(), &output.constraint.components()[0]),
        output.class,
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn check_commutative_cmd(path: &Path) -> Result<ExitCode> {
    let b = parse_partial_dfa(&read(path)?)?;
    match commutation_defect(&b.complete()) {
        None => {
            println!("commutative");
            Ok(ExitCode::SUCCESS)
        }
        defect => {
            print_non_commutative(b.alphabet(), defect, false);
            Ok(ExitCode::from(1))
        }
    }
}

enum FuzzOutcome {
    Agree { yes: bool },
    Skipped,
    Disagree(Value),
}

fn fuzz_case(seed: u64, index: u64, max_states: usize) -> Result<FuzzOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=3);
    let sa = random::semi_automaton(&mut rng, n, k);
    let comps = rng.gen_range(0..=3);
    let dec = random::decomposition(&mut rng, k, comps, 3, 0.5);
    let config = SolverConfig::default();
    let exact = match solve_exact_decomposition(&sa, &dec, &config) {
        Ok(r) => r,
        Err(commsync::solvers::SolveError::TooLarge { .. }) => return Ok(FuzzOutcome::Skipped),
        Err(e) => return Err(e.into()),
    };
    let auto = solve_auto(&sa, &dec, &config)?;

    let count = rng.gen_range(1..=3);
    let set = random::vector_set(&mut rng, k, count, 3, 0.4);
    let direct = classify(&set);
    let via_dfa = classify_constraint(&decomposition_to_dfa(&set.to_decomposition(sa.alphabet())?)?.to_partial())?;

    if auto.is_yes() != exact.is_yes() || direct != via_dfa.complexity {
        return Ok(FuzzOutcome::Disagree(json!({
            "case": index,
            "automaton": serde_json::from_str::<Value>(&serialize_semi_automaton(&sa))?,
            "constraint": dec.to_json_value(),
            "auto": auto.to_json(sa.alphabet()),
            "exact": exact.to_json(sa.alphabet()),
            "vectors": serde_json::to_value(VectorSetDoc::new(sa.alphabet(), &set))?,
            "classify_direct": direct.as_str(),
            "classify_via_automaton": via_dfa.complexity.as_str(),
        })));
    }
    Ok(FuzzOutcome::Agree { yes: exact.is_yes() })
}

fn fuzz_cmd(seed: u64, cases: usize, max_states: usize) -> Result<ExitCode> {
    if max_states == 0 {
        bail!("--max-states must be positive");
    }
    let outcomes = (0..cases as u64)
        .into_par_iter()
        .map(|i| fuzz_case(seed, i, max_states))
        .collect::<Result<Vec<_>>>()?;
    let mut yes = 0;
    let mut skipped = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            FuzzOutcome::Agree { yes: y } => yes += usize::from(y),
            FuzzOutcome::Skipped => skipped += 1,
            FuzzOutcome::Disagree(report) => failures.push(report),
        }
    }
    println!(
        "{} cases, {} agree ({yes} yes), {skipped} skipped, {} disagreements",
        cases,
        cases - skipped - failures.len(),
        failures.len()
    );
    for f in &failures {
        println!("{}", serde_json::to_string_pretty(f)?);
    }
    Ok(if failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Classify { source, json } => classify_cmd(source, *json),
        Command::Decompose { constraint, json } => decompose_cmd(constraint, *json),
        Command::Solve {
            input,
            source,
            method,
            max_space,
            json,
        } => solve_cmd(input, source, *method, *max_space, *json),
        Command::Gadget(args) => gadget_cmd(args),
        Command::CheckCommutative { constraint } => check_commutative_cmd(constraint),
        Command::Fuzz {
            seed,
            cases,
            max_states,
        } => fuzz_cmd(*seed, *cases, *max_states),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
