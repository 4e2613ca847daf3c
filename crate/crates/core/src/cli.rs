//! Command-line front end. Each command has a typed entry point returning a
//! serializable payload; [`run`] parses arguments, renders text or JSON and
//! picks the exit code.
//!
//! Exit codes: 0 pass or yes, 1 fail or no, 2 unknown, 3 usage, parse or
//! input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmaps::{block_compose, Perm};
use crate::operads::{BuiltinOperad, PresentedOperad};
use crate::report::Report;
use crate::strictify::{
    check_equivalence, check_strictness, strictify, universal_property_check, StrictifyBounds, StrictnessBounds,
    UniversalBounds,
};
use crate::terms::{parse_presentation, parse_term, Classification, Flavor, Presentation, SaturationOptions, Term};
use crate::trees::to_tree;
use crate::weakcat::{coherence_check, CoherenceBounds, FunctorBounds, WeakPCategoryData};
use crate::weakening::{Classes, Decision, Verdict, WeakeningContext};

pub const THREADS_ENV: &str = "OPERAD_WORKBENCH_THREADS";

#[derive(Parser, Debug)]
#[command(name = "operad-workbench", version, about = "Presentations of operads, their weakenings and strictification")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify every equation of a theory file.
    Classify { file: PathBuf },
    /// Variables, labelling function, class and tree of a term.
    TermInfo {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        term: String,
    },
    /// Evaluate a term in a builtin target operad.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        term: String,
        /// Defaults to the largest variable index.
        #[arg(long)]
        arity: Option<usize>,
        /// Read the theory with another flavor, e.g. `fp` for non-linear terms.
        #[arg(long, value_parser = parse_flavor)]
        flavor: Option<Flavor>,
    },
    /// Is there a 2-cell between two trees of the weakening?
    Decide {
        file: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        t1: String,
        t2: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Partition the trees of one arity into 2-cell classes.
    Classes {
        file: PathBuf,
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
    /// Strictify a weak P-category file and check the result.
    Strictify {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        arity_bound: usize,
        #[arg(long, default_value_t = 20)]
        element_bound: usize,
    },
    /// Permutations.
    #[command(subcommand)]
    Perm(PermCommand),
}

#[derive(Args, Debug)]
pub struct TargetArgs {
    /// A builtin target; `none` decides by congruence closure alone.
    #[arg(long, default_value = "none")]
    pub target: String,
    /// Interpretation of a generator, `op=element`.
    #[arg(long = "interp", value_parser = parse_binding)]
    pub interp: Vec<(String, String)>,
}

#[derive(Args, Debug)]
pub struct Budget {
    /// Largest term considered by congruence closure.
    #[arg(long, default_value_t = 7)]
    pub max_size: usize,
    /// Congruence rounds.
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
}

#[derive(Subcommand, Debug)]
pub enum PermCommand {
    /// `σ ∘ (τ_1, …, τ_n)`: permute blocks by σ and each block by its τ.
    BlockCompose { sigma: String, blocks: Vec<String> },
}

fn parse_binding(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected op=element, found `{s}`"))
}

fn parse_flavor(s: &str) -> std::result::Result<Flavor, String> {
    match s {
        "plain" => Ok(Flavor::Plain),
        "symmetric" => Ok(Flavor::Symmetric),
        "fp" => Ok(Flavor::Fp),
        other => Err(format!("unknown flavor `{other}`")),
    }
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidData(format!("{name} must be positive")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationClass {
    pub equation: String,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub theory: String,
    pub flavor: Flavor,
    pub equations: Vec<EquationClass>,
    pub overall: Classification,
}

impl fmt::Display for ClassifyOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory {} ({})", self.theory, self.flavor)?;
        for e in &self.equations {
            writeln!(f, "  {:<40} {}", e.equation, e.classification)?;
        }
        write!(f, "overall: {}", self.overall)
    }
}

pub fn cmd_classify(src: &str) -> Result<ClassifyOutput> {
    let p = parse_presentation(src)?;
    let equations = p
        .equations
        .iter()
        .map(|e| {
            Ok(EquationClass {
                equation: format!("{} = {}", e.lhs, e.rhs),
                classification: e.classify()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ClassifyOutput {
        theory: p.name.clone(),
        flavor: p.flavor,
        equations,
        overall: p.classify()?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermInfo {
    pub term: String,
    pub arity: usize,
    pub size: usize,
    pub variables: Vec<usize>,
    pub label: String,
    pub classification: Classification,
    pub tree: String,
}

impl fmt::Display for TermInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "term:           {}", self.term)?;
        writeln!(f, "arity:          {}", self.arity)?;
        writeln!(f, "size:           {}", self.size)?;
        writeln!(f, "variables:      {:?}", self.variables)?;
        writeln!(f, "label:          {}", self.label)?;
        writeln!(f, "classification: {}", self.classification)?;
        write!(f, "tree:           {}", self.tree)
    }
}

pub fn cmd_term_info(src: &str, arity: usize, term: &str) -> Result<TermInfo> {
    let p = parse_presentation(src)?;
    let t = parse_term(term)?;
    t.check(&p.signature)?;
    Ok(TermInfo {
        term: t.to_string(),
        arity,
        size: t.size(),
        variables: t.var_seq(),
        label: t.label_fn(arity)?.to_string(),
        classification: t.classify(arity)?,
        tree: to_tree(&t, arity)?.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub term: String,
    pub arity: usize,
    pub target: String,
    pub value: String,
}

impl fmt::Display for EvalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at arity {} in {}: {}", self.term, self.arity, self.target, self.value)
    }
}

fn presented(p: Presentation, target: &str, interp: &[(String, String)]) -> Result<PresentedOperad<BuiltinOperad>> {
    let explicit: BTreeMap<String, String> = interp.iter().cloned().collect();
    PresentedOperad::builtin(p, target, &explicit)
}

fn max_var(t: &Term) -> usize {
    t.max_var()
}

pub fn cmd_eval(
    src: &str,
    target: &str,
    interp: &[(String, String)],
    term: &str,
    arity: Option<usize>,
    flavor: Option<Flavor>,
) -> Result<EvalOutput> {
    let mut p = parse_presentation(src)?;
    if let Some(fl) = flavor {
        p.flavor = fl;
    }
    let po = presented(p, target, interp)?;
    let t = parse_term(term)?;
    let arity = arity.unwrap_or_else(|| max_var(&t));
    let value = po.eval_term(&t, arity)?;
    Ok(EvalOutput {
        term: t.to_string(),
        arity,
        target: target.to_string(),
        value: value.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideOutput {
    pub t1: String,
    pub t2: String,
    pub mode: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

impl fmt::Display for DecideOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}  vs  {}  [{}]", self.t1, self.t2, self.mode)?;
        write!(f, "{}: {}", self.verdict.decision, self.verdict.reason)?;
        for s in &self.verdict.trace {
            write!(f, "\n  {} ~ {}  ({:?})", s.from, s.to, s.reason)?;
        }
        Ok(())
    }
}

enum Context {
    Exact(WeakeningContext<BuiltinOperad>),
    Closure(WeakeningContext<BuiltinOperad>),
}

impl Context {
    fn get(&self) -> &WeakeningContext<BuiltinOperad> {
        match self {
            Context::Exact(c) | Context::Closure(c) => c,
        }
    }

    fn mode(&self) -> &'static str {
        match self {
            Context::Exact(_) => "evaluation",
            Context::Closure(_) => "closure",
        }
    }
}

fn context(src: &str, target: &str, interp: &[(String, String)], options: SaturationOptions) -> Result<Context> {
    let p = parse_presentation(src)?;
    if target == "none" {
        return Ok(Context::Closure(WeakeningContext::closure(p, options)?));
    }
    if p.flavor == Flavor::Fp {
        // reject before resolving the target so the diagnostic is the degeneracy one
        return Ok(Context::Closure(WeakeningContext::closure(p, options)?));
    }
    Ok(Context::Exact(WeakeningContext::evaluable(presented(p, target, interp)?, options)?))
}

/// Each tree is read at the arity of its largest variable.
pub fn cmd_decide(
    src: &str,
    target: &str,
    interp: &[(String, String)],
    t1: &str,
    t2: &str,
    options: SaturationOptions,
) -> Result<DecideOutput> {
    positive("--max-size", options.max_term_size)?;
    positive("--steps", options.max_steps)?;
    let ctx = context(src, target, interp, options)?;
    let (a, b) = (parse_term(t1)?, parse_term(t2)?);
    let ta = ctx.get().term_tree(&a, max_var(&a))?;
    let tb = ctx.get().term_tree(&b, max_var(&b))?;
    Ok(DecideOutput {
        t1: a.to_string(),
        t2: b.to_string(),
        mode: ctx.mode().into(),
        verdict: ctx.get().two_cell(&ta, &tb)?,
    })
}

struct ClassesText<'a>(&'a Classes);

impl fmt::Display for ClassesText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "{} classes at arity {}, size ≤ {}", c.classes.len(), c.arity, c.max_size)?;
        if c.exhausted {
            f.write_str(" (closure budget exhausted)")?;
        }
        for (i, class) in c.classes.iter().enumerate() {
            write!(f, "\n[{}]", i + 1)?;
            if let Some(k) = &class.key {
                write!(f, " {k}")?;
            }
            for m in &class.members {
                write!(f, "\n  {m}")?;
            }
        }
        Ok(())
    }
}

pub fn cmd_classes(
    src: &str,
    target: &str,
    interp: &[(String, String)],
    arity: usize,
    max_size: usize,
    steps: usize,
) -> Result<Classes> {
    positive("--max-size", max_size)?;
    positive("--steps", steps)?;
    let options = SaturationOptions {
        max_term_size: max_size.max(SaturationOptions::default().max_term_size),
        max_steps: steps,
    };
    context(src, target, interp, options)?.get().enumerate_classes(arity, max_size)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictifyOutput {
    pub name: String,
    pub elements: usize,
    pub objects: usize,
    pub unreached: Vec<String>,
    pub reports: Vec<Report>,
    pub passed: bool,
}

impl fmt::Display for StrictifyOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "st({}): {} elements, {} objects", self.name, self.elements, self.objects)?;
        if !self.unreached.is_empty() {
            writeln!(f, "elements without a representative: {}", self.unreached.join(", "))?;
        }
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        write!(f, "{}", if self.passed { "all checks pass" } else { "some checks FAIL" })
    }
}

/// Validates the file, checks coherence, strictifies and checks strictness,
/// the equivalence and the universal property against `st A` itself.
pub fn cmd_strictify(json: &str, arity_bound: usize, element_bound: usize) -> Result<StrictifyOutput> {
    positive("--arity-bound", arity_bound)?;
    positive("--element-bound", element_bound)?;
    let w = WeakPCategoryData::from_json(json)?;
    let mut reports = vec![w.validate(), coherence_check(&w, &CoherenceBounds::default())];
    let bounds = StrictifyBounds {
        arity_bound,
        element_bound,
        ..StrictifyBounds::default()
    };
    let s = strictify(&w, &bounds)?;
    reports.push(check_strictness(&s, &StrictnessBounds::default()));
    reports.push(check_equivalence(&s, &FunctorBounds::default()));
    reports.push(universal_property_check(&s, &s, &s.unit(), &UniversalBounds::default()));
    Ok(StrictifyOutput {
        name: w.name.clone(),
        elements: s.elements().len(),
        objects: crate::weakcat::Category::object_count(&s),
        unreached: s.unreached().to_vec(),
        passed: reports.iter().all(Report::passed),
        reports,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermOutput {
    pub result: Perm,
}

pub fn cmd_perm_block_compose(sigma: &str, blocks: &[String]) -> Result<PermOutput> {
    let sigma: Perm = sigma.parse()?;
    let blocks = blocks.iter().map(|b| b.parse()).collect::<Result<Vec<Perm>>>()?;
    Ok(PermOutput {
        result: block_compose(&sigma, &blocks)?,
    })
}

fn render<T: Serialize>(format: Format, value: &T, text: impl fmt::Display) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("payloads serialize"),
        Format::Text => text.to_string(),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidData(format!("{}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let fmt = cli.format;
    Ok(match &cli.command {
        Command::Classify { file } => {
            let out = cmd_classify(&read(file)?)?;
            (0, render(fmt, &out, &out))
        }
        Command::TermInfo { file, arity, term } => {
            let out = cmd_term_info(&read(file)?, *arity, term)?;
            (0, render(fmt, &out, &out))
        }
        Command::Eval {
            file,
            target,
            term,
            arity,
            flavor,
        } => {
            let name = if target.target == "none" { "terminal-plain" } else { &target.target };
            let out = cmd_eval(&read(file)?, name, &target.interp, term, *arity, *flavor)?;
            (0, render(fmt, &out, &out))
        }
        Command::Decide {
            file,
            target,
            t1,
            t2,
            budget,
        } => {
            let options = SaturationOptions {
                max_term_size: budget.max_size,
                max_steps: budget.steps,
            };
            let out = cmd_decide(&read(file)?, &target.target, &target.interp, t1, t2, options)?;
            let code = match out.verdict.decision {
                Decision::Yes => 0,
                Decision::No => 1,
                Decision::Unknown => 2,
            };
            (code, render(fmt, &out, &out))
        }
        Command::Classes {
            file,
            target,
            arity,
            max_size,
            steps,
        } => {
            let out = cmd_classes(&read(file)?, &target.target, &target.interp, *arity, *max_size, *steps)?;
            let code = if out.exhausted { 2 } else { 0 };
            (code, render(fmt, &out, ClassesText(&out)))
        }
        Command::Strictify {
            file,
            arity_bound,
            element_bound,
        } => {
            let out = cmd_strictify(&read(file)?, *arity_bound, *element_bound)?;
            (i32::from(!out.passed), render(fmt, &out, &out))
        }
        Command::Perm(PermCommand::BlockCompose { sigma, blocks }) => {
            let out = cmd_perm_block_compose(sigma, blocks)?;
            (0, render(fmt, &out, &out.result))
        }
    })
}

/// Caps rayon's global pool from [`THREADS_ENV`]; later calls are no-ops.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Runs the command line, writing the result to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    configure_threads();
    match dispatch(&cli) {
        Ok((code, text)) => {
            let _ = writeln!(out, "{text}");
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            3
        }
    }
}
