use std::collections::{BTreeMap, HashMap};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::category::{index_tuples, ArrowSpec, Category, FiniteCategory};
use crate::error::{Error, Result};
use crate::operads::{BuiltinOperad, PresentedOperad};
use crate::report::{Check, Report};
use crate::terms::{neighbours, parse_presentation, rewrite_path, Flavor, Presentation, RewriteStep, Term};
use crate::trees::{enumerate_permuted, enumerate_trees_of_arity, PermutedTree};

/// A category with an action of the generators of a presentation, one functor
/// `A^k → A` per `k`-ary generator, and a basic invertible cell for each
/// equation. The action may be partial when the category is a truncation of an
/// infinite one.
pub trait PCategory: Category {
    fn presentation(&self) -> &Presentation;

    fn act_obj(&self, op: &str, xs: &[usize]) -> Option<usize>;

    fn act_arr(&self, op: &str, fs: &[Self::Arr]) -> Option<Self::Arr>;

    /// Component at `xs` of the cell for equation `eq`, read left to right.
    fn delta(&self, eq: usize, xs: &[usize]) -> Option<Self::Arr>;

    /// Whether two terms denote the same operation, when that is known.
    fn same_element(&self, _a: &Term, _b: &Term, _arity: usize) -> Option<bool> {
        None
    }
}

fn outside(what: &str) -> Error {
    Error::BudgetExhausted(format!("{what} falls outside the enumerated fragment"))
}

/// The action of a term on objects: `x_i ↦ xs[i-1]`.
pub fn h_term<C: PCategory + ?Sized>(c: &C, t: &Term, xs: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => xs.get(i - 1).copied().ok_or(Error::VariableOutOfRange {
            index: *i,
            arity: xs.len(),
        }),
        Term::App(op, args) => {
            c.presentation()
                .signature
                .arity(op)
                .ok_or_else(|| Error::UnknownOp(op.clone()))?;
            let inner = args.iter().map(|a| h_term(c, a, xs)).collect::<Result<Vec<_>>>()?;
            c.act_obj(op, &inner).ok_or_else(|| outside(&format!("{t}")))
        }
    }
}

/// The action of a term on arrows.
pub fn h_term_arr<C: PCategory + ?Sized>(c: &C, t: &Term, fs: &[C::Arr]) -> Result<C::Arr> {
    match t {
        Term::Var(i) => fs.get(i - 1).copied().ok_or(Error::VariableOutOfRange {
            index: *i,
            arity: fs.len(),
        }),
        Term::App(op, args) => {
            let inner = args.iter().map(|a| h_term_arr(c, a, fs)).collect::<Result<Vec<_>>>()?;
            c.act_arr(op, &inner).ok_or_else(|| outside(&format!("{t}")))
        }
    }
}

/// `h(t, xs)`; the leaf acts as the identity.
pub fn derive_h<C: PCategory + ?Sized>(c: &C, t: &PermutedTree, xs: &[usize]) -> Result<usize> {
    if t.arity() != xs.len() {
        return Err(Error::ArityMismatch {
            expected: t.arity(),
            found: xs.len(),
        });
    }
    h_term(c, &t.to_term(), xs)
}

/// Budget for the rewrite search behind [`derive_delta`]: intermediate terms
/// may exceed the larger endpoint by `slack` nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathBounds {
    pub slack: usize,
    pub max_visits: usize,
}

impl Default for PathBounds {
    fn default() -> Self {
        PathBounds {
            slack: 2,
            max_visits: 20_000,
        }
    }
}

/// The arrow that one rewrite step of `term` induces at operands `xs`.
pub fn step_arrow<C: PCategory + ?Sized>(c: &C, term: &Term, step: &RewriteStep, xs: &[usize]) -> Result<C::Arr> {
    let b = step
        .substitution
        .iter()
        .map(|s| h_term(c, s, xs))
        .collect::<Result<Vec<_>>>()?;
    let basic = c
        .delta(step.equation, &b)
        .ok_or_else(|| outside(&format!("cell of equation {}", step.equation + 1)))?;
    let basic = if step.forward {
        basic
    } else {
        c.inverse(basic).ok_or_else(|| {
            Error::Validation(format!(
                "component {} of equation {} is not invertible",
                c.arrow_label(basic),
                step.equation + 1
            ))
        })?
    };
    whisker(c, term, &step.position, basic, xs)
}

fn whisker<C: PCategory + ?Sized>(c: &C, term: &Term, pos: &[usize], inner: C::Arr, xs: &[usize]) -> Result<C::Arr> {
    let Some((&j, rest)) = pos.split_first() else {
        return Ok(inner);
    };
    let Term::App(op, args) = term else {
        return Err(Error::InvalidData("rewrite position below a variable".into()));
    };
    let mut arrows = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        arrows.push(if i == j {
            whisker(c, a, rest, inner, xs)?
        } else {
            c.id(h_term(c, a, xs)?)
        });
    }
    c.act_arr(op, &arrows).ok_or_else(|| outside(&format!("{term}")))
}

/// The composite of step arrows along `path`, starting at `from`.
pub fn path_arrow<C: PCategory + ?Sized>(c: &C, from: &Term, path: &[RewriteStep], xs: &[usize]) -> Result<C::Arr> {
    let mut acc = c.id(h_term(c, from, xs)?);
    let mut cur = from;
    for step in path {
        let f = step_arrow(c, cur, step, xs)?;
        acc = c.compose(f, acc)?;
        cur = &step.result;
    }
    Ok(acc)
}

/// `δ_{t₁,t₂}` at `xs`, along the shortest rewrite path from `t₁` to `t₂`.
pub fn derive_delta<C: PCategory + ?Sized>(
    c: &C,
    t1: &PermutedTree,
    t2: &PermutedTree,
    xs: &[usize],
    bounds: &PathBounds,
) -> Result<C::Arr> {
    if t1.arity() != t2.arity() || t1.arity() != xs.len() {
        return Err(Error::ArityMismatch {
            expected: t1.arity(),
            found: if t1.arity() != t2.arity() { t2.arity() } else { xs.len() },
        });
    }
    derive_delta_terms(c, &t1.to_term(), &t2.to_term(), xs, bounds)
}

pub fn derive_delta_terms<C: PCategory + ?Sized>(
    c: &C,
    a: &Term,
    b: &Term,
    xs: &[usize],
    bounds: &PathBounds,
) -> Result<C::Arr> {
    let path = find_path(c, a, b, xs.len(), bounds)?;
    path_arrow(c, a, &path, xs)
}

pub(crate) fn find_path<C: PCategory + ?Sized>(
    c: &C,
    a: &Term,
    b: &Term,
    arity: usize,
    bounds: &PathBounds,
) -> Result<Vec<RewriteStep>> {
    if c.same_element(a, b, arity) == Some(false) {
        return Err(Error::Validation(format!("there is no 2-cell between {a} and {b}")));
    }
    let max_size = a.size().max(b.size()) + bounds.slack;
    rewrite_path(&c.presentation().equations, a, b, max_size, bounds.max_visits).ok_or_else(|| {
        Error::BudgetExhausted(format!(
            "no rewrite path from {a} to {b} within {max_size} nodes and {} visits",
            bounds.max_visits
        ))
    })
}

/// Bounds for [`coherence_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceBounds {
    pub max_arity: usize,
    pub max_size: usize,
    /// Tree pairs examined per arity.
    pub pairs: usize,
    /// Operand tuples per pair; all of them when there are at most this many.
    pub operands: usize,
    pub path: PathBounds,
    pub seed: u64,
}

impl Default for CoherenceBounds {
    fn default() -> Self {
        CoherenceBounds {
            max_arity: 4,
            max_size: 7,
            pairs: 48,
            operands: 64,
            path: PathBounds::default(),
            seed: 0x5eed,
        }
    }
}

fn show_path(from: &Term, path: &[RewriteStep]) -> String {
    let mut s = from.to_string();
    for step in path {
        s.push_str(&format!(" ⇒ {}", step.result));
    }
    s
}

pub(crate) fn trees_of<C: PCategory + ?Sized>(c: &C, arity: usize, max_size: usize) -> Vec<Term> {
    let p = c.presentation();
    match p.flavor {
        Flavor::Plain => enumerate_trees_of_arity(&p.signature, arity, max_size)
            .into_iter()
            .map(|t| PermutedTree::plain(t).to_term())
            .collect(),
        _ => enumerate_permuted(&p.signature, arity, max_size)
            .iter()
            .map(PermutedTree::to_term)
            .collect(),
    }
}

fn operand_tuples(n_objects: usize, arity: usize, limit: usize, rng: &mut StdRng) -> Vec<Vec<usize>> {
    use rand::Rng;
    let total = (n_objects as f64).powi(arity as i32);
    if total <= limit as f64 {
        index_tuples(n_objects, arity)
    } else {
        (0..limit)
            .map(|_| (0..arity).map(|_| rng.gen_range(0..n_objects)).collect())
            .collect()
    }
}

/// Path independence: for sampled pairs of trees joined by a 2-cell, every
/// alternative rewrite path (one per possible first step, plus the reversed
/// path) must induce the same arrow as the canonical one.
pub fn coherence_check<C>(c: &C, bounds: &CoherenceBounds) -> Report
where
    C: PCategory + Sync + ?Sized,
{
    let mut report = Report::new(format!("coherence of {}", c.presentation().name));
    let eqs = &c.presentation().equations;
    for arity in 0..=bounds.max_arity {
        let mut rng = StdRng::seed_from_u64(bounds.seed ^ arity as u64);
        let trees = trees_of(c, arity, bounds.max_size);
        let mut pairs = Vec::new();
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i + 1..] {
                if c.same_element(a, b, arity) != Some(false) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        pairs.shuffle(&mut rng);
        pairs.truncate(bounds.pairs);
        let tuples = operand_tuples(c.object_count(), arity, bounds.operands, &mut rng);
        let checks: Vec<Check> = pairs
            .par_iter()
            .map(|(a, b)| {
                let mut check = Check::new(format!("path independence (arity {arity})"));
                let Ok(main) = find_path(c, a, b, arity, &bounds.path) else {
                    return check;
                };
                let max_size = a.size().max(b.size()) + bounds.path.slack;
                let tree = bfs_tree(eqs, b, max_size, bounds.path.max_visits);
                let mut alternatives: Vec<Vec<RewriteStep>> = Vec::new();
                for first in neighbours(a, eqs, max_size) {
                    if main.first() == Some(&first) {
                        continue;
                    }
                    if let Some(rest) = path_to_root(&tree, &first.result) {
                        let mut p = vec![first];
                        p.extend(rest);
                        alternatives.push(p);
                    }
                }
                let back = rewrite_path(eqs, b, a, max_size, bounds.path.max_visits);
                for xs in &tuples {
                    let Ok(reference) = path_arrow(c, a, &main, xs) else { continue };
                    for alt in &alternatives {
                        let Ok(other) = path_arrow(c, a, alt, xs) else { continue };
                        check.record(other == reference, || {
                            format!(
                                "at ({}): {} gives {}, but {} gives {}",
                                labels(c, xs),
                                show_path(a, &main),
                                c.arrow_label(reference),
                                show_path(a, alt),
                                c.arrow_label(other)
                            )
                        });
                    }
                    if let Some(back) = &back {
                        if let Ok(rev) = path_arrow(c, b, back, xs) {
                            let ok = c.compose(rev, reference).ok() == Some(c.id(c.src(reference)));
                            check.record(ok, || {
                                format!(
                                    "at ({}): {} is not inverse to {}",
                                    labels(c, xs),
                                    show_path(b, back),
                                    show_path(a, &main)
                                )
                            });
                        }
                    }
                }
                check
            })
            .collect();
        let mut merged = Check::new(format!("path independence (arity {arity})"));
        for ch in checks {
            merged.absorb(ch);
        }
        report.push(merged);
    }
    report
}

/// Breadth-first tree of the rewrite graph around `root`: each reached term
/// maps to its parent and the step from the parent to it.
fn bfs_tree(eqs: &[crate::terms::Equation], root: &Term, max_size: usize, max_visits: usize) -> HashMap<Term, Option<(Term, RewriteStep)>> {
    let mut seen = HashMap::from([(root.clone(), None)]);
    let mut queue = std::collections::VecDeque::from([root.clone()]);
    let mut visits = 0;
    while let Some(t) = queue.pop_front() {
        visits += 1;
        if visits > max_visits {
            break;
        }
        for step in neighbours(&t, eqs, max_size) {
            if !seen.contains_key(&step.result) {
                queue.push_back(step.result.clone());
                seen.insert(step.result.clone(), Some((t.clone(), step)));
            }
        }
    }
    seen
}

/// The path from `t` to the root of a [`bfs_tree`], inverting the tree steps.
fn path_to_root(tree: &HashMap<Term, Option<(Term, RewriteStep)>>, t: &Term) -> Option<Vec<RewriteStep>> {
    let mut path = Vec::new();
    let mut cur = t.clone();
    loop {
        match tree.get(&cur)? {
            None => return Some(path),
            Some((parent, step)) => {
                path.push(RewriteStep {
                    position: step.position.clone(),
                    equation: step.equation,
                    forward: !step.forward,
                    substitution: step.substitution.clone(),
                    result: parent.clone(),
                });
                cur = parent.clone();
            }
        }
    }
}

pub(crate) fn labels<C: Category + ?Sized>(c: &C, xs: &[usize]) -> String {
    xs.iter().map(|&x| c.object_label(x)).collect::<Vec<_>>().join(",")
}

fn tuple_index(xs: &[usize], n: usize) -> usize {
    xs.iter().fold(0, |acc, &x| acc * n + x)
}

#[derive(Clone, Debug)]
struct GenFunctor {
    arity: usize,
    objects: Vec<usize>,
    arrows: Vec<usize>,
}

/// Finite data for a weak P-category over a builtin target: a base category,
/// functors for the generators and basic cells for the equations.
#[derive(Clone, Debug)]
pub struct WeakPCategoryData {
    pub name: String,
    pub base: FiniteCategory,
    pub presented: PresentedOperad<BuiltinOperad>,
    generators: BTreeMap<String, GenFunctor>,
    deltas: Vec<Vec<usize>>,
}

impl WeakPCategoryData {
    /// Tabulates the given maps and validates the result.
    pub fn tabulate(
        name: impl Into<String>,
        base: FiniteCategory,
        presented: PresentedOperad<BuiltinOperad>,
        obj: impl Fn(&str, &[usize]) -> usize,
        arr: impl Fn(&str, &[usize]) -> usize,
        delta: impl Fn(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let (n, m) = (base.object_count(), base.arrow_count());
        let generators = presented
            .presentation
            .signature
            .ops()
            .map(|(op, k)| {
                let g = GenFunctor {
                    arity: k,
                    objects: index_tuples(n, k).iter().map(|xs| obj(op, xs)).collect(),
                    arrows: index_tuples(m, k).iter().map(|fs| arr(op, fs)).collect(),
                };
                (op.to_string(), g)
            })
            .collect();
        let deltas = presented
            .presentation
            .equations
            .iter()
            .enumerate()
            .map(|(k, eq)| index_tuples(n, eq.arity).iter().map(|xs| delta(k, xs)).collect())
            .collect();
        Self::assemble(name.into(), base, presented, generators, deltas)
    }

    fn assemble(
        name: String,
        base: FiniteCategory,
        presented: PresentedOperad<BuiltinOperad>,
        generators: BTreeMap<String, GenFunctor>,
        deltas: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (n, m) = (base.object_count(), base.arrow_count());
        for g in generators.values() {
            if g.objects.iter().any(|&x| x >= n) || g.arrows.iter().any(|&f| f >= m) {
                return Err(Error::InvalidData("generator table out of range".into()));
            }
        }
        if deltas.iter().flatten().any(|&f| f >= m) {
            return Err(Error::InvalidData("delta component out of range".into()));
        }
        let w = WeakPCategoryData {
            name,
            base,
            presented,
            generators,
            deltas,
        };
        let report = w.validate();
        if let Some(failed) = report.failures().next() {
            return Err(Error::Validation(format!(
                "{}: {}",
                failed.law,
                failed.counterexample.clone().unwrap_or_default()
            )));
        }
        Ok(w)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presented.presentation
    }

    /// Exhaustive check of the invariants: generator functors are functors,
    /// cells have the right endpoints, are invertible and natural.
    pub fn validate(&self) -> Report {
        let mut report = Report::new(format!("weak P-category data {}", self.name));
        let b = &self.base;
        let (n, m) = (b.object_count(), b.arrow_count());
        let all_arrows: Vec<usize> = (0..m).collect();
        for (op, g) in &self.generators {
            let k = g.arity;
            let mut ends = Check::new(format!("{op} respects endpoints"));
            let mut ids = Check::new(format!("{op} preserves identities"));
            let mut comp = Check::new(format!("{op} preserves composites"));
            for fs in index_tuples(m, k) {
                let img = g.arrows[tuple_index(&fs, m)];
                let s: Vec<usize> = fs.iter().map(|&f| b.src(f)).collect();
                let d: Vec<usize> = fs.iter().map(|&f| b.dst(f)).collect();
                let ok = b.src(img) == g.objects[tuple_index(&s, n)] && b.dst(img) == g.objects[tuple_index(&d, n)];
                ends.record(ok, || format!("{op}({}) = {}", arrow_labels(b, &fs), b.arrow_label(img)));
                let outs: Vec<Vec<usize>> = fs
                    .iter()
                    .map(|&f| all_arrows.iter().copied().filter(|&h| b.src(h) == b.dst(f)).collect())
                    .collect();
                for hs in product(&outs) {
                    let composite: Vec<usize> = hs
                        .iter()
                        .zip(&fs)
                        .map(|(&h, &f)| b.compose(h, f).expect("composable"))
                        .collect();
                    let lhs = g.arrows[tuple_index(&composite, m)];
                    let rhs = b.compose(g.arrows[tuple_index(&hs, m)], img);
                    comp.record(rhs.ok() == Some(lhs), || {
                        format!("{op} at ({}) after ({})", arrow_labels(b, &hs), arrow_labels(b, &fs))
                    });
                }
            }
            for xs in index_tuples(n, k) {
                let idt: Vec<usize> = xs.iter().map(|&x| b.id(x)).collect();
                let img = g.arrows[tuple_index(&idt, m)];
                ids.record(img == b.id(g.objects[tuple_index(&xs, n)]), || {
                    format!("{op}(identities at {}) = {}", labels(b, &xs), b.arrow_label(img))
                });
            }
            report.push(ends);
            report.push(ids);
            report.push(comp);
        }
        for (k, eq) in self.presentation().equations.iter().enumerate() {
            let key = format!("{}={}", eq.lhs, eq.rhs);
            let mut ends = Check::new(format!("cell {key}: endpoints"));
            let mut inv = Check::new(format!("cell {key}: invertible"));
            let mut nat = Check::new(format!("cell {key}: naturality"));
            for xs in index_tuples(n, eq.arity) {
                let d = self.deltas[k][tuple_index(&xs, n)];
                let want = (h_term(self, &eq.lhs, &xs), h_term(self, &eq.rhs, &xs));
                let ok = want.0.as_ref().ok() == Some(&b.src(d)) && want.1.as_ref().ok() == Some(&b.dst(d));
                ends.record(ok, || format!("component at ({}) is {}", labels(b, &xs), b.arrow_label(d)));
                inv.record(b.inverse(d).is_some(), || {
                    format!("component at ({}) is {}", labels(b, &xs), b.arrow_label(d))
                });
            }
            if ends.passed {
                for fs in index_tuples(m, eq.arity) {
                    let s: Vec<usize> = fs.iter().map(|&f| b.src(f)).collect();
                    let d: Vec<usize> = fs.iter().map(|&f| b.dst(f)).collect();
                    let ds = self.deltas[k][tuple_index(&s, n)];
                    let dd = self.deltas[k][tuple_index(&d, n)];
                    let left = h_term_arr(self, &eq.lhs, &fs).and_then(|l| b.compose(dd, l));
                    let right = h_term_arr(self, &eq.rhs, &fs).and_then(|r| b.compose(r, ds));
                    nat.record(left.is_ok() && left == right, || format!("at ({})", arrow_labels(b, &fs)));
                }
            }
            report.push(ends);
            report.push(inv);
            report.push(nat);
        }
        report
    }

    /// True when every cell component is an identity.
    pub fn is_strict(&self) -> bool {
        self.deltas
            .iter()
            .flatten()
            .all(|&d| self.base.src(d) == self.base.dst(d) && self.base.id(self.base.src(d)) == d)
    }

    /// Replaces one cell component, for building deliberately broken data.
    /// The result is not validated.
    pub fn with_delta_unchecked(&self, eq: usize, xs: &[usize], arrow: usize) -> Self {
        let mut w = self.clone();
        let idx = tuple_index(xs, self.base.object_count());
        w.deltas[eq][idx] = arrow;
        w
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WeakCatFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidData(format!("weak category JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_file(file: WeakCatFile) -> Result<Self> {
        let presentation = parse_presentation(&file.theory)?;
        let presented = PresentedOperad::builtin(presentation, &file.target, &file.interp)?;
        let identities: HashMap<String, String> = file.identities.into_iter().collect();
        let mut compose = HashMap::new();
        for (key, h) in file.compose {
            let (g, f) = key
                .split_once('∘')
                .ok_or_else(|| Error::InvalidData(format!("compose key `{key}` is not of the form `g∘f`")))?;
            compose.insert((g.trim().to_string(), f.trim().to_string()), h);
        }
        let base = FiniteCategory::new(file.objects, file.arrows, &identities, &compose)?;
        let (n, m) = (base.object_count(), base.arrow_count());
        let obj = |name: &str| {
            base.object_index(name)
                .ok_or_else(|| Error::InvalidData(format!("unknown object `{name}`")))
        };
        let arr = |name: &str| {
            base.arrow_index(name)
                .ok_or_else(|| Error::InvalidData(format!("unknown arrow `{name}`")))
        };
        let sig = &presented.presentation.signature;
        let mut generators = BTreeMap::new();
        for (op, k) in sig.ops() {
            let g = file
                .generators
                .get(op)
                .ok_or_else(|| Error::InvalidData(format!("generator `{op}` has no functor")))?;
            let objects = index_tuples(n, k)
                .iter()
                .map(|xs| {
                    let key = labels(&base, xs);
                    g.obj_map
                        .get(&key)
                        .ok_or_else(|| Error::InvalidData(format!("{op}: obj_map has no entry `{key}`")))
                        .and_then(|v| obj(v))
                })
                .collect::<Result<Vec<_>>>()?;
            let arrows = index_tuples(m, k)
                .iter()
                .map(|fs| {
                    let key = arrow_labels(&base, fs);
                    g.arr_map
                        .get(&key)
                        .ok_or_else(|| Error::InvalidData(format!("{op}: arr_map has no entry `{key}`")))
                        .and_then(|v| arr(v))
                })
                .collect::<Result<Vec<_>>>()?;
            generators.insert(op.to_string(), GenFunctor { arity: k, objects, arrows });
        }
        if let Some(extra) = file.generators.keys().find(|op| sig.arity(op).is_none()) {
            return Err(Error::UnknownOp(extra.clone()));
        }
        let mut components: HashMap<(String, String), String> = HashMap::new();
        for (key, entry) in file.deltas {
            match entry {
                DeltaEntry::Component(a) => {
                    let (cell, operands) = key.split_once('@').ok_or_else(|| {
                        Error::InvalidData(format!("delta key `{key}` needs `@operands` or a nested map"))
                    })?;
                    components.insert((strip(cell), strip(operands)), a);
                }
                DeltaEntry::Family(map) => {
                    for (operands, a) in map {
                        components.insert((strip(&key), strip(&operands)), a);
                    }
                }
            }
        }
        let mut deltas = Vec::new();
        for eq in &presented.presentation.equations {
            let cell = format!("{}={}", eq.lhs, eq.rhs);
            let family = index_tuples(n, eq.arity)
                .iter()
                .map(|xs| {
                    let key = labels(&base, xs);
                    components
                        .remove(&(cell.clone(), key.clone()))
                        .ok_or_else(|| Error::InvalidData(format!("no delta component for `{cell}@{key}`")))
                        .and_then(|a| arr(&a))
                })
                .collect::<Result<Vec<_>>>()?;
            deltas.push(family);
        }
        if let Some(((cell, operands), _)) = components.into_iter().next() {
            return Err(Error::InvalidData(format!(
                "delta component `{cell}@{operands}` matches no equation instance"
            )));
        }
        Self::assemble(file.name, base, presented, generators, deltas)
    }

    pub fn to_file(&self) -> WeakCatFile {
        let b = &self.base;
        let (n, m) = (b.object_count(), b.arrow_count());
        let generators = self
            .generators
            .iter()
            .map(|(op, g)| {
                let obj_map = index_tuples(n, g.arity)
                    .iter()
                    .map(|xs| (labels(b, xs), b.object_label(g.objects[tuple_index(xs, n)])))
                    .collect();
                let arr_map = index_tuples(m, g.arity)
                    .iter()
                    .map(|fs| (arrow_labels(b, fs), b.arrow_label(g.arrows[tuple_index(fs, m)])))
                    .collect();
                (op.clone(), GeneratorFile { obj_map, arr_map })
            })
            .collect();
        let deltas = self
            .presentation()
            .equations
            .iter()
            .zip(&self.deltas)
            .map(|(eq, family)| {
                let map = index_tuples(n, eq.arity)
                    .iter()
                    .map(|xs| (labels(b, xs), b.arrow_label(family[tuple_index(xs, n)])))
                    .collect();
                (format!("{}={}", eq.lhs, eq.rhs), DeltaEntry::Family(map))
            })
            .collect();
        let interp = self
            .presented
            .interp
            .iter()
            .map(|(op, e)| (op.clone(), e.to_string()))
            .collect();
        WeakCatFile {
            name: self.name.clone(),
            theory: self.presentation().to_text(),
            target: target_name(&self.presented.target).to_string(),
            interp,
            objects: b.objects().to_vec(),
            arrows: b.arrow_specs(),
            compose: b
                .composition_table()
                .into_iter()
                .map(|((g, f), h)| (format!("{}∘{}", b.arrow_label(g), b.arrow_label(f)), b.arrow_label(h)))
                .collect(),
            identities: (0..n).map(|x| (b.object_label(x), b.arrow_label(b.id(x)))).collect(),
            generators,
            deltas,
        }
    }
}

fn strip(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn target_name(t: &BuiltinOperad) -> &'static str {
    match t {
        BuiltinOperad::TerminalPlain => "terminal-plain",
        BuiltinOperad::TerminalSymmetric => "terminal-symmetric",
        BuiltinOperad::Initial => "initial",
        BuiltinOperad::Symmetries => "symmetries",
        BuiltinOperad::CommMonoidFp => "comm-monoid-fp",
        BuiltinOperad::IntPolyFp => "int-poly-fp",
        BuiltinOperad::Free(..) => "free",
    }
}

pub(crate) fn arrow_labels<C: Category + ?Sized>(c: &C, fs: &[C::Arr]) -> String {
    fs.iter().map(|&f| c.arrow_label(f)).collect::<Vec<_>>().join(",")
}

pub(crate) fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|p| {
                opts.iter().map(move |o| {
                    let mut v = p.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    out
}

impl Category for WeakPCategoryData {
    type Arr = usize;

    fn object_count(&self) -> usize {
        self.base.object_count()
    }

    fn object_label(&self, x: usize) -> String {
        self.base.object_label(x)
    }

    fn arrow_label(&self, f: usize) -> String {
        self.base.arrow_label(f)
    }

    fn src(&self, f: usize) -> usize {
        self.base.src(f)
    }

    fn dst(&self, f: usize) -> usize {
        self.base.dst(f)
    }

    fn id(&self, x: usize) -> usize {
        self.base.id(x)
    }

    fn compose(&self, g: usize, f: usize) -> Result<usize> {
        self.base.compose(g, f)
    }

    fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.base.hom(x, y)
    }

    fn inverse(&self, f: usize) -> Option<usize> {
        self.base.inverse(f)
    }
}

impl PCategory for WeakPCategoryData {
    fn presentation(&self) -> &Presentation {
        &self.presented.presentation
    }

    fn act_obj(&self, op: &str, xs: &[usize]) -> Option<usize> {
        let g = self.generators.get(op)?;
        (g.arity == xs.len()).then(|| g.objects[tuple_index(xs, self.base.object_count())])
    }

    fn act_arr(&self, op: &str, fs: &[usize]) -> Option<usize> {
        let g = self.generators.get(op)?;
        (g.arity == fs.len()).then(|| g.arrows[tuple_index(fs, self.base.arrow_count())])
    }

    fn delta(&self, eq: usize, xs: &[usize]) -> Option<usize> {
        let arity = self.presentation().equations.get(eq)?.arity;
        (arity == xs.len()).then(|| self.deltas[eq][tuple_index(xs, self.base.object_count())])
    }

    fn same_element(&self, a: &Term, b: &Term, arity: usize) -> Option<bool> {
        Some(self.presented.eval_term(a, arity).ok()? == self.presented.eval_term(b, arity).ok()?)
    }
}

/// On-disk form of [`WeakPCategoryData`].
///
/// * `theory` is a presentation in the `.th` text format and `target` a
///   builtin target name; `interp` optionally overrides generator images.
/// * `compose` keys are `"g∘f"`; `identities` maps objects to arrows.
/// * `generators.<op>.obj_map` keys are comma-joined object tuples (`""` for
///   a constant), `arr_map` keys comma-joined arrow tuples.
/// * `deltas` keys are `"lhs=rhs"` exactly as the equation is written with
///   spaces removed, mapping comma-joined operand tuples to arrows; a flat
///   entry `"lhs=rhs@a,b,c": arrow` is accepted too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakCatFile {
    pub name: String,
    pub theory: String,
    pub target: String,
    #[serde(default)]
    pub interp: BTreeMap<String, String>,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub compose: BTreeMap<String, String>,
    pub identities: BTreeMap<String, String>,
    pub generators: BTreeMap<String, GeneratorFile>,
    pub deltas: BTreeMap<String, DeltaEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub obj_map: BTreeMap<String, String>,
    pub arr_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaEntry {
    Component(String),
    Family(BTreeMap<String, String>),
}
