//! Deciding 2-cells of the weakening of a presented operad.
//!
//! Between two trees of the weakening there is exactly one invertible 2-cell
//! when they evaluate to the same element of the presented operad and none
//! otherwise, so the 2-categorical structure is represented by a decision
//! procedure. With a target interpretation the answer is exact; without one it
//! comes from bounded congruence closure and may be `unknown`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operads::{BuiltinOperad, Operad, PresentedOperad};
use crate::report::{Check, Report};
use crate::terms::{closure_saturate, Flavor, Presentation, Saturation, SaturationOptions, Term, TraceStep};
use crate::trees::{enumerate_permuted, enumerate_trees_of_arity, to_tree, PermutedTree};

/// Diagnostic for finite-product presentations.
pub const FP_DEGENERACY: &str = "the weakening of a finite-product operad is degenerate: \
     in any weak algebra for it the component τ_AA of the symmetry map is forced to be the \
     identity, so the finite-product flavor is not supported; present the theory with the \
     symmetric flavor instead";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Unknown => "unknown",
        })
    }
}

/// A decision with its evidence: the two target values in evaluable mode, a
/// merge chain in closure mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub decision: Decision,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
}

/// One equivalence class of trees; `key` is the common target element in
/// evaluable mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeClass {
    pub key: Option<String>,
    pub members: Vec<PermutedTree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classes {
    pub arity: usize,
    pub max_size: usize,
    pub classes: Vec<TreeClass>,
    /// Closure mode only: a saturation round budget ran out.
    pub exhausted: bool,
}

/// `Wk(P, φ)` as a decision procedure: a presentation, optionally with an
/// evaluable interpretation, and saturation budgets.
pub struct WeakeningContext<O: Operad> {
    presentation: Presentation,
    presented: Option<PresentedOperad<O>>,
    options: SaturationOptions,
    saturations: Mutex<HashMap<usize, Arc<Saturation>>>,
}

fn reject_fp(flavor: Flavor) -> Result<()> {
    if flavor == Flavor::Fp {
        return Err(Error::Unsupported(FP_DEGENERACY.into()));
    }
    Ok(())
}

impl<O: Operad> WeakeningContext<O> {
    /// Exact mode: trees are compared by evaluation.
    pub fn evaluable(presented: PresentedOperad<O>, options: SaturationOptions) -> Result<Self> {
        reject_fp(presented.flavor())?;
        Ok(WeakeningContext {
            presentation: presented.presentation.clone(),
            presented: Some(presented),
            options,
            saturations: Mutex::new(HashMap::new()),
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn presented(&self) -> Option<&PresentedOperad<O>> {
        self.presented.as_ref()
    }

    pub fn flavor(&self) -> Flavor {
        self.presentation.flavor
    }

    pub fn options(&self) -> SaturationOptions {
        self.options
    }

    fn check_tree(&self, t: &PermutedTree) -> Result<()> {
        t.tree.check(&self.presentation.signature)?;
        if self.flavor() == Flavor::Plain && !t.perm.is_identity() {
            return Err(Error::FlavorMismatch(format!(
                "{t} carries a permutation but {} is plain",
                self.presentation.name
            )));
        }
        Ok(())
    }

    /// The saturation of the arity-`n` fragment, computed once per arity.
    pub fn saturation(&self, n: usize) -> Result<Arc<Saturation>> {
        if let Some(s) = self.saturations.lock().expect("cache lock").get(&n) {
            return Ok(s.clone());
        }
        let sat = Arc::new(closure_saturate(
            &self.presentation.signature,
            &self.presentation.equations,
            n,
            self.options,
        )?);
        self.saturations
            .lock()
            .expect("cache lock")
            .entry(n)
            .or_insert(sat.clone());
        Ok(sat)
    }

    /// Whether there is a 2-cell `t1 → t2`.
    pub fn two_cell(&self, t1: &PermutedTree, t2: &PermutedTree) -> Result<Verdict> {
        self.check_tree(t1)?;
        self.check_tree(t2)?;
        if t1.arity() != t2.arity() {
            return Ok(Verdict {
                decision: Decision::No,
                reason: format!("arities {} and {} differ", t1.arity(), t2.arity()),
                trace: Vec::new(),
            });
        }
        match &self.presented {
            Some(p) => {
                let (a, b) = (p.eval_permuted(t1)?, p.eval_permuted(t2)?);
                let decision = if a == b { Decision::Yes } else { Decision::No };
                Ok(Verdict {
                    decision,
                    reason: format!("{} ↦ {a}, {} ↦ {b}", t1, t2),
                    trace: Vec::new(),
                })
            }
            None => self.two_cell_by_closure(t1, t2),
        }
    }

    /// The closure-mode answer regardless of the context's mode.
    pub fn two_cell_by_closure(&self, t1: &PermutedTree, t2: &PermutedTree) -> Result<Verdict> {
        let n = t1.arity();
        if n != t2.arity() {
            return Ok(Verdict {
                decision: Decision::No,
                reason: format!("arities {} and {} differ", n, t2.arity()),
                trace: Vec::new(),
            });
        }
        let (a, b) = (t1.to_term(), t2.to_term());
        if a == b {
            return Ok(Verdict {
                decision: Decision::Yes,
                reason: "identical terms".into(),
                trace: Vec::new(),
            });
        }
        let sat = self.saturation(n)?;
        Ok(match sat.same_class(&a, &b) {
            Some(true) => Verdict {
                decision: Decision::Yes,
                reason: format!("saturation merged {a} and {b}"),
                trace: sat.trace(&a, &b).unwrap_or_default(),
            },
            Some(false) => Verdict {
                decision: Decision::Unknown,
                reason: format!(
                    "not merged within term size {} after {} rounds{}",
                    self.options.max_term_size,
                    sat.rounds(),
                    if sat.exhausted() { " (budget exhausted)" } else { "" }
                ),
                trace: Vec::new(),
            },
            None => Verdict {
                decision: Decision::Unknown,
                reason: format!("a tree exceeds the term size bound {}", self.options.max_term_size),
                trace: Vec::new(),
            },
        })
    }

    /// Terms are read as trees at the given arity.
    pub fn two_cell_terms(&self, a: &Term, b: &Term, arity: usize) -> Result<Verdict> {
        let (ta, tb) = (self.term_tree(a, arity)?, self.term_tree(b, arity)?);
        self.two_cell(&ta, &tb)
    }

    /// A term as a tree of this context's flavor.
    pub fn term_tree(&self, t: &Term, arity: usize) -> Result<PermutedTree> {
        t.check(&self.presentation.signature)?;
        let ft = to_tree(t, arity)?;
        let perm = ft.fun.to_perm().ok_or_else(|| {
            Error::FlavorMismatch(format!("{t} is not linear at arity {arity}"))
        })?;
        let tree = PermutedTree::new(perm, ft.tree)?;
        self.check_tree(&tree)?;
        Ok(tree)
    }

    /// Trees of this context's flavor with the given arity and size bound.
    pub fn trees(&self, arity: usize, max_size: usize) -> Vec<PermutedTree> {
        let sig = &self.presentation.signature;
        match self.flavor() {
            Flavor::Plain => enumerate_trees_of_arity(sig, arity, max_size)
                .into_iter()
                .map(PermutedTree::plain)
                .collect(),
            _ => enumerate_permuted(sig, arity, max_size),
        }
    }
}

impl WeakeningContext<BuiltinOperad> {
    /// Saturation-only mode for a bare presentation.
    pub fn closure(presentation: Presentation, options: SaturationOptions) -> Result<Self> {
        reject_fp(presentation.flavor)?;
        Ok(WeakeningContext {
            presentation,
            presented: None,
            options,
            saturations: Mutex::new(HashMap::new()),
        })
    }
}

fn canonical(t: &PermutedTree) -> String {
    format!("{} {}", t.perm, t.tree.canonical())
}

fn sort_classes(mut classes: Vec<TreeClass>) -> Vec<TreeClass> {
    for c in &mut classes {
        c.members.sort_by_key(canonical);
    }
    classes.sort_by_key(|c| canonical(&c.members[0]));
    classes
}

impl<O: Operad + Sync> WeakeningContext<O>
where
    O::Elem: Send,
{
    /// All trees of `arity` and at most `max_size` nodes, partitioned by the
    /// 2-cell relation, sorted by canonical serialization.
    pub fn enumerate_classes(&self, arity: usize, max_size: usize) -> Result<Classes> {
        if max_size == 0 {
            return Err(Error::InvalidData("size bound must be positive".into()));
        }
        let trees = self.trees(arity, max_size);
        match &self.presented {
            Some(p) => {
                let values = trees
                    .par_iter()
                    .map(|t| p.eval_permuted(t))
                    .collect::<Result<Vec<_>>>()?;
                let mut groups: BTreeMap<O::Elem, Vec<PermutedTree>> = BTreeMap::new();
                for (t, v) in trees.into_iter().zip(values) {
                    groups.entry(v).or_default().push(t);
                }
                let classes = groups
                    .into_iter()
                    .map(|(k, members)| TreeClass {
                        key: Some(k.to_string()),
                        members,
                    })
                    .collect();
                Ok(Classes {
                    arity,
                    max_size,
                    classes: sort_classes(classes),
                    exhausted: false,
                })
            }
            None => {
                let sat = self.saturation(arity)?;
                let mut classes: Vec<TreeClass> = Vec::new();
                for t in trees {
                    let term = t.to_term();
                    let home = classes.iter_mut().find(|c| {
                        let other = c.members[0].to_term();
                        other == term || sat.same_class(&other, &term) == Some(true)
                    });
                    match home {
                        Some(c) => c.members.push(t),
                        None => classes.push(TreeClass {
                            key: None,
                            members: vec![t],
                        }),
                    }
                }
                Ok(Classes {
                    arity,
                    max_size,
                    classes: sort_classes(classes),
                    exhausted: sat.exhausted(),
                })
            }
        }
    }
}

/// Rewrites every generator `op(args)` of `t` as `translation[op](args)`.
pub fn translate_term(t: &Term, translation: &BTreeMap<String, Term>) -> Result<Term> {
    match t {
        Term::Var(i) => Ok(Term::Var(*i)),
        Term::App(op, args) => {
            let image = translation.get(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
            let args = args
                .iter()
                .map(|a| translate_term(a, translation))
                .collect::<Result<Vec<_>>>()?;
            image.graft(&args)
        }
    }
}

/// Bounds for [`biased_unbiased_agreement`].
#[derive(Clone, Copy, Debug)]
pub struct AgreementBounds {
    pub max_arity: usize,
    pub max_size: usize,
}

/// Two presentations of the same target operad: per arity, the sets of target
/// elements their trees reach must coincide, and when translations between
/// the generators are supplied, every pair of trees gets the same decision on
/// both sides.
pub fn biased_unbiased_agreement<O: Operad + Sync>(
    first: &WeakeningContext<O>,
    second: &WeakeningContext<O>,
    forward: Option<&BTreeMap<String, Term>>,
    backward: Option<&BTreeMap<String, Term>>,
    bounds: AgreementBounds,
) -> Result<Report>
where
    O::Elem: Send,
{
    let (Some(p), Some(q)) = (first.presented(), second.presented()) else {
        return Err(Error::Unsupported(
            "agreement needs two evaluable contexts".into(),
        ));
    };
    if p.target.name() != q.target.name() {
        return Err(Error::Validation(format!(
            "the presentations interpret into different targets ({} and {})",
            p.target.name(),
            q.target.name()
        )));
    }
    let mut report = Report::new(format!(
        "{} vs {} over {}",
        first.presentation().name,
        second.presentation().name,
        p.target.name()
    ));
    let mut images = Check::new("partition of target elements");
    for n in 0..=bounds.max_arity {
        let a = first.enumerate_classes(n, bounds.max_size)?;
        let b = second.enumerate_classes(n, bounds.max_size)?;
        let ka: BTreeSet<Option<String>> = a.classes.iter().map(|c| c.key.clone()).collect();
        let kb: BTreeSet<Option<String>> = b.classes.iter().map(|c| c.key.clone()).collect();
        images.record(ka == kb, || {
            let show = |s: &BTreeSet<Option<String>>| {
                s.iter().map(|k| k.clone().unwrap_or_default()).collect::<Vec<_>>().join(", ")
            };
            format!("arity {n}: {{{}}} vs {{{}}}", show(&ka), show(&kb))
        });
    }
    report.push(images);
    for (label, from, to, map) in [
        ("decisions agree (forward)", first, second, forward),
        ("decisions agree (backward)", second, first, backward),
    ] {
        let Some(map) = map else { continue };
        report.push(pairwise(label, from, to, map, bounds)?);
    }
    Ok(report)
}

fn pairwise<O: Operad + Sync>(
    label: &str,
    from: &WeakeningContext<O>,
    to: &WeakeningContext<O>,
    map: &BTreeMap<String, Term>,
    bounds: AgreementBounds,
) -> Result<Check> {
    let mut check = Check::new(label);
    for n in 0..=bounds.max_arity {
        let trees = from.trees(n, bounds.max_size);
        let images = trees
            .iter()
            .map(|t| {
                let term = translate_term(&t.to_term(), map)?;
                to.term_tree(&term, n)
            })
            .collect::<Result<Vec<_>>>()?;
        for i in 0..trees.len() {
            for j in i..trees.len() {
                let here = from.two_cell(&trees[i], &trees[j])?.decision;
                let there = to.two_cell(&images[i], &images[j])?.decision;
                check.record(here == there, || {
                    format!(
                        "{} vs {}: {here} but translated {} vs {}: {there}",
                        trees[i], trees[j], images[i], images[j]
                    )
                });
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_presentation;

    const COMM: &str = "theory CommMonoid\nflavor symmetric\nops:\n  m : 2\n  e : 0\neqs:\n  m(m(x1,x2),x3) = m(x1,m(x2,x3))\n  m(e,x1) = x1\n  m(x1,x2) = m(x2,x1)\n";

    fn comm_ctx() -> WeakeningContext<BuiltinOperad> {
        let pres = parse_presentation(COMM).unwrap();
        let target = BuiltinOperad::TerminalSymmetric;
        let interp = pres
            .signature
            .ops()
            .map(|(op, k)| (op.to_string(), target.default_interp(op, k).unwrap()))
            .collect();
        let p = PresentedOperad::new(pres, target, interp).unwrap();
        WeakeningContext::evaluable(p, SaturationOptions::default()).unwrap()
    }

    #[test]
    fn comm_monoid_two_cells() {
        let ctx = comm_ctx();
        let a = PermutedTree::parse("[1,2,3] m(|,m(|,|))").unwrap();
        let b = PermutedTree::parse("[2,3,1] m(m(|,|),|)").unwrap();
        assert_eq!(ctx.two_cell(&a, &b).unwrap().decision, Decision::Yes);
        let c = PermutedTree::parse("m(|,|)").unwrap();
        assert_eq!(ctx.two_cell(&a, &c).unwrap().decision, Decision::No);
        let by_closure = ctx.two_cell_by_closure(&a, &b).unwrap();
        assert_eq!(by_closure.decision, Decision::Yes);
        assert!(!by_closure.trace.is_empty());
        assert_eq!(ctx.enumerate_classes(2, 5).unwrap().classes.len(), 1);
    }

    #[test]
    fn closure_mode_is_sound_but_may_not_know() {
        let pres = parse_presentation(COMM).unwrap();
        let opts = SaturationOptions {
            max_term_size: 3,
            max_steps: 8,
        };
        let ctx = WeakeningContext::closure(pres, opts).unwrap();
        let a = ctx.term_tree(&crate::terms::parse_term("m(x1,x2)").unwrap(), 2).unwrap();
        let b = ctx.term_tree(&crate::terms::parse_term("m(x2,x1)").unwrap(), 2).unwrap();
        assert_eq!(ctx.two_cell(&a, &b).unwrap().decision, Decision::Yes);
        let big = PermutedTree::parse("m(m(|,|),m(|,|))").unwrap();
        let big2 = PermutedTree::parse("m(|,m(|,m(|,|)))").unwrap();
        assert_eq!(ctx.two_cell(&big, &big2).unwrap().decision, Decision::Unknown);
    }

    #[test]
    fn fp_is_rejected() {
        let pres = parse_presentation(&COMM.replace("symmetric", "fp")).unwrap();
        let err = WeakeningContext::closure(pres, SaturationOptions::default()).err().unwrap();
        assert!(err.to_string().contains("τ_AA"));
    }

    #[test]
    fn translation_grafts_images() {
        let map = BTreeMap::from([
            ("t2".to_string(), crate::terms::parse_term("m(x1,x2)").unwrap()),
            ("t0".to_string(), crate::terms::parse_term("e").unwrap()),
        ]);
        let t = crate::terms::parse_term("t2(t0,t2(x1,x2))").unwrap();
        assert_eq!(translate_term(&t, &map).unwrap().to_string(), "m(e,m(x1,x2))");
    }
}
