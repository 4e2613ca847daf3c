use std::collections::{BTreeMap, BTreeSet};

use super::{BuiltinOperad, Operad};
use crate::error::{Error, Result};
use crate::finmaps::FinFunction;
use crate::report::{Check, Report};
use crate::terms::{Equation, Flavor, Presentation, Term};
use crate::trees::{enumerate_trees, to_tree, FPTree, PermutedTree, SRTree};

/// A presentation together with an interpretation of its generators in a
/// target operad. Evaluation is the map out of the free operad that the
/// interpretation determines.
#[derive(Clone, Debug)]
pub struct PresentedOperad<O: Operad> {
    pub presentation: Presentation,
    pub target: O,
    pub interp: BTreeMap<String, O::Elem>,
}

/// Bounds for checking that evaluation hits every enumerable target element.
#[derive(Clone, Copy, Debug)]
pub struct SurjectivityCheck {
    pub max_arity: usize,
    pub max_size: usize,
    pub element_bound: usize,
}

impl<O: Operad> PresentedOperad<O> {
    /// Builds and validates: every generator is interpreted at its arity and
    /// every equation holds in the target.
    pub fn new(presentation: Presentation, target: O, interp: BTreeMap<String, O::Elem>) -> Result<Self> {
        let p = Self::unchecked(presentation, target, interp)?;
        let report = validate_interpretation(&p, None);
        if let Some(failed) = report.failures().next() {
            return Err(Error::Validation(format!(
                "{}: {}",
                failed.law,
                failed.counterexample.clone().unwrap_or_default()
            )));
        }
        Ok(p)
    }

    /// Checks flavors and arities but not the equations.
    pub fn unchecked(presentation: Presentation, target: O, interp: BTreeMap<String, O::Elem>) -> Result<Self> {
        if target.flavor() < presentation.flavor {
            return Err(Error::FlavorMismatch(format!(
                "a {} presentation needs a target with at least {} structure; {} is {}",
                presentation.flavor,
                presentation.flavor,
                target.name(),
                target.flavor()
            )));
        }
        for (op, arity) in presentation.signature.ops() {
            let elem = interp
                .get(op)
                .ok_or_else(|| Error::Validation(format!("generator `{op}` has no interpretation")))?;
            if target.arity(elem) != arity {
                return Err(Error::Validation(format!(
                    "generator `{op}` of arity {arity} interpreted as {elem} of arity {}",
                    target.arity(elem)
                )));
            }
        }
        if let Some(extra) = interp.keys().find(|k| presentation.signature.arity(k).is_none()) {
            return Err(Error::UnknownOp(extra.clone()));
        }
        Ok(PresentedOperad {
            presentation,
            target,
            interp,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.presentation.flavor
    }

    /// `| ↦ 1` and `op(τ_1, …, τ_k) ↦ φ(op) ∘ (ε τ_1, …, ε τ_k)`.
    pub fn eval_tree(&self, t: &SRTree) -> Result<O::Elem> {
        match t {
            SRTree::Leaf => Ok(self.target.identity()),
            SRTree::Node(op, children) => {
                let head = self.interp.get(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
                if children.len() != self.target.arity(head) {
                    return Err(Error::ArityMismatch {
                        expected: self.target.arity(head),
                        found: children.len(),
                    });
                }
                let args = children
                    .iter()
                    .map(|c| self.eval_tree(c))
                    .collect::<Result<Vec<_>>>()?;
                self.target.compose(head, &args)
            }
        }
    }

    /// `(σ, t) ↦ σ·ε(t)`. A plain operad accepts only identity permutations.
    pub fn eval_permuted(&self, t: &PermutedTree) -> Result<O::Elem> {
        if t.perm.is_identity() {
            return self.eval_tree(&t.tree);
        }
        if self.flavor() == Flavor::Plain {
            return Err(Error::FlavorMismatch(
                "permuted trees are not elements of a plain free operad".into(),
            ));
        }
        self.target.act_perm(&t.perm, &self.eval_tree(&t.tree)?)
    }

    /// `(f, t) ↦ f·ε(t)`.
    pub fn eval_fp(&self, t: &FPTree) -> Result<O::Elem> {
        self.eval_labelled(&t.fun, &t.tree)
    }

    fn eval_labelled(&self, fun: &FinFunction, tree: &SRTree) -> Result<O::Elem> {
        let inner = self.eval_tree(tree)?;
        if fun.is_identity() {
            return Ok(inner);
        }
        match fun.to_perm() {
            Some(perm) if self.flavor() >= Flavor::Symmetric => self.target.act_perm(&perm, &inner),
            _ if self.flavor() == Flavor::Fp => self.target.act_fn(fun, &inner),
            _ => Err(Error::FlavorMismatch(format!(
                "labelling {fun} is not available in a {} operad",
                self.flavor()
            ))),
        }
    }

    /// Evaluates an `arity`-ary term through its tree.
    pub fn eval_term(&self, t: &Term, arity: usize) -> Result<O::Elem> {
        t.check(&self.presentation.signature)?;
        self.eval_fp(&to_tree(t, arity)?)
    }

    fn equation_sides(&self, eq: &Equation) -> Result<(O::Elem, O::Elem)> {
        Ok((self.eval_term(&eq.lhs, eq.arity)?, self.eval_term(&eq.rhs, eq.arity)?))
    }
}

impl PresentedOperad<BuiltinOperad> {
    /// Resolves a builtin target by name. Generators missing from `explicit`
    /// get the target's default interpretation.
    pub fn builtin(presentation: Presentation, target: &str, explicit: &BTreeMap<String, String>) -> Result<Self> {
        let t = BuiltinOperad::by_name(target, &presentation.signature, presentation.flavor)?;
        if let Some(extra) = explicit.keys().find(|k| presentation.signature.arity(k).is_none()) {
            return Err(Error::UnknownOp(extra.clone()));
        }
        let mut interp = BTreeMap::new();
        for (op, k) in presentation.signature.ops() {
            let elem = match explicit.get(op) {
                Some(text) => t.parse_elem(text)?,
                None => t.default_interp(op, k)?,
            };
            interp.insert(op.to_string(), elem);
        }
        Self::new(presentation, t, interp)
    }
}

/// Evaluates both sides of every equation, and optionally checks that
/// evaluation reaches every element the target can enumerate.
pub fn validate_interpretation<O: Operad>(
    p: &PresentedOperad<O>,
    surjectivity: Option<&SurjectivityCheck>,
) -> Report {
    let mut report = Report::new(format!(
        "interpretation of {} in {}",
        p.presentation.name,
        p.target.name()
    ));
    for eq in &p.presentation.equations {
        let mut check = Check::new(format!("equation {eq}"));
        match p.equation_sides(eq) {
            Ok((l, r)) => check.record(l == r, || format!("lhs ↦ {l}, rhs ↦ {r}")),
            Err(e) => check.fail(e.to_string()),
        }
        report.push(check);
    }
    if let Some(bounds) = surjectivity {
        report.push(surjectivity_check(p, bounds));
    }
    report
}

fn surjectivity_check<O: Operad>(p: &PresentedOperad<O>, b: &SurjectivityCheck) -> Check {
    let mut check = Check::new("surjectivity");
    let trees = enumerate_trees(&p.presentation.signature, b.max_size);
    for arity in 0..=b.max_arity {
        let Some(elements) = p.target.enumerate(arity, b.element_bound) else {
            continue;
        };
        let mut hit = BTreeSet::new();
        for tree in &trees {
            let labels: Vec<FinFunction> = match p.flavor() {
                Flavor::Plain if tree.arity() == arity => vec![FinFunction::identity(arity)],
                Flavor::Plain => Vec::new(),
                Flavor::Symmetric if tree.arity() == arity => crate::finmaps::Perm::all(arity)
                    .into_iter()
                    .map(|s| s.into_fn())
                    .collect(),
                Flavor::Symmetric => Vec::new(),
                Flavor::Fp => FinFunction::all(tree.arity(), arity),
            };
            for f in labels {
                if let Ok(e) = p.eval_labelled(&f, tree) {
                    hit.insert(e);
                }
            }
        }
        let missing: Vec<String> = elements
            .iter()
            .filter(|e| !hit.contains(*e))
            .map(|e| e.to_string())
            .collect();
        check.record(missing.is_empty(), || {
            format!("arity {arity}: not reached {}", missing.join(", "))
        });
    }
    check
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmaps::Perm;
    use crate::operads::{
        CommMonoidFPOperad, InitialOperad, Multiplicities, SymmetryOperad, TerminalPlainOperad,
        TerminalSymmetricOperad,
    };
    use crate::terms::parse_presentation;

    const MONOID: &str = "theory Monoid\nflavor plain\nops:\n  m : 2\n  e : 0\neqs:\n  m(m(x1,x2),x3) = m(x1,m(x2,x3))\n  m(e,x1) = x1\n  m(x1,e) = x1\n";
    const COMM: &str = "theory CommMonoid\nflavor symmetric\nops:\n  m : 2\n  e : 0\neqs:\n  m(m(x1,x2),x3) = m(x1,m(x2,x3))\n  m(e,x1) = x1\n  m(x1,x2) = m(x2,x1)\n";

    #[test]
    fn monoid_into_terminal() {
        let pres = parse_presentation(MONOID).unwrap();
        let interp = BTreeMap::from([("m".to_string(), 2), ("e".to_string(), 0)]);
        let p = PresentedOperad::new(pres, TerminalPlainOperad, interp).unwrap();
        assert_eq!(p.eval_tree(&SRTree::Leaf).unwrap(), 1);
        let t = SRTree::parse("m(m(|,e),m(|,|))").unwrap();
        assert_eq!(p.eval_tree(&t).unwrap(), t.arity());
        let s = SurjectivityCheck {
            max_arity: 3,
            max_size: 7,
            element_bound: 1,
        };
        assert!(validate_interpretation(&p, Some(&s)).passed());
    }

    #[test]
    fn commutativity_fails_in_symmetries() {
        let pres = parse_presentation(COMM).unwrap();
        let interp = BTreeMap::from([
            ("m".to_string(), Perm::identity(2)),
            ("e".to_string(), Perm::identity(0)),
        ]);
        let err = PresentedOperad::new(pres.clone(), SymmetryOperad, interp.clone()).unwrap_err();
        assert!(err.to_string().contains("m(x1,x2) = m(x2,x1)"), "{err}");
        let p = PresentedOperad::unchecked(pres, SymmetryOperad, interp).unwrap();
        let r = validate_interpretation(&p, None);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn comm_monoid_permuted_evaluation() {
        let pres = parse_presentation(COMM).unwrap();
        let interp = BTreeMap::from([("m".to_string(), 2), ("e".to_string(), 0)]);
        let p = PresentedOperad::new(pres, TerminalSymmetricOperad, interp).unwrap();
        let t = PermutedTree::parse("[3,1,2] m(|,m(|,|))").unwrap();
        assert_eq!(p.eval_permuted(&t).unwrap(), 3);
    }

    #[test]
    fn empty_presentation_into_initial() {
        let pres = Presentation::new("Sets", Default::default(), Vec::new(), Flavor::Symmetric).unwrap();
        assert!(PresentedOperad::new(pres, InitialOperad, BTreeMap::new()).is_ok());
    }

    #[test]
    fn fp_labels_act_by_functions() {
        let pres = parse_presentation(&COMM.replace("symmetric", "fp")).unwrap();
        let interp = BTreeMap::from([
            ("m".to_string(), Multiplicities(vec![1, 1])),
            ("e".to_string(), Multiplicities(vec![])),
        ]);
        let p = PresentedOperad::new(pres, CommMonoidFPOperad, interp).unwrap();
        let t = crate::terms::parse_term("m(x1,m(x2,x2))").unwrap();
        assert_eq!(p.eval_term(&t, 3).unwrap(), Multiplicities(vec![1, 2, 0]));
    }

    #[test]
    fn flavor_and_arity_checked() {
        let pres = parse_presentation(COMM).unwrap();
        let interp = BTreeMap::from([("m".to_string(), 2), ("e".to_string(), 0)]);
        assert!(PresentedOperad::new(pres.clone(), TerminalPlainOperad, interp).is_err());
        let bad = BTreeMap::from([("m".to_string(), 3), ("e".to_string(), 0)]);
        assert!(PresentedOperad::new(pres, TerminalSymmetricOperad, bad).is_err());
    }
}
