//! Signatures, terms, equations and presentations.
//!
//! Variables are written `x1, x2, …` and are 1-indexed. The size of a term is its
//! number of nodes; variables and applications both count one.

mod closure;
mod parse;
mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmaps::FinFunction;

pub use closure::{closure_saturate, MergeReason, Saturation, SaturationOptions, TermClass, TraceStep};
pub use parse::{parse_presentation, parse_term};
pub(crate) use parse::Cursor;
pub use rewrite::{rewrite_path, RewriteStep};
pub(crate) use rewrite::neighbours;

/// An arity-indexed family of operation names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    ops: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ops<I, S>(ops: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut sig = Signature::new();
        for (name, arity) in ops {
            sig.add(name, arity)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        if !is_op_name(&name) {
            return Err(Error::InvalidData(format!("`{name}` is not a valid operation name")));
        }
        if self.ops.contains_key(&name) {
            return Err(Error::InvalidData(format!("operation `{name}` declared twice")));
        }
        self.ops.insert(name, arity);
        Ok(())
    }

    pub fn arity(&self, op: &str) -> Option<usize> {
        self.ops.get(op).copied()
    }

    /// Operations in name order.
    pub fn ops(&self) -> impl Iterator<Item = (&str, usize)> {
        self.ops.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

pub(crate) fn is_op_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !(first.is_alphabetic() || first == '_') {
        return false;
    }
    if is_var_name(name) {
        return false;
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn is_var_name(name: &str) -> bool {
    name.strip_prefix('x')
        .is_some_and(|d| !d.is_empty() && !d.starts_with('0') && d.bytes().all(|b| b.is_ascii_digit()))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

/// How far a term's labelling function is from the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    StronglyRegular,
    Linear,
    General,
}

impl Classification {
    /// The weaker of two classes.
    pub fn meet(self, other: Classification) -> Classification {
        self.max(other)
    }

    pub fn of_label(label: &FinFunction) -> Classification {
        if label.is_identity() {
            Classification::StronglyRegular
        } else if label.is_bijection() {
            Classification::Linear
        } else {
            Classification::General
        }
    }

    pub fn is_linear(self) -> bool {
        self <= Classification::Linear
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::StronglyRegular => "strongly_regular",
            Classification::Linear => "linear",
            Classification::General => "general",
        })
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    pub fn constant(op: impl Into<String>) -> Term {
        Term::App(op.into(), Vec::new())
    }

    /// Variable occurrences, left to right.
    pub fn var_seq(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(i) => out.push(*i),
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.var_seq().into_iter().collect()
    }

    pub fn max_var(&self) -> usize {
        self.var_seq().into_iter().max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(0) => Err(Error::InvalidData("variable index 0".into())),
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = sig.arity(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    fn check_support(&self, n: usize) -> Result<()> {
        match self.var_seq().into_iter().find(|&i| i > n) {
            Some(index) => Err(Error::VariableOutOfRange { index, arity: n }),
            None => Ok(()),
        }
    }

    /// `j ↦` the `j`-th entry of [`Term::var_seq`], as a map into `⟦n⟧`.
    pub fn label_fn(&self, n: usize) -> Result<FinFunction> {
        self.check_support(n)?;
        FinFunction::new(self.var_seq(), n)
    }

    pub fn classify(&self, n: usize) -> Result<Classification> {
        Ok(Classification::of_label(&self.label_fn(n)?))
    }

    /// Simultaneous substitution `x_i ↦ subs[i-1]`.
    pub fn graft(&self, subs: &[Term]) -> Result<Term> {
        self.check_support(subs.len())?;
        Ok(self.graft_unchecked(subs))
    }

    pub(crate) fn graft_unchecked(&self, subs: &[Term]) -> Term {
        match self {
            Term::Var(i) => subs[i - 1].clone(),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.graft_unchecked(subs)).collect())
            }
        }
    }

    /// Renames variables through `f`.
    pub fn relabel(&self, f: &FinFunction) -> Result<Term> {
        let subs: Vec<Term> = f.table().iter().map(|&v| Term::Var(v)).collect();
        self.graft(&subs)
    }

    /// Subterm positions in preorder, as child-index paths.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(path.clone());
        if let Term::App(_, args) = self {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                a.collect_positions(path, out);
                path.pop();
            }
        }
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.subterm(rest),
                Term::Var(_) => None,
            },
        }
    }

    pub fn replace_at(&self, path: &[usize], replacement: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(replacement),
            Some((&i, rest)) => match self {
                Term::App(op, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, replacement)?;
                    Some(Term::App(op.clone(), args))
                }
                _ => None,
            },
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(op, args) if args.is_empty() => f.write_str(op),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn var_seq(t: &Term) -> Vec<usize> {
    t.var_seq()
}

pub fn support(t: &Term) -> BTreeSet<usize> {
    t.support()
}

pub fn label_fn(t: &Term, n: usize) -> Result<FinFunction> {
    t.label_fn(n)
}

pub fn classify_term(t: &Term, n: usize) -> Result<Classification> {
    t.classify(n)
}

pub fn graft_term(t: &Term, subs: &[Term]) -> Result<Term> {
    t.graft(subs)
}

/// An `n`-ary equation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Equation {
    pub arity: usize,
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(arity: usize, lhs: Term, rhs: Term) -> Result<Self> {
        lhs.check_support(arity)?;
        rhs.check_support(arity)?;
        Ok(Equation { arity, lhs, rhs })
    }

    /// Arity defaults to the largest variable index on either side.
    pub fn inferred(lhs: Term, rhs: Term) -> Self {
        let arity = lhs.max_var().max(rhs.max_var());
        Equation { arity, lhs, rhs }
    }

    pub fn classify(&self) -> Result<Classification> {
        Ok(self.lhs.classify(self.arity)?.meet(self.rhs.classify(self.arity)?))
    }

    pub fn flipped(&self) -> Equation {
        Equation {
            arity: self.arity,
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}: {} = {}", self.arity, self.lhs, self.rhs)
    }
}

pub fn classify_equation(eq: &Equation) -> Result<Classification> {
    eq.classify()
}

/// Plain, symmetric or finite-product; ordered by how many argument
/// manipulations the structure allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    Plain,
    Symmetric,
    Fp,
}

impl Flavor {
    /// The flavor whose equations a term of the given class may appear in.
    pub fn admits(self, class: Classification) -> bool {
        match self {
            Flavor::Plain => class == Classification::StronglyRegular,
            Flavor::Symmetric => class.is_linear(),
            Flavor::Fp => true,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Plain => "plain",
            Flavor::Symmetric => "symmetric",
            Flavor::Fp => "fp",
        })
    }
}

impl std::str::FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Flavor::Plain),
            "symmetric" => Ok(Flavor::Symmetric),
            "fp" => Ok(Flavor::Fp),
            other => Err(Error::InvalidData(format!("unknown flavor `{other}`"))),
        }
    }
}

/// A one-sorted algebraic theory: signature, equations and the operad flavor
/// it is meant to present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub name: String,
    pub signature: Signature,
    pub equations: Vec<Equation>,
    pub flavor: Flavor,
}

impl Presentation {
    /// Checks well-formedness and that every equation fits the flavor.
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        equations: Vec<Equation>,
        flavor: Flavor,
    ) -> Result<Self> {
        let p = Presentation {
            name: name.into(),
            signature,
            equations,
            flavor,
        };
        for eq in &p.equations {
            eq.lhs.check(&p.signature)?;
            eq.rhs.check(&p.signature)?;
            let class = eq.classify()?;
            if !flavor.admits(class) {
                return Err(Error::Validation(format!(
                    "equation {eq} is {class}, not admissible in a {flavor} presentation"
                )));
            }
        }
        Ok(p)
    }

    /// The text format read by [`parse_presentation`].
    pub fn to_text(&self) -> String {
        let mut out = format!("theory {}\nflavor {}\nops:\n", self.name, self.flavor);
        for (op, k) in self.signature.ops() {
            out.push_str(&format!("  {op} : {k}\n"));
        }
        out.push_str("eqs:\n");
        for eq in &self.equations {
            out.push_str(&format!("  {eq}\n"));
        }
        out
    }

    pub fn classify(&self) -> Result<Classification> {
        self.equations
            .iter()
            .try_fold(Classification::StronglyRegular, |acc, eq| Ok(acc.meet(eq.classify()?)))
    }
}

pub fn classify_presentation(p: &Presentation) -> Result<Classification> {
    p.classify()
}

/// Every well-formed term over `sig` with variables in `x1..x{vars}` and at most
/// `max_size` nodes, ordered by size and then structurally.
pub fn enumerate_terms(sig: &Signature, vars: usize, max_size: usize) -> Vec<Term> {
    let by_size = terms_by_size(sig, vars, max_size);
    by_size.into_iter().flatten().collect()
}

/// `out[s]` holds the terms of size exactly `s`.
pub(crate) fn terms_by_size(sig: &Signature, vars: usize, max_size: usize) -> Vec<Vec<Term>> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return by_size;
    }
    by_size[1].extend((1..=vars).map(Term::Var));
    for s in 1..=max_size {
        for (op, arity) in sig.ops() {
            if arity == 0 {
                if s == 1 {
                    by_size[1].push(Term::constant(op));
                }
                continue;
            }
            if s < 1 + arity {
                continue;
            }
            let mut acc = Vec::new();
            let mut args = Vec::new();
            fill_args(&by_size, arity, s - 1, &mut args, &mut |args| {
                acc.push(Term::App(op.to_string(), args.to_vec()))
            });
            by_size[s].extend(acc);
        }
    }
    by_size
}

fn fill_args(
    by_size: &[Vec<Term>],
    remaining_args: usize,
    remaining_size: usize,
    args: &mut Vec<Term>,
    emit: &mut dyn FnMut(&[Term]),
) {
    if remaining_args == 0 {
        if remaining_size == 0 {
            emit(args);
        }
        return;
    }
    // each later argument needs at least one node
    let max_here = remaining_size.saturating_sub(remaining_args - 1);
    for s in 1..=max_here {
        for t in &by_size[s] {
            args.push(t.clone());
            fill_args(by_size, remaining_args - 1, remaining_size - s, args, emit);
            args.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: Term, b: Term) -> Term {
        Term::app("m", vec![a, b])
    }
    fn x(i: usize) -> Term {
        Term::Var(i)
    }

    #[test]
    fn var_seq_examples() {
        assert_eq!(var_seq(&x(3)), vec![3]);
        assert_eq!(var_seq(&m(x(2), m(x(1), x(1)))), vec![2, 1, 1]);
        assert!(var_seq(&Term::constant("e")).is_empty());
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&x(3)), BTreeSet::from([3]));
        assert_eq!(support(&m(x(2), m(x(1), x(1)))), BTreeSet::from([1, 2]));
        assert!(support(&Term::constant("e")).is_empty());
    }

    #[test]
    fn label_fn_examples() {
        assert!(label_fn(&x(1), 1).unwrap().is_identity());
        let l = label_fn(&m(x(2), m(x(1), x(1))), 2).unwrap();
        assert_eq!(l.table(), &[2, 1, 1]);
        assert_eq!(l.cod(), 2);
        assert!(label_fn(&m(m(x(1), x(2)), x(3)), 3).unwrap().is_identity());
        assert_eq!(
            label_fn(&x(3), 2),
            Err(Error::VariableOutOfRange { index: 3, arity: 2 })
        );
    }

    #[test]
    fn classify_term_examples() {
        assert_eq!(
            classify_term(&m(m(x(1), x(2)), x(3)), 3).unwrap(),
            Classification::StronglyRegular
        );
        assert_eq!(classify_term(&m(x(2), x(1)), 2).unwrap(), Classification::Linear);
        assert_eq!(classify_term(&m(x(1), x(1)), 1).unwrap(), Classification::General);
    }

    #[test]
    fn classify_equation_examples() {
        let assoc = |n| Equation::new(n, m(m(x(1), x(2)), x(3)), m(x(1), m(x(2), x(3)))).unwrap();
        assert_eq!(assoc(3).classify().unwrap(), Classification::StronglyRegular);
        assert_eq!(assoc(4).classify().unwrap(), Classification::General);
        let comm = Equation::new(2, m(x(1), x(2)), m(x(2), x(1))).unwrap();
        assert_eq!(comm.classify().unwrap(), Classification::Linear);
    }

    #[test]
    fn graft_examples() {
        let a = Term::constant("a");
        let b = Term::constant("b");
        assert_eq!(graft_term(&x(2), &[a.clone(), b.clone()]).unwrap(), b);
        assert_eq!(graft_term(&m(x(1), x(1)), &[a.clone()]).unwrap(), m(a.clone(), a));
        let e = Term::constant("e");
        assert_eq!(
            graft_term(&m(x(1), x(2)), &[x(1), e.clone()]).unwrap(),
            m(x(1), e)
        );
        assert!(graft_term(&x(2), &[b]).is_err());
    }

    #[test]
    fn presentation_flavor_is_enforced() {
        let sig = Signature::from_ops([("m", 2)]).unwrap();
        let comm = Equation::new(2, m(x(1), x(2)), m(x(2), x(1))).unwrap();
        assert!(Presentation::new("c", sig.clone(), vec![comm.clone()], Flavor::Plain).is_err());
        assert!(Presentation::new("c", sig, vec![comm], Flavor::Symmetric).is_ok());
    }

    #[test]
    fn enumeration_counts() {
        let sig = Signature::from_ops([("m", 2), ("e", 0)]).unwrap();
        let by = terms_by_size(&sig, 1, 5);
        assert_eq!(by[1].len(), 2);
        assert_eq!(by[2].len(), 0);
        assert_eq!(by[3].len(), 4);
        assert_eq!(by[5].len(), 16);
    }

    #[test]
    fn signature_rejects_variable_names() {
        let mut sig = Signature::new();
        assert!(sig.add("x1", 0).is_err());
        assert!(sig.add("x", 0).is_ok());
        assert!(sig.add("x", 1).is_err());
    }
}
