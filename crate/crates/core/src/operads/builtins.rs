use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_arity, random_perm, Operad, Polynomial};
use crate::error::{Error, Result};
use crate::finmaps::{block_compose, FinFunction, Perm};
use crate::terms::{Flavor, Signature};
use crate::trees::{compose_fp, FPTree, SRTree};

/// One element per arity; algebras are monoids.
#[derive(Clone, Copy, Debug, Default)]
pub struct TerminalPlainOperad;

/// One element per arity with the trivial action; algebras are commutative monoids.
#[derive(Clone, Copy, Debug, Default)]
pub struct TerminalSymmetricOperad;

fn terminal_compose(p: usize, qs: &[usize]) -> Result<usize> {
    check_arity(p, qs.len())?;
    Ok(qs.iter().sum())
}

impl Operad for TerminalPlainOperad {
    type Elem = usize;

    fn name(&self) -> String {
        "terminal-plain".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Plain
    }

    fn arity(&self, p: &usize) -> usize {
        *p
    }

    fn identity(&self) -> usize {
        1
    }

    fn compose(&self, p: &usize, qs: &[usize]) -> Result<usize> {
        terminal_compose(*p, qs)
    }

    fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<usize>> {
        Some(vec![arity])
    }

    fn sample(&self, arity: usize, _rng: &mut dyn rand::RngCore) -> Option<usize> {
        Some(arity)
    }
}

impl Operad for TerminalSymmetricOperad {
    type Elem = usize;

    fn name(&self) -> String {
        "terminal-symmetric".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn arity(&self, p: &usize) -> usize {
        *p
    }

    fn identity(&self) -> usize {
        1
    }

    fn compose(&self, p: &usize, qs: &[usize]) -> Result<usize> {
        terminal_compose(*p, qs)
    }

    fn act_perm(&self, sigma: &Perm, p: &usize) -> Result<usize> {
        check_arity(*p, sigma.degree())?;
        Ok(*p)
    }

    fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<usize>> {
        Some(vec![arity])
    }

    fn sample(&self, arity: usize, _rng: &mut dyn rand::RngCore) -> Option<usize> {
        Some(arity)
    }
}

/// The unit of the initial operad, its only element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InitialElem;

impl fmt::Display for InitialElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")
    }
}

/// Only the identity, in arity 1; algebras are sets.
#[derive(Clone, Copy, Debug, Default)]
pub struct InitialOperad;

impl Operad for InitialOperad {
    type Elem = InitialElem;

    fn name(&self) -> String {
        "initial".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn arity(&self, _p: &InitialElem) -> usize {
        1
    }

    fn identity(&self) -> InitialElem {
        InitialElem
    }

    fn compose(&self, _p: &InitialElem, qs: &[InitialElem]) -> Result<InitialElem> {
        check_arity(1, qs.len())?;
        Ok(InitialElem)
    }

    fn act_perm(&self, sigma: &Perm, _p: &InitialElem) -> Result<InitialElem> {
        check_arity(1, sigma.degree())?;
        Ok(InitialElem)
    }

    fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<InitialElem>> {
        Some(if arity == 1 { vec![InitialElem] } else { Vec::new() })
    }

    fn sample(&self, arity: usize, _rng: &mut dyn rand::RngCore) -> Option<InitialElem> {
        (arity == 1).then_some(InitialElem)
    }
}

/// `S_n` in arity `n`, composed by blocks, with `σ·τ = τσ⁻¹`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetryOperad;

impl Operad for SymmetryOperad {
    type Elem = Perm;

    fn name(&self) -> String {
        "symmetries".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn arity(&self, p: &Perm) -> usize {
        p.degree()
    }

    fn identity(&self) -> Perm {
        Perm::identity(1)
    }

    fn compose(&self, p: &Perm, qs: &[Perm]) -> Result<Perm> {
        block_compose(p, qs)
    }

    fn act_perm(&self, sigma: &Perm, p: &Perm) -> Result<Perm> {
        p.compose(&sigma.inverse())
    }

    fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<Perm>> {
        Some(Perm::all(arity))
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<Perm> {
        Some(random_perm(arity, rng))
    }
}

/// Exponent vector of a monomial `x_1^{p_1} ⋯ x_n^{p_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiplicities(pub Vec<u32>);

impl fmt::Display for Multiplicities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Multiplicities {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let table = crate::finmaps::parse_table(s)?;
        Ok(Multiplicities(table.into_iter().map(|v| v as u32).collect()))
    }
}

/// The free commutative monoid on `n` generators in arity `n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct CommMonoidFPOperad;

impl Operad for CommMonoidFPOperad {
    type Elem = Multiplicities;

    fn name(&self) -> String {
        "comm-monoid-fp".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Fp
    }

    fn arity(&self, p: &Multiplicities) -> usize {
        p.0.len()
    }

    fn identity(&self) -> Multiplicities {
        Multiplicities(vec![1])
    }

    fn compose(&self, p: &Multiplicities, qs: &[Multiplicities]) -> Result<Multiplicities> {
        check_arity(p.0.len(), qs.len())?;
        Ok(Multiplicities(
            p.0.iter()
                .zip(qs)
                .flat_map(|(&pi, q)| q.0.iter().map(move |&qj| pi * qj))
                .collect(),
        ))
    }

    fn act_fn(&self, f: &FinFunction, p: &Multiplicities) -> Result<Multiplicities> {
        check_arity(p.0.len(), f.dom())?;
        let mut out = vec![0; f.cod()];
        for (i, &pi) in p.0.iter().enumerate() {
            out[f.apply(i + 1) - 1] += pi;
        }
        Ok(Multiplicities(out))
    }

    /// All vectors with entries at most `bound`.
    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<Multiplicities>> {
        let tables = FinFunction::all(arity, bound + 1);
        Some(
            tables
                .into_iter()
                .map(|f| Multiplicities(f.table().iter().map(|&v| v as u32 - 1).collect()))
                .collect(),
        )
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<Multiplicities> {
        Some(Multiplicities((0..arity).map(|_| rng.gen_range(0..=2)).collect()))
    }
}

/// `ℤ[x_1, …, x_n]` in arity `n`; composition substitutes into disjoint
/// variable blocks and the action renames variables.
#[derive(Clone, Copy, Debug, Default)]
pub struct IntPolyFPOperad;

impl Operad for IntPolyFPOperad {
    type Elem = Polynomial;

    fn name(&self) -> String {
        "int-poly-fp".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Fp
    }

    fn arity(&self, p: &Polynomial) -> usize {
        p.vars()
    }

    fn identity(&self) -> Polynomial {
        Polynomial::variable(1, 1)
    }

    fn compose(&self, p: &Polynomial, qs: &[Polynomial]) -> Result<Polynomial> {
        check_arity(p.vars(), qs.len())?;
        let total: usize = qs.iter().map(Polynomial::vars).sum();
        let mut offset = 0;
        let shifted: Vec<Polynomial> = qs
            .iter()
            .map(|q| {
                let s = q.shift(offset, total);
                offset += q.vars();
                s
            })
            .collect();
        p.substitute(&shifted, total)
    }

    fn act_fn(&self, f: &FinFunction, p: &Polynomial) -> Result<Polynomial> {
        p.relabel(f)
    }

    /// Random polynomial of degree at most 2 with coefficients in `-3..=3`.
    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<Polynomial> {
        let mut terms = vec![(vec![0; arity], rng.gen_range(-3..=3))];
        for i in 0..arity {
            let mut e = vec![0; arity];
            e[i] = 1;
            terms.push((e, rng.gen_range(-3..=3)));
            for j in i..arity {
                let mut e = vec![0; arity];
                e[i] += 1;
                e[j] += 1;
                if rng.gen_bool(0.5) {
                    terms.push((e, rng.gen_range(-3..=3)));
                }
            }
        }
        Polynomial::from_terms(arity, terms).ok()
    }
}

/// Elements of any builtin target.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum BuiltinElem {
    Arity(usize),
    Unit(InitialElem),
    Perm(Perm),
    Vector(Multiplicities),
    Poly(Polynomial),
    Tree(FPTree),
}

impl fmt::Display for BuiltinElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinElem::Arity(n) => write!(f, "<{n}>"),
            BuiltinElem::Unit(u) => write!(f, "{u}"),
            BuiltinElem::Perm(p) => write!(f, "{p}"),
            BuiltinElem::Vector(v) => write!(f, "{v}"),
            BuiltinElem::Poly(p) => write!(f, "{p}"),
            BuiltinElem::Tree(t) => write!(f, "{t}"),
        }
    }
}

/// The builtin targets, selectable by name.
#[derive(Clone, Debug)]
pub enum BuiltinOperad {
    TerminalPlain,
    TerminalSymmetric,
    Initial,
    Symmetries,
    CommMonoidFp,
    IntPolyFp,
    /// The free operad of the given flavor on a signature; elements are kept as
    /// finite-product trees whose labelling is restricted by the flavor.
    Free(Signature, Flavor),
}

impl BuiltinOperad {
    pub const NAMES: [&'static str; 7] = [
        "terminal-plain",
        "terminal-symmetric",
        "initial",
        "symmetries",
        "comm-monoid-fp",
        "int-poly-fp",
        "free",
    ];

    /// `free` needs the signature and flavor of the presentation it serves.
    pub fn by_name(name: &str, sig: &Signature, flavor: Flavor) -> Result<Self> {
        Ok(match name {
            "terminal-plain" => BuiltinOperad::TerminalPlain,
            "terminal-symmetric" => BuiltinOperad::TerminalSymmetric,
            "initial" => BuiltinOperad::Initial,
            "symmetries" => BuiltinOperad::Symmetries,
            "comm-monoid-fp" => BuiltinOperad::CommMonoidFp,
            "int-poly-fp" => BuiltinOperad::IntPolyFp,
            "free" => BuiltinOperad::Free(sig.clone(), flavor),
            other => {
                return Err(Error::InvalidData(format!(
                    "unknown target `{other}`; expected one of {}",
                    Self::NAMES.join(", ")
                )))
            }
        })
    }

    /// The interpretation of an `arity`-ary generator used when none is given:
    /// the unique element, the identity permutation, the product monomial
    /// `x_1 ⋯ x_k`, or the generator itself.
    pub fn default_interp(&self, op: &str, arity: usize) -> Result<BuiltinElem> {
        Ok(match self {
            BuiltinOperad::TerminalPlain | BuiltinOperad::TerminalSymmetric => {
                BuiltinElem::Arity(arity)
            }
            BuiltinOperad::Initial => {
                if arity != 1 {
                    return Err(Error::Validation(format!(
                        "the initial operad has no {arity}-ary element for `{op}`"
                    )));
                }
                BuiltinElem::Unit(InitialElem)
            }
            BuiltinOperad::Symmetries => BuiltinElem::Perm(Perm::identity(arity)),
            BuiltinOperad::CommMonoidFp => BuiltinElem::Vector(Multiplicities(vec![1; arity])),
            BuiltinOperad::IntPolyFp => {
                BuiltinElem::Poly(Polynomial::monomial(vec![1; arity], 1))
            }
            BuiltinOperad::Free(..) => BuiltinElem::Tree(
                FPTree::new(FinFunction::identity(arity), SRTree::corolla(op, arity))
                    .expect("corolla arity"),
            ),
        })
    }

    /// Parses an element written in the target's own notation.
    pub fn parse_elem(&self, text: &str) -> Result<BuiltinElem> {
        let text = text.trim();
        Ok(match self {
            BuiltinOperad::TerminalPlain | BuiltinOperad::TerminalSymmetric => {
                let n = text
                    .trim_start_matches('<')
                    .trim_end_matches('>')
                    .parse()
                    .map_err(|_| Error::parse(1, 1, format!("expected an arity, found `{text}`")))?;
                BuiltinElem::Arity(n)
            }
            BuiltinOperad::Initial => BuiltinElem::Unit(InitialElem),
            BuiltinOperad::Symmetries => BuiltinElem::Perm(text.parse()?),
            BuiltinOperad::CommMonoidFp => BuiltinElem::Vector(text.parse()?),
            BuiltinOperad::IntPolyFp => {
                return Err(Error::Unsupported(
                    "polynomial literals are not parsed; use the default interpretation".into(),
                ))
            }
            BuiltinOperad::Free(..) => {
                let (table, tree) = text
                    .split_once(']')
                    .map(|(t, rest)| (format!("{t}]"), rest))
                    .ok_or_else(|| Error::parse(1, 1, "expected `[table] tree`"))?;
                let tree = SRTree::parse(tree)?;
                let table = crate::finmaps::parse_table(&table)?;
                let cod = table.iter().copied().max().unwrap_or(0);
                BuiltinElem::Tree(FPTree::new(FinFunction::new(table, cod)?, tree)?)
            }
        })
    }
}

fn mismatch(target: &BuiltinOperad, e: &BuiltinElem) -> Error {
    Error::FlavorMismatch(format!("element {e} does not belong to {target:?}"))
}

macro_rules! unwrap_all {
    ($self:expr, $variant:ident, $xs:expr) => {
        $xs.iter()
            .map(|x| match x {
                BuiltinElem::$variant(v) => Ok(v.clone()),
                other => Err(mismatch($self, other)),
            })
            .collect::<Result<Vec<_>>>()
    };
}

impl Operad for BuiltinOperad {
    type Elem = BuiltinElem;

    fn name(&self) -> String {
        match self {
            BuiltinOperad::TerminalPlain => TerminalPlainOperad.name(),
            BuiltinOperad::TerminalSymmetric => TerminalSymmetricOperad.name(),
            BuiltinOperad::Initial => InitialOperad.name(),
            BuiltinOperad::Symmetries => SymmetryOperad.name(),
            BuiltinOperad::CommMonoidFp => CommMonoidFPOperad.name(),
            BuiltinOperad::IntPolyFp => IntPolyFPOperad.name(),
            BuiltinOperad::Free(_, flavor) => format!("free-{flavor}"),
        }
    }

    fn flavor(&self) -> Flavor {
        match self {
            BuiltinOperad::TerminalPlain => Flavor::Plain,
            BuiltinOperad::TerminalSymmetric | BuiltinOperad::Initial | BuiltinOperad::Symmetries => {
                Flavor::Symmetric
            }
            BuiltinOperad::CommMonoidFp | BuiltinOperad::IntPolyFp => Flavor::Fp,
            BuiltinOperad::Free(_, flavor) => *flavor,
        }
    }

    fn arity(&self, p: &BuiltinElem) -> usize {
        match p {
            BuiltinElem::Arity(n) => *n,
            BuiltinElem::Unit(_) => 1,
            BuiltinElem::Perm(p) => p.degree(),
            BuiltinElem::Vector(v) => v.0.len(),
            BuiltinElem::Poly(p) => p.vars(),
            BuiltinElem::Tree(t) => t.arity(),
        }
    }

    fn identity(&self) -> BuiltinElem {
        match self {
            BuiltinOperad::TerminalPlain | BuiltinOperad::TerminalSymmetric => BuiltinElem::Arity(1),
            BuiltinOperad::Initial => BuiltinElem::Unit(InitialElem),
            BuiltinOperad::Symmetries => BuiltinElem::Perm(Perm::identity(1)),
            BuiltinOperad::CommMonoidFp => BuiltinElem::Vector(CommMonoidFPOperad.identity()),
            BuiltinOperad::IntPolyFp => BuiltinElem::Poly(IntPolyFPOperad.identity()),
            BuiltinOperad::Free(..) => BuiltinElem::Tree(FPTree::identity()),
        }
    }

    fn compose(&self, p: &BuiltinElem, qs: &[BuiltinElem]) -> Result<BuiltinElem> {
        Ok(match (self, p) {
            (BuiltinOperad::TerminalPlain | BuiltinOperad::TerminalSymmetric, BuiltinElem::Arity(n)) => {
                BuiltinElem::Arity(terminal_compose(*n, &unwrap_all!(self, Arity, qs)?)?)
            }
            (BuiltinOperad::Initial, BuiltinElem::Unit(u)) => {
                BuiltinElem::Unit(InitialOperad.compose(u, &unwrap_all!(self, Unit, qs)?)?)
            }
            (BuiltinOperad::Symmetries, BuiltinElem::Perm(s)) => {
                BuiltinElem::Perm(SymmetryOperad.compose(s, &unwrap_all!(self, Perm, qs)?)?)
            }
            (BuiltinOperad::CommMonoidFp, BuiltinElem::Vector(v)) => {
                BuiltinElem::Vector(CommMonoidFPOperad.compose(v, &unwrap_all!(self, Vector, qs)?)?)
            }
            (BuiltinOperad::IntPolyFp, BuiltinElem::Poly(v)) => {
                BuiltinElem::Poly(IntPolyFPOperad.compose(v, &unwrap_all!(self, Poly, qs)?)?)
            }
            (BuiltinOperad::Free(..), BuiltinElem::Tree(t)) => {
                BuiltinElem::Tree(compose_fp(t, &unwrap_all!(self, Tree, qs)?)?)
            }
            (_, other) => return Err(mismatch(self, other)),
        })
    }

    fn act_perm(&self, sigma: &Perm, p: &BuiltinElem) -> Result<BuiltinElem> {
        Ok(match (self, p) {
            (BuiltinOperad::TerminalSymmetric, BuiltinElem::Arity(n)) => {
                BuiltinElem::Arity(TerminalSymmetricOperad.act_perm(sigma, n)?)
            }
            (BuiltinOperad::Initial, BuiltinElem::Unit(u)) => {
                BuiltinElem::Unit(InitialOperad.act_perm(sigma, u)?)
            }
            (BuiltinOperad::Symmetries, BuiltinElem::Perm(t)) => {
                BuiltinElem::Perm(SymmetryOperad.act_perm(sigma, t)?)
            }
            (BuiltinOperad::Free(_, Flavor::Symmetric | Flavor::Fp), BuiltinElem::Tree(t)) => {
                BuiltinElem::Tree(t.act(sigma.as_fn())?)
            }
            (BuiltinOperad::CommMonoidFp | BuiltinOperad::IntPolyFp, _) => {
                return self.act_fn(sigma.as_fn(), p)
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} has no symmetric action",
                    self.name()
                )))
            }
        })
    }

    fn act_fn(&self, f: &FinFunction, p: &BuiltinElem) -> Result<BuiltinElem> {
        Ok(match (self, p) {
            (BuiltinOperad::CommMonoidFp, BuiltinElem::Vector(v)) => {
                BuiltinElem::Vector(CommMonoidFPOperad.act_fn(f, v)?)
            }
            (BuiltinOperad::IntPolyFp, BuiltinElem::Poly(v)) => {
                BuiltinElem::Poly(IntPolyFPOperad.act_fn(f, v)?)
            }
            (BuiltinOperad::Free(_, Flavor::Fp), BuiltinElem::Tree(t)) => BuiltinElem::Tree(t.act(f)?),
            _ => {
                return Err(Error::Unsupported(format!(
                    "{} has no finite-function action",
                    self.name()
                )))
            }
        })
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<BuiltinElem>> {
        Some(match self {
            BuiltinOperad::TerminalPlain | BuiltinOperad::TerminalSymmetric => {
                vec![BuiltinElem::Arity(arity)]
            }
            BuiltinOperad::Initial => InitialOperad
                .enumerate(arity, bound)?
                .into_iter()
                .map(BuiltinElem::Unit)
                .collect(),
            BuiltinOperad::Symmetries => Perm::all(arity).into_iter().map(BuiltinElem::Perm).collect(),
            BuiltinOperad::CommMonoidFp => CommMonoidFPOperad
                .enumerate(arity, bound)?
                .into_iter()
                .map(BuiltinElem::Vector)
                .collect(),
            BuiltinOperad::IntPolyFp | BuiltinOperad::Free(..) => return None,
        })
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<BuiltinElem> {
        match self {
            BuiltinOperad::IntPolyFp => IntPolyFPOperad.sample(arity, rng).map(BuiltinElem::Poly),
            BuiltinOperad::Symmetries => Some(BuiltinElem::Perm(random_perm(arity, rng))),
            BuiltinOperad::CommMonoidFp => CommMonoidFPOperad.sample(arity, rng).map(BuiltinElem::Vector),
            _ => self.enumerate(arity, 1).and_then(|v| v.into_iter().next()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u32]) -> Multiplicities {
        Multiplicities(xs.to_vec())
    }

    #[test]
    fn comm_monoid_formulas() {
        let op = CommMonoidFPOperad;
        assert_eq!(op.compose(&v(&[2, 1]), &[v(&[1, 1]), v(&[3])]).unwrap(), v(&[2, 2, 3]));
        let constant = FinFunction::new(vec![1, 1], 1).unwrap();
        assert_eq!(op.act_fn(&constant, &v(&[1, 1])).unwrap(), v(&[2]));
        assert_eq!(op.enumerate(2, 2).unwrap().len(), 9);
    }

    #[test]
    fn symmetry_action_is_right_translation_by_inverse() {
        let sigma = Perm::new(vec![2, 3, 1]).unwrap();
        let tau = Perm::new(vec![1, 3, 2]).unwrap();
        let got = SymmetryOperad.act_perm(&sigma, &tau).unwrap();
        assert_eq!(got, tau.compose(&sigma.inverse()).unwrap());
    }

    #[test]
    fn terminal_checks_arity() {
        assert_eq!(TerminalPlainOperad.compose(&2, &[0, 3]).unwrap(), 3);
        assert!(TerminalPlainOperad.compose(&2, &[1]).is_err());
        assert!(TerminalPlainOperad.act_perm(&Perm::swap2(), &2).is_err());
    }

    #[test]
    fn builtin_names_resolve() {
        let sig = Signature::new();
        for name in BuiltinOperad::NAMES {
            let op = BuiltinOperad::by_name(name, &sig, Flavor::Plain).unwrap();
            assert!(!op.name().is_empty());
        }
        assert!(BuiltinOperad::by_name("nope", &sig, Flavor::Plain).is_err());
    }

    #[test]
    fn builtin_dispatch_rejects_foreign_elements() {
        let op = BuiltinOperad::Symmetries;
        assert!(op.compose(&BuiltinElem::Arity(1), &[BuiltinElem::Arity(1)]).is_err());
    }
}
