//! Planar rooted trees labelled by a signature: the elements of the free plain
//! operad ([`SRTree`]), the free symmetric operad ([`PermutedTree`]) and the free
//! finite-product operad ([`FPTree`]).
//!
//! A pair `(f, t)` stands for the relabelled operation `f·t`, where
//! `(f·p)(x_1, …, x_m) = p(x_f(1), …, x_f(n))`. Under that reading a term is the
//! pair of its labelling function and its underlying tree, see [`to_tree`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmaps::{comb_compose, parse_table, FinFunction, Perm};
use crate::terms::{is_op_name, Classification, Cursor, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SRTree {
    Leaf,
    Node(String, Vec<SRTree>),
}

impl SRTree {
    pub fn node(op: impl Into<String>, children: Vec<SRTree>) -> SRTree {
        SRTree::Node(op.into(), children)
    }

    /// `op(|, …, |)`, the generator itself.
    pub fn corolla(op: impl Into<String>, arity: usize) -> SRTree {
        SRTree::Node(op.into(), vec![SRTree::Leaf; arity])
    }

    pub fn arity(&self) -> usize {
        match self {
            SRTree::Leaf => 1,
            SRTree::Node(_, children) => children.iter().map(SRTree::arity).sum(),
        }
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            SRTree::Leaf => 1,
            SRTree::Node(_, children) => 1 + children.iter().map(SRTree::size).sum::<usize>(),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            SRTree::Leaf => Ok(()),
            SRTree::Node(op, children) => {
                let arity = sig.arity(op).ok_or_else(|| Error::UnknownOp(op.clone()))?;
                if arity != children.len() {
                    return Err(Error::ArityMismatch {
                        expected: arity,
                        found: children.len(),
                    });
                }
                children.iter().try_for_each(|c| c.check(sig))
            }
        }
    }

    /// Plugs `subs[i]` into the `i`-th leaf.
    pub fn graft(&self, subs: &[SRTree]) -> Result<SRTree> {
        if subs.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: subs.len(),
            });
        }
        let mut rest = subs;
        Ok(self.graft_from(&mut rest))
    }

    fn graft_from(&self, rest: &mut &[SRTree]) -> SRTree {
        match self {
            SRTree::Leaf => {
                let (first, tail) = rest.split_first().expect("arity checked");
                *rest = tail;
                first.clone()
            }
            SRTree::Node(op, children) => {
                SRTree::Node(op.clone(), children.iter().map(|c| c.graft_from(rest)).collect())
            }
        }
    }

    /// Preorder serialization with explicit arities, e.g. `m/2 m/2 | | |`.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        self.write_canonical(&mut out);
        out
    }

    fn write_canonical(&self, out: &mut String) {
        if !out.is_empty() {
            out.push(' ');
        }
        match self {
            SRTree::Leaf => out.push('|'),
            SRTree::Node(op, children) => {
                out.push_str(&format!("{op}/{}", children.len()));
                children.iter().for_each(|c| c.write_canonical(out));
            }
        }
    }

    pub fn parse(src: &str) -> Result<SRTree> {
        let mut cur = Cursor::new(src, 1, 1);
        let t = parse_tree_at(&mut cur)?;
        cur.finish()?;
        Ok(t)
    }
}

pub(crate) fn parse_tree_at(cur: &mut Cursor<'_>) -> Result<SRTree> {
    if cur.eat('|') {
        return Ok(SRTree::Leaf);
    }
    let name = cur.ident()?;
    if !is_op_name(&name) {
        return Err(cur.error(format!("bad operation name `{name}`")));
    }
    let mut children = Vec::new();
    if cur.eat('(') {
        loop {
            children.push(parse_tree_at(cur)?);
            if cur.eat(')') {
                break;
            }
            cur.expect(',')?;
        }
    }
    Ok(SRTree::Node(name, children))
}

impl fmt::Display for SRTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SRTree::Leaf => f.write_str("|"),
            SRTree::Node(op, children) if children.is_empty() => f.write_str(op),
            SRTree::Node(op, children) => {
                write!(f, "{op}(")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn graft(t: &SRTree, subs: &[SRTree]) -> Result<SRTree> {
    t.graft(subs)
}

/// A tree together with a permutation of its leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermutedTree {
    pub perm: Perm,
    pub tree: SRTree,
}

impl PermutedTree {
    pub fn new(perm: Perm, tree: SRTree) -> Result<Self> {
        if perm.degree() != tree.arity() {
            return Err(Error::DegreeMismatch(format!(
                "permutation of degree {} on a tree of arity {}",
                perm.degree(),
                tree.arity()
            )));
        }
        Ok(PermutedTree { perm, tree })
    }

    pub fn plain(tree: SRTree) -> Self {
        PermutedTree {
            perm: Perm::identity(tree.arity()),
            tree,
        }
    }

    pub fn identity() -> Self {
        PermutedTree::plain(SRTree::Leaf)
    }

    pub fn arity(&self) -> usize {
        self.tree.arity()
    }

    pub fn size(&self) -> usize {
        self.tree.size()
    }

    /// `ρ·(σ, t) = (ρσ, t)`.
    pub fn act(&self, rho: &Perm) -> Result<PermutedTree> {
        Ok(PermutedTree {
            perm: rho.compose(&self.perm)?,
            tree: self.tree.clone(),
        })
    }

    pub fn to_fp(&self) -> FPTree {
        FPTree {
            fun: self.perm.as_fn().clone(),
            tree: self.tree.clone(),
        }
    }

    pub fn to_term(&self) -> Term {
        self.to_fp().to_term()
    }

    pub fn parse(src: &str) -> Result<PermutedTree> {
        let (table, tree) = split_prefixed(src)?;
        let tree = SRTree::parse(tree)?;
        let perm = match table {
            Some(t) => Perm::new(t)?,
            None => Perm::identity(tree.arity()),
        };
        PermutedTree::new(perm, tree)
    }
}

impl fmt::Display for PermutedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.perm, self.tree)
    }
}

fn split_prefixed(src: &str) -> Result<(Option<Vec<usize>>, &str)> {
    let s = src.trim();
    if s.starts_with('[') {
        let close = s
            .find(']')
            .ok_or_else(|| Error::parse(1, 1, "unterminated `[`"))?;
        Ok((Some(parse_table(&s[..=close])?), &s[close + 1..]))
    } else {
        Ok((None, s))
    }
}

/// Composition in the free symmetric operad:
/// `(σ, p) ∘ ((τ_1, q_1), …, (τ_n, q_n)) = (comb(σ, τ•), p ∘ (q_σ(1), …, q_σ(n)))`,
/// where `comb(σ, τ•) = block_compose(σ, (τ_σ(1), …, τ_σ(n)))`.
pub fn compose_permuted(outer: &PermutedTree, inner: &[PermutedTree]) -> Result<PermutedTree> {
    let n = outer.arity();
    if inner.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: inner.len(),
        });
    }
    let fns: Vec<FinFunction> = inner.iter().map(|q| q.perm.as_fn().clone()).collect();
    let perm = comb_compose(outer.perm.as_fn(), &fns)?
        .to_perm()
        .expect("combing bijections yields a bijection");
    let trees: Vec<SRTree> = (1..=n)
        .map(|i| inner[outer.perm.apply(i) - 1].tree.clone())
        .collect();
    PermutedTree::new(perm, outer.tree.graft(&trees)?)
}

/// A tree of arity `m` together with a relabelling `⟦m⟧ → ⟦n⟧` of its leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FPTree {
    pub fun: FinFunction,
    pub tree: SRTree,
}

impl FPTree {
    pub fn new(fun: FinFunction, tree: SRTree) -> Result<Self> {
        if fun.dom() != tree.arity() {
            return Err(Error::DegreeMismatch(format!(
                "labelling of ⟦{}⟧ on a tree of arity {}",
                fun.dom(),
                tree.arity()
            )));
        }
        Ok(FPTree { fun, tree })
    }

    pub fn identity() -> Self {
        FPTree {
            fun: FinFunction::identity(1),
            tree: SRTree::Leaf,
        }
    }

    pub fn arity(&self) -> usize {
        self.fun.cod()
    }

    pub fn size(&self) -> usize {
        self.tree.size()
    }

    /// `h·(f, t) = (h∘f, t)`.
    pub fn act(&self, h: &FinFunction) -> Result<FPTree> {
        Ok(FPTree {
            fun: h.after(&self.fun)?,
            tree: self.tree.clone(),
        })
    }

    pub fn to_term(&self) -> Term {
        to_term_alpha(&self.tree, self.fun.table()).expect("labelling matches tree arity")
    }

    /// Parses `[table] tree`; the codomain is `arity`.
    pub fn parse(src: &str, arity: usize) -> Result<FPTree> {
        let (table, tree) = split_prefixed(src)?;
        let tree = SRTree::parse(tree)?;
        let fun = match table {
            Some(t) => FinFunction::new(t, arity)?,
            None if tree.arity() == arity => FinFunction::identity(arity),
            None => {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: tree.arity(),
                })
            }
        };
        FPTree::new(fun, tree)
    }
}

impl fmt::Display for FPTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.fun, self.tree)
    }
}

/// Composition in the free finite-product operad:
/// `(f, p) ∘ ((g_1, q_1), …, (g_n, q_n)) = (comb(f, g•), p ∘ (q_f(1), …, q_f(m)))`.
pub fn compose_fp(outer: &FPTree, inner: &[FPTree]) -> Result<FPTree> {
    let n = outer.arity();
    if inner.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: inner.len(),
        });
    }
    let fns: Vec<FinFunction> = inner.iter().map(|q| q.fun.clone()).collect();
    let fun = comb_compose(&outer.fun, &fns)?;
    let trees: Vec<SRTree> = outer
        .fun
        .table()
        .iter()
        .map(|&j| inner[j - 1].tree.clone())
        .collect();
    FPTree::new(fun, outer.tree.graft(&trees)?)
}

fn tree_of(t: &Term) -> SRTree {
    match t {
        Term::Var(_) => SRTree::Leaf,
        Term::App(op, args) => SRTree::Node(op.clone(), args.iter().map(tree_of).collect()),
    }
}

/// `(label(t), tree(t))`.
pub fn to_tree(t: &Term, n: usize) -> Result<FPTree> {
    FPTree::new(t.label_fn(n)?, tree_of(t))
}

pub fn to_term(ft: &FPTree) -> Term {
    ft.to_term()
}

/// The term read off a tree whose leaves are named, left to right, by `alphabet`.
pub fn to_term_alpha(tree: &SRTree, alphabet: &[usize]) -> Result<Term> {
    if alphabet.len() != tree.arity() {
        return Err(Error::ArityMismatch {
            expected: tree.arity(),
            found: alphabet.len(),
        });
    }
    let mut rest = alphabet;
    Ok(term_from(tree, &mut rest))
}

fn term_from(tree: &SRTree, rest: &mut &[usize]) -> Term {
    match tree {
        SRTree::Leaf => {
            let (&first, tail) = rest.split_first().expect("alphabet length checked");
            *rest = tail;
            Term::Var(first)
        }
        SRTree::Node(op, children) => {
            Term::App(op.clone(), children.iter().map(|c| term_from(c, rest)).collect())
        }
    }
}

pub fn classify_tree_side(ft: &FPTree) -> Classification {
    Classification::of_label(&ft.fun)
}

/// All strongly regular trees over `sig` with at most `max_size` nodes, by size.
pub fn enumerate_trees(sig: &Signature, max_size: usize) -> Vec<SRTree> {
    let mut by_size: Vec<Vec<SRTree>> = vec![Vec::new(); max_size + 1];
    if max_size == 0 {
        return Vec::new();
    }
    by_size[1].push(SRTree::Leaf);
    for s in 1..=max_size {
        for (op, arity) in sig.ops() {
            if arity == 0 {
                if s == 1 {
                    by_size[1].push(SRTree::Node(op.to_string(), Vec::new()));
                }
                continue;
            }
            if s < 1 + arity {
                continue;
            }
            let mut acc = Vec::new();
            fill(&by_size, arity, s - 1, &mut Vec::new(), &mut |cs| {
                acc.push(SRTree::Node(op.to_string(), cs.to_vec()))
            });
            by_size[s].extend(acc);
        }
    }
    by_size.into_iter().flatten().collect()
}

fn fill(
    by_size: &[Vec<SRTree>],
    remaining: usize,
    room: usize,
    acc: &mut Vec<SRTree>,
    emit: &mut dyn FnMut(&[SRTree]),
) {
    if remaining == 0 {
        if room == 0 {
            emit(acc);
        }
        return;
    }
    for s in 1..=room.saturating_sub(remaining - 1) {
        for t in &by_size[s] {
            acc.push(t.clone());
            fill(by_size, remaining - 1, room - s, acc, emit);
            acc.pop();
        }
    }
}

/// Trees of exactly the given arity.
pub fn enumerate_trees_of_arity(sig: &Signature, arity: usize, max_size: usize) -> Vec<SRTree> {
    enumerate_trees(sig, max_size)
        .into_iter()
        .filter(|t| t.arity() == arity)
        .collect()
}

/// Every permuted tree of the given arity and size bound.
pub fn enumerate_permuted(sig: &Signature, arity: usize, max_size: usize) -> Vec<PermutedTree> {
    let trees = enumerate_trees_of_arity(sig, arity, max_size);
    let perms = Perm::all(arity);
    trees
        .iter()
        .flat_map(|t| {
            perms.iter().map(move |p| PermutedTree {
                perm: p.clone(),
                tree: t.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmaps::block_compose;
    use crate::terms::parse_term;

    fn m(a: SRTree, b: SRTree) -> SRTree {
        SRTree::node("m", vec![a, b])
    }
    const L: SRTree = SRTree::Leaf;

    #[test]
    fn graft_examples() {
        let t = m(L, m(L, L));
        assert_eq!(graft(&L, &[t.clone()]).unwrap(), t);
        assert_eq!(graft(&t, &[L, L, L]).unwrap(), t);
        let g = graft(&m(L, L), &[m(L, L), L]).unwrap();
        assert_eq!(g, m(m(L, L), L));
        assert_eq!(g.arity(), 3);
        assert!(graft(&m(L, L), &[L]).is_err());
    }

    #[test]
    fn compose_permuted_unit() {
        let q = PermutedTree::new(Perm::swap2(), m(L, L)).unwrap();
        assert_eq!(
            compose_permuted(&PermutedTree::identity(), &[q.clone()]).unwrap(),
            q
        );
    }

    #[test]
    fn compose_permuted_swap_example() {
        let a = PermutedTree::plain(SRTree::node("u", vec![L]));
        let b = PermutedTree::plain(m(L, L));
        let outer = PermutedTree::new(Perm::swap2(), m(L, L)).unwrap();
        let got = compose_permuted(&outer, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(got.tree, m(b.tree.clone(), a.tree.clone()));
        // the inner permutations are read in the σ-permuted order
        let expected = block_compose(&Perm::swap2(), &[Perm::identity(2), Perm::identity(1)]).unwrap();
        assert_eq!(got.perm, expected);
        assert_eq!(got.perm.table(), &[2, 3, 1]);
        // read as a term: x3 feeds `u`, (x1, x2) feed the binary node
        assert_eq!(got.to_term().to_string(), "m(m(x2,x3),u(x1))");
    }

    #[test]
    fn to_tree_examples() {
        let ft = to_tree(&Term::Var(1), 1).unwrap();
        assert_eq!(ft, FPTree::identity());
        let ft = to_tree(&parse_term("m(x2,x1)").unwrap(), 2).unwrap();
        assert_eq!(ft.fun.table(), &[2, 1]);
        assert_eq!(ft.tree, m(L, L));
        let ft = FPTree::new(FinFunction::identity(3), m(m(L, L), L)).unwrap();
        assert_eq!(to_term(&ft).to_string(), "m(m(x1,x2),x3)");
    }

    #[test]
    fn classify_tree_sides() {
        let any = m(L, L);
        let id = FPTree::new(FinFunction::identity(2), any.clone()).unwrap();
        assert_eq!(classify_tree_side(&id), Classification::StronglyRegular);
        let sw = FPTree::new(Perm::swap2().into_fn(), any.clone()).unwrap();
        assert_eq!(classify_tree_side(&sw), Classification::Linear);
        let c = FPTree::new(FinFunction::new(vec![1, 1], 1).unwrap(), any).unwrap();
        assert_eq!(classify_tree_side(&c), Classification::General);
    }

    #[test]
    fn fp_compose_matches_term_substitution() {
        let t = parse_term("m(x2,m(x1,x2))").unwrap();
        let s1 = parse_term("m(x1,e)").unwrap();
        let s2 = parse_term("x1").unwrap();
        let lhs = compose_fp(
            &to_tree(&t, 2).unwrap(),
            &[to_tree(&s1, 1).unwrap(), to_tree(&s2, 1).unwrap()],
        )
        .unwrap();
        // inner arities 1 and 1 concatenate to 2 variables: shift the second
        let shifted = [s1, parse_term("x2").unwrap()];
        let expected = t.graft(&shifted).unwrap();
        assert_eq!(lhs.to_term(), expected);
    }

    #[test]
    fn text_forms() {
        let t = SRTree::parse("m(m(|,|), e)").unwrap();
        assert_eq!(t.to_string(), "m(m(|,|),e)");
        assert_eq!(t.canonical(), "m/2 m/2 | | e/0");
        let p = PermutedTree::parse("[2,1] m(|,|)").unwrap();
        assert_eq!(p.to_string(), "[2,1] m(|,|)");
        assert!(PermutedTree::parse("[1] m(|,|)").is_err());
        let f = FPTree::parse("[1,1] m(|,|)", 1).unwrap();
        assert_eq!(f.to_term().to_string(), "m(x1,x1)");
    }

    #[test]
    fn enumeration_sizes() {
        let sig = Signature::from_ops([("m", 2), ("e", 0)]).unwrap();
        let all = enumerate_trees(&sig, 5);
        assert_eq!(all.iter().filter(|t| t.size() == 1).count(), 2);
        assert_eq!(all.iter().filter(|t| t.size() == 3).count(), 4);
        assert_eq!(enumerate_permuted(&sig, 2, 3).len(), 2);
    }
}
