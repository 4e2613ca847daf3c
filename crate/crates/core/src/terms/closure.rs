//! Bounded congruence closure of a set of equations.
//!
//! All terms of a fixed arity up to a size bound are hash-consed into an arena.
//! Classes are seeded with every size-bounded substitution instance of every
//! equation, then closed under congruence until nothing changes or the round
//! budget runs out. Every merge is a consequence of the equations, so the result
//! is sound; it is complete only relative to the size bound.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{terms_by_size, Equation, Signature, Term};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationOptions {
    pub max_term_size: usize,
    /// Upper bound on congruence rounds.
    pub max_steps: usize,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions {
            max_term_size: 7,
            max_steps: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermClass {
    pub members: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MergeReason {
    /// Instance of equation `equation` (0-based).
    Instance { equation: usize },
    Congruence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Merge {
    a: usize,
    b: usize,
    reason: MergeReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub from: String,
    pub to: String,
    pub reason: MergeReason,
}

#[derive(Debug, Clone)]
struct Node {
    op: Option<usize>,
    children: Vec<usize>,
}

/// The outcome of [`closure_saturate`].
#[derive(Debug, Clone)]
pub struct Saturation {
    arity: usize,
    terms: Vec<Term>,
    nodes: Vec<Node>,
    index: HashMap<Term, usize>,
    parent: Vec<usize>,
    merges: Vec<Merge>,
    rounds: usize,
    exhausted: bool,
}

impl Saturation {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find_compress(&mut self, x: usize) -> usize {
        let root = self.find(x);
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize, reason: MergeReason) -> bool {
        let (ra, rb) = (self.find_compress(a), self.find_compress(b));
        if ra == rb {
            return false;
        }
        // smaller index stays the representative, which keeps output deterministic
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        self.merges.push(Merge { a, b, reason });
        true
    }

    fn congruence_round(&mut self) -> usize {
        let mut table: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut pending = Vec::new();
        for id in 0..self.nodes.len() {
            let Some(op) = self.nodes[id].op else { continue };
            let key = (
                op,
                self.nodes[id].children.iter().map(|&c| self.find(c)).collect::<Vec<_>>(),
            );
            match table.get(&key) {
                Some(&other) => pending.push((other, id)),
                None => {
                    table.insert(key, id);
                }
            }
        }
        pending
            .into_iter()
            .filter(|&(a, b)| self.union(a, b, MergeReason::Congruence))
            .count()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn merge_count(&self) -> usize {
        self.merges.len()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// True when the round budget ran out before a fixpoint.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    /// `None` when either term lies outside the enumerated domain.
    pub fn same_class(&self, a: &Term, b: &Term) -> Option<bool> {
        let (&ia, &ib) = (self.index.get(a)?, self.index.get(b)?);
        Some(self.find(ia) == self.find(ib))
    }

    /// Classes with members in enumeration order, ordered by first member.
    pub fn classes(&self) -> Vec<TermClass> {
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<TermClass> = Vec::new();
        for (id, t) in self.terms.iter().enumerate() {
            let root = self.find(id);
            let slot = *by_root.entry(root).or_insert_with(|| {
                out.push(TermClass { members: Vec::new() });
                out.len() - 1
            });
            out[slot].members.push(t.clone());
        }
        out
    }

    /// Runs one more congruence pass on a copy and reports whether it merged anything.
    pub fn is_stable(&self) -> bool {
        let mut copy = self.clone();
        copy.congruence_round() == 0
    }

    /// A chain of recorded merges connecting `a` to `b`.
    pub fn trace(&self, a: &Term, b: &Term) -> Option<Vec<TraceStep>> {
        let (&ia, &ib) = (self.index.get(a)?, self.index.get(b)?);
        if self.find(ia) != self.find(ib) {
            return None;
        }
        let mut adj: HashMap<usize, Vec<(usize, MergeReason)>> = HashMap::new();
        for m in &self.merges {
            adj.entry(m.a).or_default().push((m.b, m.reason));
            adj.entry(m.b).or_default().push((m.a, m.reason));
        }
        let mut prev: HashMap<usize, (usize, MergeReason)> = HashMap::new();
        let mut queue = VecDeque::from([ia]);
        let mut seen = vec![false; self.terms.len()];
        seen[ia] = true;
        while let Some(x) = queue.pop_front() {
            if x == ib {
                break;
            }
            for &(y, reason) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if !seen[y] {
                    seen[y] = true;
                    prev.insert(y, (x, reason));
                    queue.push_back(y);
                }
            }
        }
        let mut steps = Vec::new();
        let mut cur = ib;
        while cur != ia {
            let (p, reason) = prev[&cur];
            steps.push(TraceStep {
                from: self.terms[p].to_string(),
                to: self.terms[cur].to_string(),
                reason,
            });
            cur = p;
        }
        steps.reverse();
        Some(steps)
    }
}

/// Saturates the arity-`arity` fragment of the congruence generated by `eqs`.
pub fn closure_saturate(
    sig: &Signature,
    eqs: &[Equation],
    arity: usize,
    opts: SaturationOptions,
) -> Result<Saturation> {
    if opts.max_term_size == 0 || opts.max_steps == 0 {
        return Err(Error::InvalidData("saturation bounds must be positive".into()));
    }
    for eq in eqs {
        eq.lhs.check(sig)?;
        eq.rhs.check(sig)?;
    }
    let by_size = terms_by_size(sig, arity, opts.max_term_size);
    let op_ids: HashMap<&str, usize> = sig.ops().enumerate().map(|(i, (op, _))| (op, i)).collect();

    let mut terms = Vec::new();
    let mut index = HashMap::new();
    let mut nodes = Vec::new();
    for t in by_size.iter().flatten() {
        let node = match t {
            Term::Var(_) => Node {
                op: None,
                children: Vec::new(),
            },
            Term::App(op, args) => Node {
                op: Some(op_ids[op.as_str()]),
                // children are strictly smaller, hence already indexed
                children: args.iter().map(|a| index[a]).collect(),
            },
        };
        index.insert(t.clone(), terms.len());
        terms.push(t.clone());
        nodes.push(node);
    }

    let mut sat = Saturation {
        arity,
        parent: (0..terms.len()).collect(),
        terms,
        nodes,
        index,
        merges: Vec::new(),
        rounds: 0,
        exhausted: false,
    };

    for (k, eq) in eqs.iter().enumerate() {
        for (lhs, rhs) in instances(eq, &by_size, opts.max_term_size) {
            let (a, b) = (sat.index[&lhs], sat.index[&rhs]);
            sat.union(a, b, MergeReason::Instance { equation: k });
        }
    }

    loop {
        if sat.rounds == opts.max_steps {
            sat.exhausted = !sat.is_stable();
            break;
        }
        sat.rounds += 1;
        if sat.congruence_round() == 0 {
            break;
        }
    }
    Ok(sat)
}

/// All substitution instances of `eq` whose two sides fit the size bound.
fn instances(eq: &Equation, by_size: &[Vec<Term>], max_size: usize) -> Vec<(Term, Term)> {
    let n = eq.arity;
    let mut occ_l = vec![0usize; n + 1];
    let mut occ_r = vec![0usize; n + 1];
    eq.lhs.var_seq().into_iter().for_each(|i| occ_l[i] += 1);
    eq.rhs.var_seq().into_iter().for_each(|i| occ_r[i] += 1);
    let (base_l, base_r) = (eq.lhs.size(), eq.rhs.size());
    if base_l > max_size || base_r > max_size {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut subs: Vec<Term> = Vec::with_capacity(n);
    fn go(
        i: usize,
        n: usize,
        occ: (&[usize], &[usize]),
        room: (usize, usize),
        by_size: &[Vec<Term>],
        eq: &Equation,
        subs: &mut Vec<Term>,
        out: &mut Vec<(Term, Term)>,
    ) {
        if i > n {
            out.push((eq.lhs.graft_unchecked(subs), eq.rhs.graft_unchecked(subs)));
            return;
        }
        let (ol, or) = (occ.0[i], occ.1[i]);
        if ol == 0 && or == 0 {
            // variable unused on both sides; any value gives the same instance
            if let Some(t) = by_size.get(1).and_then(|v| v.first()) {
                subs.push(t.clone());
                go(i + 1, n, occ, room, by_size, eq, subs, out);
                subs.pop();
            }
            return;
        }
        for (s, bucket) in by_size.iter().enumerate().skip(1) {
            let extra_l = ol * (s - 1);
            let extra_r = or * (s - 1);
            if extra_l > room.0 || extra_r > room.1 {
                break;
            }
            for t in bucket {
                subs.push(t.clone());
                go(i + 1, n, occ, (room.0 - extra_l, room.1 - extra_r), by_size, eq, subs, out);
                subs.pop();
            }
        }
    }
    go(
        1,
        n,
        (&occ_l, &occ_r),
        (max_size - base_l, max_size - base_r),
        by_size,
        eq,
        &mut subs,
        &mut out,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn sig() -> Signature {
        Signature::from_ops([("m", 2), ("e", 0)]).unwrap()
    }

    fn eqs(src: &[&str]) -> Vec<Equation> {
        src.iter()
            .map(|s| {
                let (l, r) = s.split_once('=').unwrap();
                Equation::inferred(parse_term(l).unwrap(), parse_term(r).unwrap())
            })
            .collect()
    }

    fn monoid() -> Vec<Equation> {
        eqs(&["m(x1,m(x2,x3)) = m(m(x1,x2),x3)", "m(e,x1) = x1", "m(x1,e) = x1"])
    }

    fn opts(size: usize) -> SaturationOptions {
        SaturationOptions {
            max_term_size: size,
            max_steps: 100,
        }
    }

    #[test]
    fn no_equations_gives_singletons() {
        let sat = closure_saturate(&sig(), &[], 2, opts(5)).unwrap();
        assert!(sat.classes().iter().all(|c| c.members.len() == 1));
        assert_eq!(sat.classes().len(), sat.term_count());
        assert!(!sat.exhausted());
    }

    #[test]
    fn monoid_units_collapse() {
        let sat = closure_saturate(&sig(), &monoid(), 1, opts(7)).unwrap();
        let a = parse_term("m(e,m(x1,e))").unwrap();
        assert_eq!(sat.same_class(&a, &Term::Var(1)), Some(true));
        assert!(sat.is_stable());
        let trace = sat.trace(&a, &Term::Var(1)).unwrap();
        assert_eq!(trace.first().unwrap().from, "m(e,m(x1,e))");
        assert_eq!(trace.last().unwrap().to, "x1");
    }

    #[test]
    fn comm_monoid_rotation() {
        let mut e = monoid();
        e.extend(eqs(&["m(x1,x2) = m(x2,x1)"]));
        let sat = closure_saturate(&sig(), &e, 3, opts(7)).unwrap();
        let a = parse_term("m(x1,m(x2,x3))").unwrap();
        let b = parse_term("m(x3,m(x1,x2))").unwrap();
        assert_eq!(sat.same_class(&a, &b), Some(true));
        // different variable multisets never merge
        let c = parse_term("m(x1,m(x1,x3))").unwrap();
        assert_eq!(sat.same_class(&a, &c), Some(false));
    }

    #[test]
    fn out_of_domain_is_unknown() {
        let sat = closure_saturate(&sig(), &monoid(), 1, opts(3)).unwrap();
        let big = parse_term("m(e,m(x1,e))").unwrap();
        assert_eq!(sat.same_class(&big, &Term::Var(1)), None);
    }

    #[test]
    fn zero_budget_rejected() {
        let o = SaturationOptions {
            max_term_size: 0,
            max_steps: 1,
        };
        assert!(closure_saturate(&sig(), &[], 1, o).is_err());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let sig = Signature::from_ops([("f", 1), ("g", 1)]).unwrap();
        let e = eqs(&["f(x1) = g(x1)"]);
        let tight = SaturationOptions {
            max_term_size: 4,
            max_steps: 1,
        };
        // merging g(g(f(x1))) with g(g(g(x1))) needs a second congruence round
        let sat = closure_saturate(&sig, &e, 1, tight).unwrap();
        assert!(sat.exhausted());
        assert!(!sat.is_stable());
        let full = closure_saturate(&sig, &e, 1, opts(4)).unwrap();
        assert!(!full.exhausted());
        let a = parse_term("f(f(f(x1)))").unwrap();
        let b = parse_term("g(g(g(x1)))").unwrap();
        assert_eq!(full.same_class(&a, &b), Some(true));
    }
}
