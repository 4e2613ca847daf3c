//! Shortest rewrite paths between terms, one equation application per step.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{Equation, Term};

/// Rewriting the subterm at `position` with equation `equation`, read left to
/// right when `forward` and right to left otherwise. `substitution[i]` is the
/// value of `x{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteStep {
    pub position: Vec<usize>,
    pub equation: usize,
    pub forward: bool,
    pub substitution: Vec<Term>,
    pub result: Term,
}

impl RewriteStep {
    fn sort_key(&self) -> String {
        let subs: Vec<String> = self.substitution.iter().map(Term::to_string).collect();
        format!(
            "{:?}/{}/{}/{}",
            self.position,
            self.equation,
            if self.forward { 0 } else { 1 },
            subs.join(",")
        )
    }
}

fn match_pattern(pattern: &Term, t: &Term, subs: &mut [Option<Term>]) -> bool {
    match pattern {
        Term::Var(i) => match &subs[i - 1] {
            Some(bound) => bound == t,
            None => {
                subs[i - 1] = Some(t.clone());
                true
            }
        },
        Term::App(op, args) => match t {
            Term::App(op2, args2) if op == op2 && args.len() == args2.len() => args
                .iter()
                .zip(args2)
                .all(|(p, s)| match_pattern(p, s, subs)),
            _ => false,
        },
    }
}

/// Single-step rewrites of `t`, sorted by step serialization.
pub(crate) fn neighbours(t: &Term, eqs: &[Equation], max_size: usize) -> Vec<RewriteStep> {
    let mut out = Vec::new();
    for position in t.positions() {
        let sub = t.subterm(&position).expect("position from positions()");
        for (k, eq) in eqs.iter().enumerate() {
            for forward in [true, false] {
                let (from, to) = if forward { (&eq.lhs, &eq.rhs) } else { (&eq.rhs, &eq.lhs) };
                let mut subs = vec![None; eq.arity];
                if !match_pattern(from, sub, &mut subs) {
                    continue;
                }
                // the other side may mention variables the pattern does not bind
                let Some(subs) = subs.into_iter().collect::<Option<Vec<Term>>>() else {
                    continue;
                };
                let replaced = to.graft_unchecked(&subs);
                let Some(result) = t.replace_at(&position, replaced) else { continue };
                if result.size() > max_size || &result == t {
                    continue;
                }
                out.push(RewriteStep {
                    position: position.clone(),
                    equation: k,
                    forward,
                    substitution: subs,
                    result,
                });
            }
        }
    }
    out.sort_by_key(RewriteStep::sort_key);
    out
}

/// Breadth-first search for a shortest rewrite path from `from` to `to` that
/// stays within `max_size` nodes and visits at most `max_visits` terms. Among
/// shortest paths the one with lexicographically least step serializations wins.
pub fn rewrite_path(
    eqs: &[Equation],
    from: &Term,
    to: &Term,
    max_size: usize,
    max_visits: usize,
) -> Option<Vec<RewriteStep>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: HashMap<Term, (Term, RewriteStep)> = HashMap::new();
    let mut queue = VecDeque::from([from.clone()]);
    prev.insert(from.clone(), (from.clone(), placeholder(from)));
    let mut visits = 0;
    while let Some(t) = queue.pop_front() {
        visits += 1;
        if visits > max_visits {
            return None;
        }
        for step in neighbours(&t, eqs, max_size) {
            if prev.contains_key(&step.result) {
                continue;
            }
            let next = step.result.clone();
            prev.insert(next.clone(), (t.clone(), step));
            if &next == to {
                let mut path = Vec::new();
                let mut cur = next;
                while &cur != from {
                    let (p, s) = prev.remove(&cur).expect("parent recorded");
                    path.push(s);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(next);
        }
    }
    None
}

fn placeholder(t: &Term) -> RewriteStep {
    RewriteStep {
        position: Vec::new(),
        equation: usize::MAX,
        forward: true,
        substitution: Vec::new(),
        result: t.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_term;

    fn eq(l: &str, r: &str) -> Equation {
        Equation::inferred(parse_term(l).unwrap(), parse_term(r).unwrap())
    }

    #[test]
    fn single_assoc_step() {
        let eqs = vec![eq("m(m(x1,x2),x3)", "m(x1,m(x2,x3))")];
        let a = parse_term("m(m(x1,x2),x3)").unwrap();
        let b = parse_term("m(x1,m(x2,x3))").unwrap();
        let path = rewrite_path(&eqs, &a, &b, 7, 1000).unwrap();
        assert_eq!(path.len(), 1);
        assert!(path[0].forward);
        assert_eq!(path[0].position, Vec::<usize>::new());
        let back = rewrite_path(&eqs, &b, &a, 7, 1000).unwrap();
        assert!(!back[0].forward);
    }

    #[test]
    fn unreachable_within_bound() {
        let eqs = vec![eq("m(e,x1)", "x1")];
        let a = parse_term("m(x1,x2)").unwrap();
        let b = parse_term("m(x2,x1)").unwrap();
        assert!(rewrite_path(&eqs, &a, &b, 7, 1000).is_none());
    }

    #[test]
    fn two_step_path_uses_inner_position() {
        let eqs = vec![
            eq("m(m(x1,x2),x3)", "m(x1,m(x2,x3))"),
            eq("m(e,x1)", "x1"),
        ];
        let a = parse_term("m(m(x1,m(e,x2)),x3)").unwrap();
        let b = parse_term("m(x1,m(x2,x3))").unwrap();
        let path = rewrite_path(&eqs, &a, &b, 7, 10_000).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path.last().unwrap().result, b);
    }
}
