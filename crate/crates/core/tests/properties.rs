use operad_workbench::finmaps::{block_compose, FinFunction, Perm};
use operad_workbench::operads::Polynomial;
use operad_workbench::terms::{parse_term, Term};
use operad_workbench::trees::{compose_fp, to_term, to_tree, FPTree};
use proptest::prelude::*;

fn term(max_var: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(1..=max_var).prop_map(Term::var), Just(Term::constant("e"))];
    leaf.prop_recursive(4, 16, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app("m", vec![a, b]))
    })
}

fn perm(max: usize) -> impl Strategy<Value = Perm> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|t| Perm::new(t).unwrap())
}

fn fin_fn(n: usize, m: usize) -> impl Strategy<Value = FinFunction> {
    proptest::collection::vec(1..=m.max(1), n).prop_map(move |t| FinFunction::new(t, m).unwrap())
}

/// Lays the blocks out in the order `σ` puts them and reads off positions.
fn block_oracle(sigma: &Perm, inner: &[Perm]) -> Vec<usize> {
    let n = sigma.degree();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| sigma.apply(j + 1));
    let mut start = vec![0; n];
    let mut at = 0;
    for &j in &order {
        start[j] = at;
        at += inner[j].degree();
    }
    (0..n)
        .flat_map(|j| (1..=inner[j].degree()).map(move |m| (j, m)))
        .map(|(j, m)| start[j] + inner[j].apply(m))
        .collect()
}

fn shifted(t: &Term, offset: usize, arity: usize, total: usize) -> Term {
    let f = FinFunction::new((1..=arity).map(|i| i + offset).collect(), total).unwrap();
    t.relabel(&f).unwrap()
}

proptest! {
    #[test]
    fn printed_terms_parse_back(t in term(4)) {
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn term_tree_round_trip(t in term(4), extra in 0usize..2) {
        let n = t.max_var() + extra;
        let ft = to_tree(&t, n).unwrap();
        prop_assert_eq!(ft.arity(), n);
        prop_assert_eq!(ft.size(), t.size());
        prop_assert_eq!(to_term(&ft), t);
    }

    #[test]
    fn tree_composition_is_substitution(outer in term(2), a in term(2), b in term(2)) {
        let n = outer.max_var();
        let inner: Vec<Term> = [a, b].into_iter().take(n).collect();
        let arities: Vec<usize> = inner.iter().map(Term::max_var).collect();
        let total: usize = arities.iter().sum();
        let mut offset = 0;
        let subs: Vec<Term> = inner.iter().zip(&arities).map(|(t, &k)| {
            let s = shifted(t, offset, k, total);
            offset += k;
            s
        }).collect();
        let trees: Vec<FPTree> = inner.iter().zip(&arities).map(|(t, &k)| to_tree(t, k).unwrap()).collect();
        let composite = compose_fp(&to_tree(&outer, n).unwrap(), &trees).unwrap();
        prop_assert_eq!(to_term(&composite), outer.graft(&subs).unwrap());
    }

    #[test]
    fn block_compose_matches_layout(sigma in perm(4), seeds in proptest::collection::vec(perm(3), 4)) {
        let inner = &seeds[..sigma.degree()];
        let got = block_compose(&sigma, inner).unwrap();
        prop_assert_eq!(got.table().to_vec(), block_oracle(&sigma, inner));
    }

    #[test]
    fn perm_group_laws(p in perm(5)) {
        let n = p.degree();
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert_eq!(p.compose(&Perm::identity(n)).unwrap(), p);
    }

    #[test]
    fn function_composition_associates(f in fin_fn(3, 4), g in fin_fn(4, 2), h in fin_fn(2, 3)) {
        let left = h.after(&g).unwrap().after(&f).unwrap();
        let right = h.after(&g.after(&f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn substitution_commutes_with_evaluation(
        p in proptest::collection::vec((0u32..3, 0u32..3, -4i64..5), 1..5),
        q in proptest::collection::vec((0u32..3, -4i64..5), 1..4),
        x in -6i64..7,
        y in -6i64..7,
    ) {
        let p = Polynomial::from_terms(2, p.into_iter().map(|(a, b, c)| (vec![a, b], c))).unwrap();
        let q = Polynomial::from_terms(1, q.into_iter().map(|(a, c)| (vec![a], c))).unwrap();
        // p(q(x), q(y)) as a polynomial in two variables
        let values = [q.shift(0, 2), q.shift(1, 2)];
        let composite = p.substitute(&values, 2).unwrap();
        let direct = p.eval(&[q.eval(&[x]).unwrap(), q.eval(&[y]).unwrap()]).unwrap();
        prop_assert_eq!(composite.eval(&[x, y]).unwrap(), direct);
    }
}
