//! Operad axioms checked on enumerated or sampled elements.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::Operad;
use crate::finmaps::{block_compose, comb_compose, FinFunction, Perm};
use crate::report::{Check, Report};
use crate::terms::Flavor;

/// Bounds for [`operad_axiom_check`].
///
/// Outer elements have arity at most `max_arity`, the operands plugged into
/// them at most `max_inner_arity`, and the third level of an associativity
/// instance at most `max_leaf_arity`. Element pools come from
/// [`Operad::enumerate`] with `element_bound`, or `samples` random draws when
/// the operad cannot enumerate. Operand tuples are exhaustive while their count
/// stays within `exhaustive_limit` and are sampled (`samples` draws) beyond it.
#[derive(Clone, Debug)]
pub struct AxiomBounds {
    pub max_arity: usize,
    pub max_inner_arity: usize,
    pub max_leaf_arity: usize,
    pub element_bound: usize,
    pub samples: usize,
    pub exhaustive_limit: usize,
    pub seed: u64,
}

impl Default for AxiomBounds {
    fn default() -> Self {
        AxiomBounds {
            max_arity: 3,
            max_inner_arity: 3,
            max_leaf_arity: 2,
            element_bound: 2,
            samples: 8,
            exhaustive_limit: 64,
            seed: 0x5eed,
        }
    }
}

/// Cartesian product of `options`, or `samples` random picks from it when the
/// product exceeds `limit`.
pub(crate) fn tuples<T: Clone>(
    options: &[&[T]],
    limit: usize,
    samples: usize,
    rng: &mut StdRng,
) -> Vec<Vec<T>> {
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let count = options
        .iter()
        .try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
    match count {
        Some(c) if c <= limit => {
            let mut out = vec![Vec::new()];
            for opts in options {
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        opts.iter().map(move |x| {
                            let mut v = prefix.clone();
                            v.push(x.clone());
                            v
                        })
                    })
                    .collect();
            }
            out
        }
        _ => (0..samples)
            .map(|_| {
                options
                    .iter()
                    .map(|o| o[rng.gen_range(0..o.len())].clone())
                    .collect()
            })
            .collect(),
    }
}

pub(crate) fn show<E: std::fmt::Display>(xs: &[E]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub(crate) fn agree<E: PartialEq + std::fmt::Display>(
    lhs: crate::Result<E>,
    rhs: crate::Result<E>,
) -> Result<(), String> {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) if l == r => Ok(()),
        (Ok(l), Ok(r)) => Err(format!("{l} ≠ {r}")),
        (Err(e), _) | (_, Err(e)) => Err(format!("error: {e}")),
    }
}

pub(crate) struct Pools<E> {
    pub(crate) by_arity: Vec<Vec<E>>,
}

impl<E: Clone> Pools<E> {
    pub(crate) fn at(&self, arity: usize) -> &[E] {
        self.by_arity.get(arity).map(Vec::as_slice).unwrap_or(&[])
    }

    pub(crate) fn up_to(&self, max: usize) -> Vec<E> {
        (0..=max).flat_map(|a| self.at(a).iter().cloned()).collect()
    }
}

fn pools<O: Operad>(op: &O, bounds: &AxiomBounds, rng: &mut StdRng) -> Pools<O::Elem> {
    let top = bounds
        .max_arity
        .max(bounds.max_inner_arity)
        .max(bounds.max_leaf_arity);
    let by_arity = (0..=top)
        .map(|a| match op.enumerate(a, bounds.element_bound) {
            Some(v) => v,
            None => {
                let mut v: Vec<O::Elem> = (0..bounds.samples)
                    .filter_map(|_| op.sample(a, rng))
                    .collect();
                v.sort();
                v.dedup();
                v
            }
        })
        .collect();
    Pools { by_arity }
}

/// Runs `body` for every outer element of arity at most `max_arity`, in
/// parallel, with a per-element seeded generator, and merges the checks in order.
fn over_outer<O, F>(pools: &Pools<O::Elem>, bounds: &AxiomBounds, law: &str, body: F) -> Check
where
    O: Operad + Sync,
    F: Fn(&O::Elem, &mut StdRng, &mut Check) + Sync,
{
    let outer: Vec<&O::Elem> = (0..=bounds.max_arity).flat_map(|a| pools.at(a)).collect();
    let parts: Vec<Check> = outer
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rng = StdRng::seed_from_u64(bounds.seed ^ (i as u64).wrapping_mul(0x9e37_79b9));
            let mut check = Check::new(law);
            body(p, &mut rng, &mut check);
            check
        })
        .collect();
    let mut total = Check::new(law);
    for c in parts {
        total.absorb(c);
    }
    total
}

/// Checks the unit and associativity laws, and the action laws of the operad's
/// flavor: functoriality of the action and the two equivariance squares for
/// symmetric operads, functoriality and the combing law for finite-product ones.
pub fn operad_axiom_check<O: Operad + Sync>(op: &O, bounds: &AxiomBounds) -> Report {
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let pools = pools(op, bounds, &mut rng);
    let inner_pool = pools.up_to(bounds.max_inner_arity);
    let leaf_pool = pools.up_to(bounds.max_leaf_arity);
    let id = op.identity();
    let mut report = Report::new(format!("operad axioms: {}", op.name()));

    report.push(over_outer::<O, _>(&pools, bounds, "left unit", |p, _, c| {
        let r = agree(op.compose(&id, std::slice::from_ref(p)), Ok(p.clone()));
        c.record(r.is_ok(), || format!("p = {p}: {}", r.unwrap_err()));
    }));
    report.push(over_outer::<O, _>(&pools, bounds, "right unit", |p, _, c| {
        let ids = vec![id.clone(); op.arity(p)];
        let r = agree(op.compose(p, &ids), Ok(p.clone()));
        c.record(r.is_ok(), || format!("p = {p}: {}", r.unwrap_err()));
    }));

    report.push(over_outer::<O, _>(&pools, bounds, "associativity", |p, rng, c| {
        let n = op.arity(p);
        let opts = vec![inner_pool.as_slice(); n];
        for qs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng) {
            let k: usize = qs.iter().map(|q| op.arity(q)).sum();
            let ropts = vec![leaf_pool.as_slice(); k];
            for rs in tuples(&ropts, bounds.exhaustive_limit, bounds.samples, rng) {
                let lhs = op.compose(p, &qs).and_then(|pq| op.compose(&pq, &rs));
                let mut offset = 0;
                let rhs = qs
                    .iter()
                    .map(|q| {
                        let a = op.arity(q);
                        let block = &rs[offset..offset + a];
                        offset += a;
                        op.compose(q, block)
                    })
                    .collect::<crate::Result<Vec<_>>>()
                    .and_then(|inner| op.compose(p, &inner));
                let r = agree(lhs, rhs);
                c.record(r.is_ok(), || {
                    format!("p = {p}, q = {}, r = {}: {}", show(&qs), show(&rs), r.unwrap_err())
                });
            }
        }
    }));

    match op.flavor() {
        Flavor::Plain => {}
        Flavor::Symmetric => symmetric_laws(op, &pools, &inner_pool, bounds, &mut report),
        Flavor::Fp => fp_laws(op, &pools, &inner_pool, bounds, &mut report),
    }
    report
}

fn symmetric_laws<O: Operad + Sync>(
    op: &O,
    pools: &Pools<O::Elem>,
    inner_pool: &[O::Elem],
    bounds: &AxiomBounds,
    report: &mut Report,
) {
    report.push(over_outer::<O, _>(pools, bounds, "action unit", |p, _, c| {
        let n = op.arity(p);
        let r = agree(op.act_perm(&Perm::identity(n), p), Ok(p.clone()));
        c.record(r.is_ok(), || format!("p = {p}: {}", r.unwrap_err()));
    }));
    report.push(over_outer::<O, _>(pools, bounds, "action functoriality", |p, _, c| {
        let perms = Perm::all(op.arity(p));
        for s in &perms {
            for t in &perms {
                let lhs = op.act_perm(t, p).and_then(|tp| op.act_perm(s, &tp));
                let rhs = op.act_perm(&s.compose(t).expect("same degree"), p);
                let r = agree(lhs, rhs);
                c.record(r.is_ok(), || format!("σ = {s}, τ = {t}, p = {p}: {}", r.unwrap_err()));
            }
        }
    }));
    // (σ·p)∘(q_σ⁻¹(1), …, q_σ⁻¹(n)) = block_compose(σ, id_{k_1}, …, id_{k_n})·(p∘q•)
    report.push(over_outer::<O, _>(pools, bounds, "outer equivariance", |p, rng, c| {
        let n = op.arity(p);
        let opts = vec![inner_pool; n];
        let qss = tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng);
        for sigma in Perm::all(n) {
            let inv = sigma.inverse();
            for qs in &qss {
                let permuted: Vec<O::Elem> = (1..=n).map(|j| qs[inv.apply(j) - 1].clone()).collect();
                let lhs = op.act_perm(&sigma, p).and_then(|sp| op.compose(&sp, &permuted));
                let ids: Vec<Perm> = qs.iter().map(|q| Perm::identity(op.arity(q))).collect();
                let rhs = block_compose(&sigma, &ids)
                    .and_then(|b| op.compose(p, qs).and_then(|pq| op.act_perm(&b, &pq)));
                let r = agree(lhs, rhs);
                c.record(r.is_ok(), || {
                    format!("σ = {sigma}, p = {p}, q = {}: {}", show(qs), r.unwrap_err())
                });
            }
        }
    }));
    // p∘(τ_1·q_1, …, τ_n·q_n) = block_compose(id, τ•)·(p∘q•)
    report.push(over_outer::<O, _>(pools, bounds, "inner equivariance", |p, rng, c| {
        let n = op.arity(p);
        let opts = vec![inner_pool; n];
        for qs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng) {
            let perm_sets: Vec<Vec<Perm>> = qs.iter().map(|q| Perm::all(op.arity(q))).collect();
            let popts: Vec<&[Perm]> = perm_sets.iter().map(Vec::as_slice).collect();
            for taus in tuples(&popts, bounds.exhaustive_limit, bounds.samples, rng) {
                let lhs = qs
                    .iter()
                    .zip(&taus)
                    .map(|(q, t)| op.act_perm(t, q))
                    .collect::<crate::Result<Vec<_>>>()
                    .and_then(|acted| op.compose(p, &acted));
                let rhs = block_compose(&Perm::identity(n), &taus)
                    .and_then(|b| op.compose(p, &qs).and_then(|pq| op.act_perm(&b, &pq)));
                let r = agree(lhs, rhs);
                c.record(r.is_ok(), || {
                    format!("p = {p}, q = {}, τ = {}: {}", show(&qs), show(&taus), r.unwrap_err())
                });
            }
        }
    }));
}

fn fp_laws<O: Operad + Sync>(
    op: &O,
    pools: &Pools<O::Elem>,
    inner_pool: &[O::Elem],
    bounds: &AxiomBounds,
    report: &mut Report,
) {
    let maps_from = |n: usize| -> Vec<FinFunction> {
        (0..=bounds.max_arity)
            .flat_map(|m| FinFunction::all(n, m))
            .collect()
    };
    report.push(over_outer::<O, _>(pools, bounds, "action unit", |p, _, c| {
        let n = op.arity(p);
        let r = agree(op.act_fn(&FinFunction::identity(n), p), Ok(p.clone()));
        c.record(r.is_ok(), || format!("p = {p}: {}", r.unwrap_err()));
    }));
    report.push(over_outer::<O, _>(pools, bounds, "action functoriality", |p, rng, c| {
        let gs = maps_from(op.arity(p));
        let pairs: Vec<(FinFunction, FinFunction)> = gs
            .iter()
            .flat_map(|g| maps_from(g.cod()).into_iter().map(move |f| (f, g.clone())))
            .collect();
        let picked = tuples(&[pairs.as_slice()], bounds.exhaustive_limit * 4, bounds.samples, rng);
        for pair in picked {
            let (f, g) = &pair[0];
            let lhs = op.act_fn(g, p).and_then(|gp| op.act_fn(f, &gp));
            let rhs = op.act_fn(&f.after(g).expect("composable"), p);
            let r = agree(lhs, rhs);
            c.record(r.is_ok(), || format!("f = {f}, g = {g}, p = {p}: {}", r.unwrap_err()));
        }
    }));
    // (f·p)∘(g_1·q_1, …, g_m·q_m) = comb(f, g•)·(p∘(q_f(1), …, q_f(n)))
    let labelled: Vec<(O::Elem, FinFunction)> = inner_pool
        .iter()
        .flat_map(|q| {
            (0..=bounds.max_inner_arity)
                .flat_map(|j| FinFunction::all(op.arity(q), j))
                .map(move |g| (q.clone(), g))
        })
        .collect();
    report.push(over_outer::<O, _>(pools, bounds, "combing", |p, rng, c| {
        for f in maps_from(op.arity(p)) {
            let opts = vec![labelled.as_slice(); f.cod()];
            for gqs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng) {
                let lhs = gqs
                    .iter()
                    .map(|(q, g)| op.act_fn(g, q))
                    .collect::<crate::Result<Vec<_>>>()
                    .and_then(|acted| op.act_fn(&f, p).and_then(|fp| op.compose(&fp, &acted)));
                let gs: Vec<FinFunction> = gqs.iter().map(|(_, g)| g.clone()).collect();
                let picked: Vec<O::Elem> = f.table().iter().map(|&j| gqs[j - 1].0.clone()).collect();
                let rhs = comb_compose(&f, &gs)
                    .and_then(|h| op.compose(p, &picked).and_then(|pq| op.act_fn(&h, &pq)));
                let r = agree(lhs, rhs);
                c.record(r.is_ok(), || {
                    let qs: Vec<String> = gqs.iter().map(|(q, g)| format!("{g}·{q}")).collect();
                    format!("f = {f}, p = {p}, q = ({}): {}", qs.join(", "), r.unwrap_err())
                });
            }
        }
    }));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operads::{CommMonoidFPOperad, IntPolyFPOperad, SymmetryOperad, TerminalPlainOperad};

    /// Block composition with the last block shifted by one place.
    struct Corrupted;

    impl Operad for Corrupted {
        type Elem = Perm;

        fn name(&self) -> String {
            "corrupted".into()
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

        fn compose(&self, p: &Perm, qs: &[Perm]) -> crate::Result<Perm> {
            let good = block_compose(p, qs)?;
            let n = good.degree();
            if n < 2 {
                return Ok(good);
            }
            let mut table = good.table().to_vec();
            table.swap(n - 2, n - 1);
            Perm::new(table)
        }

        fn act_perm(&self, sigma: &Perm, p: &Perm) -> crate::Result<Perm> {
            p.compose(&sigma.inverse())
        }

        fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<Perm>> {
            Some(Perm::all(arity))
        }
    }

    #[test]
    fn builtins_pass() {
        let b = AxiomBounds::default();
        assert!(operad_axiom_check(&TerminalPlainOperad, &b).passed());
        assert!(operad_axiom_check(&SymmetryOperad, &b).passed());
        let small = AxiomBounds {
            max_arity: 2,
            max_inner_arity: 2,
            ..b.clone()
        };
        let r = operad_axiom_check(&CommMonoidFPOperad, &small);
        assert!(r.passed(), "{r}");
        let r = operad_axiom_check(&IntPolyFPOperad, &small);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn corrupted_compose_is_caught() {
        let r = operad_axiom_check(&Corrupted, &AxiomBounds::default());
        assert!(!r.passed());
        let unit = r.check("right unit").unwrap();
        assert!(!unit.passed);
        assert!(unit.counterexample.as_ref().unwrap().contains("p = "));
    }

    #[test]
    fn tuples_switches_to_sampling() {
        let xs = [1, 2, 3];
        let mut rng = StdRng::seed_from_u64(1);
        assert_eq!(tuples(&[&xs[..], &xs[..]], 9, 4, &mut rng).len(), 9);
        assert_eq!(tuples(&[&xs[..], &xs[..]], 8, 4, &mut rng).len(), 4);
        assert_eq!(tuples::<i32>(&[], 8, 4, &mut rng), vec![Vec::<i32>::new()]);
    }
}
