use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::category::{index_tuples, Category};
use super::data::{
    arrow_labels, derive_delta_terms, h_term, h_term_arr, labels, trees_of, PCategory, PathBounds,
    WeakPCategoryData,
};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::terms::Term;

/// A weak P-functor `C → D`: a functor together with coherence maps
/// `ψ_{op, xs} : h_D(op, F xs) → F h_C(op, xs)` for the generators.
pub trait WeakPFunctor<C: PCategory + ?Sized, D: PCategory + ?Sized> {
    fn obj(&self, x: usize) -> usize;

    fn arr(&self, f: C::Arr) -> D::Arr;

    fn psi(&self, op: &str, xs: &[usize]) -> Option<D::Arr>;
}

/// `ψ_{t, xs}` for a whole term, pasted from generator components:
/// identities at variables and `ψ_op ∘ h_D(op, ψ_{t_i})` at a node.
pub fn psi_term<C, D, F>(f: &F, c: &C, d: &D, t: &Term, xs: &[usize]) -> Result<D::Arr>
where
    C: PCategory + ?Sized,
    D: PCategory + ?Sized,
    F: WeakPFunctor<C, D> + ?Sized,
{
    match t {
        Term::Var(i) => {
            let x = xs.get(i - 1).ok_or(Error::VariableOutOfRange {
                index: *i,
                arity: xs.len(),
            })?;
            Ok(d.id(f.obj(*x)))
        }
        Term::App(op, args) => {
            let inner = args
                .iter()
                .map(|a| psi_term(f, c, d, a, xs))
                .collect::<Result<Vec<_>>>()?;
            let images = args.iter().map(|a| h_term(c, a, xs)).collect::<Result<Vec<_>>>()?;
            let lifted = d
                .act_arr(op, &inner)
                .ok_or_else(|| Error::BudgetExhausted(format!("{t} falls outside the enumerated fragment")))?;
            let top = f
                .psi(op, &images)
                .ok_or_else(|| Error::BudgetExhausted(format!("no coherence map for {op} at {images:?}")))?;
            d.compose(top, lifted)
        }
    }
}

/// A weak P-functor between finite weak P-categories, by tables.
#[derive(Clone, Debug)]
pub struct WeakPFunctorData {
    obj_map: Vec<usize>,
    arr_map: Vec<usize>,
    psi: BTreeMap<String, Vec<usize>>,
    source_objects: usize,
}

impl WeakPFunctorData {
    pub fn tabulate(
        c: &WeakPCategoryData,
        obj: impl Fn(usize) -> usize,
        arr: impl Fn(usize) -> usize,
        psi: impl Fn(&str, &[usize]) -> usize,
    ) -> Self {
        let n = c.object_count();
        WeakPFunctorData {
            obj_map: (0..n).map(obj).collect(),
            arr_map: (0..c.base.arrow_count()).map(arr).collect(),
            psi: c
                .presentation()
                .signature
                .ops()
                .map(|(op, k)| (op.to_string(), index_tuples(n, k).iter().map(|xs| psi(op, xs)).collect()))
                .collect(),
            source_objects: n,
        }
    }

    /// The identity functor with identity coherence maps.
    pub fn identity(c: &WeakPCategoryData) -> Self {
        Self::tabulate(c, |x| x, |f| f, |op, xs| c.id(c.act_obj(op, xs).expect("total action")))
    }

    /// Replaces one coherence component, for building broken data.
    pub fn with_psi(&self, op: &str, xs: &[usize], arrow: usize) -> Self {
        let mut f = self.clone();
        let idx = xs.iter().fold(0, |acc, &x| acc * self.source_objects + x);
        if let Some(table) = f.psi.get_mut(op) {
            table[idx] = arrow;
        }
        f
    }
}

impl WeakPFunctor<WeakPCategoryData, WeakPCategoryData> for WeakPFunctorData {
    fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    fn arr(&self, f: usize) -> usize {
        self.arr_map[f]
    }

    fn psi(&self, op: &str, xs: &[usize]) -> Option<usize> {
        let idx = xs.iter().fold(0, |acc, &x| acc * self.source_objects + x);
        self.psi.get(op)?.get(idx).copied()
    }
}

/// Sampling bounds for [`check_weak_functor`]: families with at most `limit`
/// members are checked exhaustively, larger ones on `limit` random members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorBounds {
    pub limit: usize,
    pub max_arity: usize,
    pub max_size: usize,
    pub pairs: usize,
    pub path: PathBounds,
    pub seed: u64,
}

impl Default for FunctorBounds {
    fn default() -> Self {
        FunctorBounds {
            limit: 20_000,
            max_arity: 3,
            max_size: 5,
            pairs: 24,
            path: PathBounds::default(),
            seed: 0x5eed,
        }
    }
}

/// Composable pairs `(f, g)`, exhaustively or sampled.
pub(crate) fn composable_pairs<C: Category + ?Sized>(c: &C, limit: usize, rng: &mut StdRng) -> Vec<(C::Arr, C::Arr)> {
    let arrows = c.arrows();
    let mut out_of: Vec<Vec<C::Arr>> = vec![Vec::new(); c.object_count()];
    for &f in &arrows {
        out_of[c.src(f)].push(f);
    }
    let total: usize = arrows.iter().map(|&f| out_of[c.dst(f)].len()).sum();
    if total <= limit {
        arrows
            .iter()
            .flat_map(|&f| out_of[c.dst(f)].iter().map(move |&g| (f, g)))
            .collect()
    } else {
        (0..limit)
            .filter_map(|_| {
                let f = *arrows.choose(rng)?;
                let g = *out_of[c.dst(f)].choose(rng)?;
                Some((f, g))
            })
            .collect()
    }
}

/// Object tuples on which `op` acts, exhaustively or sampled.
pub(crate) fn defined_tuples<C: PCategory + ?Sized>(
    c: &C,
    op: &str,
    k: usize,
    limit: usize,
    rng: &mut StdRng,
) -> Vec<Vec<usize>> {
    let n = c.object_count();
    let mut tuples = if (n as f64).powi(k as i32) <= 4.0 * limit as f64 {
        index_tuples(n, k)
    } else {
        (0..4 * limit).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect()
    };
    tuples.retain(|xs| c.act_obj(op, xs).is_some());
    if tuples.len() > limit {
        tuples.shuffle(rng);
        tuples.truncate(limit);
    }
    tuples
}

/// Arrow tuples on which `op` acts: random endpoints among `tuples`, then
/// random arrows between them.
pub(crate) fn arrow_tuples<C: PCategory + ?Sized>(
    c: &C,
    op: &str,
    tuples: &[Vec<usize>],
    count: usize,
    rng: &mut StdRng,
) -> Vec<Vec<C::Arr>> {
    let mut out = Vec::new();
    if tuples.is_empty() {
        return out;
    }
    for _ in 0..count {
        let xs = tuples.choose(rng).expect("non-empty");
        let ys = tuples.choose(rng).expect("non-empty");
        let fs: Option<Vec<C::Arr>> = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| c.hom(x, y).choose(rng).copied())
            .collect();
        if let Some(fs) = fs {
            if c.act_arr(op, &fs).is_some() {
                out.push(fs);
            }
        }
    }
    out
}

/// Checks that `f` is a functor whose coherence maps have the right
/// endpoints, are invertible and natural, commute with the cells of both
/// sides, paste along trees and are trivial on the unit tree.
pub fn check_weak_functor<C, D, F>(f: &F, c: &C, d: &D, bounds: &FunctorBounds) -> Report
where
    C: PCategory + ?Sized,
    D: PCategory + ?Sized,
    F: WeakPFunctor<C, D> + ?Sized,
{
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let mut report = Report::new("weak P-functor");

    let mut ends = Check::new("functor: endpoints");
    for g in c.arrows() {
        let img = f.arr(g);
        ends.record(d.src(img) == f.obj(c.src(g)) && d.dst(img) == f.obj(c.dst(g)), || {
            format!("{} ↦ {}", c.arrow_label(g), d.arrow_label(img))
        });
    }
    report.push(ends);

    let mut ids = Check::new("functor: identities");
    for x in 0..c.object_count() {
        ids.record(f.arr(c.id(x)) == d.id(f.obj(x)), || format!("at {}", c.object_label(x)));
    }
    report.push(ids);

    let mut comp = Check::new("functor: composites");
    for (g1, g2) in composable_pairs(c, bounds.limit, &mut rng) {
        let Ok(gf) = c.compose(g2, g1) else { continue };
        let ok = d.compose(f.arr(g2), f.arr(g1)).ok() == Some(f.arr(gf));
        comp.record(ok, || format!("{} then {}", c.arrow_label(g1), c.arrow_label(g2)));
    }
    report.push(comp);

    let mut comps = Check::new("coherence maps: endpoints and invertibility");
    let mut nat = Check::new("coherence maps: naturality");
    for (op, k) in c.presentation().signature.ops() {
        let tuples = defined_tuples(c, op, k, bounds.limit, &mut rng);
        for xs in &tuples {
            let fx: Vec<usize> = xs.iter().map(|&x| f.obj(x)).collect();
            let (Some(target), Some(source)) = (c.act_obj(op, xs), d.act_obj(op, &fx)) else {
                continue;
            };
            let detail = || format!("ψ_{op} at ({})", labels(c, xs));
            match f.psi(op, xs) {
                Some(p) => comps.record(
                    d.src(p) == source && d.dst(p) == f.obj(target) && d.inverse(p).is_some(),
                    || format!("{} is {}", detail(), d.arrow_label(p)),
                ),
                None => comps.fail(format!("{} is missing", detail())),
            }
        }
        for fs in arrow_tuples(c, op, &tuples, bounds.limit, &mut rng) {
            let src: Vec<usize> = fs.iter().map(|&g| c.src(g)).collect();
            let dst: Vec<usize> = fs.iter().map(|&g| c.dst(g)).collect();
            let ffs: Vec<D::Arr> = fs.iter().map(|&g| f.arr(g)).collect();
            let (Some(ps), Some(pd), Some(hc), Some(hd)) =
                (f.psi(op, &src), f.psi(op, &dst), c.act_arr(op, &fs), d.act_arr(op, &ffs))
            else {
                continue;
            };
            let left = d.compose(f.arr(hc), ps).ok();
            let right = d.compose(pd, hd).ok();
            nat.record(left.is_some() && left == right, || {
                format!("ψ_{op} at ({})", arrow_labels(c, &fs))
            });
        }
    }
    report.push(comps);
    report.push(nat);

    let mut cells = Check::new("coherence maps: compatibility with cells");
    for (k, eq) in c.presentation().equations.iter().enumerate() {
        let n = c.object_count();
        let tuples: Vec<Vec<usize>> = if (n as f64).powi(eq.arity as i32) <= bounds.limit as f64 {
            index_tuples(n, eq.arity)
        } else {
            (0..bounds.limit)
                .map(|_| (0..eq.arity).map(|_| rng.gen_range(0..n)).collect())
                .collect()
        };
        for xs in tuples {
            let fx: Vec<usize> = xs.iter().map(|&x| f.obj(x)).collect();
            let (Some(dc), Some(dd)) = (c.delta(k, &xs), d.delta(k, &fx)) else {
                continue;
            };
            let (Ok(pl), Ok(pr)) = (psi_term(f, c, d, &eq.lhs, &xs), psi_term(f, c, d, &eq.rhs, &xs)) else {
                continue;
            };
            let left = d.compose(f.arr(dc), pl).ok();
            let right = d.compose(pr, dd).ok();
            cells.record(left.is_some() && left == right, || {
                format!("{} = {} at ({})", eq.lhs, eq.rhs, labels(c, &xs))
            });
        }
    }
    for arity in 0..=bounds.max_arity {
        let trees = trees_of(c, arity, bounds.max_size);
        let mut pairs: Vec<(Term, Term)> = Vec::new();
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i + 1..] {
                if c.same_element(a, b, arity) == Some(true) {
                    pairs.push((a.clone(), b.clone()));
                }
            }
        }
        pairs.shuffle(&mut rng);
        pairs.truncate(bounds.pairs);
        let n = c.object_count();
        for (a, b) in pairs {
            let xs: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
            let fx: Vec<usize> = xs.iter().map(|&x| f.obj(x)).collect();
            let (Ok(dc), Ok(dd)) = (
                derive_delta_terms(c, &a, &b, &xs, &bounds.path),
                derive_delta_terms(d, &a, &b, &fx, &bounds.path),
            ) else {
                continue;
            };
            let (Ok(pa), Ok(pb)) = (psi_term(f, c, d, &a, &xs), psi_term(f, c, d, &b, &xs)) else {
                continue;
            };
            let left = d.compose(f.arr(dc), pa).ok();
            let right = d.compose(pb, dd).ok();
            cells.record(left.is_some() && left == right, || {
                format!("{a} ⇒ {b} at ({})", labels(c, &xs))
            });
        }
    }
    report.push(cells);

    let mut pasting = Check::new("coherence maps: pasting along trees");
    let n = c.object_count();
    for arity in 1..=bounds.max_arity.min(2) {
        let outer = trees_of(c, arity, bounds.max_size);
        let inner: Vec<Term> = (0..=2).flat_map(|k| trees_of(c, k, 3)).collect();
        for _ in 0..bounds.pairs {
            let (Some(q), true) = (outer.choose(&mut rng), !inner.is_empty()) else { break };
            let subs: Vec<Term> = (0..arity).map(|_| inner.choose(&mut rng).expect("non-empty").clone()).collect();
            let arities: Vec<usize> = subs.iter().map(|s| s.max_var()).collect();
            let total: usize = arities.iter().sum();
            let xs: Vec<usize> = (0..total).map(|_| rng.gen_range(0..n)).collect();
            let mut shifted = Vec::new();
            let mut groups = Vec::new();
            let mut off = 0;
            for (s, &k) in subs.iter().zip(&arities) {
                shifted.push(shift(s, off));
                groups.push(xs[off..off + k].to_vec());
                off += k;
            }
            let grafted = q.graft_unchecked(&shifted);
            let Ok(whole) = psi_term(f, c, d, &grafted, &xs) else { continue };
            let parts: Option<Vec<D::Arr>> = subs
                .iter()
                .zip(&groups)
                .map(|(s, g)| psi_term(f, c, d, s, g).ok())
                .collect();
            let images: Option<Vec<usize>> = subs.iter().zip(&groups).map(|(s, g)| h_term(c, s, g).ok()).collect();
            let (Some(parts), Some(images)) = (parts, images) else { continue };
            let Ok(top) = psi_term(f, c, d, q, &images) else { continue };
            let Ok(lifted) = h_term_arr(d, q, &parts) else { continue };
            let ok = d.compose(top, lifted).ok() == Some(whole);
            pasting.record(ok, || format!("{q} after ({})", subs.iter().map(Term::to_string).collect::<Vec<_>>().join(", ")));
        }
    }
    report.push(pasting);

    let mut unit = Check::new("coherence maps: unit tree");
    for x in 0..n {
        let ok = psi_term(f, c, d, &Term::Var(1), &[x]).ok() == Some(d.id(f.obj(x)));
        unit.record(ok, || format!("at {}", c.object_label(x)));
    }
    report.push(unit);
    report
}

fn shift(t: &Term, off: usize) -> Term {
    match t {
        Term::Var(i) => Term::Var(i + off),
        Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| shift(a, off)).collect()),
    }
}
