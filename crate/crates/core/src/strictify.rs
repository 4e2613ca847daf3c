//! Strictification of a finite weak P-category over a plain presentation.
//!
//! An object of `st A` is a pair `(p, a•)` of an element `p` of the presented
//! operad and a tuple of base objects of matching length; arrows `(p, a•) →
//! (p', b•)` are base arrows `h(p, a•) → h(p', b•)`. Elements act by target
//! composition on the first component and concatenation on the second, so
//! the action is strict. Only elements up to an arity bound are enumerated,
//! which makes the action partial.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operads::{BuiltinElem, Operad};
use crate::report::{Check, Report};
use crate::terms::{Flavor, Presentation, RewriteStep, Term};
use crate::trees::{enumerate_trees_of_arity, PermutedTree};
use crate::weakcat::{
    arrow_labels, check_weak_functor, h_term, h_term_arr, index_tuples, labels, path_arrow,
    product, psi_term, Category, FunctorBounds, PCategory, PathBounds, WeakPCategoryData, WeakPFunctor,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictifyBounds {
    /// Largest number of operands of an object.
    pub arity_bound: usize,
    /// Most target elements allowed per arity.
    pub element_bound: usize,
    /// Largest tree searched for representatives.
    pub rep_size: usize,
    pub path: PathBounds,
}

impl Default for StrictifyBounds {
    fn default() -> Self {
        StrictifyBounds {
            arity_bound: 3,
            element_bound: 20,
            rep_size: 9,
            path: PathBounds::default(),
        }
    }
}

/// An arrow of `st A`: a base arrow between the images of its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StArrow {
    pub src: usize,
    pub dst: usize,
    pub base: usize,
}

/// An element of the presented operad with its representative tree.
#[derive(Clone, Debug)]
pub struct Element {
    pub value: BuiltinElem,
    pub arity: usize,
    pub rep: Term,
}

type Path = (Term, Vec<RewriteStep>);

#[derive(Clone, Debug)]
pub struct StrictPCategory {
    weak: WeakPCategoryData,
    bounds: StrictifyBounds,
    elements: Vec<Element>,
    identity: usize,
    objects: Vec<(usize, Vec<usize>)>,
    object_index: HashMap<(usize, Vec<usize>), usize>,
    by_arity: Vec<Vec<usize>>,
    images: Vec<usize>,
    action: HashMap<(String, Vec<usize>), usize>,
    psi: HashMap<(String, Vec<usize>), (usize, usize)>,
    unit_paths: HashMap<String, Path>,
    unreached: Vec<String>,
}

/// Orders trees by size, then so that left-nested combs come first.
fn rep_key(t: &crate::trees::SRTree) -> (usize, String) {
    (t.size(), t.canonical().replace('|', "~"))
}

fn shift(t: &Term, off: usize) -> Term {
    match t {
        Term::Var(i) => Term::Var(i + off),
        Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| shift(a, off)).collect()),
    }
}

fn corolla(op: &str, k: usize) -> Term {
    Term::App(op.to_string(), (1..=k).map(Term::Var).collect())
}

/// Index tuples of length `k` whose weights sum to at most `room`.
fn bounded_tuples(weights: &[usize], k: usize, room: usize) -> Vec<Vec<usize>> {
    fn go(weights: &[usize], k: usize, room: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for (i, &w) in weights.iter().enumerate() {
            if w <= room {
                acc.push(i);
                go(weights, k, room - w, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(weights, k, room, &mut Vec::new(), &mut out);
    out
}

/// Builds `st A`.
pub fn strictify(w: &WeakPCategoryData, bounds: &StrictifyBounds) -> Result<StrictPCategory> {
    let pres = w.presentation();
    if pres.flavor != Flavor::Plain {
        return Err(Error::Unsupported(format!(
            "strictification is implemented for plain presentations; {} is {}",
            pres.name, pres.flavor
        )));
    }
    let target = &w.presented.target;
    let mut elements = Vec::new();
    let mut element_index = HashMap::new();
    let mut unreached = Vec::new();
    for n in 0..=bounds.arity_bound {
        let values = target
            .enumerate(n, bounds.element_bound)
            .ok_or_else(|| Error::Unsupported(format!("{} cannot enumerate its elements", target.name())))?;
        if values.len() > bounds.element_bound {
            return Err(Error::BudgetExhausted(format!(
                "enumeration bound exceeded: {} elements of arity {n}, bound {}",
                values.len(),
                bounds.element_bound
            )));
        }
        let mut trees = enumerate_trees_of_arity(&pres.signature, n, bounds.rep_size);
        trees.sort_by_key(rep_key);
        let mut reps: HashMap<BuiltinElem, Term> = HashMap::new();
        for t in trees {
            let v = w.presented.eval_tree(&t)?;
            reps.entry(v).or_insert_with(|| PermutedTree::plain(t).to_term());
        }
        for v in values {
            match reps.remove(&v) {
                Some(rep) => {
                    element_index.insert(v.clone(), elements.len());
                    elements.push(Element { value: v, arity: n, rep });
                }
                None => unreached.push(v.to_string()),
            }
        }
    }
    let identity = *element_index
        .get(&target.identity())
        .ok_or_else(|| Error::Validation("the identity element has no representative".into()))?;

    let nobj = w.object_count();
    let mut objects = Vec::new();
    let mut object_index = HashMap::new();
    let mut by_arity = vec![Vec::new(); bounds.arity_bound + 1];
    let mut images = Vec::new();
    for (e, el) in elements.iter().enumerate() {
        for xs in index_tuples(nobj, el.arity) {
            images.push(h_term(w, &el.rep, &xs)?);
            object_index.insert((e, xs.clone()), objects.len());
            by_arity[el.arity].push(objects.len());
            objects.push((e, xs));
        }
    }

    let mut s = StrictPCategory {
        weak: w.clone(),
        bounds: *bounds,
        elements,
        identity,
        objects,
        object_index,
        by_arity,
        images,
        action: HashMap::new(),
        psi: HashMap::new(),
        unit_paths: HashMap::new(),
        unreached,
    };
    s.build_action(&element_index)?;
    Ok(s)
}

impl StrictPCategory {
    fn build_action(&mut self, element_index: &HashMap<BuiltinElem, usize>) -> Result<()> {
        let w = &self.weak;
        let target = &w.presented.target;
        let mut by_elem: Vec<Vec<usize>> = vec![Vec::new(); self.elements.len()];
        for (x, (e, _)) in self.objects.iter().enumerate() {
            by_elem[*e].push(x);
        }
        for (op, k) in w.presentation().signature.ops() {
            let head = &w.presented.interp[op];
            for es in self.element_tuples(k) {
                let args: Vec<BuiltinElem> = es.iter().map(|&e| self.elements[e].value.clone()).collect();
                let Some(&r) = element_index.get(&target.compose(head, &args)?) else {
                    continue;
                };
                self.action.insert((op.to_string(), es.clone()), r);
                let mut off = 0;
                let mut subs = Vec::new();
                for &e in &es {
                    subs.push(shift(&self.elements[e].rep, off));
                    off += self.elements[e].arity;
                }
                let from = corolla(op, k).graft_unchecked(&subs);
                let path = crate::weakcat::find_path(w, &from, &self.elements[r].rep, off, &self.bounds.path)?;
                let groups: Vec<Vec<usize>> = es.iter().map(|&e| by_elem[e].clone()).collect();
                for xs in product(&groups) {
                    let operands: Vec<usize> = xs.iter().flat_map(|&x| self.objects[x].1.clone()).collect();
                    let f = path_arrow(w, &from, &path, &operands)?;
                    let inv = w.inverse(f).ok_or_else(|| {
                        Error::Validation(format!("cell {} is not invertible", w.arrow_label(f)))
                    })?;
                    self.psi.insert((op.to_string(), xs), (f, inv));
                }
            }
            let phi = *element_index
                .get(head)
                .ok_or_else(|| Error::Validation(format!("generator {op} lies outside the enumerated elements")))?;
            let rep = self.elements[phi].rep.clone();
            let path = crate::weakcat::find_path(w, &rep, &corolla(op, k), k, &self.bounds.path)?;
            self.unit_paths.insert(op.to_string(), (rep, path));
        }
        Ok(())
    }

    /// Element tuples of length `k` whose arities sum to at most the bound.
    fn element_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let arities: Vec<usize> = self.elements.iter().map(|e| e.arity).collect();
        bounded_tuples(&arities, k, self.bounds.arity_bound)
    }

    /// Object tuples of length `k` with at most `arity_bound` operands in
    /// total: exactly the tuples the generators can act on.
    pub fn object_tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let arities: Vec<usize> = self.objects.iter().map(|(e, _)| self.elements[*e].arity).collect();
        bounded_tuples(&arities, k, self.bounds.arity_bound)
    }

    pub fn weak(&self) -> &WeakPCategoryData {
        &self.weak
    }

    pub fn bounds(&self) -> &StrictifyBounds {
        &self.bounds
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    /// Target elements up to the bound that no tree reached.
    pub fn unreached(&self) -> &[String] {
        &self.unreached
    }

    /// `(element, operands)` of an object.
    pub fn object(&self, x: usize) -> (&Element, &[usize]) {
        let (e, xs) = &self.objects[x];
        (&self.elements[*e], xs)
    }

    pub fn find_object(&self, element: usize, operands: &[usize]) -> Option<usize> {
        self.object_index.get(&(element, operands.to_vec())).copied()
    }

    /// Objects with `n` operands.
    pub fn objects_of_arity(&self, n: usize) -> &[usize] {
        self.by_arity.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `F(p, a•) = h(p, a•)`.
    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    /// The object `(1, a)`.
    pub fn unit_object(&self, a: usize) -> usize {
        self.object_index[&(self.identity, vec![a])]
    }

    /// `h'(p, xs)` for an element index `p`, through its representative.
    pub fn act_element(&self, p: usize, xs: &[usize]) -> Result<usize> {
        h_term(self, &self.elements[p].rep, xs)
    }

    pub fn act_element_arr(&self, p: usize, fs: &[StArrow]) -> Result<StArrow> {
        h_term_arr(self, &self.elements[p].rep, fs)
    }

    fn element_of(&self, value: &BuiltinElem) -> Option<usize> {
        self.elements.iter().position(|e| &e.value == value)
    }

    /// The comparison functor `F : st A → A`.
    pub fn comparison(&self) -> Comparison<'_> {
        Comparison(self)
    }

    /// The unit `F′ : A → st A`, `a ↦ (1, a)`.
    pub fn unit(&self) -> UnitFunctor<'_> {
        UnitFunctor(self)
    }
}

impl fmt::Display for StrictPCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "st({}): {} elements, {} objects up to arity {}",
            self.weak.name,
            self.elements.len(),
            self.objects.len(),
            self.bounds.arity_bound
        )
    }
}

impl Category for StrictPCategory {
    type Arr = StArrow;

    fn object_count(&self) -> usize {
        self.objects.len()
    }

    fn object_label(&self, x: usize) -> String {
        let (e, xs) = &self.objects[x];
        format!("({}; {})", self.elements[*e].value, labels(&self.weak, xs))
    }

    fn arrow_label(&self, f: StArrow) -> String {
        format!(
            "{} → {} by {}",
            self.object_label(f.src),
            self.object_label(f.dst),
            self.weak.arrow_label(f.base)
        )
    }

    fn src(&self, f: StArrow) -> usize {
        f.src
    }

    fn dst(&self, f: StArrow) -> usize {
        f.dst
    }

    fn id(&self, x: usize) -> StArrow {
        StArrow {
            src: x,
            dst: x,
            base: self.weak.id(self.images[x]),
        }
    }

    fn compose(&self, g: StArrow, f: StArrow) -> Result<StArrow> {
        if f.dst != g.src {
            return Err(Error::DegreeMismatch("arrows are not composable".into()));
        }
        Ok(StArrow {
            src: f.src,
            dst: g.dst,
            base: self.weak.compose(g.base, f.base)?,
        })
    }

    fn hom(&self, x: usize, y: usize) -> Vec<StArrow> {
        self.weak
            .hom(self.images[x], self.images[y])
            .into_iter()
            .map(|base| StArrow { src: x, dst: y, base })
            .collect()
    }

    fn inverse(&self, f: StArrow) -> Option<StArrow> {
        Some(StArrow {
            src: f.dst,
            dst: f.src,
            base: self.weak.inverse(f.base)?,
        })
    }
}

impl PCategory for StrictPCategory {
    fn presentation(&self) -> &Presentation {
        self.weak.presentation()
    }

    fn act_obj(&self, op: &str, xs: &[usize]) -> Option<usize> {
        let es: Vec<usize> = xs.iter().map(|&x| self.objects.get(x).map(|o| o.0)).collect::<Option<_>>()?;
        let r = *self.action.get(&(op.to_string(), es))?;
        let operands: Vec<usize> = xs.iter().flat_map(|&x| self.objects[x].1.iter().copied()).collect();
        self.object_index.get(&(r, operands)).copied()
    }

    /// `ψ_Y ∘ h(op, f•) ∘ ψ_X⁻¹`.
    fn act_arr(&self, op: &str, fs: &[StArrow]) -> Option<StArrow> {
        let xs: Vec<usize> = fs.iter().map(|f| f.src).collect();
        let ys: Vec<usize> = fs.iter().map(|f| f.dst).collect();
        let (src, dst) = (self.act_obj(op, &xs)?, self.act_obj(op, &ys)?);
        let bases: Vec<usize> = fs.iter().map(|f| f.base).collect();
        let mid = self.weak.act_arr(op, &bases)?;
        let (_, back) = self.psi.get(&(op.to_string(), xs))?;
        let (fwd, _) = self.psi.get(&(op.to_string(), ys))?;
        let base = self.weak.compose(*fwd, self.weak.compose(mid, *back).ok()?).ok()?;
        Some(StArrow { src, dst, base })
    }

    fn delta(&self, eq: usize, xs: &[usize]) -> Option<StArrow> {
        let e = self.presentation().equations.get(eq)?;
        let l = h_term(self, &e.lhs, xs).ok()?;
        let r = h_term(self, &e.rhs, xs).ok()?;
        (l == r).then(|| self.id(l))
    }

    fn same_element(&self, a: &Term, b: &Term, arity: usize) -> Option<bool> {
        self.weak.same_element(a, b, arity)
    }
}

/// `F : st A → A`, with coherence maps the cells `h(op, h(p•)) ⇒ h(op∘p•)`.
#[derive(Clone, Copy, Debug)]
pub struct Comparison<'a>(&'a StrictPCategory);

impl WeakPFunctor<StrictPCategory, WeakPCategoryData> for Comparison<'_> {
    fn obj(&self, x: usize) -> usize {
        self.0.images[x]
    }

    fn arr(&self, f: StArrow) -> usize {
        f.base
    }

    fn psi(&self, op: &str, xs: &[usize]) -> Option<usize> {
        self.0.psi.get(&(op.to_string(), xs.to_vec())).map(|p| p.0)
    }
}

/// `F′ : A → st A`.
#[derive(Clone, Copy, Debug)]
pub struct UnitFunctor<'a>(&'a StrictPCategory);

impl WeakPFunctor<WeakPCategoryData, StrictPCategory> for UnitFunctor<'_> {
    fn obj(&self, a: usize) -> usize {
        self.0.unit_object(a)
    }

    fn arr(&self, f: usize) -> StArrow {
        let w = &self.0.weak;
        StArrow {
            src: self.obj(w.src(f)),
            dst: self.obj(w.dst(f)),
            base: f,
        }
    }

    fn psi(&self, op: &str, xs: &[usize]) -> Option<StArrow> {
        let s = self.0;
        let units: Vec<usize> = xs.iter().map(|&a| self.obj(a)).collect();
        let src = s.act_obj(op, &units)?;
        let dst = self.obj(s.weak.act_obj(op, xs)?);
        let (from, path) = s.unit_paths.get(op)?;
        let base = path_arrow(&s.weak, from, path, xs).ok()?;
        Some(StArrow { src, dst, base })
    }
}

/// Bounds for [`check_strictness`]: arrow families with at most `limit`
/// members are checked exhaustively, larger ones on `limit` samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictnessBounds {
    pub limit: usize,
    pub seed: u64,
}

impl Default for StrictnessBounds {
    fn default() -> Self {
        StrictnessBounds {
            limit: 2_000_000,
            seed: 0x5eed,
        }
    }
}

/// `h'(q∘τ•, x••) = h'(q, h'(τ•, x••))` on objects and arrows for every
/// enumerated composite, `h'(1, f) = f`, functoriality of the action and
/// identity cells.
pub fn check_strictness(s: &StrictPCategory, bounds: &StrictnessBounds) -> Report {
    let mut report = Report::new(format!("strictness of {s}"));
    let target = &s.weak.presented.target;
    let mut combos = Vec::new();
    for (q, qe) in s.elements.iter().enumerate() {
        for taus in s.element_tuples(qe.arity) {
            let args: Vec<BuiltinElem> = taus.iter().map(|&t| s.elements[t].value.clone()).collect();
            let Ok(v) = target.compose(&qe.value, &args) else { continue };
            if let Some(r) = s.element_of(&v) {
                combos.push((q, taus, r));
            }
        }
    }
    let per_combo: Vec<(Check, Check, bool)> = combos
        .par_iter()
        .enumerate()
        .map(|(i, (q, taus, r))| {
            let mut objs = Check::new("action on objects is associative");
            let mut arrs = Check::new("action on arrows is associative");
            let m = s.elements[*r].arity;
            let tuples = s.object_tuples(m);
            let split = |xs: &[usize]| -> Vec<Vec<usize>> {
                let mut off = 0;
                taus.iter()
                    .map(|&t| {
                        let k = s.elements[t].arity;
                        let g = xs[off..off + k].to_vec();
                        off += k;
                        g
                    })
                    .collect()
            };
            let show = || {
                let ts: Vec<String> = taus.iter().map(|&t| s.elements[t].value.to_string()).collect();
                format!("{} ∘ ({})", s.elements[*q].value, ts.join(", "))
            };
            for xs in &tuples {
                let left = s.act_element(*r, xs);
                let inner: Result<Vec<usize>> = split(xs).iter().zip(taus).map(|(g, &t)| s.act_element(t, g)).collect();
                let right = inner.and_then(|ys| s.act_element(*q, &ys));
                objs.record(left.is_ok() && left == right, || format!("{} at ({})", show(), labels(s, xs)));
            }
            let mut pairs = Vec::new();
            let exhaustive = tuples.len() * tuples.len() <= bounds.limit;
            if exhaustive {
                for xs in &tuples {
                    for ys in &tuples {
                        pairs.push((xs.clone(), ys.clone()));
                    }
                }
            } else {
                let mut rng = StdRng::seed_from_u64(bounds.seed ^ i as u64);
                for _ in 0..bounds.limit {
                    let xs = tuples.choose(&mut rng).expect("non-empty").clone();
                    let ys = tuples.choose(&mut rng).expect("non-empty").clone();
                    pairs.push((xs, ys));
                }
            }
            for (xs, ys) in pairs {
                let homs: Vec<Vec<StArrow>> = xs.iter().zip(&ys).map(|(&x, &y)| s.hom(x, y)).collect();
                for fs in product(&homs) {
                    let left = s.act_element_arr(*r, &fs);
                    let inner: Result<Vec<StArrow>> =
                        split(&(0..fs.len()).collect::<Vec<_>>()).iter().zip(taus).map(|(g, &t)| {
                            let part: Vec<StArrow> = g.iter().map(|&j| fs[j]).collect();
                            s.act_element_arr(t, &part)
                        }).collect();
                    let right = inner.and_then(|gs| s.act_element_arr(*q, &gs));
                    arrs.record(left.is_ok() && left == right, || {
                        format!("{} at ({})", show(), arrow_labels(s, &fs))
                    });
                }
            }
            (objs, arrs, exhaustive)
        })
        .collect();
    let mut objs = Check::new("action on objects is associative");
    let mut arrs = Check::new("action on arrows is associative");
    let mut all_exhaustive = true;
    for (o, a, e) in per_combo {
        objs.absorb(o);
        arrs.absorb(a);
        all_exhaustive &= e;
    }
    if !all_exhaustive {
        arrs.law = "action on arrows is associative (sampled)".into();
    }
    report.push(objs);
    report.push(arrs);

    let mut unit = Check::new("identity element acts as the identity");
    for x in 0..s.object_count() {
        let ok = s.act_element(s.identity, &[x]).ok() == Some(x);
        unit.record(ok, || format!("on {}", s.object_label(x)));
        for y in 0..s.object_count() {
            for f in s.hom(x, y) {
                let ok = s.act_element_arr(s.identity, &[f]).ok() == Some(f);
                unit.record(ok, || format!("on {}", s.arrow_label(f)));
            }
        }
    }
    report.push(unit);

    let mut functorial = Check::new("generators act functorially");
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    for (op, k) in s.presentation().signature.ops() {
        let tuples = s.object_tuples(k);
        for xs in &tuples {
            let ids: Vec<StArrow> = xs.iter().map(|&x| s.id(x)).collect();
            let ok = s.act_obj(op, xs).map(|y| s.id(y)) == s.act_arr(op, &ids);
            functorial.record(ok, || format!("{op} on identities at ({})", labels(s, xs)));
        }
        for _ in 0..2000 {
            let (Some(xs), Some(ys), Some(zs)) = (tuples.choose(&mut rng), tuples.choose(&mut rng), tuples.choose(&mut rng))
            else {
                break;
            };
            let f: Option<Vec<StArrow>> = xs.iter().zip(ys).map(|(&x, &y)| s.hom(x, y).first().copied()).collect();
            let g: Option<Vec<StArrow>> = ys.iter().zip(zs).map(|(&y, &z)| s.hom(y, z).first().copied()).collect();
            let (Some(f), Some(g)) = (f, g) else { continue };
            let gf: Vec<StArrow> = f.iter().zip(&g).map(|(&a, &b)| s.compose(b, a).expect("composable")).collect();
            let left = s.act_arr(op, &gf);
            let right = s.act_arr(op, &f).zip(s.act_arr(op, &g)).and_then(|(a, b)| s.compose(b, a).ok());
            functorial.record(left.is_some() && left == right, || {
                format!("{op} at ({}) then ({})", arrow_labels(s, &f), arrow_labels(s, &g))
            });
        }
    }
    report.push(functorial);

    let mut cells = Check::new("cells are identities");
    for (k, eq) in s.presentation().equations.iter().enumerate() {
        for xs in s.object_tuples(eq.arity) {
            let d = s.delta(k, &xs);
            cells.record(d.is_some_and(|d| d.src == d.dst && s.id(d.src) == d), || {
                format!("{} = {} at ({})", eq.lhs, eq.rhs, labels(s, &xs))
            });
        }
    }
    report.push(cells);
    report
}

/// Full, faithful and essentially surjective comparison functor, `F F′ = 1`,
/// and the weak functor laws for `F` and `F′`.
pub fn check_equivalence(s: &StrictPCategory, bounds: &FunctorBounds) -> Report {
    let w = &s.weak;
    let f = s.comparison();
    let mut report = Report::new(format!("equivalence {s} ≃ {}", w.name));
    let mut full = Check::new("comparison is full and faithful");
    for x in 0..s.object_count() {
        for y in 0..s.object_count() {
            let mut images: Vec<usize> = s.hom(x, y).into_iter().map(|a| f.arr(a)).collect();
            images.sort_unstable();
            let before = images.len();
            images.dedup();
            let mut expected = w.hom(f.obj(x), f.obj(y));
            expected.sort_unstable();
            full.record(images.len() == before && images == expected, || {
                format!("hom({}, {})", s.object_label(x), s.object_label(y))
            });
        }
    }
    report.push(full);
    let mut ess = Check::new("comparison is essentially surjective");
    let mut unit = Check::new("comparison after unit is the identity");
    for a in 0..w.object_count() {
        let x = s.unit_object(a);
        // δ at the identity cell is the identity of h(1, a) = a
        let witness = w.id(f.obj(x));
        ess.record(f.obj(x) == a && w.inverse(witness).is_some(), || {
            format!("{} is not reached", w.object_label(a))
        });
    }
    for g in 0..w.base.arrow_count() {
        let ok = f.arr(s.unit().arr(g)) == g && f.obj(s.unit().obj(w.src(g))) == w.src(g);
        unit.record(ok, || format!("at {}", w.arrow_label(g)));
    }
    report.push(ess);
    report.push(unit);
    report.extend(check_weak_functor(&f, s, w, bounds));
    report.extend(check_weak_functor(&s.unit(), w, s, bounds));
    report
}

/// Bounds for [`universal_property_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalBounds {
    /// Stop the search after this many solutions.
    pub max_solutions: usize,
    pub limit: usize,
    pub seed: u64,
}

impl Default for UniversalBounds {
    fn default() -> Self {
        UniversalBounds {
            max_solutions: 2,
            limit: 20_000,
            seed: 0x5eed,
        }
    }
}

/// The equations a strict `H : st A → B` with `H F′ = G` must satisfy, over
/// the enumerated fragment.
struct Constraints<B: PCategory + ?Sized> {
    arrows: Vec<StArrow>,
    identity_of: Vec<usize>,
    obj_acts: Vec<(String, Vec<usize>, usize)>,
    arr_acts: Vec<(String, Vec<usize>, usize)>,
    comps: Vec<[u32; 3]>,
    fixed_objs: Vec<(usize, usize)>,
    fixed_arrs: Vec<(usize, B::Arr, String)>,
    obj_in_acts: Vec<Vec<u32>>,
    arr_in_acts: Vec<Vec<u32>>,
    arr_in_comps: Vec<Vec<u32>>,
}

fn constraints<B, G>(s: &StrictPCategory, _target: &B, g: &G) -> Result<Constraints<B>>
where
    B: PCategory + ?Sized,
    G: WeakPFunctor<WeakPCategoryData, B> + ?Sized,
{
    let w = &s.weak;
    let arrows = s.arrows();
    let index: HashMap<StArrow, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let identity_of = (0..s.object_count()).map(|x| index[&s.id(x)]).collect();
    let mut obj_acts = Vec::new();
    let mut arr_acts: Vec<(String, Vec<usize>, usize)> = Vec::new();
    for (op, k) in s.presentation().signature.ops() {
        let tuples = s.object_tuples(k);
        for xs in &tuples {
            if let Some(y) = s.act_obj(op, xs) {
                obj_acts.push((op.to_string(), xs.clone(), y));
            }
        }
        for xs in &tuples {
            for ys in &tuples {
                let homs: Vec<Vec<StArrow>> = xs.iter().zip(ys).map(|(&x, &y)| s.hom(x, y)).collect();
                for fs in product(&homs) {
                    if let Some(h) = s.act_arr(op, &fs) {
                        arr_acts.push((op.to_string(), fs.iter().map(|f| index[f]).collect(), index[&h]));
                    }
                }
            }
        }
    }
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); s.object_count()];
    for (i, a) in arrows.iter().enumerate() {
        out_of[a.src].push(i);
    }
    let mut comps = Vec::new();
    for (i, f) in arrows.iter().enumerate() {
        for &j in &out_of[f.dst] {
            let h = s.compose(arrows[j], *f)?;
            comps.push([i as u32, j as u32, index[&h] as u32]);
        }
    }
    let unit = s.unit();
    let mut fixed_objs = Vec::new();
    let mut fixed_arrs = Vec::new();
    for a in 0..w.object_count() {
        fixed_objs.push((unit.obj(a), g.obj(a)));
    }
    for f in 0..w.base.arrow_count() {
        fixed_arrs.push((index[&unit.arr(f)], g.arr(f), format!("F′({})", w.arrow_label(f))));
    }
    for (op, k) in w.presentation().signature.ops() {
        for xs in index_tuples(w.object_count(), k) {
            let (Some(p), Some(q)) = (unit.psi(op, &xs), g.psi(op, &xs)) else {
                return Err(Error::Validation(format!("missing coherence map for {op} at ({})", labels(w, &xs))));
            };
            fixed_arrs.push((index[&p], q, format!("ψ′_{op}({})", labels(w, &xs))));
        }
    }
    let mut obj_in_acts: Vec<Vec<u32>> = vec![Vec::new(); s.object_count()];
    for (i, (_, xs, _)) in obj_acts.iter().enumerate() {
        for &x in xs {
            obj_in_acts[x].push(i as u32);
        }
    }
    let mut arr_in_acts: Vec<Vec<u32>> = vec![Vec::new(); arrows.len()];
    for (i, (_, fs, _)) in arr_acts.iter().enumerate() {
        for &f in fs {
            arr_in_acts[f].push(i as u32);
        }
    }
    let mut arr_in_comps: Vec<Vec<u32>> = vec![Vec::new(); arrows.len()];
    for (i, c) in comps.iter().enumerate() {
        for &a in c {
            arr_in_comps[a as usize].push(i as u32);
        }
    }
    Ok(Constraints {
        arrows,
        identity_of,
        obj_acts,
        arr_acts,
        comps,
        fixed_objs,
        fixed_arrs,
        obj_in_acts,
        arr_in_acts,
        arr_in_comps,
    })
}

#[derive(Clone)]
struct Assignment<A> {
    objs: Vec<Option<usize>>,
    arrs: Vec<Option<A>>,
}

enum Var {
    Obj(usize),
    Arr(usize),
}

struct Search<'a, B: PCategory + ?Sized> {
    b: &'a B,
    c: &'a Constraints<B>,
}

impl<B: PCategory + ?Sized> Search<'_, B> {
    fn set_obj(&self, st: &mut Assignment<B::Arr>, x: usize, v: usize, queue: &mut VecDeque<Var>) -> bool {
        match st.objs[x] {
            Some(old) => old == v,
            None => {
                st.objs[x] = Some(v);
                queue.push_back(Var::Obj(x));
                true
            }
        }
    }

    fn set_arr(&self, st: &mut Assignment<B::Arr>, i: usize, v: B::Arr, queue: &mut VecDeque<Var>) -> bool {
        match st.arrs[i] {
            Some(old) => old == v,
            None => {
                let a = self.c.arrows[i];
                if !self.set_obj(st, a.src, self.b.src(v), queue) || !self.set_obj(st, a.dst, self.b.dst(v), queue) {
                    return false;
                }
                st.arrs[i] = Some(v);
                queue.push_back(Var::Arr(i));
                true
            }
        }
    }

    fn propagate(&self, st: &mut Assignment<B::Arr>, mut queue: VecDeque<Var>) -> bool {
        let b = self.b;
        while let Some(var) = queue.pop_front() {
            match var {
                Var::Obj(x) => {
                    let v = st.objs[x].expect("assigned");
                    if !self.set_arr(st, self.c.identity_of[x], b.id(v), &mut queue) {
                        return false;
                    }
                    for &i in &self.c.obj_in_acts[x] {
                        let (op, xs, y) = &self.c.obj_acts[i as usize];
                        let vals: Option<Vec<usize>> = xs.iter().map(|&x| st.objs[x]).collect();
                        if let Some(vals) = vals {
                            let Some(r) = b.act_obj(op, &vals) else { return false };
                            if !self.set_obj(st, *y, r, &mut queue) {
                                return false;
                            }
                        }
                    }
                }
                Var::Arr(a) => {
                    for &i in &self.c.arr_in_acts[a] {
                        let (op, fs, h) = &self.c.arr_acts[i as usize];
                        let vals: Option<Vec<B::Arr>> = fs.iter().map(|&f| st.arrs[f]).collect();
                        if let Some(vals) = vals {
                            let Some(r) = b.act_arr(op, &vals) else { return false };
                            if !self.set_arr(st, *h, r, &mut queue) {
                                return false;
                            }
                        }
                    }
                    for &i in &self.c.arr_in_comps[a] {
                        let [f, g, h] = self.c.comps[i as usize].map(|v| v as usize);
                        let ok = match (st.arrs[f], st.arrs[g], st.arrs[h]) {
                            (Some(vf), Some(vg), _) => match b.compose(vg, vf) {
                                Ok(r) => self.set_arr(st, h, r, &mut queue),
                                Err(_) => false,
                            },
                            (Some(vf), None, Some(vh)) => match b.inverse(vf).map(|inv| b.compose(vh, inv)) {
                                Some(Ok(r)) => self.set_arr(st, g, r, &mut queue),
                                Some(Err(_)) => false,
                                None => true,
                            },
                            (None, Some(vg), Some(vh)) => match b.inverse(vg).map(|inv| b.compose(inv, vh)) {
                                Some(Ok(r)) => self.set_arr(st, f, r, &mut queue),
                                Some(Err(_)) => false,
                                None => true,
                            },
                            _ => true,
                        };
                        if !ok {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn solve(&self, st: Assignment<B::Arr>, queue: VecDeque<Var>, max: usize, out: &mut Vec<Assignment<B::Arr>>) {
        if out.len() >= max {
            return;
        }
        let mut st = st;
        if !self.propagate(&mut st, queue) {
            return;
        }
        if let Some(x) = st.objs.iter().position(Option::is_none) {
            for v in 0..self.b.object_count() {
                let mut next = st.clone();
                let mut q = VecDeque::new();
                if self.set_obj(&mut next, x, v, &mut q) {
                    self.solve(next, q, max, out);
                }
            }
            return;
        }
        if let Some(i) = st.arrs.iter().position(Option::is_none) {
            let a = self.c.arrows[i];
            let (x, y) = (st.objs[a.src].expect("assigned"), st.objs[a.dst].expect("assigned"));
            for v in self.b.hom(x, y) {
                let mut next = st.clone();
                let mut q = VecDeque::new();
                if self.set_arr(&mut next, i, v, &mut q) {
                    self.solve(next, q, max, out);
                }
            }
            return;
        }
        out.push(st);
    }
}

/// Builds the strict `H : st A → B` forced by `G`, checks it, and searches
/// for every strict `H′` with `H′ F′ = G` on the enumerated fragment.
pub fn universal_property_check<B, G>(s: &StrictPCategory, b: &B, g: &G, bounds: &UniversalBounds) -> Report
where
    B: PCategory + ?Sized,
    G: WeakPFunctor<WeakPCategoryData, B> + ?Sized,
{
    let w = &s.weak;
    let mut report = Report::new(format!("universal property of {s}"));
    let mut strict_b = Check::new("target is strict");
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    for (k, eq) in b.presentation().equations.iter().enumerate() {
        let n = b.object_count();
        let tuples: Vec<Vec<usize>> = if (n as f64).powi(eq.arity as i32) <= bounds.limit as f64 {
            index_tuples(n, eq.arity)
        } else {
            (0..bounds.limit).map(|_| (0..eq.arity).map(|_| rng.gen_range(0..n)).collect()).collect()
        };
        for xs in tuples {
            if let Some(d) = b.delta(k, &xs) {
                strict_b.record(b.src(d) == b.dst(d) && b.id(b.src(d)) == d, || {
                    format!("{} = {} at ({})", eq.lhs, eq.rhs, labels(b, &xs))
                });
            }
        }
    }
    report.push(strict_b);

    let c = match constraints(s, b, g) {
        Ok(c) => c,
        Err(e) => {
            let mut fail = Check::new("constraints");
            fail.fail(e.to_string());
            report.push(fail);
            return report;
        }
    };

    // H(p, a•) = h_B(p, G a•) and H(f) = γ⁻¹ ∘ G f ∘ γ with γ the coherence map of G at p
    let mut construct = Check::new("H is well defined");
    let mut h_obj = vec![None; s.object_count()];
    let mut gamma = vec![None; s.object_count()];
    for x in 0..s.object_count() {
        let (el, xs) = s.object(x);
        let gx: Vec<usize> = xs.iter().map(|&a| g.obj(a)).collect();
        match (h_term(b, &el.rep, &gx), psi_term(g, w, b, &el.rep, xs)) {
            (Ok(o), Ok(p)) => match b.inverse(p) {
                Some(inv) => {
                    h_obj[x] = Some(o);
                    gamma[x] = Some((p, inv));
                }
                None => construct.fail(format!("coherence map at {} is not invertible", s.object_label(x))),
            },
            (Err(e), _) | (_, Err(e)) => construct.fail(format!("at {}: {e}", s.object_label(x))),
        }
    }
    let h_arr: Vec<Option<B::Arr>> = c
        .arrows
        .iter()
        .map(|a| {
            let (p, _) = gamma[a.src]?;
            let (_, inv) = gamma[a.dst]?;
            let mid = b.compose(g.arr(a.base), p).ok()?;
            b.compose(inv, mid).ok()
        })
        .collect();
    construct.record(h_arr.iter().all(Option::is_some), || "an arrow image is undefined".into());
    report.push(construct);
    if !report.passed() {
        return report;
    }
    let h = Assignment {
        objs: h_obj,
        arrs: h_arr,
    };
    let hv = |i: usize| h.arrs[i].expect("constructed");

    let mut functor = Check::new("H is a functor");
    for (x, &i) in c.identity_of.iter().enumerate() {
        functor.record(hv(i) == b.id(h.objs[x].expect("constructed")), || {
            format!("identity of {}", s.object_label(x))
        });
    }
    for &[f, gg, comp] in &c.comps {
        let ok = b.compose(hv(gg as usize), hv(f as usize)).ok() == Some(hv(comp as usize));
        functor.record(ok, || {
            format!("{} then {}", s.arrow_label(c.arrows[f as usize]), s.arrow_label(c.arrows[gg as usize]))
        });
    }
    report.push(functor);

    let mut strict = Check::new("H is strict");
    for (op, xs, y) in &c.obj_acts {
        let vals: Vec<usize> = xs.iter().map(|&x| h.objs[x].expect("constructed")).collect();
        strict.record(b.act_obj(op, &vals) == h.objs[*y], || format!("{op} at ({})", labels(s, xs)));
    }
    for (op, fs, r) in &c.arr_acts {
        let vals: Vec<B::Arr> = fs.iter().map(|&f| hv(f)).collect();
        strict.record(b.act_arr(op, &vals) == Some(hv(*r)), || {
            let arrs: Vec<StArrow> = fs.iter().map(|&f| c.arrows[f]).collect();
            format!("{op} at ({})", arrow_labels(s, &arrs))
        });
    }
    report.push(strict);

    let mut commutes = Check::new("H ∘ F′ = G");
    for &(x, v) in &c.fixed_objs {
        commutes.record(h.objs[x] == Some(v), || format!("at {}", s.object_label(x)));
    }
    for (i, v, what) in &c.fixed_arrs {
        commutes.record(hv(*i) == *v, || what.clone());
    }
    report.push(commutes);

    let mut unique = Check::new("H is the only strict functor with H ∘ F′ = G");
    let search = Search { b, c: &c };
    let mut st = Assignment {
        objs: vec![None; s.object_count()],
        arrs: vec![None; c.arrows.len()],
    };
    let mut queue = VecDeque::new();
    let mut consistent = true;
    for &(x, v) in &c.fixed_objs {
        consistent &= search.set_obj(&mut st, x, v, &mut queue);
    }
    for (i, v, _) in &c.fixed_arrs {
        consistent &= search.set_arr(&mut st, *i, *v, &mut queue);
    }
    let mut solutions = Vec::new();
    if consistent {
        search.solve(st, queue, bounds.max_solutions.max(2), &mut solutions);
    }
    let same = |sol: &Assignment<B::Arr>| sol.objs == h.objs && sol.arrs == h.arrs;
    unique.record(solutions.len() == 1 && same(&solutions[0]), || match solutions.len() {
        0 => "no strict functor satisfies the constraints".into(),
        1 => "the only solution differs from the constructed H".into(),
        n => format!("at least {n} solutions"),
    });
    report.push(unique);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakcat::instances::{collapse, functor_into_thin, indiscrete_monoid, tagged_monoid, z2_group, z2_monoidal, terminal};
    use crate::weakcat::WeakPFunctorData;

    fn small() -> StrictifyBounds {
        StrictifyBounds::default()
    }

    #[test]
    fn terminal_plain_objects_are_lists() {
        let w = indiscrete_monoid(3).unwrap();
        let s = strictify(&w, &small()).unwrap();
        assert_eq!(s.object_count(), 1 + 3 + 9 + 27);
        assert_eq!(s.elements().len(), 4);
        assert!(s.unreached().is_empty());
        for x in 0..s.object_count() {
            for y in 0..s.object_count() {
                assert_eq!(s.hom(x, y).len(), 1);
            }
        }
    }

    #[test]
    fn representatives_are_left_combs() {
        let s = strictify(&indiscrete_monoid(2).unwrap(), &small()).unwrap();
        let reps: Vec<String> = s.elements().iter().map(|e| e.rep.to_string()).collect();
        assert_eq!(reps, ["e", "x1", "m(x1,x2)", "m(m(x1,x2),x3)"]);
    }

    #[test]
    fn strictness_and_equivalence() {
        for w in [indiscrete_monoid(2).unwrap(), tagged_monoid(2).unwrap(), z2_monoidal(false).unwrap()] {
            let s = strictify(&w, &small()).unwrap();
            let r = check_strictness(&s, &StrictnessBounds::default());
            assert!(r.passed(), "{r}");
            let r = check_equivalence(&s, &FunctorBounds::default());
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn twisted_associator_breaks_strictness() {
        let s = strictify(&z2_monoidal(true).unwrap(), &small()).unwrap();
        let r = check_strictness(&s, &StrictnessBounds::default());
        assert!(!r.passed(), "{r}");
    }

    #[test]
    fn universal_property_instances() {
        let w = tagged_monoid(2).unwrap();
        let s = strictify(&w, &small()).unwrap();
        let b = indiscrete_monoid(2).unwrap();
        let g = functor_into_thin(&w, &b, |x| x % 2).unwrap();
        let r = universal_property_check(&s, &b, &g, &UniversalBounds::default());
        assert!(r.passed(), "{r}");
        let t = terminal().unwrap();
        let g = functor_into_thin(&w, &t, |_| 0).unwrap();
        assert!(universal_property_check(&s, &t, &g, &UniversalBounds::default()).passed());
        let z = z2_monoidal(false).unwrap();
        let g = collapse(&w, &z).unwrap();
        let r = universal_property_check(&s, &z, &g, &UniversalBounds::default());
        assert!(r.passed(), "{r}");
        let r = universal_property_check(&s, &s, &s.unit(), &UniversalBounds::default());
        assert!(r.passed(), "{r}");
        assert!(z2_group().is_ok());
        let _ = WeakPFunctorData::identity(&w);
    }
}
