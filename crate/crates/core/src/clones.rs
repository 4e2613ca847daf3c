//! Clones and their translation to and from finite-product operads.
//!
//! A finite-product operad `P` gives the clone `K_P` with
//! `p ∘c (p_1, …, p_n) = f·(p ∘ (p_1, …, p_n))` for `f : ⟦nm⟧ → ⟦m⟧`,
//! `x ↦ ((x − 1) mod m) + 1`, and projections `δ^i_n = (1 ↦ i)·1`. A clone `K`
//! gives the operad `P_K` with identity `δ^1_1`, action
//! `f·p = p ∘c (δ^{f(1)}_m, …, δ^{f(n)}_m)` and composition
//! `p ∘ (p_1, …, p_n) = p ∘c (p_1 ∘c (δ^1_M, …, δ^{k_1}_M), …)` where the
//! `p_i` have arities `k_i` and `M = Σ k_i`.

use std::fmt;
use std::hash::Hash;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmaps::FinFunction;
use crate::operads::laws::{agree, show, tuples, Pools};
use crate::operads::{AxiomBounds, Operad};
use crate::report::{Check, Report};
use crate::terms::Flavor;

pub trait CloneView {
    type Elem: Clone + Eq + Hash + Ord + fmt::Debug + fmt::Display + Send + Sync;

    fn name(&self) -> String;

    fn arity(&self, f: &Self::Elem) -> usize;

    /// `f ∘c (g_1, …, g_n)` with every `g_i` of arity `m`; `m` is explicit so
    /// that nullary `f` is unambiguous.
    fn ccompose(&self, f: &Self::Elem, gs: &[Self::Elem], m: usize) -> Result<Self::Elem>;

    /// `δ^i_n`.
    fn proj(&self, i: usize, n: usize) -> Result<Self::Elem>;

    fn enumerate(&self, _arity: usize, _bound: usize) -> Option<Vec<Self::Elem>> {
        None
    }

    fn sample(&self, _arity: usize, _rng: &mut dyn rand::RngCore) -> Option<Self::Elem> {
        None
    }
}

impl<K: CloneView + ?Sized> CloneView for &K {
    type Elem = K::Elem;

    fn name(&self) -> String {
        (**self).name()
    }

    fn arity(&self, f: &Self::Elem) -> usize {
        (**self).arity(f)
    }

    fn ccompose(&self, f: &Self::Elem, gs: &[Self::Elem], m: usize) -> Result<Self::Elem> {
        (**self).ccompose(f, gs, m)
    }

    fn proj(&self, i: usize, n: usize) -> Result<Self::Elem> {
        (**self).proj(i, n)
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<Self::Elem>> {
        (**self).enumerate(arity, bound)
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<Self::Elem> {
        (**self).sample(arity, rng)
    }
}

fn check_all_arity<K: CloneView>(k: &K, gs: &[K::Elem], m: usize) -> Result<()> {
    match gs.iter().find(|g| k.arity(g) != m) {
        Some(g) => Err(Error::ArityMismatch {
            expected: m,
            found: k.arity(g),
        }),
        None => Ok(()),
    }
}

/// The clone `K_P` of a finite-product operad.
#[derive(Clone, Debug)]
pub struct FpClone<O> {
    pub operad: O,
}

pub fn clone_from_fp<O: Operad>(operad: O) -> Result<FpClone<O>> {
    if operad.flavor() != Flavor::Fp {
        return Err(Error::FlavorMismatch(format!(
            "{} is {}, a clone needs a finite-product operad",
            operad.name(),
            operad.flavor()
        )));
    }
    Ok(FpClone { operad })
}

impl<O: Operad> CloneView for FpClone<O> {
    type Elem = O::Elem;

    fn name(&self) -> String {
        format!("K({})", self.operad.name())
    }

    fn arity(&self, f: &O::Elem) -> usize {
        self.operad.arity(f)
    }

    fn ccompose(&self, p: &O::Elem, ps: &[O::Elem], m: usize) -> Result<O::Elem> {
        check_all_arity(self, ps, m)?;
        let n = self.operad.arity(p);
        let wrap = FinFunction::new((0..n * m).map(|x| x % m + 1).collect(), m)?;
        self.operad.act_fn(&wrap, &self.operad.compose(p, ps)?)
    }

    fn proj(&self, i: usize, n: usize) -> Result<O::Elem> {
        self.operad.act_fn(&FinFunction::point(i, n)?, &self.operad.identity())
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<O::Elem>> {
        self.operad.enumerate(arity, bound)
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<O::Elem> {
        self.operad.sample(arity, rng)
    }
}

/// The finite-product operad `P_K` of a clone.
#[derive(Clone, Debug)]
pub struct CloneFp<K> {
    pub clone: K,
}

pub fn fp_from_clone<K: CloneView>(clone: K) -> CloneFp<K> {
    CloneFp { clone }
}

impl<K: CloneView> Operad for CloneFp<K> {
    type Elem = K::Elem;

    fn name(&self) -> String {
        format!("P({})", self.clone.name())
    }

    fn flavor(&self) -> Flavor {
        Flavor::Fp
    }

    fn arity(&self, p: &K::Elem) -> usize {
        self.clone.arity(p)
    }

    fn identity(&self) -> K::Elem {
        self.clone.proj(1, 1).expect("δ^1_1 exists")
    }

    fn compose(&self, p: &K::Elem, ps: &[K::Elem]) -> Result<K::Elem> {
        let n = self.clone.arity(p);
        if ps.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: ps.len(),
            });
        }
        let total: usize = ps.iter().map(|q| self.clone.arity(q)).sum();
        let mut offset = 0;
        let mut shifted = Vec::with_capacity(n);
        for q in ps {
            let k = self.clone.arity(q);
            let deltas = (offset + 1..=offset + k)
                .map(|i| self.clone.proj(i, total))
                .collect::<Result<Vec<_>>>()?;
            shifted.push(self.clone.ccompose(q, &deltas, total)?);
            offset += k;
        }
        self.clone.ccompose(p, &shifted, total)
    }

    fn act_fn(&self, f: &FinFunction, p: &K::Elem) -> Result<K::Elem> {
        let n = self.clone.arity(p);
        if f.dom() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: f.dom(),
            });
        }
        let deltas = f
            .table()
            .iter()
            .map(|&j| self.clone.proj(j, f.cod()))
            .collect::<Result<Vec<_>>>()?;
        self.clone.ccompose(p, &deltas, f.cod())
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<K::Elem>> {
        self.clone.enumerate(arity, bound)
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<K::Elem> {
        self.clone.sample(arity, rng)
    }
}

/// An operation `S^n → S` on `S = {0, …, size − 1}`, tabulated over
/// `S^n` in lexicographic order (first argument most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EndoOp {
    pub arity: usize,
    pub table: Vec<u8>,
}

impl fmt::Display for EndoOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.table.iter().map(u8::to_string).collect();
        write!(f, "λ{}[{}]", self.arity, cells.join(""))
    }
}

/// The endomorphism clone of a finite set: all operations on it.
#[derive(Clone, Debug)]
pub struct EndoClone {
    pub size: usize,
    /// Arities with at most this many operations are enumerated, larger ones sampled.
    pub enumerate_limit: usize,
}

impl EndoClone {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > u8::MAX as usize {
            return Err(Error::InvalidData(format!("carrier size {size} out of range 1..=255")));
        }
        Ok(EndoClone {
            size,
            enumerate_limit: 1000,
        })
    }

    fn cells(&self, arity: usize) -> Option<usize> {
        self.size.checked_pow(arity as u32)
    }

    fn index(&self, args: &[u8]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a as usize)
    }

    /// The argument tuple at position `idx`.
    fn tuple(&self, arity: usize, mut idx: usize) -> Vec<u8> {
        let mut out = vec![0u8; arity];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.size) as u8;
            idx /= self.size;
        }
        out
    }

    pub fn apply(&self, f: &EndoOp, args: &[u8]) -> u8 {
        f.table[self.index(args)]
    }

    /// Tabulates `op` as an operation of the given arity.
    pub fn tabulate(&self, arity: usize, op: impl Fn(&[u8]) -> u8) -> Result<EndoOp> {
        let cells = self
            .cells(arity)
            .ok_or_else(|| Error::Unsupported(format!("arity {arity} table too large")))?;
        let table = (0..cells).map(|i| op(&self.tuple(arity, i))).collect::<Vec<_>>();
        if let Some(bad) = table.iter().find(|&&v| v as usize >= self.size) {
            return Err(Error::InvalidData(format!("value {bad} outside the carrier")));
        }
        Ok(EndoOp { arity, table })
    }
}

impl CloneView for EndoClone {
    type Elem = EndoOp;

    fn name(&self) -> String {
        format!("End({})", self.size)
    }

    fn arity(&self, f: &EndoOp) -> usize {
        f.arity
    }

    fn ccompose(&self, f: &EndoOp, gs: &[EndoOp], m: usize) -> Result<EndoOp> {
        if gs.len() != f.arity {
            return Err(Error::ArityMismatch {
                expected: f.arity,
                found: gs.len(),
            });
        }
        check_all_arity(self, gs, m)?;
        self.tabulate(m, |x| {
            let inner: Vec<u8> = gs.iter().map(|g| self.apply(g, x)).collect();
            self.apply(f, &inner)
        })
    }

    fn proj(&self, i: usize, n: usize) -> Result<EndoOp> {
        if i == 0 || i > n {
            return Err(Error::VariableOutOfRange { index: i, arity: n });
        }
        self.tabulate(n, |x| x[i - 1])
    }

    fn enumerate(&self, arity: usize, _bound: usize) -> Option<Vec<EndoOp>> {
        let cells = self.cells(arity)?;
        let count = self.size.checked_pow(cells as u32)?;
        if count > self.enumerate_limit {
            return None;
        }
        Some(
            (0..count)
                .map(|mut code| {
                    let mut table = vec![0u8; cells];
                    for slot in table.iter_mut().rev() {
                        *slot = (code % self.size) as u8;
                        code /= self.size;
                    }
                    EndoOp { arity, table }
                })
                .collect(),
        )
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<EndoOp> {
        let cells = self.cells(arity)?;
        Some(EndoOp {
            arity,
            table: (0..cells).map(|_| rng.gen_range(0..self.size) as u8).collect(),
        })
    }
}

fn clone_pools<K: CloneView>(k: &K, bounds: &AxiomBounds, rng: &mut StdRng) -> Pools<K::Elem> {
    let top = bounds.max_arity.max(bounds.max_inner_arity);
    Pools {
        by_arity: (0..=top)
            .map(|a| {
                k.enumerate(a, bounds.element_bound).unwrap_or_else(|| {
                    let mut v: Vec<_> = (0..bounds.samples).filter_map(|_| k.sample(a, rng)).collect();
                    v.sort();
                    v.dedup();
                    v
                })
            })
            .collect(),
    }
}

/// The clone axioms: projections select, projections are right units, and
/// `∘c` is associative.
pub fn clone_axiom_check<K: CloneView>(k: &K, bounds: &AxiomBounds) -> Report {
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let pools = clone_pools(k, bounds, &mut rng);
    let mut report = Report::new(format!("clone axioms: {}", k.name()));
    let mut select = Check::new("projection selects");
    let mut unit = Check::new("projections are units");
    let mut assoc = Check::new("associativity");
    for n in 0..=bounds.max_arity {
        for m in 0..=bounds.max_inner_arity {
            let opts = vec![pools.at(m); n];
            let gss = tuples(&opts, bounds.exhaustive_limit, bounds.samples, &mut rng);
            for gs in &gss {
                for i in 1..=n {
                    let r = agree(k.proj(i, n).and_then(|d| k.ccompose(&d, gs, m)), Ok(gs[i - 1].clone()));
                    select.record(r.is_ok(), || format!("δ^{i}_{n} ∘c {}: {}", show(gs), r.unwrap_err()));
                }
            }
            for f in pools.at(n) {
                if m == 0 {
                    let r = (1..=n)
                        .map(|i| k.proj(i, n))
                        .collect::<Result<Vec<_>>>()
                        .and_then(|ds| k.ccompose(f, &ds, n));
                    let r = agree(r, Ok(f.clone()));
                    unit.record(r.is_ok(), || format!("f = {f}: {}", r.unwrap_err()));
                }
                for gs in &gss {
                    for l in 0..=bounds.max_inner_arity {
                        let hopts = vec![pools.at(l); m];
                        for hs in tuples(&hopts, bounds.exhaustive_limit, bounds.samples, &mut rng) {
                            let lhs = k.ccompose(f, gs, m).and_then(|fg| k.ccompose(&fg, &hs, l));
                            let rhs = gs
                                .iter()
                                .map(|g| k.ccompose(g, &hs, l))
                                .collect::<Result<Vec<_>>>()
                                .and_then(|ghs| k.ccompose(f, &ghs, l));
                            let r = agree(lhs, rhs);
                            assoc.record(r.is_ok(), || {
                                format!("f = {f}, g = {}, h = {}: {}", show(gs), show(&hs), r.unwrap_err())
                            });
                        }
                    }
                }
            }
        }
    }
    report.push(select);
    report.push(unit);
    report.push(assoc);
    report
}

/// Compares two finite-product operads on the same elements: identity,
/// composition and action agree on every checked instance. Composites of
/// arity above `max_total` are skipped.
fn compare_operads<A, B>(
    a: &A,
    b: &B,
    bounds: &AxiomBounds,
    max_total: Option<usize>,
    rng: &mut StdRng,
    report: &mut Report,
) where
    A: Operad,
    B: Operad<Elem = A::Elem>,
{
    let top = bounds.max_arity.max(bounds.max_inner_arity);
    let by_arity: Vec<Vec<A::Elem>> = (0..=top)
        .map(|ar| {
            a.enumerate(ar, bounds.element_bound).unwrap_or_else(|| {
                let mut v: Vec<_> = (0..bounds.samples).filter_map(|_| a.sample(ar, rng)).collect();
                v.sort();
                v.dedup();
                v
            })
        })
        .collect();
    let pools = Pools { by_arity };
    let inner = pools.up_to(bounds.max_inner_arity);
    let mut identity = Check::new("identity");
    let r = agree(Ok(a.identity()), Ok(b.identity()));
    identity.record(r.is_ok(), || r.unwrap_err());
    let mut compose = Check::new("composition");
    let mut action = Check::new("action");
    for n in 0..=bounds.max_arity {
        for p in pools.at(n) {
            let opts = vec![inner.as_slice(); n];
            for qs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng) {
                let total: usize = qs.iter().map(|q| a.arity(q)).sum();
                if max_total.is_some_and(|t| total > t) {
                    continue;
                }
                let r = agree(a.compose(p, &qs), b.compose(p, &qs));
                compose.record(r.is_ok(), || format!("p = {p}, q = {}: {}", show(&qs), r.unwrap_err()));
            }
            for m in 0..=bounds.max_arity {
                for f in FinFunction::all(n, m) {
                    let r = agree(a.act_fn(&f, p), b.act_fn(&f, p));
                    action.record(r.is_ok(), || format!("f = {f}, p = {p}: {}", r.unwrap_err()));
                }
            }
        }
    }
    report.push(identity);
    report.push(compose);
    report.push(action);
}

/// Compares two clones on the same elements: projections and `∘c`.
fn compare_clones<A, B>(a: &A, b: &B, bounds: &AxiomBounds, rng: &mut StdRng, report: &mut Report)
where
    A: CloneView,
    B: CloneView<Elem = A::Elem>,
{
    let pools = clone_pools(a, bounds, rng);
    let mut proj = Check::new("projections");
    let mut comp = Check::new("clone composition");
    for n in 0..=bounds.max_arity {
        for i in 1..=n {
            let r = agree(a.proj(i, n), b.proj(i, n));
            proj.record(r.is_ok(), || format!("δ^{i}_{n}: {}", r.unwrap_err()));
        }
        for m in 0..=bounds.max_inner_arity {
            let opts = vec![pools.at(m); n];
            let gss = tuples(&opts, bounds.exhaustive_limit, bounds.samples, rng);
            for f in pools.at(n) {
                for gs in &gss {
                    let r = agree(a.ccompose(f, gs, m), b.ccompose(f, gs, m));
                    comp.record(r.is_ok(), || format!("f = {f}, g = {}: {}", show(gs), r.unwrap_err()));
                }
            }
        }
    }
    report.push(proj);
    report.push(comp);
}

/// `P = P_{K_P}` on composition and action, and `K_P = K_{P_{K_P}}`.
pub fn roundtrip_check<O: Operad>(operad: &O, bounds: &AxiomBounds) -> Result<Report> {
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let k = clone_from_fp(operad)?;
    let back = fp_from_clone(&k);
    let mut report = Report::new(format!("clone round trip: {}", operad.name()));
    let mut operad_side = Report::new("P vs P(K(P))");
    compare_operads(operad, &back, bounds, None, &mut rng, &mut operad_side);
    report.extend(operad_side);
    let kk = clone_from_fp(&back)?;
    let mut clone_side = Report::new("K(P) vs K(P(K(P)))");
    compare_clones(&k, &kk, bounds, &mut rng, &mut clone_side);
    report.extend(clone_side);
    Ok(report)
}

/// `K = K_{P_K}` on projections and `∘c`, and `P_K = P_{K_{P_K}}`.
pub fn clone_roundtrip_check<K: CloneView>(clone: &K, bounds: &AxiomBounds) -> Report {
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let p = fp_from_clone(clone);
    let back = clone_from_fp(&p).expect("P(K) is finite-product");
    let mut report = Report::new(format!("clone round trip: {}", clone.name()));
    let mut clone_side = Report::new("K vs K(P(K))");
    compare_clones(clone, &back, bounds, &mut rng, &mut clone_side);
    report.extend(clone_side);
    let pp = fp_from_clone(&back);
    let mut operad_side = Report::new("P(K) vs P(K(P(K)))");
    // each level of nesting multiplies arities: keep composites small
    let top = bounds.max_arity.max(bounds.max_inner_arity);
    compare_operads(&p, &pp, bounds, Some(top), &mut rng, &mut operad_side);
    report.extend(operad_side);
    report
}

/// For `φ : P → End(S)` given elementwise, checks that `φ` is a map of
/// finite-product operads into `P_{End(S)}` and, equivalently, a clone map
/// `K_P → End(S)`.
pub fn algebra_map_check<O, F>(operad: &O, end: &EndoClone, phi: F, bounds: &AxiomBounds) -> Result<Report>
where
    O: Operad,
    F: Fn(&O::Elem) -> Result<EndoOp>,
{
    let mut rng = StdRng::seed_from_u64(bounds.seed);
    let k = clone_from_fp(operad)?;
    let target = fp_from_clone(end);
    let mut report = Report::new(format!("algebra {} → {}", operad.name(), end.name()));
    let top = bounds.max_arity.max(bounds.max_inner_arity);
    let by_arity: Vec<Vec<O::Elem>> = (0..=top)
        .map(|a| {
            operad.enumerate(a, bounds.element_bound).unwrap_or_else(|| {
                (0..bounds.samples).filter_map(|_| operad.sample(a, &mut rng)).collect()
            })
        })
        .collect();
    let pools = Pools { by_arity };
    let inner = pools.up_to(bounds.max_inner_arity);
    let mapped = |xs: &[O::Elem]| xs.iter().map(&phi).collect::<Result<Vec<_>>>();

    let mut unit = Check::new("operad map: identity");
    let r = agree(phi(&operad.identity()), Ok(target.identity()));
    unit.record(r.is_ok(), || r.unwrap_err());
    let mut comp = Check::new("operad map: composition");
    let mut act = Check::new("operad map: action");
    let mut ccomp = Check::new("clone map: composition");
    let mut proj = Check::new("clone map: projections");
    for n in 0..=bounds.max_arity {
        for i in 1..=n {
            let r = agree(k.proj(i, n).and_then(|d| phi(&d)), end.proj(i, n));
            proj.record(r.is_ok(), || format!("δ^{i}_{n}: {}", r.unwrap_err()));
        }
        for p in pools.at(n) {
            let opts = vec![inner.as_slice(); n];
            for qs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, &mut rng) {
                let lhs = operad.compose(p, &qs).and_then(|x| phi(&x));
                let rhs = phi(p).and_then(|fp| target.compose(&fp, &mapped(&qs)?));
                let r = agree(lhs, rhs);
                comp.record(r.is_ok(), || format!("p = {p}, q = {}: {}", show(&qs), r.unwrap_err()));
            }
            for m in 0..=bounds.max_arity {
                for f in FinFunction::all(n, m) {
                    let lhs = operad.act_fn(&f, p).and_then(|x| phi(&x));
                    let rhs = phi(p).and_then(|fp| target.act_fn(&f, &fp));
                    let r = agree(lhs, rhs);
                    act.record(r.is_ok(), || format!("f = {f}, p = {p}: {}", r.unwrap_err()));
                }
                let opts = vec![pools.at(m); n];
                for gs in tuples(&opts, bounds.exhaustive_limit, bounds.samples, &mut rng) {
                    let lhs = k.ccompose(p, &gs, m).and_then(|x| phi(&x));
                    let rhs = phi(p).and_then(|fp| end.ccompose(&fp, &mapped(&gs)?, m));
                    let r = agree(lhs, rhs);
                    ccomp.record(r.is_ok(), || format!("p = {p}, g = {}: {}", show(&gs), r.unwrap_err()));
                }
            }
        }
    }
    for c in [unit, comp, act, ccomp, proj] {
        report.push(c);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operads::{CommMonoidFPOperad, IntPolyFPOperad, Multiplicities, Polynomial, SymmetryOperad};

    fn v(xs: &[u32]) -> Multiplicities {
        Multiplicities(xs.to_vec())
    }

    #[test]
    fn comm_monoid_clone_formulas() {
        let k = clone_from_fp(CommMonoidFPOperad).unwrap();
        assert_eq!(k.proj(2, 3).unwrap(), v(&[0, 1, 0]));
        let got = k.ccompose(&v(&[1, 1]), &[v(&[1, 0]), v(&[0, 1])], 2).unwrap();
        assert_eq!(got, v(&[1, 1]));
        assert_eq!(k.ccompose(&v(&[]), &[], 2).unwrap(), v(&[0, 0]));
    }

    #[test]
    fn polynomial_clone_is_shared_substitution() {
        let k = clone_from_fp(IntPolyFPOperad).unwrap();
        let x1 = Polynomial::variable(2, 1);
        let x2 = Polynomial::variable(2, 2);
        let p = x1.mul(&x2).unwrap();
        let sum = x1.add(&x2).unwrap();
        let got = k.ccompose(&p, &[sum.clone(), x2.clone()], 2).unwrap();
        assert_eq!(got, p.substitute(&[sum, x2], 2).unwrap());
    }

    #[test]
    fn symmetric_operads_have_no_clone() {
        assert!(clone_from_fp(SymmetryOperad).is_err());
    }

    #[test]
    fn identity_is_first_projection() {
        let end = EndoClone::new(3).unwrap();
        let p = fp_from_clone(&end);
        assert_eq!(p.identity(), end.proj(1, 1).unwrap());
        let f = end.tabulate(2, |x| (x[0] + 2 * x[1]) % 3).unwrap();
        assert_eq!(p.act_fn(&FinFunction::identity(2), &f).unwrap(), f);
    }

    #[test]
    fn small_round_trips_pass() {
        let b = AxiomBounds {
            max_arity: 2,
            max_inner_arity: 2,
            ..AxiomBounds::default()
        };
        let r = roundtrip_check(&CommMonoidFPOperad, &b).unwrap();
        assert!(r.passed(), "{r}");
        let end = EndoClone::new(2).unwrap();
        let r = clone_roundtrip_check(&end, &b);
        assert!(r.passed(), "{r}");
        assert!(clone_axiom_check(&end, &b).passed());
    }

    #[test]
    fn linear_forms_are_an_algebra() {
        let end = EndoClone::new(3).unwrap();
        let phi = |p: &Multiplicities| {
            end.tabulate(p.0.len(), |x| {
                (p.0.iter().zip(x).map(|(&c, &a)| c as usize * a as usize).sum::<usize>() % 3) as u8
            })
        };
        let b = AxiomBounds {
            max_arity: 2,
            max_inner_arity: 2,
            ..AxiomBounds::default()
        };
        let r = algebra_map_check(&CommMonoidFPOperad, &end, phi, &b).unwrap();
        assert!(r.passed(), "{r}");
        // not a map: every vector to the first projection
        let bad = |p: &Multiplicities| end.tabulate(p.0.len(), |x| x.first().copied().unwrap_or(0));
        assert!(!algebra_map_check(&CommMonoidFPOperad, &end, bad, &b).unwrap().passed());
    }
}
