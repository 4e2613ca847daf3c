//! Small weak P-categories for the monoid presentation, and functors between
//! them.

use std::collections::{BTreeMap, HashMap};

use super::category::{Category, FiniteCategory};
use super::data::{h_term, PCategory, WeakPCategoryData};
use super::functor::WeakPFunctorData;
use crate::error::{Error, Result};
use crate::operads::PresentedOperad;
use crate::terms::{parse_presentation, Presentation};

pub const MONOID_THEORY: &str = include_str!("../../data/monoid.th");

pub fn monoid_presentation() -> Presentation {
    parse_presentation(MONOID_THEORY).expect("bundled theory parses")
}

fn monoid_over_terminal() -> Result<PresentedOperad<crate::operads::BuiltinOperad>> {
    PresentedOperad::builtin(monoid_presentation(), "terminal-plain", &BTreeMap::new())
}

/// Cells are forced in a thin base: the unique arrow between the two sides.
fn thin_delta(w_base: &FiniteCategory, lhs: usize, rhs: usize) -> usize {
    w_base.hom(lhs, rhs)[0]
}

/// Builds data whose base is thin, with every cell the unique arrow between
/// the images of the two sides of its equation.
fn thin_instance(
    name: String,
    base: FiniteCategory,
    mult: impl Fn(usize, usize) -> usize,
    unit: usize,
) -> Result<WeakPCategoryData> {
    let presented = monoid_over_terminal()?;
    let eqs = presented.presentation.equations.clone();
    let act = |op: &str, xs: &[usize]| if op == "m" { mult(xs[0], xs[1]) } else { unit };
    let eval = |t: &crate::terms::Term, xs: &[usize]| -> usize {
        fn go(t: &crate::terms::Term, xs: &[usize], act: &dyn Fn(&str, &[usize]) -> usize) -> usize {
            match t {
                crate::terms::Term::Var(i) => xs[i - 1],
                crate::terms::Term::App(op, args) => {
                    let v: Vec<usize> = args.iter().map(|a| go(a, xs, act)).collect();
                    act(op, &v)
                }
            }
        }
        go(t, xs, &act)
    };
    let arr = |op: &str, fs: &[usize]| {
        let s: Vec<usize> = fs.iter().map(|&f| base.src(f)).collect();
        let d: Vec<usize> = fs.iter().map(|&f| base.dst(f)).collect();
        base.hom(act(op, &s), act(op, &d))[0]
    };
    let delta = |k: usize, xs: &[usize]| thin_delta(&base, eval(&eqs[k].lhs, xs), eval(&eqs[k].rhs, xs));
    WeakPCategoryData::tabulate(name, base.clone(), presented, act, arr, delta)
}

/// The indiscrete category on `{0, …, k-1}` with `⊗` multiplication mod `k`
/// and unit `1`. Every cell is an identity.
pub fn indiscrete_monoid(k: usize) -> Result<WeakPCategoryData> {
    if k < 2 {
        return Err(Error::InvalidData("need at least two elements".into()));
    }
    let base = FiniteCategory::indiscrete((0..k).map(|i| i.to_string()).collect())?;
    thin_instance(format!("indiscrete Z/{k} (multiplicative)"), base, |a, b| (a * b) % k, 1)
}

/// Objects `x` and `x'` for `x` in `Z/k`; `⊗` multiplies and always marks
/// its result, the unit `1` is unmarked. The base is indiscrete, so the unit
/// laws hold only up to the unique comparison arrows.
pub fn tagged_monoid(k: usize) -> Result<WeakPCategoryData> {
    if k < 2 {
        return Err(Error::InvalidData("need at least two elements".into()));
    }
    let names = (0..k)
        .map(|i| i.to_string())
        .chain((0..k).map(|i| format!("{i}'")))
        .collect();
    let base = FiniteCategory::indiscrete(names)?;
    thin_instance(
        format!("tagged Z/{k} (multiplicative)"),
        base,
        move |a, b| k + (a % k) * (b % k) % k,
        1,
    )
}

/// The group `Z/2 = {1, s}` as a one-object category.
pub fn z2_group() -> Result<FiniteCategory> {
    FiniteCategory::one_object("*", vec!["1".into(), "s".into()], &[vec![0, 1], vec![1, 0]], 0)
}

/// One object, arrows `Z/2`, `⊗` the group multiplication on arrows. The
/// associativity cell is `s` everywhere when `twisted`, which is natural but
/// violates path independence; otherwise all cells are identities.
pub fn z2_monoidal(twisted: bool) -> Result<WeakPCategoryData> {
    let base = z2_group()?;
    let presented = monoid_over_terminal()?;
    let name = if twisted { "Z/2 with twisted associator" } else { "Z/2 strict" };
    WeakPCategoryData::tabulate(
        name,
        base,
        presented,
        |_, _| 0,
        |op, fs| if op == "m" { fs[0] ^ fs[1] } else { 0 },
        |k, _| usize::from(twisted && k == 0),
    )
}

/// The one-arrow category with its unique action.
pub fn terminal() -> Result<WeakPCategoryData> {
    let base = FiniteCategory::indiscrete(vec!["*".into()])?;
    thin_instance("terminal".into(), base, |_, _| 0, 0)
}

/// A functor into a thin target: arrows and coherence maps are the unique
/// arrows between the required endpoints.
pub fn functor_into_thin(
    w: &WeakPCategoryData,
    b: &WeakPCategoryData,
    obj: impl Fn(usize) -> usize,
) -> Result<WeakPFunctorData> {
    if !b.base.is_thin() {
        return Err(Error::InvalidData(format!("{} is not thin", b.name)));
    }
    let objs: Vec<usize> = (0..w.object_count()).map(&obj).collect();
    let unique = |x: usize, y: usize| {
        b.hom(x, y)
            .first()
            .copied()
            .ok_or_else(|| Error::Validation(format!("no arrow {} → {}", b.object_label(x), b.object_label(y))))
    };
    let mut arr = HashMap::new();
    for f in 0..w.base.arrow_count() {
        arr.insert(f, unique(objs[w.src(f)], objs[w.dst(f)])?);
    }
    let mut psi = HashMap::new();
    for (op, k) in w.presentation().signature.ops() {
        for xs in super::category::index_tuples(w.object_count(), k) {
            let fx: Vec<usize> = xs.iter().map(|&x| objs[x]).collect();
            let src = b.act_obj(op, &fx).expect("total action");
            let dst = objs[w.act_obj(op, &xs).expect("total action")];
            psi.insert((op.to_string(), xs), unique(src, dst)?);
        }
    }
    Ok(WeakPFunctorData::tabulate(
        w,
        |x| objs[x],
        |f| arr[&f],
        |op, xs| psi[&(op.to_string(), xs.to_vec())],
    ))
}

/// Everything to the one object of `b` and to its identity; `b` must fix
/// that object under every generator.
pub fn collapse(w: &WeakPCategoryData, b: &WeakPCategoryData) -> Result<WeakPFunctorData> {
    if b.object_count() != 1 {
        return Err(Error::InvalidData(format!("{} has more than one object", b.name)));
    }
    let id = b.id(0);
    if h_term(b, &crate::terms::Term::Var(1), &[0])? != 0 {
        return Err(Error::InvalidData("unexpected action".into()));
    }
    Ok(WeakPFunctorData::tabulate(w, |_| 0, |_| id, |_, _| id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weakcat::data::{coherence_check, derive_delta, derive_h, CoherenceBounds, PathBounds};
    use crate::trees::{PermutedTree, SRTree};

    fn tree(s: &str) -> PermutedTree {
        PermutedTree::plain(SRTree::parse(s).unwrap())
    }

    #[test]
    fn instances_validate() {
        for w in [indiscrete_monoid(3).unwrap(), tagged_monoid(2).unwrap(), z2_monoidal(true).unwrap(), terminal().unwrap()] {
            assert!(w.validate().passed(), "{}", w.name);
        }
        assert!(indiscrete_monoid(4).unwrap().is_strict());
        assert!(!tagged_monoid(2).unwrap().is_strict());
    }

    #[test]
    fn derive_h_unfolds_generators() {
        let w = indiscrete_monoid(4).unwrap();
        assert_eq!(derive_h(&w, &tree("|"), &[3]).unwrap(), 3);
        assert_eq!(derive_h(&w, &tree("m(m(|,|),|)"), &[2, 3, 3]).unwrap(), 2);
        assert_eq!(derive_h(&w, &tree("e"), &[]).unwrap(), 1);
    }

    #[test]
    fn derived_cells() {
        let w = tagged_monoid(2).unwrap();
        let b = PathBounds::default();
        // x' ⊗ 1 is marked, so the right unit cell at 1 is the arrow 1' → 1
        let f = derive_delta(&w, &tree("m(|,e)"), &tree("|"), &[1], &b).unwrap();
        assert_eq!(w.arrow_label(f), "1'>1");
        let id = derive_delta(&w, &tree("m(|,|)"), &tree("m(|,|)"), &[0, 1], &b).unwrap();
        assert_eq!(id, w.id(2));
        assert!(derive_delta(&w, &tree("m(|,|)"), &tree("|"), &[0], &b).is_err());
    }

    #[test]
    fn coherence_detects_twisted_associator() {
        let bounds = CoherenceBounds::default();
        assert!(coherence_check(&z2_monoidal(false).unwrap(), &bounds).passed());
        assert!(coherence_check(&tagged_monoid(2).unwrap(), &bounds).passed());
        let r = coherence_check(&z2_monoidal(true).unwrap(), &bounds);
        assert!(!r.passed());
    }
}
