//! A uniform interface for operads with decidable equality, the builtin
//! targets, free operads on a signature, and presented operads with evaluation.
//!
//! Actions are on the left and relabel arguments: for `f : ⟦n⟧ → ⟦m⟧` and an
//! `n`-ary `p`, `f·p` is the `m`-ary operation `(x_1, …, x_m) ↦ p(x_f(1), …, x_f(n))`.

mod builtins;
mod free;
pub(crate) mod laws;
mod poly;
mod presented;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use rand::Rng;

use crate::error::{Error, Result};
use crate::finmaps::{FinFunction, Perm};
use crate::terms::Flavor;

pub use builtins::{
    BuiltinElem, BuiltinOperad, CommMonoidFPOperad, InitialElem, InitialOperad, IntPolyFPOperad,
    Multiplicities, SymmetryOperad, TerminalPlainOperad, TerminalSymmetricOperad,
};
pub use free::{FreeFpOperad, FreePlainOperad, FreeSymmetricOperad};
pub use laws::{operad_axiom_check, AxiomBounds};
pub use poly::Polynomial;
pub use presented::{validate_interpretation, PresentedOperad, SurjectivityCheck};

pub trait Operad {
    type Elem: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync;

    fn name(&self) -> String;

    fn flavor(&self) -> Flavor;

    fn arity(&self, p: &Self::Elem) -> usize;

    fn identity(&self) -> Self::Elem;

    /// `p ∘ (q_1, …, q_n)`.
    fn compose(&self, p: &Self::Elem, qs: &[Self::Elem]) -> Result<Self::Elem>;

    /// `σ·p`. Finite-product operads act through [`Operad::act_fn`].
    fn act_perm(&self, sigma: &Perm, p: &Self::Elem) -> Result<Self::Elem> {
        match self.flavor() {
            Flavor::Fp => self.act_fn(sigma.as_fn(), p),
            _ => Err(Error::Unsupported(format!("{} has no symmetric action", self.name()))),
        }
    }

    /// `f·p` for `f : ⟦n⟧ → ⟦m⟧` and `p` of arity `n`.
    fn act_fn(&self, _f: &FinFunction, _p: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::Unsupported(format!(
            "{} has no finite-function action",
            self.name()
        )))
    }

    /// All elements of `arity` within a size `bound`, when finitely listable.
    fn enumerate(&self, _arity: usize, _bound: usize) -> Option<Vec<Self::Elem>> {
        None
    }

    /// A random element of `arity`, for sampled law checks.
    fn sample(&self, _arity: usize, _rng: &mut dyn rand::RngCore) -> Option<Self::Elem> {
        None
    }
}

impl<O: Operad + ?Sized> Operad for &O {
    type Elem = O::Elem;

    fn name(&self) -> String {
        (**self).name()
    }

    fn flavor(&self) -> Flavor {
        (**self).flavor()
    }

    fn arity(&self, p: &Self::Elem) -> usize {
        (**self).arity(p)
    }

    fn identity(&self) -> Self::Elem {
        (**self).identity()
    }

    fn compose(&self, p: &Self::Elem, qs: &[Self::Elem]) -> Result<Self::Elem> {
        (**self).compose(p, qs)
    }

    fn act_perm(&self, sigma: &Perm, p: &Self::Elem) -> Result<Self::Elem> {
        (**self).act_perm(sigma, p)
    }

    fn act_fn(&self, f: &FinFunction, p: &Self::Elem) -> Result<Self::Elem> {
        (**self).act_fn(f, p)
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<Self::Elem>> {
        (**self).enumerate(arity, bound)
    }

    fn sample(&self, arity: usize, rng: &mut dyn rand::RngCore) -> Option<Self::Elem> {
        (**self).sample(arity, rng)
    }
}

pub(crate) fn check_arity(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected, found })
    }
}

pub(crate) fn random_perm(n: usize, rng: &mut dyn rand::RngCore) -> Perm {
    let mut table: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        table.swap(i, j);
    }
    Perm::new(table).expect("shuffle of identity")
}
