//! Finite categories, weak P-categories given by finite data, and weak
//! P-functors between them.
//!
//! A weak P-category here is biased: each generator of the presentation acts
//! by a functor and each equation by an invertible natural cell. Cells between
//! arbitrary trees are composites of these along rewrite paths, and
//! [`coherence_check`] tests that the composite does not depend on the path.

mod category;
mod data;
mod functor;
pub mod instances;

pub use category::{ArrowSpec, Category, FiniteCategory};
pub use data::{
    coherence_check, derive_delta, derive_delta_terms, derive_h, h_term, h_term_arr, path_arrow, step_arrow,
    CoherenceBounds, DeltaEntry, GeneratorFile, PCategory, PathBounds, WeakCatFile, WeakPCategoryData,
};
pub use functor::{check_weak_functor, psi_term, FunctorBounds, WeakPFunctor, WeakPFunctorData};

pub(crate) use category::index_tuples;
pub(crate) use data::{arrow_labels, find_path, labels, product};
