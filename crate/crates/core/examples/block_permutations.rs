//! Block composition in the operad of symmetries, checked against the operad
//! axioms.

use operad_workbench::finmaps::{block_compose, Perm};
use operad_workbench::operads::{operad_axiom_check, AxiomBounds, SymmetryOperad};

fn main() -> operad_workbench::Result<()> {
    let swap: Perm = "[2,1]".parse()?;
    let cycle: Perm = "[2,3,1]".parse()?;
    let id1 = Perm::identity(1);
    // swap two blocks of sizes 3 and 1, cycling inside the first
    println!("[2,1] ∘ ([2,3,1], [1]) = {}", block_compose(&swap, &[cycle, id1])?);

    let bounds = AxiomBounds {
        max_arity: 3,
        max_inner_arity: 3,
        max_leaf_arity: 1,
        element_bound: 6,
        exhaustive_limit: 1 << 20,
        ..AxiomBounds::default()
    };
    let report = operad_axiom_check(&SymmetryOperad, &bounds);
    println!("{report}");
    Ok(())
}
