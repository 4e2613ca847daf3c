//! Finite-product operads and abstract clones determine each other.

use operad_workbench::clones::{clone_axiom_check, clone_roundtrip_check, roundtrip_check, EndoClone};
use operad_workbench::operads::{AxiomBounds, CommMonoidFPOperad};

fn main() -> operad_workbench::Result<()> {
    let bounds = AxiomBounds::default();
    println!("{}", roundtrip_check(&CommMonoidFPOperad, &bounds)?);

    let end = EndoClone::new(3)?;
    println!("{}", clone_axiom_check(&end, &bounds));
    println!("{}", clone_roundtrip_check(&end, &bounds));
    Ok(())
}
