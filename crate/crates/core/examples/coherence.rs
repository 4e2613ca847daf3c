//! Weak P-categories over the monoid presentation: validation and path
//! independence of the derived 2-cells.

use operad_workbench::weakcat::instances::{tagged_monoid, z2_monoidal};
use operad_workbench::weakcat::{coherence_check, CoherenceBounds};

fn main() -> operad_workbench::Result<()> {
    let bounds = CoherenceBounds::default();
    for w in [tagged_monoid(2)?, z2_monoidal(false)?, z2_monoidal(true)?] {
        println!("{}", w.validate());
        println!("{}", coherence_check(&w, &bounds));
    }
    Ok(())
}
