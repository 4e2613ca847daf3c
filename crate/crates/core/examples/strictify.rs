//! Strictification of a weak P-category, the comparison equivalence, and the
//! universal property against several strict targets.

use operad_workbench::strictify::{
    check_equivalence, check_strictness, strictify, universal_property_check, StrictifyBounds, StrictnessBounds,
    UniversalBounds,
};
use operad_workbench::weakcat::instances::{collapse, functor_into_thin, indiscrete_monoid, tagged_monoid, terminal, z2_monoidal};
use operad_workbench::weakcat::{Category, FunctorBounds};

fn main() -> operad_workbench::Result<()> {
    let w = tagged_monoid(2)?;
    let s = strictify(&w, &StrictifyBounds::default())?;
    println!("{s}");
    for x in s.objects_of_arity(2).iter().take(3) {
        println!("  {} ↦ {}", s.object_label(*x), w.object_label(s.image(*x)));
    }
    println!("{}", check_strictness(&s, &StrictnessBounds::default()));
    println!("{}", check_equivalence(&s, &FunctorBounds::default()));

    let up = UniversalBounds::default();
    let z2 = indiscrete_monoid(2)?;
    let forget = functor_into_thin(&w, &z2, |x| x % 2)?;
    println!("{}", universal_property_check(&s, &z2, &forget, &up));
    let t = terminal()?;
    println!("{}", universal_property_check(&s, &t, &collapse(&w, &t)?, &up));
    let aut = z2_monoidal(false)?;
    println!("{}", universal_property_check(&s, &aut, &collapse(&w, &aut)?, &up));
    println!("{}", universal_property_check(&s, &s, &s.unit(), &up));
    Ok(())
}
