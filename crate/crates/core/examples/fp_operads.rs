//! Finite-product operads: multiplicity vectors of commutative monoid words
//! and integer polynomials, with their operad laws.

use operad_workbench::operads::{
    operad_axiom_check, AxiomBounds, BuiltinOperad, CommMonoidFPOperad, IntPolyFPOperad, PresentedOperad,
};
use operad_workbench::terms::{parse_presentation, parse_term, Flavor};
use std::collections::BTreeMap;

fn main() -> operad_workbench::Result<()> {
    // read the commutative monoid theory as a finite-product theory so that
    // repeated variables are allowed
    let mut theory = parse_presentation(include_str!("../data/comm_monoid.th"))?;
    theory.flavor = Flavor::Fp;
    let p = PresentedOperad::<BuiltinOperad>::builtin(theory, "comm-monoid-fp", &BTreeMap::new())?;
    for src in ["m(x1,m(x2,x2))", "m(e,x3)", "m(x3,x1)"] {
        let t = parse_term(src)?;
        println!("{t} at arity 3 ↦ {}", p.eval_term(&t, 3)?);
    }

    let bounds = AxiomBounds::default();
    println!("{}", operad_axiom_check(&CommMonoidFPOperad, &bounds));
    println!("{}", operad_axiom_check(&IntPolyFPOperad, &bounds));
    Ok(())
}
