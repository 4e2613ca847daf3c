//! Classifies the equations of the bundled theories and of a few ad hoc ones.

use operad_workbench::terms::{parse_presentation, parse_term, Equation};

const THEORIES: [(&str, &str); 5] = [
    ("monoid", include_str!("../data/monoid.th")),
    ("comm_monoid", include_str!("../data/comm_monoid.th")),
    ("pointed", include_str!("../data/pointed.th")),
    ("pointed_abcd", include_str!("../data/pointed_abcd.th")),
    ("trivial", include_str!("../data/trivial.th")),
];

fn main() -> operad_workbench::Result<()> {
    for (file, src) in THEORIES {
        let p = parse_presentation(src)?;
        println!("{file:<14} {:<10} {}", p.flavor.to_string(), p.classify()?);
    }

    // the same equation read at different arities
    let lhs = parse_term("m(m(x1,x2),x3)")?;
    let rhs = parse_term("m(x1,m(x2,x3))")?;
    for n in [3, 4] {
        let eq = Equation::new(n, lhs.clone(), rhs.clone())?;
        println!("associativity at arity {n}: {}", eq.classify()?);
    }
    let idem = Equation::inferred(parse_term("m(x1,x1)")?, parse_term("x1")?);
    println!("idempotence: {}", idem.classify()?);
    Ok(())
}
