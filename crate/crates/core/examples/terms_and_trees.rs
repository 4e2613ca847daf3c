//! Terms as finite-product trees: a planar tree plus a labelling of its
//! leaves by variables.

use operad_workbench::terms::{enumerate_terms, parse_term, Signature};
use operad_workbench::trees::{to_term, to_tree};

fn main() -> operad_workbench::Result<()> {
    for (src, arity) in [("m(x2,m(x1,x2))", 2), ("m(x1,e)", 3), ("x1", 1)] {
        let t = parse_term(src)?;
        let tree = to_tree(&t, arity)?;
        println!("{t} at arity {arity}: tree {tree}, classification {}", t.classify(arity)?);
        assert_eq!(to_term(&tree), t);
    }

    let sig = Signature::from_ops([("m", 2), ("e", 0)])?;
    let terms = enumerate_terms(&sig, 2, 5);
    let round_trips = terms
        .iter()
        .filter(|t| to_tree(t, 2).map(|tree| to_term(&tree) == **t).unwrap_or(false))
        .count();
    println!("{round_trips} of {} terms in x1, x2 of size ≤ 5 round trip", terms.len());
    Ok(())
}
