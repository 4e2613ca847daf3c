//! Monoids presented with a binary product and a unit, and with products of
//! every arity up to 3, partition trees into the same classes.

use std::collections::BTreeMap;

use operad_workbench::operads::PresentedOperad;
use operad_workbench::terms::{parse_presentation, parse_term, SaturationOptions};
use operad_workbench::weakening::{biased_unbiased_agreement, AgreementBounds, WeakeningContext};

fn main() -> operad_workbench::Result<()> {
    let ctx = |src: &str| -> operad_workbench::Result<_> {
        WeakeningContext::evaluable(
            PresentedOperad::builtin(parse_presentation(src)?, "terminal-plain", &BTreeMap::new())?,
            SaturationOptions::default(),
        )
    };
    let biased = ctx(include_str!("../data/monoid.th"))?;
    let unbiased = ctx(include_str!("../data/unbiased_monoid.th"))?;
    let forward = BTreeMap::from([
        ("m".to_string(), parse_term("t2(x1,x2)")?),
        ("e".to_string(), parse_term("t0")?),
    ]);
    let backward = BTreeMap::from([
        ("t0".to_string(), parse_term("e")?),
        ("t1".to_string(), parse_term("x1")?),
        ("t2".to_string(), parse_term("m(x1,x2)")?),
        ("t3".to_string(), parse_term("m(m(x1,x2),x3)")?),
    ]);
    let bounds = AgreementBounds { max_arity: 3, max_size: 5 };
    let report = biased_unbiased_agreement(&biased, &unbiased, Some(&forward), Some(&backward), bounds)?;
    println!("{report}");
    Ok(())
}
