//! 2-cells of weakenings: trees are connected exactly when they evaluate to
//! the same element of the presented operad.

use std::collections::BTreeMap;

use operad_workbench::operads::PresentedOperad;
use operad_workbench::terms::{parse_presentation, parse_term, SaturationOptions};
use operad_workbench::weakening::WeakeningContext;

fn main() -> operad_workbench::Result<()> {
    let comm = parse_presentation(include_str!("../data/comm_monoid.th"))?;
    let exact = WeakeningContext::evaluable(
        PresentedOperad::builtin(comm.clone(), "terminal-symmetric", &BTreeMap::new())?,
        SaturationOptions::default(),
    )?;
    let closure = WeakeningContext::closure(comm, SaturationOptions::default())?;
    let a = exact.term_tree(&parse_term("m(x1,m(x2,x3))")?, 3)?;
    let b = exact.term_tree(&parse_term("m(m(x3,x1),x2)")?, 3)?;
    println!("by evaluation: {}", exact.two_cell(&a, &b)?.decision);
    let v = closure.two_cell(&a, &b)?;
    println!("by closure:    {} via", v.decision);
    for step in &v.trace {
        println!("  {} ~ {}", step.from, step.to);
    }

    for (file, src) in [
        ("pointed", include_str!("../data/pointed.th")),
        ("pointed_abcd", include_str!("../data/pointed_abcd.th")),
        ("trivial", include_str!("../data/trivial.th")),
    ] {
        let ctx = WeakeningContext::evaluable(
            PresentedOperad::builtin(parse_presentation(src)?, "terminal-plain", &BTreeMap::new())?,
            SaturationOptions::default(),
        )?;
        let classes = ctx.enumerate_classes(0, 3)?;
        let sizes: Vec<usize> = classes.classes.iter().map(|c| c.members.len()).collect();
        println!("{file}: nullary classes with sizes {sizes:?}");
    }

    let mut fp = parse_presentation(include_str!("../data/comm_monoid.th"))?;
    fp.flavor = operad_workbench::terms::Flavor::Fp;
    if let Err(e) = WeakeningContext::closure(fp, SaturationOptions::default()) {
        println!("fp flavor: {e}");
    }
    Ok(())
}
