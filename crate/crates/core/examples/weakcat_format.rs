//! Prints a weak P-category in the JSON file format read by `strictify`.
//!
//! ```text
//! cargo run --example weakcat_format -- 3 > monoid3.json
//! ```

use operad_workbench::weakcat::instances::{indiscrete_monoid, tagged_monoid};

fn main() -> operad_workbench::Result<()> {
    let mut args = std::env::args().skip(1);
    let k: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let w = match args.next().as_deref() {
        Some("tagged") => tagged_monoid(k)?,
        _ => indiscrete_monoid(k)?,
    };
    println!("{}", w.to_json());
    Ok(())
}
