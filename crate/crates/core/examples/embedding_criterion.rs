//! A horizontal loop is embedded exactly when every double point of its
//! Legendrian projection has different `w` values on its two branches.
//! In this family the Legendrian curve has a double point only at a = 1,
//! and there the gap is zero.
//!
//! `cargo run --example embedding_criterion`

use engel::curves::{self, Basis, Description, TrigSeries};
use engel::lifting;

fn main() -> engel::Result<()> {
    for a in [0.8, 0.9, 0.95, 1.0, 1.05, 1.1] {
        let y = TrigSeries::default().with(a, Basis::Cos(1)).with(-5.0 / 9.0, Basis::Cos(3));
        let g = curves::sample_generator(&Description::Series { x: TrigSeries::sin(2), y }, 2048)?;
        // this family is already balanced, so integrate directly
        let l = lifting::lift(&g, 0.0, 0.0)?;
        let e = lifting::embedding_check(&l)?;
        print!("a = {a:.2}: margin {:.3e}, embedded {:5}", e.margin, e.embedded);
        for p in &e.double_points {
            print!("  [s {:.4} / {:.4}: dw {:+.3e}]", p.s0, p.s1, p.dw);
        }
        println!();
    }
    Ok(())
}
