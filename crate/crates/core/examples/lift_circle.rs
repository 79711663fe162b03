//! Balance the unit circle, lift it to R^4 and look at the result.
//!
//! `cargo run --example lift_circle`

use engel::curves::{self, Description, TrigSeries};
use engel::lifting;

fn main() -> engel::Result<()> {
    let circle = Description::Series {
        x: TrigSeries::cos(1),
        y: TrigSeries::sin(1),
    };
    let g = curves::sample_generator(&circle, 1024)?;
    println!("raw circle: z defect {:.6}, w defect {:.6}", lifting::z_closure_defect(&g), lifting::w_closure_defect(&g));

    // the raw circle has no closed lift
    if let Err(e) = lifting::lift(&g, 0.0, 0.0) {
        println!("lift refused: {e}");
    }

    let balanced = lifting::balance_closure_report(&g)?;
    println!("bumps {:?}, coefficients {:?}", balanced.bumps, balanced.coefficients);
    let g = balanced.generator;
    println!("balanced: z defect {:.2e}, w defect {:.2e}", lifting::z_closure_defect(&g), lifting::w_closure_defect(&g));

    let l = lifting::lift(&g, 0.0, 0.0)?;
    let (rz, rw) = curves::horizontality_residual(&l);
    println!("horizontality residual: z {rz:.2e}, w {rw:.2e}");

    let e = lifting::embedding_check(&l)?;
    println!("embedded: {} ({} Legendrian double points)", e.embedded, e.double_points.len());
    for k in (0..l.len()).step_by(128) {
        let [x, y, z, w] = l.point(k);
        println!("  s = {:.4}: ({x:+.4}, {y:+.4}, {z:+.4}, {w:+.4})", k as f64 / l.len() as f64);
    }
    Ok(())
}
