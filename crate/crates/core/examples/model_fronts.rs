//! Synthesize embedded closed loops with every rotation number in a range
//! and certify each one.
//!
//! `cargo run --release --example model_fronts`

use engel::{curves, invariants, lifting, models, Tolerances};

fn main() -> engel::Result<()> {
    let tol = Tolerances::default();
    for n in -4..=4 {
        let l = models::model_front(n, models::DEFAULT_SEED)?;
        let r = invariants::invariant_report(l.generator(), &tol)?;
        let e = lifting::embedding_check(&l)?;
        let front = curves::front_of(l.legendrian())?;
        println!(
            "n = {n:+}: rot {:+} ({} up, {} down cusps), {} front crossings, closed {}, embedded {}",
            r.rot_winding,
            r.c_plus,
            r.c_minus,
            front.double_points.len(),
            l.is_closed(&tol),
            e.embedded
        );
    }

    // reversing the orientation flips the sign
    let three = models::figure1()?;
    let back = models::orientation_reverse(&three);
    println!(
        "figure1 rot {}, reversed {}",
        invariants::rot_winding(three.generator())?,
        invariants::rot_winding(back.generator())?
    );
    Ok(())
}
