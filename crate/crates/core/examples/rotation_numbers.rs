//! Rotation numbers of a few generators, computed from the winding of
//! `(x', y')` and from the cusps of the front.
//!
//! `cargo run --example rotation_numbers`

use engel::curves::{self, Basis, Description, TrigSeries};
use engel::{invariants, lifting, Tolerances};

fn main() -> engel::Result<()> {
    let tol = Tolerances::default();
    let shapes = [
        ("circle", TrigSeries::cos(1), TrigSeries::sin(1)),
        ("reversed circle", TrigSeries::cos(1), TrigSeries::default().with(-1.0, Basis::Sin(1))),
        ("double circle", TrigSeries::cos(2), TrigSeries::sin(2)),
        (
            "figure eight",
            TrigSeries::sin(2),
            TrigSeries::cos(1).with(0.3, Basis::Cos(3)),
        ),
        (
            "wobbly triple",
            TrigSeries::cos(3).with(0.1, Basis::Sin(1)),
            TrigSeries::sin(3).with(0.2, Basis::Cos(2)),
        ),
    ];
    println!("{:<16} {:>7} {:>5} {:>5} {:>5}", "generator", "winding", "c+", "c-", "cusp");
    for (name, x, y) in shapes {
        let g = curves::sample_generator(&Description::Series { x, y }, 2048)?;
        let g = lifting::balance_closure(&g)?;
        let r = invariants::invariant_report(&g, &tol)?;
        println!("{name:<16} {:>7} {:>5} {:>5} {:>5}", r.rot_winding, r.c_plus, r.c_minus, r.rot_cusp);
    }
    Ok(())
}
