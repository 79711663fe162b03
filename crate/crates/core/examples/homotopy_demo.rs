//! Run the bundled demo script (a tangency pass, a swallowtail birth, a
//! deformation and a final balance) and verify every frame.
//!
//! `cargo run --release --example homotopy_demo`

use engel::{curves, frontlang, homotopy};

const DEMO: &str = include_str!("../data/demo.front");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = frontlang::parse(DEMO)?;
    let start = doc.generator("start").ok_or("no generator `start`")?;
    let moves = doc.script("demo").ok_or("no script `demo`")?.to_moves(homotopy::DEFAULT_FRAMES)?;
    let g0 = curves::sample_generator(&start.description(), 4096)?;

    let trace = homotopy::run_script(&g0, &moves)?;
    for e in &trace.events {
        println!("{:?} at frame {} (t = {:.3})", e.kind, e.frame, e.t);
    }
    let report = homotopy::verify_isotopy(&trace);
    println!(
        "{} frames, verified {}, rot {:?}, smallest |dw| {:.3}, frames with Legendrian double points {:?}",
        report.frames, report.verified, report.rot, report.margin, report.tangency_frames
    );
    for f in report.per_frame.iter().step_by(16) {
        let front = curves::front_of(trace.frames[f.frame].legendrian())?;
        println!(
            "  frame {:3}: defects {:.1e}/{:.1e}, {} cusps, {} front crossings",
            f.frame,
            f.defect_z,
            f.defect_w,
            front.cusps.len(),
            front.double_points.len()
        );
    }
    Ok(())
}
