//! Write SVG pictures of model fronts to a directory (default: the
//! system temp dir).
//!
//! `cargo run --example render_front -- /tmp/fronts`

use std::path::PathBuf;

use engel::{cli, curves, models, CuspOrientation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    for n in [-2, 0, 3] {
        let l = models::model_front(n, models::DEFAULT_SEED)?;
        let front = curves::front_of(l.legendrian())?;
        let path = dir.join(format!("front_{n}.svg"));
        cli::render_svg(&front, &path)?;
        println!(
            "{}: {} up cusps, {} down cusps, {} crossings",
            path.display(),
            front.count(CuspOrientation::Up),
            front.count(CuspOrientation::Down),
            front.double_points.len()
        );
    }
    Ok(())
}
