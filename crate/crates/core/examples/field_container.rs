//! Round trip of a solved potential through the binary field container.

use cylab::experiment::FieldContainer;
use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::PeriodicGrid;
use cylab::solver::{continuity_solve, CYProblem, CYSolution};

fn main() -> cylab::Result<()> {
    let grid = PeriodicGrid::new(1, 64)?;
    let f = DensityRecipe::ExpSine { amplitude: 0.8 }.build(grid)?;
    let sol = continuity_solve(&CYProblem::new(&f, 4))?;

    let path = std::env::temp_dir().join("cylab_example.cyf");
    FieldContainer::new(grid)
        .with_field("phi", sol.phi.clone())?
        .with_field("F", f)?
        .with_meta(serde_json::json!({ "trace": sol.trace, "final_residual": sol.final_residual }))
        .write(&path)?;
    let back = FieldContainer::read(&path)?;
    let restored = CYSolution::from_potential(back.require("phi")?.clone(), vec![], sol.final_residual)?;
    println!(
        "{} bytes, fields {:?}, max difference {:e}, volume error {:.2e}",
        std::fs::metadata(&path)?.len(),
        back.fields.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>(),
        restored.phi.max_abs_diff(&sol.phi),
        restored.volume_error()
    );
    Ok(())
}
