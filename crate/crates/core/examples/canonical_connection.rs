//! Canonical connection of the twisted almost-Hermitian structure on T⁴:
//! torsion, Ricci form, Nijenhuis tensor and modified curvature.
//!
//! cargo run --release --example canonical_connection -- [resolution] [amplitude]

use cylab::connection::{CurvatureBundle, CurvatureReport};
use cylab::geometry::recipes::{JRecipe, TWISTED_REFERENCE_AMPLITUDE};
use cylab::geometry::{metric_from_pair, PeriodicGrid, TwoFormField};

fn main() -> cylab::Result<()> {
    let mut args = std::env::args().skip(1);
    let res: usize = args.next().map_or(16, |s| s.parse().expect("resolution"));
    let amp: f64 = args.next().map_or(TWISTED_REFERENCE_AMPLITUDE, |s| s.parse().expect("amplitude"));
    let grid = PeriodicGrid::new(2, res)?;
    let j = JRecipe::Twisted { amplitude: amp }.build(grid)?;
    let w = TwoFormField::standard(grid);
    let g = metric_from_pair(&w, &j)?;

    let report = CurvatureReport::compute("twisted", &g, &j, 64, 1)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    let bundle = CurvatureBundle::compute(&g, &j)?;
    println!("∫Ric∧ω = {:e}", bundle.integrated_ricci(&w)?);
    println!("max torsion = {:e}", bundle.torsion_max());
    Ok(())
}
