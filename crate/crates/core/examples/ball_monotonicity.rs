//! Ball-energy monotonicity, decay constant, the L¹ wedge chain and the
//! ε-regularity probe on a solved T⁴ instance. Writes monotonicity.csv.

use cylab::geometry::recipes::DensityRecipe;
use cylab::geometry::{traces, MetricField, PeriodicGrid, TwoFormField};
use cylab::monotonicity::*;
use cylab::solver::{continuity_solve, CYProblem};

fn main() -> cylab::Result<()> {
    let grid = PeriodicGrid::new(2, 12)?;
    let f = DensityRecipe::Trig { amplitude: 0.5 }.build(grid)?;
    let sol = continuity_solve(&CYProblem::new(&f, 4))?;
    let g = MetricField::euclidean(grid);
    let (tr, _) = traces(&g, &sol.metric)?;
    let balls = BallFamily::standard(&tr, 5, 0.05, 0.25, 10)?;

    let (report, chain) = decay_and_l1(&g, &sol.metric, &sol.omega_tilde, &TwoFormField::standard(grid), &balls, sol.final_residual, 1e-9)?;
    for s in &report.scans {
        println!("center {:?}: fitted A {:?}", s.center.map(|c| (c * 1000.0).round() / 1000.0), s.fitted_a);
    }
    println!("decay_C {:.6}", report.decay_c);
    println!("L¹ chain {chain:#?}");
    for p in epsilon_regularity_probe(&g, &sol.metric, &balls)?.iter().step_by(10) {
        println!("ε-probe center {} r {:.3}: r^(2-2n)E {:.4e}, sup density {:.4e}", p.center, p.r, p.x, p.y);
    }
    std::fs::write("monotonicity.csv", report.to_csv())?;
    Ok(())
}
