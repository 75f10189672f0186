//! Modified curvature of the Fubini–Study metric at the chart origin: the
//! golden value δᵢⱼδₖₗ + δᵢₗδₖⱼ and its Griffiths minimum.

use cylab::connection::modified::griffiths_min_over;
use cylab::connection::{chart_curvature, FubiniStudyChart};

fn main() -> cylab::Result<()> {
    for n in [1usize, 2] {
        let pc = chart_curvature(&FubiniStudyChart { complex_dim: n }, &vec![0.0; 2 * n], 0.02)?;
        println!("CP^{n}: R̂_ij̄kl̄ at the origin");
        for i in 0..n {
            for j in 0..n {
                let row: Vec<String> = (0..n * n)
                    .map(|kl| format!("{:+.6}", pc.modified[(i * n + j) * n * n + kl].re))
                    .collect();
                println!("  ({i}{j}) {}", row.join(" "));
            }
        }
        let w = griffiths_min_over(std::iter::once(pc.modified.clone()), n, 500, 0)?;
        println!("  Griffiths minimum over 500 unit pairs: {:.8}", w.min);
    }
    Ok(())
}
