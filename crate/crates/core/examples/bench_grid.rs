//! Run a small benchmark grid, write it as CSV and fit scaling exponents.

use rpq::bench::{fit_exponent, run_grid, Family};
use rpq::engine::Engine;

fn main() -> rpq::Result<()> {
    let report = run_grid(
        &[Family::Path],
        &[500, 1000, 2000],
        &[Engine::Ospg, Engine::Pg],
        "b*c",
        3,
    )?;
    report.write_csv(std::io::stdout())?;

    let pg = report.series(Family::Path, Engine::Pg, "bfs_edge_visits");
    let ospg = report.series(Family::Path, Engine::Ospg, "total_work");
    eprintln!("pg slope   {:.3}", fit_exponent(&pg)?);
    eprintln!("ospg slope {:.3}", fit_exponent(&ospg)?);
    Ok(())
}
