//! `b*c` on a path of `b`-edges: the output is empty, yet a BFS from every
//! vertex walks the rest of the path. Prints the work counters of both
//! engines as the path grows.

use rpq::baseline::eval_pg_with;
use rpq::generators::gen_path;
use rpq::ospg::{eval_rpq_with, OspgOptions};
use rpq::parse;

fn main() -> rpq::Result<()> {
    let q = parse("b*c")?;
    println!(
        "{:>6} {:>5} {:>14} {:>12} {:>12}",
        "N", "OUT", "pg visits", "ospg step1", "ospg total"
    );
    for n in [250, 500, 1000, 2000, 4000] {
        let g = gen_path(n, "b")?;
        let (pg_out, pg) = eval_pg_with(&g, &q);
        let run = eval_rpq_with(&g, &q, OspgOptions::default());
        assert_eq!(pg_out, run.pairs);
        println!(
            "{:>6} {:>5} {:>14} {:>12} {:>12}",
            n,
            run.pairs.len(),
            pg.bfs_edge_visits,
            run.counters.step1_edge_checks,
            run.counters.total_work()
        );
    }
    Ok(())
}
