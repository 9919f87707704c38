//! `ab*c` on two disjoint cycles: both directions of the product-graph
//! search do quadratic work, while the light/heavy split stays near `N^{3/2}`.

use rpq::baseline::eval_pg_bidirectional_with;
use rpq::bench::fit_exponent;
use rpq::generators::gen_two_cycles;
use rpq::ospg::{eval_rpq_with, OspgOptions};
use rpq::parse;

fn main() -> rpq::Result<()> {
    let q = parse("ab*c")?;
    let mut ospg_pts = Vec::new();
    let mut bidi_pts = Vec::new();
    for n in [128usize, 256, 512, 1024, 2048] {
        let g = gen_two_cycles(n)?;
        let run = eval_rpq_with(&g, &q, OspgOptions::default());
        let (out, bidi) = eval_pg_bidirectional_with(&g, &q);
        assert!(run.pairs.is_empty() && out.is_empty());
        println!(
            "N={n:>5}  b-edges={:>6}  cap={:>4}  ospg work={:>9}  pg-bidi visits={:>10}",
            run.abc_b_edges,
            run.cap,
            run.counters.total_work(),
            bidi.combined_visits()
        );
        ospg_pts.push((n as f64, run.counters.total_work() as f64));
        bidi_pts.push((n as f64, bidi.combined_visits() as f64));
    }
    println!("slope ospg    = {:.3}", fit_exponent(&ospg_pts)?);
    println!("slope pg-bidi = {:.3}", fit_exponent(&bidi_pts)?);
    Ok(())
}
