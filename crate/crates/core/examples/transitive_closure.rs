//! Linear versus binary semi-naive transitive closure on paths and a random
//! graph: iteration counts and join work.

use rpq::generators::{gen_path, gen_random};
use rpq::tclosure::{tc_binary_traced, tc_linear_traced, Digraph};

fn main() -> rpq::Result<()> {
    for k in 3..=7 {
        let g = Digraph::from_labeled(&gen_path((1 << k) + 1, "a")?);
        let lin = tc_linear_traced(&g, false);
        let bin = tc_binary_traced(&g, false);
        assert_eq!(lin.pairs, bin.pairs);
        println!(
            "path of {:>3} edges: OUT={:>5}  linear iters={:>3} work={:>6}  binary iters={} work={:>6}",
            1 << k,
            lin.pairs.len(),
            lin.productive_iterations,
            lin.rule_work,
            bin.productive_iterations,
            bin.rule_work
        );
    }

    let g = Digraph::from_labeled(&gen_random(200, 400, &["a"], 7)?);
    let lin = tc_linear_traced(&g, false);
    let bin = tc_binary_traced(&g, false);
    println!(
        "random 200/400: OUT={} linear work={} binary work={} delta sizes {:?}",
        lin.pairs.len(),
        lin.rule_work,
        bin.rule_work,
        bin.delta_sizes
    );
    Ok(())
}
