//! Cross-check the four engines on seeded random graphs and queries.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rpq::engine::{compare, evaluate, Engine, Query};
use rpq::generators::{gen_random, gen_random_ast};

fn main() -> rpq::Result<()> {
    let alphabet = ["a", "b", "c"];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut total_out = 0;
    for seed in 0..300 {
        let g = gen_random(8, 20, &alphabet, seed)?;
        let q = gen_random_ast(&mut rng, 4, &alphabet);
        let query = Query::Regex(q.clone());
        let mut results = Vec::new();
        for e in Engine::ALL {
            results.push((e, evaluate(e, &g, &query)?.pairs));
        }
        let diff = compare(&results);
        if !diff.is_empty() {
            panic!("seed {seed}, query {q}: {diff:?}");
        }
        total_out += results[0].1.len();
    }
    println!("300 instances, all engines agree, {total_out} pairs in total");
    Ok(())
}
