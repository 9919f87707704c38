//! Reduce a query given as an automaton to `a b* c` and print the reduced
//! graph, then answer the original query through it.

use rpq::graph::PairSet;
use rpq::ospg::{eval_abc, eval_nfa_with, OspgOptions};
use rpq::{build_abc_graph, load_automaton_str, load_edge_list_str, project_output};

// d*(e.f + g)*
const DFA: &str = "\
state q0
state q1
state q2
start q0
final q0
final q2
trans q0 d q0
trans q0 e q1
trans q0 g q2
trans q1 f q2
trans q2 e q1
trans q2 g q2
";

fn main() -> rpq::Result<()> {
    let g = load_edge_list_str("1\td\t2\n2\te\t3\n3\tf\t1\n1\tg\t4\n4\te\t1\n3\tg\t2\n")?;
    let m = load_automaton_str(DFA)?;

    let abc = build_abc_graph(&g, &m);
    abc.check_invariants(&g, &m)?;
    println!(
        "G' has {} vertices, {} edges ({} b-edges)",
        abc.vertex_count(),
        abc.edge_count(),
        abc.b_edge_count()
    );
    print!("{}", abc.graph().to_edge_list_string());

    let abc_pairs: PairSet = eval_abc(&abc);
    let projected = project_output(&abc_pairs, &abc);
    println!(
        "{} pairs in G', {} after projection:",
        abc_pairs.len(),
        projected.len()
    );
    for (v, u) in projected.iter() {
        println!("  {} -> {}", g.vertex_name(v), g.vertex_name(u));
    }

    // The one-call pipeline gives the same answer.
    let (run, _) = eval_nfa_with(&g, &m, OspgOptions::default());
    assert_eq!(run.pairs, projected);
    Ok(())
}
