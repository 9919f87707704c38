//! Load an edge list, parse a query and list the matching pairs.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use rpq::{eval_rpq, load_edge_list_str, parse};

const GRAPH: &str = "\
# src\tlabel\tdst
alice\tknows\tbob
bob\tknows\tcarol
carol\tworksAt\tacme
bob\tworksAt\tinitech
";

fn main() -> rpq::Result<()> {
    let g = load_edge_list_str(GRAPH)?;
    // Multi-character labels need explicit '.' concatenation.
    let q = parse("knows.knows*.worksAt")?;
    println!("query: {q}");
    for (src, dst) in eval_rpq(&g, &q).iter() {
        println!("{}\t{}", g.vertex_name(src), g.vertex_name(dst));
    }
    Ok(())
}
