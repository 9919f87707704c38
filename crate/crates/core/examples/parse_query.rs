//! Parse queries, show their normalized form and compiled automaton, and
//! report syntax errors with positions.

use rpq::compile;
use rpq::regex::{parse_with, SymbolMode};

fn main() {
    for text in [
        "ab*c",
        "d*(e.f|g)*",
        "(a|b).c",
        "knows.worksAt",
        "(ab",
        "a||b",
        "*a",
    ] {
        match parse_with(text, SymbolMode::Auto) {
            Ok(q) => {
                let m = compile(&q);
                println!(
                    "{text:<16} => {q:<20} kleene-free={:<5} states={} transitions={}",
                    q.is_kleene_free(),
                    m.state_count(),
                    m.transitions().len()
                );
            }
            Err(e) => println!("{text:<16} => {e}"),
        }
    }
}
