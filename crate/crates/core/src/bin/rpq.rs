use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpq::bench::{run_grid, Family};
use rpq::engine::{compare, evaluate, Engine, Query};
use rpq::generators::{gen_path, gen_random, gen_random_ast, gen_two_cycles};
use rpq::graph::{load_edge_list, LabeledGraph};
use rpq::ospg::{eval_nfa_with, OspgOptions};
use rpq::tclosure::{tc_traced, Digraph, Formulation};
use rpq::{load_automaton, parse, Error};

#[derive(Parser)]
#[command(name = "rpq", about = "Regular path queries over edge-labeled graphs")]
struct Cli {
    /// Print work counters on stderr.
    #[arg(long, global = true)]
    counters: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct QueryArgs {
    /// Regular expression over edge labels, e.g. 'ab*c'.
    #[arg(
        long,
        conflicts_with = "automaton",
        required_unless_present = "automaton"
    )]
    query: Option<String>,
    /// Automaton file (state/start/final/trans lines).
    #[arg(long)]
    automaton: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a query and list matching vertex pairs.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value = "ospg")]
        engine: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the reduced a/b/c graph as an edge list (ospg only).
        #[arg(long)]
        dump_abc: Option<PathBuf>,
    },
    /// Run all four engines and compare their answers.
    Verify {
        /// Graph to check; without it, random instances are generated.
        #[arg(long, requires = "query")]
        graph: Option<PathBuf>,
        #[arg(long)]
        query: Option<String>,
        /// Number of random instances when no graph is given.
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
    /// Generate an instance family as an edge list.
    Gen {
        #[arg(long)]
        family: String,
        /// path: N [LABEL]; two-cycles: N; random: V E ALPHABET SEED
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an engine × size grid and write counters as CSV.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "ospg,pg")]
        engines: Vec<String>,
        #[arg(long)]
        query: String,
        #[arg(long, default_value_t = 1)]
        repeats: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transitive closure of a graph, labels ignored.
    Tc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "linear")]
        formulation: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let capacity = e
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::Capacity { .. }));
            ExitCode::from(if capacity { 2 } else { 1 })
        }
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_graph(path: &Path) -> anyhow::Result<LabeledGraph> {
    Ok(load_edge_list(BufReader::new(File::open(path)?))?)
}

fn read_query(args: &QueryArgs) -> anyhow::Result<Query> {
    match (&args.query, &args.automaton) {
        (Some(q), None) => Ok(parse(q)?.into()),
        (None, Some(p)) => Ok(load_automaton(BufReader::new(File::open(p)?))?.into()),
        _ => {
            Err(Error::InvalidArgument("give exactly one of --query or --automaton".into()).into())
        }
    }
}

fn print_counters(counters: &[(&str, u64)]) {
    for (name, v) in counters {
        eprintln!("{name}={v}");
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Eval {
            graph,
            query,
            engine,
            out,
            dump_abc,
        } => {
            let engine: Engine = engine.parse()?;
            let g = read_graph(&graph)?;
            let query = read_query(&query)?;
            if let Some(path) = dump_abc {
                let (_, abc) = eval_nfa_with(&g, &query.nfa(), OspgOptions::default());
                abc.graph()
                    .write_edge_list(BufWriter::new(File::create(path)?))?;
            }
            let run = evaluate(engine, &g, &query)?;
            let mut w = output(out.as_deref())?;
            run.pairs.write_named(&g, &mut w)?;
            w.flush()?;
            eprintln!("OUT={}", run.pairs.len());
            if cli.counters {
                print_counters(&run.counters);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            graph,
            query,
            seeds,
        } => {
            let instances: Vec<(LabeledGraph, Query)> = match graph {
                Some(path) => {
                    let q = query.expect("clap enforces --query with --graph");
                    vec![(read_graph(&path)?, parse(&q)?.into())]
                }
                None => {
                    let fixed = query.map(|q| parse(&q)).transpose()?;
                    let mut rng = ChaCha8Rng::seed_from_u64(0);
                    let alphabet = ["a", "b", "c"];
                    (0..seeds)
                        .map(|s| {
                            let g = gen_random(8, 20, &alphabet, s)?;
                            let q = fixed
                                .clone()
                                .unwrap_or_else(|| gen_random_ast(&mut rng, 4, &alphabet));
                            Ok((g, q.into()))
                        })
                        .collect::<anyhow::Result<_>>()?
                }
            };
            let mut failures = 0usize;
            for (i, (g, q)) in instances.iter().enumerate() {
                let results = Engine::ALL
                    .iter()
                    .map(|&e| Ok((e, evaluate(e, g, q)?.pairs)))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                for m in compare(&results) {
                    failures += 1;
                    eprintln!("instance {i}: {} and {} disagree", m.left, m.right);
                    let name = |v| g.vertex_name(v);
                    for (a, b) in m.only_left {
                        eprintln!("  only {}: {}\t{}", m.left, name(a), name(b));
                    }
                    for (a, b) in m.only_right {
                        eprintln!("  only {}: {}\t{}", m.right, name(a), name(b));
                    }
                }
            }
            eprintln!(
                "{} instance(s), {}",
                instances.len(),
                if failures == 0 {
                    "all engines agree"
                } else {
                    "MISMATCH"
                }
            );
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Gen {
            family,
            params,
            out,
        } => {
            let num = |i: usize| -> anyhow::Result<usize> {
                let p = params.get(i).ok_or_else(|| {
                    Error::InvalidArgument(format!("missing parameter {}", i + 1))
                })?;
                Ok(p.parse()
                    .map_err(|_| Error::InvalidArgument(format!("not a number: {p}")))?)
            };
            let g = match family.as_str() {
                "path" => gen_path(num(0)?, params.get(1).map_or("b", String::as_str))?,
                "two-cycles" => gen_two_cycles(num(0)?)?,
                "random" => {
                    let alphabet: Vec<&str> = params
                        .get(2)
                        .ok_or_else(|| Error::InvalidArgument("missing alphabet".into()))?
                        .split(':')
                        .collect();
                    gen_random(num(0)?, num(1)?, &alphabet, num(3)? as u64)?
                }
                other => {
                    return Err(Error::InvalidArgument(format!("unknown family '{other}'")).into())
                }
            };
            let mut w = output(out.as_deref())?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            family,
            sizes,
            engines,
            query,
            repeats,
            out,
        } => {
            let family: Family = family.parse()?;
            let engines = engines
                .iter()
                .map(|e| e.parse())
                .collect::<Result<Vec<Engine>, _>>()?;
            let report = run_grid(&[family], &sizes, &engines, &query, repeats)?;
            report.write_csv(output(out.as_deref())?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tc {
            graph,
            formulation,
            out,
        } => {
            let formulation = match formulation.as_str() {
                "linear" => Formulation::Linear,
                "binary" => Formulation::Binary,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown formulation '{other}' (expected linear or binary)"
                    ))
                    .into())
                }
            };
            let g = read_graph(&graph)?;
            let run = tc_traced(&Digraph::from_labeled(&g), formulation);
            let mut w = output(out.as_deref())?;
            run.pairs.write_named(&g, &mut w)?;
            w.flush()?;
            eprintln!("OUT={}", run.pairs.len());
            if cli.counters {
                print_counters(&run.counters());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
