//! Command-line front end: load trees, measures and specs from JSON files
//! (or built-in fixtures), run the exact checkers, and emit deterministic
//! JSON reports.
//!
//! Exit codes: 0 when the requested property holds (or the command has no
//! verdict), 1 when a verdict fails, 2 on input or environment errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use blockmc::chains::{builtin_fixture, counterexample_fixture, embed_chain};
use blockmc::classify::{check_obmc, classify_all_bounded, ClassReport};
use blockmc::io;
use blockmc::rational::format_ratio;
use blockmc::tree::RootedTree;
use blockmc::{Error, JointMeasure};

#[derive(Parser)]
#[command(
    name = "blockmc",
    about = "Exact classification of tree-indexed probability measures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a block Markov spec into a full measure file
    Realize {
        /// Block Markov spec (JSON)
        #[arg(long)]
        bmc: PathBuf,
        /// Output path; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the block Markov property at one root
    Check {
        #[command(flatten)]
        input: MeasureInput,
        /// Root label; defaults to the root stored with the input
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every checker: block Markov per root, Markov chain, random field
    Classify {
        #[command(flatten)]
        input: MeasureInput,
        /// Root label for the root-dependent sibling-independence check;
        /// defaults to the root stored with the input
        #[arg(long)]
        root: Option<String>,
        /// Cap the Markov-chain subtree sweep at this subset size
        #[arg(long)]
        max_subtree_size: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the built-in counter-example's four exact conditionals
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed a one-dimensional chain into a tree-indexed measure
    ChainEmbed {
        /// Chain file (JSON); may carry its own time_map
        #[arg(long)]
        chain: PathBuf,
        /// Tree file (JSON)
        #[arg(long)]
        tree: PathBuf,
        /// Separate time-map file; overrides the chain file's map
        #[arg(long)]
        time_map: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the built-in fixtures and a seeded random sweep
    SelfTest {
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MeasureInput {
    /// Full measure file (JSON)
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Block Markov spec (JSON), realized before checking
    #[arg(long)]
    bmc: Option<PathBuf>,
    /// Built-in fixture: counterexample, path3, binary2
    #[arg(long)]
    fixture: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(failed_verdict) => {
            if failed_verdict {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true) means the command ran but its verdict failed (exit 1).
fn run(command: Command) -> Result<bool, String> {
    match command {
        Command::Realize { bmc, out } => {
            let spec = io::parse_bmc(&read(&bmc)?).map_err(|e| at(&bmc, e))?;
            let measure = spec.realize();
            write_out(out.as_deref(), &io::measure_to_json(&measure))?;
            Ok(false)
        }
        Command::Check {
            input,
            root,
            workers,
            out,
        } => with_pool(workers, || {
            let (tree, measure) = load_measure(&input)?;
            let view = match &root {
                Some(label) => {
                    let id = tree
                        .vertex_by_label(label)
                        .ok_or_else(|| format!("unknown root label {label:?}"))?;
                    tree.rerooted(id).map_err(|e| e.to_string())?
                }
                None => tree.clone(),
            };
            let verdict = check_obmc(&measure, &view).map_err(|e| e.to_string())?;
            let report = io::obmc_report_to_json(view.label(view.root()), &verdict, &view);
            write_out(out.as_deref(), &report)?;
            Ok(!verdict.holds)
        }),
        Command::Classify {
            input,
            root,
            max_subtree_size,
            workers,
            out,
        } => with_pool(workers, || {
            let (tree, measure) = load_measure(&input)?;
            let tree = match &root {
                Some(label) => {
                    let id = tree
                        .vertex_by_label(label)
                        .ok_or_else(|| format!("unknown root label {label:?}"))?;
                    tree.rerooted(id).map_err(|e| e.to_string())?
                }
                None => tree,
            };
            let cap = max_subtree_size.unwrap_or(tree.vertex_count());
            let report = classify_all_bounded(&measure, &tree, cap).map_err(|e| e.to_string())?;
            write_out(out.as_deref(), &io::report_to_json(&report, &tree))?;
            Ok(!report_holds(&report))
        }),
        Command::Counterexample { out } => {
            let f = counterexample_fixture();
            let label = |l: &str| f.tree.vertex_by_label(l).expect("fixture label");
            let m = &f.measure;
            let block =
                blockmc::Configuration::from_pairs([(label("(0,-1)"), 0), (label("(1,0)"), 0)]);
            let pair =
                blockmc::Configuration::from_pairs([(label("(0,0)"), 0), (label("(0,1)"), 0)]);
            let x_only = blockmc::Configuration::single(label("(0,0)"), 0);
            let site = blockmc::Configuration::single(label("(1,0)"), 0);
            let values = [
                (
                    "bmc_lhs",
                    m.conditional_probability(&block, &pair),
                    &f.expected.bmc_lhs,
                ),
                (
                    "bmc_rhs",
                    m.conditional_probability(&block, &x_only),
                    &f.expected.bmc_rhs,
                ),
                (
                    "mc_lhs",
                    m.conditional_probability(&site, &pair),
                    &f.expected.mc_lhs,
                ),
                (
                    "mc_rhs",
                    m.conditional_probability(&site, &x_only),
                    &f.expected.mc_rhs,
                ),
            ];
            let mut obj = serde_json::Map::new();
            for (name, got, expect) in values {
                let got = got.map_err(|e| e.to_string())?;
                if &got != expect {
                    return Err(format!(
                        "counter-example value {name} is {} but should be {}",
                        format_ratio(&got),
                        format_ratio(expect)
                    ));
                }
                obj.insert(name.to_string(), json!(format_ratio(&got)));
            }
            obj.insert("tree".into(), io::tree_to_value(&f.tree));
            write_out(out.as_deref(), &io::pretty(&serde_json::Value::Object(obj)))?;
            Ok(false)
        }
        Command::ChainEmbed {
            chain,
            tree,
            time_map,
            out,
        } => {
            let parsed = io::parse_chain(&read(&chain)?).map_err(|e| at(&chain, e))?;
            let t = io::parse_tree(&read(&tree)?).map_err(|e| at(&tree, e))?;
            let raw_map: BTreeMap<String, usize> = match &time_map {
                Some(path) => io::parse_time_map(&read(path)?).map_err(|e| at(path, e))?,
                None => parsed.time_map.clone().ok_or_else(|| {
                    format!(
                        "{}: no time_map in the chain file and no --time-map given",
                        chain.display()
                    )
                })?,
            };
            let map = io::time_map_for_tree(&t, &raw_map).map_err(|e| e.to_string())?;
            let measure = embed_chain(&parsed.spec, &t, &map).map_err(|e| e.to_string())?;
            write_out(out.as_deref(), &io::measure_to_json(&measure))?;
            Ok(false)
        }
        Command::SelfTest { workers } => with_pool(workers, self_test),
    }
}

fn report_holds(report: &ClassReport) -> bool {
    report.is_bmc_all_roots && report.is_mc.holds && report.is_mrf.holds && report.cond_indep.holds
}

fn load_measure(input: &MeasureInput) -> Result<(RootedTree, JointMeasure), String> {
    if let Some(path) = &input.measure {
        let m = io::parse_measure(&read(path)?).map_err(|e| at(path, e))?;
        return Ok((m.tree().clone(), m));
    }
    if let Some(path) = &input.bmc {
        let spec = io::parse_bmc(&read(path)?).map_err(|e| at(path, e))?;
        let m = spec.realize();
        return Ok((spec.tree().clone(), m));
    }
    if let Some(name) = &input.fixture {
        return builtin_fixture(name).ok_or_else(|| {
            format!("unknown fixture {name:?} (try counterexample, path3, binary2)")
        });
    }
    Err("one of --measure, --bmc, --fixture is required".into())
}

fn with_pool<T>(
    workers: Option<usize>,
    f: impl FnOnce() -> Result<T, String> + Send,
) -> Result<T, String>
where
    T: Send,
{
    match workers {
        None => f(),
        Some(w) => {
            if w == 0 {
                return Err("--workers must be >= 1".into());
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| format!("worker pool: {e}"))?;
            pool.install(f)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn at(path: &Path, e: Error) -> String {
    format!("{}: {e}", path.display())
}

fn write_out(out: Option<&Path>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Built-in verification: the counter-example fixture, a seeded soundness
/// sweep, and the parent-window lemma. `BMC_SEED` selects the seed used for
/// window sampling and the sweep.
fn self_test() -> Result<bool, String> {
    use blockmc::classify;
    use blockmc::random::{random_bmc_spec, random_tree};
    use rand::{Rng, SeedableRng};

    let seed: u64 = match std::env::var("BMC_SEED") {
        Ok(s) => s
            .parse()
            .map_err(|_| format!("BMC_SEED: bad integer {s:?}"))?,
        Err(_) => 0,
    };
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {name}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let f = counterexample_fixture();
    let report = classify::classify_all(&f.measure, &f.tree).map_err(|e| e.to_string())?;
    let o = f.tree.vertex_by_label("(0,-1)").unwrap();
    let o2 = f.tree.vertex_by_label("(0,1)").unwrap();
    check(
        "counter-example holds from root (0,-1)",
        report.per_root[&o].holds,
    );
    let w = report.per_root[&o2].witness.clone();
    check(
        "counter-example fails from root (0,1) with 1/6 vs 1/4",
        w.map(|w| format_ratio(&w.lhs) == "1/6" && format_ratio(&w.rhs) == "1/4")
            .unwrap_or(false),
    );
    let mc_w = report.is_mc.witness.clone();
    check(
        "counter-example is not a Markov chain, 1/2 vs 3/4",
        mc_w.map(|w| format_ratio(&w.lhs) == "1/2" && format_ratio(&w.rhs) == "3/4")
            .unwrap_or(false),
    );

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sound = true;
    let mut windows = true;
    for _ in 0..20 {
        let n = rng.gen_range(2..=5);
        let q = if rng.gen_bool(0.5) { 2 } else { 3 };
        let tree = random_tree(&mut rng, n);
        let spec = random_bmc_spec(&mut rng, &tree, q, true);
        let m = spec.realize();
        sound &= classify::check_obmc(&m, &tree)
            .map_err(|e| e.to_string())?
            .holds;
        windows &= classify::check_parent_window(&m, &tree, seed)
            .map_err(|e| e.to_string())?
            .holds;
    }
    check(
        "seeded sweep: realized specs are block Markov at their root",
        sound,
    );
    check(
        "seeded sweep: parent-window conditionals reduce correctly",
        windows,
    );

    Ok(failures > 0)
}
