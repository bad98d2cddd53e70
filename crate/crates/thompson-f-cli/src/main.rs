//! `fgroup`: exact computation in Thompson's group F from the command line.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain/structure error,
//! 4 resource cap exceeded, 5 verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use num::ToPrimitive;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use thompson_f::cayley::{
    ball, free_submonoid_check, is_dead_end_brute, is_dead_end_structural, mac_witness_search,
    pocket_depth, BallGraph,
};
use thompson_f::growth::{
    count_positive_in_ball, folner_ratio, random_subtree_closed_family, series_coefficients,
    solve_pk, subtree_closed_bound,
};
use thompson_f::strand::{canonicalize, forest_normal_form, groupoid_compose, GeneratorWord};
use thompson_f::words::{
    anti_normal_form, eval, eval_str, normal_form, word_graph, WordGraph, Word,
};
use thompson_f::{
    geodesic_word, label_spaces, length, to_pl_unit, Element, Error, Tree,
};

#[derive(Parser)]
#[command(name = "fgroup", version, about = "Exact computation in Thompson's group F")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Tree,
    Twoway,
    Oneway,
    Normal,
    Anti,
    PlUnit,
    PlLine,
    Classify,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Oracle,
    Axioms,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normal form of a word
    Normalize { word: String },
    /// Print the anti-normal form of a positive element
    Antinormal { word: String },
    /// Print the {x0,x1} word length
    Length { word: String },
    /// Print a geodesic {x0,x1} word
    Geodesic { word: String },
    /// Print the labeled two-way forest diagram with space weights
    Label { word: String },
    /// Multiply two words and print the normal form of the product
    Multiply { left: String, right: String },
    /// Print the normal form of the inverse
    Invert { word: String },
    /// Print the image in Z x Z
    Abelianize { word: String },
    /// Print the reduced tree diagram
    Eval { word: String },
    /// Convert a word to another representation
    Convert {
        word: String,
        #[arg(long, value_enum)]
        to: ConvertTarget,
    },
    /// Enumerate the Cayley ball: sphere sizes, or one element per line
    Ball {
        radius: u32,
        /// JSON-lines output: {"word": normal form, "length": n}
        #[arg(long)]
        json: bool,
    },
    /// List the dead ends in a Cayley ball
    Deadends { radius: u32 },
    /// Test whether an element is a k-pocket
    Pockets {
        word: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Search a sphere for minimal-almost-convexity failure witnesses
    Mac { radius: u32 },
    /// Check that {x0^-1, x1} generate a free submonoid up to a length
    Freecheck { max_len: u32 },
    /// Print the positive-element growth series coefficients
    Growth {
        max_n: usize,
        /// Also census the Cayley ball and compare (exit 5 on mismatch)
        #[arg(long)]
        census: bool,
    },
    /// Print the isoperimetric constants p_0 .. p_k
    Iso {
        max_k: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Folner-style ratio for forests with n spaces and height cap k
    Folner { n: usize, k: u32 },
    /// Isoperimetric bound 2p from a subtree-closed family
    SubtreeBound {
        /// Trees of the family, e.g. "." "(.,.)" "((.,.),.)"
        trees: Vec<String>,
        /// Generate a random family instead
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        steps: usize,
    },
    /// Word graph of a positive element
    Wordgraph {
        word: String,
        #[arg(long)]
        dot: bool,
    },
    /// Strand-diagram groupoid operations
    Strand {
        #[command(subcommand)]
        op: StrandOp,
    },
    /// Run verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum StrandOp {
    /// Reduce a groupoid word to its canonical fraction
    Canon { word: String },
    /// Compose two groupoid words and print the canonical fraction
    Compose { left: String, right: String },
    /// Render a groupoid word (canonical fraction) as text or DOT
    Render {
        word: String,
        #[arg(long)]
        dot: bool,
    },
}

/// Verification failure distinct from library errors.
struct Failed(String);

enum CliError {
    Lib(Error),
    Check(Failed),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Lib(e)
    }
}

impl From<Failed> for CliError {
    fn from(f: Failed) -> CliError {
        CliError::Check(f)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Domain(_) | Error::Structure(_) => 3,
                Error::Resource(_) | Error::Numeric(_) => 4,
            })
        }
        Err(CliError::Check(Failed(msg))) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(5)
        }
    }
}

fn parse_word(s: &str) -> Result<Word, Error> {
    Word::parse(s)
}

fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Normalize { word } => {
            println!("{}", normal_form(&eval(&parse_word(&word)?)));
        }
        Command::Antinormal { word } => {
            println!("{}", anti_normal_form(&eval(&parse_word(&word)?))?);
        }
        Command::Length { word } => {
            println!("{}", length(&eval(&parse_word(&word)?)));
        }
        Command::Geodesic { word } => {
            println!("{}", geodesic_word(&eval(&parse_word(&word)?)));
        }
        Command::Label { word } => {
            let ld = label_spaces(&eval(&parse_word(&word)?));
            println!("{}", ld.diagram);
            let labels: Vec<String> =
                ld.labels.iter().map(|(t, b)| format!("({t:?},{b:?})")).collect();
            println!("labels:  {}", labels.join(" "));
            let weights: Vec<String> = ld.weights.iter().map(u32::to_string).collect();
            println!("weights: {}", weights.join(" "));
            println!("l0={} l1={} length={}", ld.l0(), ld.l1(), ld.l0() + ld.l1());
        }
        Command::Multiply { left, right } => {
            let p = eval(&parse_word(&left)?).multiply(&eval(&parse_word(&right)?));
            println!("{}", normal_form(&p));
        }
        Command::Invert { word } => {
            println!("{}", normal_form(&eval(&parse_word(&word)?).invert()));
        }
        Command::Abelianize { word } => {
            let (a, b) = eval(&parse_word(&word)?).abelianize();
            println!("({a}, {b})");
        }
        Command::Eval { word } => {
            println!("{}", eval(&parse_word(&word)?));
        }
        Command::Convert { word, to } => {
            let f = eval(&parse_word(&word)?);
            match to {
                ConvertTarget::Tree => println!("{f}"),
                ConvertTarget::Twoway => println!("{}", f.to_twoway()),
                ConvertTarget::Oneway => {
                    let ow = f.to_oneway();
                    println!("{}", forest_line(&ow.top));
                    println!("{}", forest_line(&ow.bottom));
                }
                ConvertTarget::Normal => println!("{}", normal_form(&f)),
                ConvertTarget::Anti => println!("{}", anti_normal_form(&f)?),
                ConvertTarget::PlUnit => println!("{}", to_pl_unit(&f)),
                ConvertTarget::PlLine => println!("{}", f.to_pl_line()),
                ConvertTarget::Classify => {
                    let c = f.classify();
                    println!(
                        "positive={} strongly_positive={} left_sided={} right_sided={} \
                         width={} carets={}",
                        c.positive,
                        c.strongly_positive,
                        c.left_sided,
                        c.right_sided,
                        c.width,
                        c.caret_count
                    );
                }
            }
        }
        Command::Ball { radius, json } => {
            let b = ball(radius)?;
            if json {
                let mut lines: Vec<(String, u32)> =
                    b.iter().map(|(f, d)| (normal_form(&f).to_string(), d)).collect();
                lines.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
                for (w, d) in lines {
                    println!("{}", serde_json::json!({ "word": w, "length": d }));
                }
            } else {
                println!("size {}", b.len());
                println!("spheres {:?}", b.spheres());
            }
        }
        Command::Deadends { radius } => {
            let b = ball(radius)?;
            let mut found: Vec<(u32, String)> = b
                .iter()
                .filter(|(f, _)| is_dead_end_brute(f))
                .map(|(f, d)| (d, normal_form(&f).to_string()))
                .collect();
            found.sort();
            for (d, w) in &found {
                println!("{d} {w}");
            }
            println!("{} dead ends in ball({radius})", found.len());
        }
        Command::Pockets { word, depth } => {
            let f = eval(&parse_word(&word)?);
            println!("{}", pocket_depth(&f, depth)?);
        }
        Command::Mac { radius } => {
            let b = ball(radius)?;
            let graph = BallGraph::new(&b);
            let witnesses = mac_witness_search(&b, &graph);
            let max = witnesses.iter().map(|w| w.in_ball_distance).max();
            println!("{} candidate pairs at radius {radius}", witnesses.len());
            if let Some(max) = max {
                println!("max in-ball distance {max}");
                let w = witnesses.iter().find(|w| w.in_ball_distance == max).unwrap();
                println!("witness g = {}", normal_form(&w.l));
            }
        }
        Command::Freecheck { max_len } => {
            let (distinct, count) = free_submonoid_check(max_len);
            println!("{count} elements, all distinct: {distinct}");
            if !distinct {
                return Err(Failed("free submonoid words collided".into()).into());
            }
        }
        Command::Growth { max_n, census } => {
            let series = series_coefficients(max_n);
            let coeffs: Vec<String> = series.coeffs.iter().map(|c| c.to_string()).collect();
            println!("series {}", coeffs.join(" "));
            if census {
                let counts = count_positive_in_ball(&ball(max_n as u32)?)?;
                let counted: Vec<String> = counts.iter().map(u64::to_string).collect();
                println!("census {}", counted.join(" "));
                for n in 0..=max_n {
                    if num::BigInt::from(counts[n]) != series.coeffs[n] {
                        return Err(Failed(format!("census disagrees at n = {n}")).into());
                    }
                }
                println!("census matches series");
            }
        }
        Command::Iso { max_k, tol } => {
            for k in 0..=max_k {
                println!("p_{k} = {:.12}", solve_pk(k, tol)?);
            }
        }
        Command::Folner { n, k } => {
            let rep = folner_ratio(n, k)?;
            println!("size {}", rep.size);
            println!("boundary {}", rep.boundary);
            println!(
                "ratio {} ~ {:.9}",
                rep.ratio,
                rep.ratio.to_f64().unwrap_or(f64::NAN)
            );
            println!("enumerated {}", rep.enumerated);
        }
        Command::SubtreeBound { trees, random, seed, steps } => {
            let family: Vec<Tree> = if random {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                random_subtree_closed_family(&mut r, steps, 16)
            } else {
                let mut out = Vec::new();
                for t in &trees {
                    out.push(Tree::parse(t)?);
                }
                out
            };
            println!("family size {}", family.len());
            println!("2p = {:.9}", subtree_closed_bound(&family, 1e-9)?);
        }
        Command::Wordgraph { word, dot } => {
            let g = word_graph(&eval(&parse_word(&word)?))?;
            if dot {
                print!("{}", word_graph_dot(&g));
            } else {
                println!("{} vertices, {} edges", g.vertices.len(), g.edges.len());
                println!("source {}", g.vertices[g.source]);
                println!("sink   {}", g.vertices[g.sink]);
            }
        }
        Command::Strand { op } => run_strand(op)?,
        Command::Verify { suite, radius, seed } => run_verify(suite, radius, seed)?,
    }
    Ok(())
}

fn forest_line(trees: &[Tree]) -> String {
    trees.iter().map(Tree::to_string).collect::<Vec<_>>().join(" ")
}

fn word_graph_dot(g: &WordGraph) -> String {
    let mut out = String::from("digraph wordgraph {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        let shape = if i == g.source {
            " shape=doubleoctagon"
        } else if i == g.sink {
            " shape=doublecircle"
        } else {
            ""
        };
        out.push_str(&format!("  v{i} [label=\"{v}\"{shape}];\n"));
    }
    for (a, b) in &g.edges {
        out.push_str(&format!("  v{a} -> v{b};\n"));
    }
    out.push_str("}\n");
    out
}

fn run_strand(op: StrandOp) -> Result<(), CliError> {
    match op {
        StrandOp::Canon { word } => {
            let m = canonicalize(&GeneratorWord::parse(&word)?)?;
            print_fraction(&m);
        }
        StrandOp::Compose { left, right } => {
            let a = canonicalize(&GeneratorWord::parse(&left)?)?;
            let b = canonicalize(&GeneratorWord::parse(&right)?)?;
            print_fraction(&groupoid_compose(&a, &b)?);
        }
        StrandOp::Render { word, dot } => {
            let m = canonicalize(&GeneratorWord::parse(&word)?)?;
            if dot {
                print!("{}", strand_dot(&m));
            } else {
                print_fraction(&m);
            }
        }
    }
    Ok(())
}

fn print_fraction(m: &thompson_f::strand::GroupoidMorphism) {
    println!("{} -> {}", m.source(), m.target());
    println!("splits {}", forest_line(m.p().trees()));
    println!("merges {}", forest_line(m.q().trees()));
    println!("word   {}", fraction_word(m));
}

/// All splits first, then all merges, as a generator word.
fn fraction_word(m: &thompson_f::strand::GroupoidMorphism) -> String {
    let mut parts = Vec::new();
    let mut w = m.source();
    for l in &forest_normal_form(m.p()).letters {
        parts.push(format!("x{}({w})", l.index));
        w += 1;
    }
    let merges: Vec<usize> =
        forest_normal_form(m.q()).letters.iter().map(|l| l.index).collect();
    for n in merges.iter().rev() {
        w -= 1;
        parts.push(format!("x{n}({w})^-1"));
    }
    if parts.is_empty() {
        format!("1@{w}")
    } else {
        parts.join(" ")
    }
}

/// Linear chain of split (triangle) and merge (inverted triangle) nodes.
fn strand_dot(m: &thompson_f::strand::GroupoidMorphism) -> String {
    let mut out = String::from("digraph strand {\n  rankdir=TB;\n");
    out.push_str(&format!("  begin [shape=plaintext label=\"{}\"];\n", m.source()));
    out.push_str(&format!("  end [shape=plaintext label=\"{}\"];\n", m.target()));
    let mut prev = String::from("begin");
    let mut w = m.source();
    let mut id = 0;
    for l in &forest_normal_form(m.p()).letters {
        let name = format!("s{id}");
        out.push_str(&format!(
            "  {name} [shape=triangle label=\"x{}({w})\"];\n",
            l.index
        ));
        out.push_str(&format!("  {prev} -> {name};\n"));
        prev = name;
        w += 1;
        id += 1;
    }
    let merges: Vec<usize> =
        forest_normal_form(m.q()).letters.iter().map(|l| l.index).collect();
    for n in merges.iter().rev() {
        w -= 1;
        let name = format!("m{id}");
        out.push_str(&format!("  {name} [shape=invtriangle label=\"x{n}({w})\"];\n"));
        out.push_str(&format!("  {prev} -> {name};\n"));
        prev = name;
        id += 1;
    }
    out.push_str(&format!("  {prev} -> end;\n}}\n"));
    out
}

fn run_verify(suite: Suite, radius: u32, seed: u64) -> Result<(), CliError> {
    let oracle = matches!(suite, Suite::Oracle | Suite::All);
    let axioms = matches!(suite, Suite::Axioms | Suite::All);
    if oracle {
        let b = ball(radius)?;
        let mut checked = 0usize;
        for (f, d) in b.iter() {
            if length(&f) != d {
                return Err(Failed(format!("length formula disagrees with BFS at {f}")).into());
            }
            if is_dead_end_brute(&f) != is_dead_end_structural(&f) {
                return Err(Failed(format!("dead-end tests disagree at {f}")).into());
            }
            checked += 1;
        }
        println!("oracle: {checked} elements of ball({radius}) checked");
    }
    if axioms {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0usize;
        for _ in 0..200 {
            let a = random_element(&mut r);
            let b = random_element(&mut r);
            let c = random_element(&mut r);
            if a.multiply(&b).multiply(&c) != a.multiply(&b.multiply(&c)) {
                return Err(Failed("associativity violated".into()).into());
            }
            if !a.multiply(&a.invert()).is_identity() {
                return Err(Failed("inverse violated".into()).into());
            }
            if eval(&normal_form(&a)) != a {
                return Err(Failed("normal form changed the element".into()).into());
            }
            if to_pl_unit(&a.multiply(&b)) != to_pl_unit(&a).compose(&to_pl_unit(&b)) {
                return Err(Failed("PL representation is not a homomorphism".into()).into());
            }
            checked += 1;
        }
        println!("axioms: {checked} random triples checked (seed {seed})");
    }
    Ok(())
}

fn random_element(r: &mut ChaCha8Rng) -> Element {
    let words = ["x0", "x0^-1", "x1", "x1^-1"];
    let mut e = Element::identity();
    for _ in 0..r.gen_range(0..8) {
        e = e.multiply(&eval_str(words[r.gen_range(0..4)]).unwrap());
    }
    e
}
