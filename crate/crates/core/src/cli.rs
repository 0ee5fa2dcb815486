//! The `uso` command line tool.
//!
//! Exit status: 0 on success or a true answer, 1 on a false answer, 2 on a
//! usage or input error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::constructions::{enumerate_usos, partial_swap, replace_hypervertex, sample_uniform, schurr, uniform};
use crate::cube::{Edge, Face};
use crate::error::Error;
use crate::orientation::{flip, DenseOrientation, EdgeSet, Orientation};
use crate::phases::{
    compute_phases_fast_counted, compute_phases_naive_counted, flip_matching_checked, in_phase,
    in_phase_search, is_flippable, is_hypervertex, DEFAULT_SEARCH_BUDGET,
};
use crate::recognition::check_uso_fast_jobs;
use crate::reduction::{parse_qbf, reduce_to_2ip};

#[derive(Debug, Parser)]
#[command(name = "uso", version, about = "Unique sink orientations and their phases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Schurr,
}

#[derive(Debug, clap::Args)]
struct Input {
    /// Orientation file (.uso); standard input if absent
    #[arg(short, long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a generated orientation
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(short)]
        n: usize,
    },
    /// Check the unique sink property; exit 1 with a witness if it fails
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the phase partition (.phz)
    Phases {
        #[command(flatten)]
        input: Input,
        /// Compare all vertex pairs
        #[arg(long, conflicts_with = "fast")]
        naive: bool,
        /// Compare face extremes only (default)
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Are two edges in the same phase? Edges are written `<bits>:<dim>`
    #[command(name = "2ip")]
    TwoIp {
        first: String,
        second: String,
        #[command(flatten)]
        input: Input,
        /// Breadth-first search instead of the full partition
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: usize,
    },
    /// Is the edge a phase of its own?
    Flippable {
        edge: String,
        #[command(flatten)]
        input: Input,
    },
    /// Reverse every edge of an edge-set file (.eds), unchecked
    Flip {
        edges: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Reverse a matching; fails unless it is a union of phases
    FlipMatching {
        edges: PathBuf,
        #[command(flatten)]
        input: Input,
    },
    /// Swap the subgraphs over the upward edges of dimension J
    PartialSwap {
        #[arg(short)]
        j: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Is the face (a string over 0, 1, *) a hypervertex?
    Hypervertex {
        face: String,
        #[command(flatten)]
        input: Input,
        /// Replace the face's interior by this orientation and print the result
        #[arg(long)]
        replace: Option<PathBuf>,
    },
    /// Run the phase-flip chain from the uniform orientation
    Sample {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Print every USO of Q_n (n <= 3)
    Enumerate {
        #[arg(short)]
        n: usize,
        /// Print only the number of orientations
        #[arg(long)]
        count: bool,
    },
    /// Reduce a QDIMACS sentence to a phase question
    Reduce {
        file: PathBuf,
        /// Write the materialized orientation here
        #[arg(long)]
        emit_uso: Option<PathBuf>,
        /// Answer the phase question on the materialized orientation
        #[arg(long)]
        decide: bool,
    },
    /// Pair-check counts and timings of both phase algorithms, as CSV
    Bench {
        #[arg(long, value_enum, default_value = "schurr")]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run(args: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    match execute(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(Failure::Lib(e @ Error::NotUnionOfPhases(_))) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn read_text(path: &Option<PathBuf>, stdin: &mut dyn Read) -> std::result::Result<String, Failure> {
    match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_orientation(input: &Input, stdin: &mut dyn Read) -> std::result::Result<DenseOrientation, Failure> {
    Ok(DenseOrientation::load(&read_text(&input.input, stdin)?)?)
}

fn edge_in(s: &str, n: usize) -> std::result::Result<Edge, Failure> {
    let (e, m) = Edge::parse(s)?;
    if m != n {
        return Err(Error::Dimension(format!("edge {s} has {m} coordinates, orientation has {n}")).into());
    }
    Ok(e)
}

fn answer(stdout: &mut dyn Write, yes: bool, pos: &str, neg: &str) -> Outcome {
    writeln!(stdout, "{}", if yes { pos } else { neg })?;
    Ok(if yes { 0 } else { 1 })
}

fn generate(kind: Kind, n: usize) -> crate::error::Result<DenseOrientation> {
    match kind {
        Kind::Uniform => uniform(n),
        Kind::Schurr => schurr(n),
    }
}

fn execute(cmd: Command, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Gen { kind, n } => {
            write!(stdout, "{}", generate(kind, n)?.store())?;
            Ok(0)
        }
        Command::Verify { input, jobs } => {
            let o = read_orientation(&input, stdin)?;
            let report = check_uso_fast_jobs(&o, jobs)?;
            match report.witness {
                None => answer(stdout, true, "USO", ""),
                Some(w) => {
                    let n = o.dim();
                    writeln!(
                        stderr,
                        "witness: face {} vertices {} {}",
                        w.face,
                        crate::cube::render_bits(w.v, n),
                        crate::cube::render_bits(w.w, n)
                    )?;
                    answer(stdout, false, "", "NOT-USO")
                }
            }
        }
        Command::Phases { input, naive, fast: _, jobs } => {
            let o = read_orientation(&input, stdin)?;
            let (p, _) = if naive {
                compute_phases_naive_counted(&o)?
            } else {
                compute_phases_fast_counted(&o, jobs)?
            };
            write!(stdout, "{}", p.render())?;
            Ok(0)
        }
        Command::TwoIp {
            first,
            second,
            input,
            search,
            budget,
        } => {
            let o = read_orientation(&input, stdin)?;
            let e = edge_in(&first, o.dim())?;
            let f = edge_in(&second, o.dim())?;
            let yes = if search {
                in_phase_search(&o, e, f, budget)?
            } else {
                in_phase(&o, e, f)?
            };
            answer(stdout, yes, "IN-PHASE", "NOT-IN-PHASE")
        }
        Command::Flippable { edge, input } => {
            let o = read_orientation(&input, stdin)?;
            crate::recognition::require_uso(&o)?;
            let e = edge_in(&edge, o.dim())?;
            answer(stdout, is_flippable(&o, e), "FLIPPABLE", "NOT-FLIPPABLE")
        }
        Command::Flip { edges, input } => {
            let o = read_orientation(&input, stdin)?;
            let s = EdgeSet::load(&read_text(&Some(edges), stdin)?, o.dim())?;
            write!(stdout, "{}", flip(&o, &s)?.store())?;
            Ok(0)
        }
        Command::FlipMatching { edges, input } => {
            let o = read_orientation(&input, stdin)?;
            let s = EdgeSet::load(&read_text(&Some(edges), stdin)?, o.dim())?;
            write!(stdout, "{}", flip_matching_checked(&o, &s)?.store())?;
            Ok(0)
        }
        Command::PartialSwap { j, input } => {
            let o = read_orientation(&input, stdin)?;
            if j == 0 || j > o.dim() {
                return Err(Error::Argument(format!("dimension {j} not in 1..={}", o.dim())).into());
            }
            write!(stdout, "{}", partial_swap(&o, j - 1)?.store())?;
            Ok(0)
        }
        Command::Hypervertex { face, input, replace } => {
            let o = read_orientation(&input, stdin)?;
            crate::recognition::require_uso(&o)?;
            let f: Face = face.parse()?;
            if f.ambient_dim() != o.dim() {
                return Err(Error::Face(format!("face {f} does not belong to Q_{}", o.dim())).into());
            }
            match replace {
                None => answer(stdout, is_hypervertex(&o, &f), "HYPERVERTEX", "NOT-HYPERVERTEX"),
                Some(path) => {
                    let inner = DenseOrientation::load(&read_text(&Some(path), stdin)?)?;
                    write!(stdout, "{}", replace_hypervertex(&o, &f, &inner)?.store())?;
                    Ok(0)
                }
            }
        }
        Command::Sample { n, steps, seed } => {
            let o = sample_uniform(n, steps, seed)?;
            writeln!(stderr, "sample n={n} steps={steps} seed={seed}")?;
            write!(stdout, "{}", o.store())?;
            Ok(0)
        }
        Command::Enumerate { n, count } => {
            let all = enumerate_usos(n)?;
            if count {
                writeln!(stdout, "{}", all.len())?;
            } else {
                for o in &all {
                    write!(stdout, "{}", o.store())?;
                }
            }
            Ok(0)
        }
        Command::Reduce { file, emit_uso, decide } => {
            let inst = parse_qbf(&read_text(&Some(file), stdin)?)?;
            let r = reduce_to_2ip(&inst)?;
            let n = r.oracle.dim();
            let dense = if emit_uso.is_some() || decide {
                Some(r.oracle.materialize()?)
            } else {
                None
            };
            if let (Some(path), Some(d)) = (&emit_uso, &dense) {
                std::fs::write(path, d.store()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            match (decide, &dense) {
                (true, Some(d)) => answer(stdout, in_phase(d, r.e, r.e_prime)?, "IN-PHASE", "NOT-IN-PHASE"),
                _ => {
                    writeln!(stdout, "dim {n}")?;
                    writeln!(stdout, "e {}", r.e.render(n))?;
                    writeln!(stdout, "e' {}", r.e_prime.render(n))?;
                    Ok(0)
                }
            }
        }
        Command::Bench {
            kind,
            min_n,
            max_n,
            jobs,
        } => {
            writeln!(stdout, "op,n,pair_checks,wall_ns")?;
            for n in min_n.max(1)..=max_n {
                let o = generate(kind, n)?;
                let t = Instant::now();
                let (_, naive) = compute_phases_naive_counted(&o)?;
                writeln!(stdout, "naive,{n},{naive},{}", t.elapsed().as_nanos())?;
                let t = Instant::now();
                let (_, fast) = compute_phases_fast_counted(&o, jobs)?;
                writeln!(stdout, "fast,{n},{fast},{}", t.elapsed().as_nanos())?;
            }
            Ok(0)
        }
    }
}
