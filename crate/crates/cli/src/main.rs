//! Command-line front end for the order-analysis library.
//!
//! Exit codes: 0 means the requested computation finished (including "no
//! solution found up to the depth bound" — that is an answer); 1 means the
//! asked-for property was refuted with a witness (an adjacent pair, a prefix
//! violation, a detected solution gap, a solution that does not verify);
//! 2 means the inputs or arguments were unusable.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;

use lexord::order::{classify_regular_order_type, middle_witness, probe_density_cfl};
use lexord::{
    binary_alphabet, encode_grammar, prefix_free_bounded, BinaryCode, DensityVerdict, Grammar,
    MiddleOutcome, PcpError, PcpInstance, PrefixVerdict, ReductionArtifacts, SearchOutcome,
    Solution, Word,
};

#[derive(clap::Parser)]
#[command(
    name = "lexord",
    version,
    about = "Lexicographic order analysis for formal languages",
    long_about = None
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Solve correspondence instances or compile them into order grammars
    #[command(subcommand)]
    Pcp(PcpCommand),
    /// Enumerate and analyze grammars
    #[command(subcommand)]
    Grammar(GrammarCommand),
    /// Construct order witnesses on a reduction language
    #[command(subcommand)]
    Witness(WitnessCommand),
}

#[derive(clap::Subcommand)]
enum PcpCommand {
    /// Search for a solution, shortest first
    Solve {
        /// Instance file: one `<alpha> <beta>` pair per line
        file: PathBuf,
        /// Largest number of indices to try
        #[arg(long, default_value_t = 12)]
        max_depth: usize,
    },
    /// Compile an instance into the grammar of its order language
    Reduce {
        /// Instance file
        file: PathBuf,
        /// Where to write the grammar
        #[arg(short, long)]
        out: PathBuf,
        /// Re-encode the grammar (and witnesses) over the alphabet 0 < 1
        #[arg(long)]
        binary: bool,
        /// Comma-separated indices; verified, then turned into a gap pair
        #[arg(long)]
        solution: Option<String>,
        /// Where to write the gap pair
        #[arg(long, requires = "solution")]
        witness_out: Option<PathBuf>,
    },
}

#[derive(clap::Subcommand)]
enum GrammarCommand {
    /// Print every generated word up to a length, in lexicographic order
    Enumerate {
        /// Grammar file
        file: PathBuf,
        /// Longest word length to include
        #[arg(long)]
        max_len: usize,
    },
    /// Decide cardinality, density, endpoints, and order type exactly
    AnalyzeRegular {
        /// Right-linear grammar file
        file: PathBuf,
    },
    /// Resolve every consecutive pair of the bounded enumeration
    ProbeDensity {
        /// Grammar file
        file: PathBuf,
        /// Longest word length to enumerate
        #[arg(long)]
        max_len: usize,
        /// Instance whose reduction grammar this is: makes the probe exact
        #[arg(long)]
        pcp: Option<PathBuf>,
    },
    /// Check that no generated word is a prefix of another
    CheckPrefix {
        /// Grammar file
        file: PathBuf,
        /// Longest word length to screen
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(clap::Subcommand)]
enum WitnessCommand {
    /// A generated word strictly between two generated words
    Middle {
        /// Reduction grammar file
        grammar: PathBuf,
        /// The instance the grammar was compiled from
        #[arg(long)]
        pcp: PathBuf,
        /// Lower word, space-separated tokens
        lower: String,
        /// Upper word, space-separated tokens
        upper: String,
    },
    /// Generated words strictly below and above a generated word
    Neighbors {
        /// Reduction grammar file
        grammar: PathBuf,
        /// The instance the grammar was compiled from
        #[arg(long)]
        pcp: PathBuf,
        /// The word, space-separated tokens
        word: String,
    },
}

fn main() {
    match run(Args::parse()) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(args: Args) -> Result<i32> {
    match args.command {
        Command::Pcp(PcpCommand::Solve { file, max_depth }) => pcp_solve(&file, max_depth),
        Command::Pcp(PcpCommand::Reduce {
            file,
            out,
            binary,
            solution,
            witness_out,
        }) => pcp_reduce(
            &file,
            &out,
            binary,
            solution.as_deref(),
            witness_out.as_deref(),
        ),
        Command::Grammar(GrammarCommand::Enumerate { file, max_len }) => {
            grammar_enumerate(&file, max_len)
        }
        Command::Grammar(GrammarCommand::AnalyzeRegular { file }) => grammar_analyze(&file),
        Command::Grammar(GrammarCommand::ProbeDensity { file, max_len, pcp }) => {
            grammar_probe(&file, max_len, pcp.as_deref())
        }
        Command::Grammar(GrammarCommand::CheckPrefix { file, max_len }) => {
            grammar_check_prefix(&file, max_len)
        }
        Command::Witness(WitnessCommand::Middle {
            grammar,
            pcp,
            lower,
            upper,
        }) => witness_middle(&grammar, &pcp, &lower, &upper),
        Command::Witness(WitnessCommand::Neighbors { grammar, pcp, word }) => {
            witness_neighbors(&grammar, &pcp, &word)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_grammar(path: &Path) -> Result<Grammar> {
    Grammar::parse(&read_file(path)?).with_context(|| format!("parsing grammar {}", path.display()))
}

fn load_instance(path: &Path) -> Result<PcpInstance> {
    PcpInstance::parse(&read_file(path)?)
        .with_context(|| format!("parsing instance {}", path.display()))
}

fn load_artifacts(path: &Path) -> Result<ReductionArtifacts> {
    Ok(ReductionArtifacts::new(load_instance(path)?)?)
}

/// Loads a grammar and the reduction it must match; witnesses are only
/// meaningful on the exact grammar the instance compiles to.
fn reduction_for(grammar_path: &Path, pcp_path: &Path) -> Result<ReductionArtifacts> {
    let g = load_grammar(grammar_path)?;
    let artifacts = load_artifacts(pcp_path)?;
    if artifacts.grammar() != &g {
        bail!(
            "{} is not the reduction grammar of {}",
            grammar_path.display(),
            pcp_path.display()
        );
    }
    Ok(artifacts)
}

/// How `pcp reduce` turns witness words into display text: identity tokens,
/// or their binary re-encoding when `--binary` is given.
type RenderWitness<'a> = Box<dyn Fn(&Word) -> Result<String> + 'a>;

fn parse_solution(text: &str) -> Result<Solution> {
    let mut indices = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        indices.push(
            part.parse::<usize>()
                .with_context(|| format!("bad index '{part}'"))?,
        );
    }
    Ok(Solution::new(indices)?)
}

fn pcp_solve(file: &Path, max_depth: usize) -> Result<i32> {
    let instance = load_instance(file)?;
    match instance.brute_force_solve(max_depth) {
        SearchOutcome::Solution(s) => {
            let spelled = instance.alpha_concat(s.indices())?;
            emit(|out| {
                writeln!(out, "solution {s}")?;
                writeln!(out, "match {spelled}")
            })?;
        }
        SearchOutcome::NoneFound {
            max_depth,
            exhausted,
        } => {
            emit(|out| {
                if exhausted {
                    writeln!(
                        out,
                        "no solution exists: the search space is exhausted below depth {max_depth}"
                    )
                } else {
                    writeln!(out, "no solution with up to {max_depth} indices")
                }
            })?;
        }
    }
    Ok(0)
}

fn pcp_reduce(
    file: &Path,
    out: &Path,
    binary: bool,
    solution: Option<&str>,
    witness_out: Option<&Path>,
) -> Result<i32> {
    let artifacts = load_artifacts(file)?;
    let delta = artifacts.delta();

    // Resolve the requested solution first: a non-verifying one refutes the
    // request, and nothing should be written in that case.
    let gap = match solution {
        None => None,
        Some(text) => {
            let s = parse_solution(text)?;
            match artifacts.gap_witness(&s) {
                Ok(pair) => Some((s, pair)),
                Err(PcpError::NotASolution { alpha, beta }) => {
                    emit(|out| {
                        writeln!(
                            out,
                            "not a solution: alpha spells {alpha}, beta spells {beta}"
                        )
                    })?;
                    return Ok(1);
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    let mut grammar_text = String::new();
    let render_witness: RenderWitness<'_> = if binary {
        let code = BinaryCode::for_alphabet(delta);
        for letter in delta.letters() {
            let bits: String = code
                .code(letter)?
                .letters()
                .iter()
                .map(|b| if b.rank() == 0 { '0' } else { '1' })
                .collect();
            writeln!(grammar_text, "# code {} -> {}", delta.token(letter), bits)?;
        }
        grammar_text.push_str(&encode_grammar(artifacts.grammar(), &code)?.to_string());
        Box::new(move |w| Ok(binary_alphabet().render(&code.encode_word(w)?)))
    } else {
        grammar_text.push_str(&artifacts.grammar().to_string());
        Box::new(|w| Ok(delta.render(w)))
    };

    fs::write(out, &grammar_text).with_context(|| format!("writing {}", out.display()))?;
    emit(|o| {
        writeln!(o, "instance size {}", artifacts.size())?;
        writeln!(o, "alphabet size {}", delta.len())?;
        writeln!(o, "productions {}", artifacts.grammar().productions().len())?;
        writeln!(o, "wrote grammar to {}", out.display())
    })?;

    if let Some((s, (u_alpha, u_beta))) = gap {
        let lines = format!(
            "u_alpha: {}\nu_beta: {}\n",
            render_witness(&u_alpha)?,
            render_witness(&u_beta)?
        );
        emit(|o| write!(o, "gap pair of solution {s}\n{lines}"))?;
        if let Some(path) = witness_out {
            fs::write(path, &lines).with_context(|| format!("writing {}", path.display()))?;
            emit(|o| writeln!(o, "wrote witness to {}", path.display()))?;
        }
    }
    Ok(0)
}

/// Writes command output to stdout; a closed pipe (the reader stopped
/// early) ends the process quietly instead of panicking.
fn emit(write: impl FnOnce(&mut dyn io::Write) -> io::Result<()>) -> Result<()> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    match write(&mut out).and_then(|()| out.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => Ok(r?),
    }
}

fn grammar_enumerate(file: &Path, max_len: usize) -> Result<i32> {
    let g = load_grammar(file)?;
    let words = g.enumerate_up_to(max_len)?;
    emit(|out| {
        for w in &words {
            writeln!(out, "{}", g.alphabet().render(w))?;
        }
        Ok(())
    })?;
    Ok(0)
}

fn grammar_analyze(file: &Path) -> Result<i32> {
    let g = load_grammar(file)?;
    let report = classify_regular_order_type(&g)?;
    emit(|out| writeln!(out, "{report}"))?;
    Ok(
        if matches!(report.density, DensityVerdict::NotDense { .. }) {
            1
        } else {
            0
        },
    )
}

fn grammar_probe(file: &Path, max_len: usize, pcp: Option<&Path>) -> Result<i32> {
    let g = load_grammar(file)?;
    let artifacts = pcp.map(load_artifacts).transpose()?;
    let report = probe_density_cfl(&g, max_len, artifacts.as_ref())?;
    emit(|out| write!(out, "{report}"))?;
    Ok(if report.solutions_detected > 0 { 1 } else { 0 })
}

fn grammar_check_prefix(file: &Path, max_len: usize) -> Result<i32> {
    let g = load_grammar(file)?;
    match prefix_free_bounded(&g, max_len)? {
        PrefixVerdict::Free => {
            emit(|out| writeln!(out, "prefix-free within length {max_len}"))?;
            Ok(0)
        }
        PrefixVerdict::Violation { prefix, extension } => {
            emit(|out| {
                writeln!(
                    out,
                    "violation: '{}' is a prefix of '{}'",
                    g.alphabet().render(&prefix),
                    g.alphabet().render(&extension)
                )
            })?;
            Ok(1)
        }
    }
}

fn witness_middle(grammar: &Path, pcp: &Path, lower: &str, upper: &str) -> Result<i32> {
    let artifacts = reduction_for(grammar, pcp)?;
    let lower = artifacts.delta().parse_word(lower)?;
    let upper = artifacts.delta().parse_word(upper)?;
    match middle_witness(&artifacts, &lower, &upper)? {
        MiddleOutcome::Middle(z) => {
            emit(|out| writeln!(out, "middle {}", artifacts.delta().render(&z)))?;
            Ok(0)
        }
        MiddleOutcome::SolutionDetected(s) => {
            emit(|out| writeln!(out, "gap pair: solution {s}"))?;
            Ok(1)
        }
    }
}

fn witness_neighbors(grammar: &Path, pcp: &Path, word: &str) -> Result<i32> {
    let artifacts = reduction_for(grammar, pcp)?;
    let v = artifacts.delta().parse_word(word)?;
    let neighbors = artifacts.neighbor_witnesses(&v)?;
    emit(|out| {
        writeln!(out, "below {}", artifacts.delta().render(&neighbors.below))?;
        writeln!(out, "above {}", artifacts.delta().render(&neighbors.above))
    })?;
    Ok(0)
}
