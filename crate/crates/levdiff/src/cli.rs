//! Command-line front end.
//!
//! Exit codes follow diff(1): 0 when inputs are identical (or a command
//! succeeded), 1 when they differ (or an oracle check found a violation),
//! 2 on any error. Only the requested artifact goes to stdout; diagnostics
//! go to stderr.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use levdiff_core::oracle::{
    all_strings, oracle_distance, oracle_min_scripts, tie_rule_witness_search, PROBE_ALPHABET_LIMIT,
    PROBE_LEN_LIMIT,
};
use levdiff_core::{
    backtrace_script, detokenize, distance, script_matrix, shortest_script, tokenize,
    tokenize_bytes, Granularity, TokenSequence,
};
use serde::Serialize;

use crate::bench::{run_space_measurement, run_time_scaling, Storage};
use crate::format::{self, Format};

pub const EXIT_SAME: u8 = 0;
pub const EXIT_DIFFERENT: u8 = 1;
pub const EXIT_TROUBLE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "levdiff", version, about = "Levenshtein distance and shortest edit scripts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a shortest edit script from SOURCE to TARGET.
    Diff {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(short, long, value_enum, default_value_t = Format::Compact)]
        format: Format,
        #[arg(short, long, value_enum, default_value_t = Algorithm::CellScript)]
        algorithm: Algorithm,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a compact or JSON script to SOURCE and print the result.
    Apply {
        /// Script file, or `-` for stdin.
        script: String,
        source: String,
        /// Treat SOURCE as a literal string instead of a path.
        #[arg(long)]
        string: bool,
        #[arg(short, long, value_enum)]
        granularity: Option<GranularityArg>,
        #[arg(short, long, value_enum, default_value_t = Format::Compact)]
        format: Format,
        /// Apply the inverse script, mapping a target back to its source.
        #[arg(long)]
        reverse: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the edit distance between SOURCE and TARGET.
    Distance {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Dump every cell of the script matrix.
    Matrix {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(short, long, value_enum, default_value_t = Format::Compact)]
        format: Format,
        /// Refuse inputs where source length times target length exceeds this.
        #[arg(long, default_value_t = 10_000)]
        max_cells: usize,
    },
    /// Check the DP against brute force on every small string pair.
    OracleCheck {
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
    },
    /// Time and count the matrix build on worst-case pairs; writes CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256, 512])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = BenchMode::Both)]
        mode: BenchMode,
        #[arg(long, value_enum, default_value_t = Storage::Shared)]
        storage: Storage,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Source path, `-` for stdin, or a literal with --string.
    pub source: String,
    /// Target path, `-` for stdin, or a literal with --string.
    pub target: String,
    /// Treat SOURCE and TARGET as literal strings instead of paths.
    #[arg(long)]
    pub string: bool,
    /// Defaults to `line` for files and `char` for literal strings.
    #[arg(short, long, value_enum)]
    pub granularity: Option<GranularityArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GranularityArg {
    Char,
    Word,
    Line,
}

impl From<GranularityArg> for Granularity {
    fn from(g: GranularityArg) -> Self {
        match g {
            GranularityArg::Char => Granularity::Char,
            GranularityArg::Word => Granularity::Word,
            GranularityArg::Line => Granularity::Line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    CellScript,
    Backtrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMode {
    Time,
    Space,
    Both,
}

/// Where command output and diagnostics go.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs a parsed command and returns its exit code.
pub fn run(cli: Cli, io: &mut Streams<'_>) -> u8 {
    match dispatch(cli.command, io) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(io.stderr, "levdiff: {err:#}");
            EXIT_TROUBLE
        }
    }
}

fn dispatch(command: Command, io: &mut Streams<'_>) -> Result<u8> {
    match command {
        Command::Diff {
            pair,
            format,
            algorithm,
            output,
        } => {
            let (a, b) = load_pair(&pair, io)?;
            let script = match algorithm {
                Algorithm::CellScript => shortest_script(&a, &b)?,
                Algorithm::Backtrace => backtrace_script(&a, &b)?,
            };
            emit(io, output.as_ref(), format::serialize(&script, format).as_bytes())?;
            Ok(if script.is_empty() {
                EXIT_SAME
            } else {
                EXIT_DIFFERENT
            })
        }
        Command::Apply {
            script,
            source,
            string,
            granularity,
            format,
            reverse,
            output,
        } => {
            let mut stdin_used = false;
            let script_bytes = read_input(&script, false, &mut stdin_used, io)?;
            let script_text =
                String::from_utf8(script_bytes).context("script is not valid UTF-8")?;
            let mut script = format::parse(&script_text, format)?;
            if reverse {
                script = script.invert();
            }
            let granularity = pick_granularity(granularity, string);
            let source_bytes = read_input(&source, string, &mut stdin_used, io)?;
            let source = tokenize_bytes(&source_bytes, granularity)
                .with_context(|| format!("reading source {source:?}"))?;
            let target = script.apply(&source)?;
            emit(io, output.as_ref(), detokenize(&target).as_bytes())?;
            Ok(EXIT_SAME)
        }
        Command::Distance { pair } => {
            let (a, b) = load_pair(&pair, io)?;
            writeln!(io.stdout, "{}", distance(&a, &b)?)?;
            Ok(EXIT_SAME)
        }
        Command::Matrix {
            pair,
            format,
            max_cells,
        } => {
            let (a, b) = load_pair(&pair, io)?;
            let cells = a.len().saturating_mul(b.len());
            if cells > max_cells {
                bail!(
                    "{} x {} = {cells} exceeds the matrix dump limit of {max_cells} (see --max-cells)",
                    a.len(),
                    b.len()
                );
            }
            let dump = matrix_dump(&a, &b, format)?;
            io.stdout.write_all(dump.as_bytes())?;
            Ok(EXIT_SAME)
        }
        Command::OracleCheck { max_len, alphabet } => oracle_check(max_len, alphabet, io),
        Command::Bench {
            sizes,
            trials,
            mode,
            storage,
            output,
        } => {
            let report = match mode {
                BenchMode::Space => run_space_measurement(&sizes)?,
                BenchMode::Time | BenchMode::Both => run_time_scaling(&sizes, trials, storage)?,
            };
            for w in &report.warnings {
                writeln!(io.stderr, "levdiff: warning: {w}")?;
            }
            let mut buf = Vec::new();
            report.write_csv(&mut buf)?;
            buf.extend_from_slice(report.summary().as_bytes());
            if mode != BenchMode::Time {
                for line in wrap(&report.space_finding(), 76) {
                    buf.extend_from_slice(format!("# {line}\n").as_bytes());
                }
            }
            emit(io, output.as_ref(), &buf)?;
            Ok(EXIT_SAME)
        }
    }
}

fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        if !line.is_empty() && line.len() + 1 + word.len() > width {
            lines.push(std::mem::take(&mut line));
        }
        if !line.is_empty() {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines
}

fn pick_granularity(arg: Option<GranularityArg>, literal: bool) -> Granularity {
    match arg {
        Some(g) => g.into(),
        None if literal => Granularity::Char,
        None => Granularity::Line,
    }
}

fn read_input(
    arg: &str,
    literal: bool,
    stdin_used: &mut bool,
    io: &mut Streams<'_>,
) -> Result<Vec<u8>> {
    if literal {
        return Ok(arg.as_bytes().to_vec());
    }
    if arg == "-" {
        if *stdin_used {
            bail!("stdin (`-`) can only be used for one input");
        }
        *stdin_used = true;
        let mut buf = Vec::new();
        io.stdin.read_to_end(&mut buf).context("reading stdin")?;
        return Ok(buf);
    }
    fs::read(arg).with_context(|| format!("cannot read {arg:?}"))
}

fn load_pair(pair: &PairArgs, io: &mut Streams<'_>) -> Result<(TokenSequence, TokenSequence)> {
    let granularity = pick_granularity(pair.granularity, pair.string);
    let mut stdin_used = false;
    let a = read_input(&pair.source, pair.string, &mut stdin_used, io)?;
    let b = read_input(&pair.target, pair.string, &mut stdin_used, io)?;
    let a = tokenize_bytes(&a, granularity)
        .with_context(|| format!("reading source {:?}", pair.source))?;
    let b = tokenize_bytes(&b, granularity)
        .with_context(|| format!("reading target {:?}", pair.target))?;
    Ok((a, b))
}

fn emit(io: &mut Streams<'_>, output: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes).with_context(|| format!("cannot write {path:?}")),
        None => io.stdout.write_all(bytes).context("writing stdout"),
    }
}

#[derive(Serialize)]
struct MatrixDoc {
    columns: Vec<String>,
    rows: Vec<String>,
    cells: Vec<Vec<CellDoc>>,
}

#[derive(Serialize)]
struct CellDoc {
    edit_distance: usize,
    edit_script: format::ScriptDoc,
}

/// Row-major dump of every cell. Columns follow the source, rows the target.
pub fn matrix_dump(a: &TokenSequence, b: &TokenSequence, format: Format) -> Result<String> {
    let sm = script_matrix(a, b)?;
    let labels = |seq: &TokenSequence| -> Vec<String> {
        seq.tokens().iter().map(|t| t.as_str().to_string()).collect()
    };
    if format == Format::Json {
        let mut cells: Vec<Vec<CellDoc>> = (0..sm.rows()).map(|_| Vec::new()).collect();
        for cell in sm.cells() {
            cells[cell.row()].push(CellDoc {
                edit_distance: cell.edit_distance(),
                edit_script: format::script_doc(&cell.script()),
            });
        }
        let doc = MatrixDoc {
            columns: labels(a),
            rows: labels(b),
            cells,
        };
        let mut out = serde_json::to_string(&doc)?;
        out.push('\n');
        return Ok(out);
    }

    let quoted = |seq: &TokenSequence| -> String {
        let mut parts = vec!["\"\"".to_string()];
        parts.extend(seq.tokens().iter().map(|t| format!("{:?}", t.as_str())));
        parts.join(" ")
    };
    let mut out = format!("matrix {} x {}\n", sm.rows(), sm.cols());
    out.push_str(&format!("columns: {}\n", quoted(a)));
    out.push_str(&format!("rows: {}\n", quoted(b)));
    for cell in sm.cells() {
        out.push_str(&format!(
            "({},{}) distance {}\n",
            cell.row(),
            cell.col(),
            cell.edit_distance()
        ));
        for op in cell.script().ops() {
            let line = match format {
                Format::Verbose => format::verbose_op(op),
                _ => format::compact_op(op),
            };
            out.push_str("  ");
            out.push_str(&line);
            out.push('\n');
        }
    }
    Ok(out)
}

fn oracle_check(max_len: usize, alphabet: usize, io: &mut Streams<'_>) -> Result<u8> {
    if max_len > PROBE_LEN_LIMIT {
        bail!("--max-len {max_len} exceeds the oracle limit of {PROBE_LEN_LIMIT}");
    }
    if !(1..=PROBE_ALPHABET_LIMIT).contains(&alphabet) {
        bail!("--alphabet must be between 1 and {PROBE_ALPHABET_LIMIT}");
    }
    let strings = all_strings(max_len, alphabet);
    let mut pairs = 0usize;
    let mut violations = 0usize;
    for s in &strings {
        for t in &strings {
            pairs += 1;
            let a = tokenize(s, Granularity::Char);
            let b = tokenize(t, Granularity::Char);
            let d = distance(&a, &b)?;
            let script = shortest_script(&a, &b)?;
            let expected = oracle_distance(&a, &b)?;
            let brute = oracle_min_scripts(&a, &b, a.len().max(b.len()))?;
            let mut problems = Vec::new();
            if d != expected {
                problems.push(format!("distance {d}, oracle {expected}"));
            }
            if script.len() != brute.min_length {
                problems.push(format!(
                    "script length {}, oracle minimum {}",
                    script.len(),
                    brute.min_length
                ));
            }
            if script.apply(&a).ok().as_ref() != Some(&b) {
                problems.push("script does not reproduce the target".to_string());
            }
            if brute.witness.apply(&a).ok().as_ref() != Some(&b) {
                problems.push("oracle witness does not reproduce the target".to_string());
            }
            if backtrace_script(&a, &b)? != script {
                problems.push("backtrace script differs".to_string());
            }
            if !problems.is_empty() {
                violations += 1;
                writeln!(io.stderr, "{s:?} -> {t:?}: {}", problems.join("; "))?;
            }
        }
    }
    let probe = tie_rule_witness_search(max_len, alphabet)?;
    writeln!(io.stdout, "pairs checked: {pairs}")?;
    match &probe.first_witness {
        Some(w) => writeln!(
            io.stdout,
            "unguarded tie rule: {} of {} pairs overshoot; first {:?} -> {:?} gives {} ops for distance {}",
            probe.witness_count, probe.pairs_checked, w.source, w.target, w.unguarded_len, w.distance
        )?,
        None => writeln!(io.stdout, "unguarded tie rule: none found in scope")?,
    }
    if violations == 0 {
        writeln!(io.stdout, "all pairs agree")?;
        Ok(EXIT_SAME)
    } else {
        writeln!(io.stdout, "{violations} pairs disagree")?;
        Ok(EXIT_DIFFERENT)
    }
}

/// Entry point shared by the binary: parses `std::env::args`, runs against
/// the process streams.
pub fn main_with_std_io() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                EXIT_TROUBLE
            } else {
                EXIT_SAME
            };
        }
    };
    let stdin = io::stdin();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut stdin = stdin.lock();
    let mut stdout = stdout.lock();
    let mut stderr = stderr.lock();
    let code = run(
        cli,
        &mut Streams {
            stdin: &mut stdin,
            stdout: &mut stdout,
            stderr: &mut stderr,
        },
    );
    let _ = stdout.flush();
    code
}
