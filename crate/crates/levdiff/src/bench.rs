//! Time and space scaling of the script-in-cell matrix on worst-case input.
//!
//! The worst case is a pair of equal-length sequences with no token in
//! common: no cell can copy its diagonal for free, and cell `(i, j)` holds a
//! script of exactly `max(i, j)` ops.
//!
//! Space is counted in instructions, not bytes. `total_instructions` is the
//! sum of script lengths over all cells, i.e. what a table of independent
//! per-cell copies would store. `stored_nodes` is what the shared-prefix
//! arena actually stores.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use levdiff_core::{script_matrix, OwnedScriptMatrix, Token, TokenSequence, Granularity};

/// Median times below this are treated as timer noise and left out of fits.
pub const MIN_RESOLVABLE_NS: u64 = 1_000;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("no sizes given")]
    NoSizes,
    #[error("sizes must be positive")]
    ZeroSize,
    #[error("sizes must be strictly increasing")]
    NotIncreasing,
    #[error("at least 3 trials are needed for a median, got {0}")]
    TooFewTrials(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Storage {
    /// Parent-linked script nodes shared between cells.
    #[default]
    Shared,
    /// A full `Vec` copy of the script in every cell.
    Owned,
}

/// Two length-`n` sequences over disjoint alphabets.
///
/// The source takes the `n` scalar values starting at `a`, the target the
/// next `n`, so `worst_case_pair(4)` is `("abcd", "efgh")`.
pub fn worst_case_pair(n: usize) -> (TokenSequence, TokenSequence) {
    assert!(n >= 1, "worst-case pair needs n >= 1");
    let seq = |offset: usize| {
        let tokens = (offset..offset + n).map(|k| Token::from_char(scalar(k))).collect();
        TokenSequence::from_tokens(Granularity::Char, tokens).expect("single scalars")
    };
    (seq(0), seq(n))
}

/// The `k`-th scalar value counting from `a`, skipping surrogates.
fn scalar(k: usize) -> char {
    let mut code = 'a' as u32 + k as u32;
    if code >= 0xD800 {
        code += 0x800;
    }
    char::from_u32(code).expect("in scalar range")
}

/// Instructions held by all cells of the worst-case matrix for size `n`:
/// `2k + 1` cells hold `k` ops each, for `k = 0..=n`.
pub fn worst_case_instructions(n: u64) -> u64 {
    n * (n + 1) * (4 * n + 5) / 6
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub size: usize,
    pub trial: usize,
    pub wall_time_ns: Option<u64>,
    pub total_instructions: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizePoint {
    pub size: usize,
    pub median_ns: Option<u64>,
    pub total_instructions: u64,
    /// Longest script in any cell.
    pub max_cell_script: usize,
    /// Whether every cell `(i, j)` held at most `max(i, j)` ops.
    pub within_bound: bool,
    pub cells: usize,
    pub stored_nodes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub points: Vec<SizePoint>,
    /// Least-squares slope of log time against log n.
    pub time_slope: Option<f64>,
    /// Least-squares slope of log total instructions against log n.
    pub instruction_exponent: Option<f64>,
    pub warnings: Vec<String>,
}

fn check_sizes(sizes: &[usize]) -> Result<(), BenchError> {
    if sizes.is_empty() {
        return Err(BenchError::NoSizes);
    }
    if sizes.contains(&0) {
        return Err(BenchError::ZeroSize);
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::NotIncreasing);
    }
    Ok(())
}

fn measure_space(n: usize) -> SizePoint {
    let (a, b) = worst_case_pair(n);
    let matrix = script_matrix(&a, &b).expect("same granularity");
    let within_bound = matrix
        .cells()
        .all(|cell| cell.script_len() <= cell.row().max(cell.col()));
    SizePoint {
        size: n,
        median_ns: None,
        total_instructions: matrix.total_instructions(),
        max_cell_script: matrix.max_script_len(),
        within_bound,
        cells: matrix.rows() * matrix.cols(),
        stored_nodes: matrix.stored_nodes(),
    }
}

fn time_once(a: &TokenSequence, b: &TokenSequence, storage: Storage) -> u64 {
    match storage {
        Storage::Shared => {
            let start = Instant::now();
            let matrix = script_matrix(black_box(a), black_box(b));
            let elapsed = start.elapsed();
            drop(black_box(matrix));
            elapsed.as_nanos() as u64
        }
        Storage::Owned => {
            let start = Instant::now();
            let matrix = OwnedScriptMatrix::build(black_box(a), black_box(b));
            let elapsed = start.elapsed();
            drop(black_box(matrix));
            elapsed.as_nanos() as u64
        }
    }
}

fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2
    }
}

/// Times the matrix build on worst-case pairs, `trials` runs per size after
/// one warm-up run. Runs are sequential on the calling thread.
pub fn run_time_scaling(
    sizes: &[usize],
    trials: usize,
    storage: Storage,
) -> Result<BenchReport, BenchError> {
    check_sizes(sizes)?;
    if trials < 3 {
        return Err(BenchError::TooFewTrials(trials));
    }
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut warnings = Vec::new();
    for &n in sizes {
        let mut point = measure_space(n);
        let (a, b) = worst_case_pair(n);
        time_once(&a, &b, storage);
        let mut times: Vec<u64> = (0..trials).map(|_| time_once(&a, &b, storage)).collect();
        for (trial, &t) in times.iter().enumerate() {
            rows.push(BenchRow {
                size: n,
                trial,
                wall_time_ns: Some(t),
                total_instructions: point.total_instructions,
            });
        }
        let med = median(&mut times);
        if med < MIN_RESOLVABLE_NS {
            warnings.push(format!(
                "size {n}: median {med} ns is below timer resolution ({MIN_RESOLVABLE_NS} ns); dropped from the fit"
            ));
        }
        point.median_ns = Some(med);
        points.push(point);
    }

    let timed: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| match p.median_ns {
            Some(t) if t >= MIN_RESOLVABLE_NS => Some((p.size as f64, t as f64)),
            _ => None,
        })
        .collect();
    let time_slope = loglog_slope(&timed);
    if time_slope.is_none() {
        warnings.push("fewer than two usable sizes: time slope undefined".to_string());
    }
    let instruction_exponent = instruction_slope(&points);
    Ok(BenchReport {
        rows,
        points,
        time_slope,
        instruction_exponent,
        warnings,
    })
}

/// Counts stored instructions exactly on worst-case pairs; no timing.
pub fn run_space_measurement(sizes: &[usize]) -> Result<BenchReport, BenchError> {
    check_sizes(sizes)?;
    let points: Vec<SizePoint> = sizes.iter().map(|&n| measure_space(n)).collect();
    let rows = points
        .iter()
        .map(|p| BenchRow {
            size: p.size,
            trial: 0,
            wall_time_ns: None,
            total_instructions: p.total_instructions,
        })
        .collect();
    let instruction_exponent = instruction_slope(&points);
    let mut warnings = Vec::new();
    if instruction_exponent.is_none() {
        warnings.push("fewer than two sizes: instruction exponent undefined".to_string());
    }
    Ok(BenchReport {
        rows,
        points,
        time_slope: None,
        instruction_exponent,
        warnings,
    })
}

fn instruction_slope(points: &[SizePoint]) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.size as f64, p.total_instructions as f64))
        .collect();
    loglog_slope(&xy)
}

/// Least-squares slope of `ln y` on `ln x`. `None` for fewer than two
/// distinct points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

impl BenchReport {
    pub fn point(&self, size: usize) -> Option<&SizePoint> {
        self.points.iter().find(|p| p.size == size)
    }

    /// Median time at `larger` divided by median time at `smaller`.
    pub fn time_ratio(&self, smaller: usize, larger: usize) -> Option<f64> {
        let lo = self.point(smaller)?.median_ns?;
        let hi = self.point(larger)?.median_ns?;
        (lo > 0).then(|| hi as f64 / lo as f64)
    }

    /// CSV rows: `size,trial,wall_time_ns,total_instructions`. Untimed rows
    /// leave `wall_time_ns` empty.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["size", "trial", "wall_time_ns", "total_instructions"])?;
        for row in &self.rows {
            w.write_record([
                row.size.to_string(),
                row.trial.to_string(),
                row.wall_time_ns.map(|t| t.to_string()).unwrap_or_default(),
                row.total_instructions.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Summary block; every line starts with `#` so the CSV stays parseable
    /// by tools that skip comments.
    pub fn summary(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map_or("undefined".to_string(), |s| format!("{s:.3}"));
        let mut out = String::new();
        out.push_str(&format!("# time_slope: {}\n", fmt_opt(self.time_slope)));
        if let [.., prev, last] = self.points.as_slice() {
            if let Some(r) = self.time_ratio(prev.size, last.size) {
                out.push_str(&format!(
                    "# time_ratio_{}_{}: {r:.3}\n",
                    last.size, prev.size
                ));
            }
        }
        out.push_str(&format!(
            "# instruction_exponent: {}\n",
            fmt_opt(self.instruction_exponent)
        ));
        for p in &self.points {
            out.push_str(&format!(
                "# size {}: median_ns={} total_instructions={} closed_form={} max_cell_script={} within_max_ij={} cells={} stored_nodes={}\n",
                p.size,
                p.median_ns.map_or("-".to_string(), |t| t.to_string()),
                p.total_instructions,
                worst_case_instructions(p.size as u64),
                p.max_cell_script,
                p.within_bound,
                p.cells,
                p.stored_nodes,
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        out
    }

    /// A short finding on how stored instructions grow, for the space run.
    pub fn space_finding(&self) -> String {
        let exp = self
            .instruction_exponent
            .map_or("undefined".to_string(), |e| format!("{e:.3}"));
        let sizes: Vec<String> = self.points.iter().map(|p| p.size.to_string()).collect();
        let sizes = sizes.join(", ");
        let exact = self
            .points
            .iter()
            .all(|p| p.total_instructions == worst_case_instructions(p.size as u64));
        let nodes_quadratic = self
            .points
            .iter()
            .all(|p| p.stored_nodes == (p.size + 1) * (p.size + 1) - 1);
        format!(
            "On worst-case pairs of sizes {sizes} the logical instruction count \
             (sum of per-cell script lengths) fits n^{exp}. The counts {} the \
             row-by-row sum n(2n+1) + (n-1)(2n-1) + ... + 1*3 = n(n+1)(4n+5)/6, \
             which is cubic, so a table of independent per-cell copies needs \
             Theta(n^3) instructions, not O(n^2). \
             Sharing script prefixes between cells {} one stored op per \
             non-origin cell, (n+1)^2 - 1 in total, which is quadratic.",
            if exact { "match" } else { "do NOT match" },
            if nodes_quadratic { "brings storage down to" } else { "did not yield" },
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use levdiff_core::{detokenize, distance};

    #[test]
    fn fixture_pair() {
        let (a, b) = worst_case_pair(4);
        assert_eq!(detokenize(&a), "abcd");
        assert_eq!(detokenize(&b), "efgh");
        assert_eq!(distance(&a, &b).unwrap(), 4);
    }

    #[test]
    fn pairs_have_full_distance() {
        for n in [1, 8, 100, 600] {
            let (a, b) = worst_case_pair(n);
            assert_eq!(distance(&a, &b).unwrap(), n);
        }
    }

    #[test]
    fn closed_form_matches_brute_sum() {
        for n in 0..50u64 {
            let brute: u64 = (0..=n).flat_map(|i| (0..=n).map(move |j| i.max(j))).sum();
            assert_eq!(worst_case_instructions(n), brute);
        }
    }

    #[test]
    fn space_single() {
        let report = run_space_measurement(&[1]).unwrap();
        assert_eq!(report.points[0].total_instructions, 3);
        assert!(report.instruction_exponent.is_none());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn space_fixture_bound() {
        let report = run_space_measurement(&[4]).unwrap();
        let p = &report.points[0];
        assert!(p.within_bound);
        assert_eq!(p.cells, 25);
        assert_eq!(p.max_cell_script, 4);
        assert_eq!(p.total_instructions, 70);
    }

    #[test]
    fn degenerate_time_report() {
        let report = run_time_scaling(&[1], 3, Storage::Shared).unwrap();
        assert!(report.time_slope.is_none());
        assert!(!report.warnings.is_empty());
        assert_eq!(report.rows.len(), 3);
    }

    #[test]
    fn size_validation() {
        assert_eq!(run_space_measurement(&[]), Err(BenchError::NoSizes));
        assert_eq!(run_space_measurement(&[4, 4]), Err(BenchError::NotIncreasing));
        assert_eq!(run_space_measurement(&[0, 4]), Err(BenchError::ZeroSize));
        assert_eq!(
            run_time_scaling(&[4], 2, Storage::Shared),
            Err(BenchError::TooFewTrials(2))
        );
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0].iter().map(|&x| (x, 3.0 * x * x)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert!(loglog_slope(&[(1.0, 1.0)]).is_none());
    }

    #[test]
    fn csv_layout() {
        let report = run_space_measurement(&[1, 2]).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "size,trial,wall_time_ns,total_instructions\n1,0,,3\n2,0,,13\n"
        );
    }
}
