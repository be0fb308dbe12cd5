//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! show up in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use levdiff::bench::{run_space_measurement, run_time_scaling, worst_case_pair, Storage};
use levdiff::format::{parse, serialize, Format};
use levdiff_core::oracle::{all_strings, oracle_distance, oracle_min_scripts, tie_rule_witness_search};
use levdiff_core::{
    backtrace_script, detokenize, distance, distance_matrix, script_matrix, shortest_script,
    tokenize, EditScript, Granularity, TokenSequence,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn chars(s: &str) -> TokenSequence {
    tokenize(s, Granularity::Char)
}

fn random_string(rng: &mut StdRng, max: usize, alphabet: &[char]) -> String {
    let len = rng.gen_range(0..=max);
    (0..len)
        .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
        .collect()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Cell distances of the "abac" -> "aabc" edit-script table, rows by target.
const GOLDEN: [[usize; 5]; 5] = [
    [0, 1, 2, 3, 4],
    [1, 0, 1, 2, 3],
    [2, 1, 1, 1, 2],
    [3, 2, 1, 2, 2],
    [4, 3, 2, 2, 2],
];

fn golden_matrix() -> Outcome {
    let (a, b) = (chars("abac"), chars("aabc"));
    let sm = script_matrix(&a, &b).map_err(|e| e.to_string())?;
    for (row, expected) in GOLDEN.iter().enumerate() {
        for (col, &d) in expected.iter().enumerate() {
            let got = sm.cell(row, col).edit_distance();
            ensure!(got == d, "cell ({row},{col}) = {got}, expected {d}");
        }
    }
    let script = sm.final_script();
    ensure!(script.len() == 2, "final script has {} ops", script.len());
    let out = script.apply(&a).map_err(|e| e.to_string())?;
    ensure!(detokenize(&out) == "aabc", "applied to {:?}", detokenize(&out));
    Ok("25/25 cells match; final script of 2 ops yields \"aabc\"".into())
}

fn worst_case() -> Outcome {
    let (a, b) = (chars("abcd"), chars("efgh"));
    let dm = distance_matrix(&a, &b).map_err(|e| e.to_string())?;
    ensure!(dm.row(4) == [4, 4, 4, 4, 4], "bottom row {:?}", dm.row(4));
    let sm = script_matrix(&a, &b).map_err(|e| e.to_string())?;
    for cell in sm.cells() {
        let bound = cell.row().max(cell.col());
        ensure!(
            cell.script_len() <= bound,
            "cell ({},{}) holds {} ops > {bound}",
            cell.row(),
            cell.col(),
            cell.script_len()
        );
    }
    Ok("bottom row 4,4,4,4,4; all 25 cells within max(i,j)".into())
}

fn oracle_equivalence() -> Outcome {
    let check = |s: &str, t: &str| -> Result<(), String> {
        let (a, b) = (chars(s), chars(t));
        let d = distance(&a, &b).map_err(|e| e.to_string())?;
        let od = oracle_distance(&a, &b).map_err(|e| e.to_string())?;
        ensure!(d == od, "{s:?} -> {t:?}: distance {d}, oracle {od}");
        let len = shortest_script(&a, &b).map_err(|e| e.to_string())?.len();
        let brute = oracle_min_scripts(&a, &b, a.len().max(b.len())).map_err(|e| e.to_string())?;
        ensure!(
            len == brute.min_length,
            "{s:?} -> {t:?}: script {len}, oracle minimum {}",
            brute.min_length
        );
        ensure!(
            brute.witness.apply(&a).ok().as_ref() == Some(&b),
            "{s:?} -> {t:?}: oracle witness does not apply"
        );
        Ok(())
    };
    let strings = all_strings(3, 2);
    let mut exhaustive = 0;
    for s in &strings {
        for t in &strings {
            check(s, t)?;
            exhaustive += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(3);
    let alphabet = ['a', 'b', 'c'];
    for _ in 0..250 {
        let s = random_string(&mut rng, 6, &alphabet);
        let t = random_string(&mut rng, 6, &alphabet);
        check(&s, &t)?;
    }
    Ok(format!("{exhaustive} exhaustive pairs + 250 random pairs agree"))
}

fn property_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let alphabet = ['a', 'b', 'c', 'd'];
    let pairs = 1500;
    for _ in 0..pairs {
        let s = random_string(&mut rng, 12, &alphabet);
        let t = random_string(&mut rng, 12, &alphabet);
        let (a, b) = (chars(&s), chars(&t));
        let d = distance(&a, &b).map_err(|e| e.to_string())?;
        let script = shortest_script(&a, &b).map_err(|e| e.to_string())?;
        ensure!(script.len() == d, "{s:?} -> {t:?}: length {} != {d}", script.len());
        ensure!(script.apply(&a).ok().as_ref() == Some(&b), "{s:?} -> {t:?}: apply");
        ensure!(
            script.invert().apply(&b).ok().as_ref() == Some(&a),
            "{s:?} -> {t:?}: inverse apply"
        );
        let back = backtrace_script(&a, &b).map_err(|e| e.to_string())?;
        ensure!(back.len() == script.len(), "{s:?} -> {t:?}: backtrace length");
        ensure!(distance(&b, &a).unwrap() == d, "{s:?} -> {t:?}: symmetry");
        ensure!((d == 0) == (s == t), "{s:?} -> {t:?}: identity");
    }
    let triples = 300;
    for _ in 0..triples {
        let [x, y, z] = [0; 3].map(|_| chars(&random_string(&mut rng, 12, &alphabet)));
        let xz = distance(&x, &z).unwrap();
        let via = distance(&x, &y).unwrap() + distance(&y, &z).unwrap();
        ensure!(xz <= via, "triangle violated: {xz} > {via}");
    }
    Ok(format!("{pairs} pairs and {triples} triples hold every property"))
}

fn time_scaling() -> Outcome {
    let report = run_time_scaling(&[64, 128, 256, 512], 7, Storage::Shared).map_err(|e| e.to_string())?;
    let ratio = report.time_ratio(256, 512).ok_or("no ratio")?;
    let slope = report.time_slope.ok_or("no slope")?;
    let detail = format!("ratio 512/256 = {ratio:.3} (want [3.2, 5.0]), slope = {slope:.3} (want [1.8, 2.3])");
    ensure!((3.2..=5.0).contains(&ratio), "{detail}");
    ensure!((1.8..=2.3).contains(&slope), "{detail}");
    Ok(detail)
}

fn space_interrogation() -> Outcome {
    let sizes = [8, 16, 32, 64];
    let report = run_space_measurement(&sizes).map_err(|e| e.to_string())?;
    for p in &report.points {
        let n = p.size;
        let brute: u64 = (0..=n)
            .flat_map(|i| (0..=n).map(move |j| i.max(j) as u64))
            .sum();
        ensure!(
            p.total_instructions == brute,
            "n={n}: counted {}, expected {brute}",
            p.total_instructions
        );
        ensure!(p.within_bound, "n={n}: a cell exceeds max(i,j)");
        let (a, b) = worst_case_pair(n);
        ensure!(distance(&a, &b).unwrap() == n, "n={n}: worst case distance");
    }
    let exponent = report.instruction_exponent.ok_or("no exponent")?;
    let counts: Vec<String> = report
        .points
        .iter()
        .map(|p| format!("n={}: {}", p.size, p.total_instructions))
        .collect();
    println!("    counts: {}", counts.join(", "));
    println!("    fitted exponent {exponent:.3}; claimed O(n^2) vs summation n(n+1)(4n+5)/6 = Theta(n^3)");
    println!("    finding: {}", report.space_finding());
    Ok(format!("measured exponent {exponent:.3}"))
}

fn serialization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let word_pool = ["a", "b", "%", ":", ">", ",", "a:b", "x>y,z%", "%25", "é", "::"];
    let line_pool = ["a\n", "b\r\n", "%:>,\n", "c\rd\n", "x>y\n", "tail", ">"];
    let mut checked = 0;
    for k in 0..500 {
        let (g, pool): (Granularity, &[&str]) = if k % 2 == 0 {
            (Granularity::Word, &word_pool)
        } else {
            (Granularity::Line, &line_pool)
        };
        let gen = |rng: &mut StdRng| -> String {
            let len = rng.gen_range(0..=8);
            let picks: Vec<&str> = (0..len).map(|_| pool[rng.gen_range(0..pool.len())]).collect();
            match g {
                Granularity::Word => picks.join(" "),
                _ => {
                    // only the last line may lack a terminator
                    let mut s = String::new();
                    for (i, p) in picks.iter().enumerate() {
                        s.push_str(p);
                        if !p.ends_with('\n') && i + 1 < picks.len() {
                            s.push('\n');
                        }
                    }
                    s
                }
            }
        };
        let (s, t) = (gen(&mut rng), gen(&mut rng));
        let script = shortest_script(&tokenize(&s, g), &tokenize(&t, g)).map_err(|e| e.to_string())?;
        for format in [Format::Compact, Format::Json] {
            let text = serialize(&script, format);
            let back: EditScript = parse(&text, format).map_err(|e| format!("{format}: {e}"))?;
            ensure!(back == script, "{format} round trip changed the script for {s:?} -> {t:?}");
        }
        checked += 1;
    }
    Ok(format!("{checked} scripts round-trip in compact and json"))
}

fn tie_rule_probe() -> Outcome {
    let report = tie_rule_witness_search(4, 3).map_err(|e| e.to_string())?;
    let line = match &report.first_witness {
        Some(w) => format!(
            "{} of {} pairs overshoot; first counterexample {:?} -> {:?}: unguarded {} ops, distance {}",
            report.witness_count, report.pairs_checked, w.source, w.target, w.unguarded_len, w.distance
        ),
        None => format!("none found in scope ({} pairs)", report.pairs_checked),
    };
    Ok(line)
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("1 golden matrix", Duration::from_secs(1), golden_matrix),
        ("2 worst case", Duration::from_secs(1), worst_case),
        ("3 oracle equivalence", Duration::from_secs(60), oracle_equivalence),
        ("4 property suite", Duration::from_secs(60), property_suite),
        ("5 time scaling", Duration::from_secs(300), time_scaling),
        ("6 space claim", Duration::from_secs(300), space_interrogation),
        ("7 serialization", Duration::from_secs(10), serialization),
        ("8 tie-rule probe", Duration::from_secs(300), tie_rule_probe),
    ];
    let mut failed = 0;
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS [{name}] {detail} ({elapsed:.2?})"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{name}] {detail} ({elapsed:.2?})");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
