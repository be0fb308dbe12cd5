//! Fixed tables for "abac" -> "aabc" and the disjoint "abcd" / "efgh" pair.

use levdiff_core::oracle::{oracle_distance, oracle_min_scripts, tie_rule_witness_search};
use levdiff_core::{
    detokenize, distance, distance_matrix, script_matrix, script_matrix_with_rule,
    shortest_script, tokenize, EditKind, EditOp, Granularity, TieRule, Token, TokenSequence,
};

fn chars(s: &str) -> TokenSequence {
    tokenize(s, Granularity::Char)
}

fn t(s: &str) -> Token {
    Token::new(s).unwrap()
}

// Rows follow the target "aabc", columns the source "abac".
const ABAC_AABC: [[usize; 5]; 5] = [
    [0, 1, 2, 3, 4],
    [1, 0, 1, 2, 3],
    [2, 1, 1, 1, 2],
    [3, 2, 1, 2, 2],
    [4, 3, 2, 2, 2],
];

#[test]
fn abac_aabc_distances() {
    let (a, b) = (chars("abac"), chars("aabc"));
    let sm = script_matrix(&a, &b).unwrap();
    let dm = distance_matrix(&a, &b).unwrap();
    for (row, expected) in ABAC_AABC.iter().enumerate() {
        assert_eq!(dm.row(row), expected, "row {row}");
        for (col, &d) in expected.iter().enumerate() {
            assert_eq!(sm.cell(row, col).edit_distance(), d);
            assert_eq!(sm.cell(row, col).script_len(), d);
        }
    }
    assert_eq!(distance(&a, &b).unwrap(), 2);
}

#[test]
fn abac_aabc_final_script() {
    let (a, b) = (chars("abac"), chars("aabc"));
    let script = shortest_script(&a, &b).unwrap();
    assert_eq!(
        script.ops(),
        [
            EditOp::Substitute {
                source_pos: 1,
                target_pos: 1,
                old: t("b"),
                new: t("a")
            },
            EditOp::Substitute {
                source_pos: 2,
                target_pos: 2,
                old: t("a"),
                new: t("b")
            },
        ]
    );
    assert_eq!(detokenize(&script.apply(&a).unwrap()), "aabc");
}

#[test]
fn abac_aabc_row_zero_deletes_everything() {
    let (a, b) = (chars("abac"), chars("aabc"));
    let sm = script_matrix(&a, &b).unwrap();
    let top = sm.cell(0, 4).script();
    let deleted: Vec<(usize, &str)> = top
        .ops()
        .iter()
        .map(|op| (op.source_pos(), op.old().unwrap().as_str()))
        .collect();
    assert_eq!(deleted, [(0, "a"), (1, "b"), (2, "a"), (3, "c")]);
    assert_eq!(detokenize(&top.apply(&a).unwrap()), "");
}

#[test]
fn disjoint_fixture() {
    let (a, b) = (chars("abcd"), chars("efgh"));
    let sm = script_matrix(&a, &b).unwrap();
    assert_eq!(sm.distances().row(4), [4, 4, 4, 4, 4]);
    for cell in sm.cells() {
        assert_eq!(cell.script_len(), cell.row().max(cell.col()));
    }
    assert_eq!(sm.final_script().count(EditKind::Substitute), 4);
}

#[test]
fn kitten_sitting() {
    let (a, b) = (chars("kitten"), chars("sitting"));
    let script = shortest_script(&a, &b).unwrap();
    assert_eq!(script.len(), 3);
    assert_eq!(oracle_distance(&a, &b).unwrap(), 3);
    assert_eq!(script.apply(&a).unwrap(), b);
}

#[test]
fn swap_pair_both_rules() {
    let (a, b) = (chars("ab"), chars("ba"));
    let unguarded = script_matrix_with_rule(&a, &b, TieRule::Unguarded).unwrap();
    assert_eq!(unguarded.final_script().len(), 2);
    assert_eq!(oracle_min_scripts(&a, &b, 2).unwrap().min_length, 2);
}

#[test]
fn equal_strings_never_witness() {
    for s in levdiff_core::oracle::all_strings(4, 3) {
        let a = chars(&s);
        let sm = script_matrix_with_rule(&a, &a, TieRule::Unguarded).unwrap();
        assert!(sm.final_script().is_empty(), "{s}");
    }
}

#[test]
fn tie_rule_probe_small_scope() {
    let report = tie_rule_witness_search(3, 2).unwrap();
    assert_eq!(report.pairs_checked, 15 * 15);
    let w = report.first_witness.expect("scope (3, 2) holds a witness");
    eprintln!(
        "unguarded tie rule: {} -> {} gives {} ops, distance {} ({} witnesses)",
        w.source, w.target, w.unguarded_len, w.distance, report.witness_count
    );
    assert!(w.unguarded_len > oracle_distance(&chars(&w.source), &chars(&w.target)).unwrap());
}

// At cell (3, 3) both orthogonal neighbours hold distance 1 while the
// diagonal ("ab" vs "ba") holds 2, so the unguarded rule substitutes on top
// of a 2-op script.
#[test]
fn unguarded_rule_overshoots_on_aba_bab() {
    let (a, b) = (chars("aba"), chars("bab"));
    let unguarded = script_matrix_with_rule(&a, &b, TieRule::Unguarded).unwrap();
    assert_eq!(unguarded.distance(), 2);
    assert_eq!(unguarded.final_script().len(), 3);
    assert_eq!(unguarded.final_script().apply(&a).unwrap(), b);
    assert_eq!(shortest_script(&a, &b).unwrap().len(), 2);
}
