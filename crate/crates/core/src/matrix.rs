//! Levenshtein matrices, with and without per-cell edit scripts.
//!
//! Orientation: columns follow the source (length `m`), rows follow the
//! target (length `n`). Cell `(row, col)` relates the first `col` source
//! tokens to the first `row` target tokens, so the full answer sits at
//! `(n, m)`. Row 0 deletes a source prefix; column 0 inserts a target prefix.
//!
//! [`script_matrix`] keeps a complete shortest script in every cell while
//! filling the table. A cell's script is its predecessor's script plus at
//! most one op, so scripts are stored as parent-linked nodes in one arena:
//! copying a script is copying a node index, and appending pushes one node.
//! Reading a cell's script still yields an independent value.
//! [`OwnedScriptMatrix`] is the literal variant that clones a `Vec` per cell.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::script::{EditKind, EditOp, EditScript};
use crate::tokens::{Granularity, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixError {
    GranularityMismatch {
        source: Granularity,
        target: Granularity,
    },
    /// The table would have more cells than node indices can address.
    TooLarge { cells: u128 },
}

impl fmt::Display for MatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixError::GranularityMismatch { source, target } => write!(
                f,
                "granularity mismatch: source is {source}, target is {target}"
            ),
            MatrixError::TooLarge { cells } => {
                write!(f, "edit matrix of {cells} cells is too large")
            }
        }
    }
}

impl core::error::Error for MatrixError {}

fn check_granularity(source: &TokenSequence, target: &TokenSequence) -> Result<(), MatrixError> {
    if source.granularity() != target.granularity() {
        return Err(MatrixError::GranularityMismatch {
            source: source.granularity(),
            target: target.granularity(),
        });
    }
    Ok(())
}

fn check_size(source: &TokenSequence, target: &TokenSequence) -> Result<usize, MatrixError> {
    let cells = (source.len() as u128 + 1) * (target.len() as u128 + 1);
    if cells >= u32::MAX as u128 {
        return Err(MatrixError::TooLarge { cells });
    }
    Ok(cells as usize)
}

/// Distances only, `(n + 1) x (m + 1)`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    rows: usize,
    cols: usize,
    values: Vec<usize>,
}

impl DistanceMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, row: usize, col: usize) -> usize {
        assert!(row < self.rows && col < self.cols, "cell out of range");
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[usize] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    /// Distance between the full sequences.
    pub fn distance(&self) -> usize {
        self.values[self.values.len() - 1]
    }
}

pub fn distance_matrix(
    source: &TokenSequence,
    target: &TokenSequence,
) -> Result<DistanceMatrix, MatrixError> {
    check_granularity(source, target)?;
    let a = source.tokens();
    let b = target.tokens();
    let cols = a.len() + 1;
    let rows = b.len() + 1;
    let mut values = vec![0usize; rows * cols];
    for (col, v) in values[..cols].iter_mut().enumerate() {
        *v = col;
    }
    for row in 1..rows {
        values[row * cols] = row;
        for col in 1..cols {
            let here = row * cols + col;
            values[here] = if a[col - 1] == b[row - 1] {
                values[here - cols - 1]
            } else {
                1 + values[here - cols - 1]
                    .min(values[here - cols])
                    .min(values[here - 1])
            };
        }
    }
    Ok(DistanceMatrix { rows, cols, values })
}

/// Levenshtein distance using two rolling rows.
pub fn distance(source: &TokenSequence, target: &TokenSequence) -> Result<usize, MatrixError> {
    check_granularity(source, target)?;
    let a = source.tokens();
    let b = target.tokens();
    let mut prev: Vec<usize> = (0..=a.len()).collect();
    let mut cur = vec![0usize; a.len() + 1];
    for (row, tb) in b.iter().enumerate() {
        cur[0] = row + 1;
        for (col, ta) in a.iter().enumerate() {
            cur[col + 1] = if ta == tb {
                prev[col]
            } else {
                1 + prev[col].min(prev[col + 1]).min(cur[col])
            };
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[a.len()])
}

/// How a mismatch cell picks its predecessor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieRule {
    /// Take the predecessor with the shortest script, preferring
    /// substitution, then deletion, then insertion on ties.
    #[default]
    Guarded,
    /// Compare only the insertion and deletion predecessors: substitute from
    /// the diagonal when they are equal, otherwise extend the smaller one.
    /// The diagonal's own distance is never consulted, so scripts built this
    /// way are not guaranteed to be shortest.
    Unguarded,
}

const NO_NODE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    kind: EditKind,
    source_pos: u32,
    target_pos: u32,
    parent: u32,
    /// Script length up to and including this node.
    len: u32,
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    distance: u32,
    head: u32,
}

/// The `(n + 1) x (m + 1)` table of `{edit_distance, edit_script}` cells.
#[derive(Debug, Clone)]
pub struct ScriptMatrix {
    source: TokenSequence,
    target: TokenSequence,
    rule: TieRule,
    cols: usize,
    cells: Vec<Cell>,
    nodes: Vec<Node>,
}

pub fn script_matrix(
    source: &TokenSequence,
    target: &TokenSequence,
) -> Result<ScriptMatrix, MatrixError> {
    script_matrix_with_rule(source, target, TieRule::Guarded)
}

pub fn script_matrix_with_rule(
    source: &TokenSequence,
    target: &TokenSequence,
    rule: TieRule,
) -> Result<ScriptMatrix, MatrixError> {
    check_granularity(source, target)?;
    let total = check_size(source, target)?;
    let a = source.tokens();
    let b = target.tokens();
    let cols = a.len() + 1;
    let rows = b.len() + 1;

    let mut cells: Vec<Cell> = Vec::with_capacity(total);
    let mut nodes: Vec<Node> = Vec::with_capacity(total);
    let push = |nodes: &mut Vec<Node>, kind, source_pos: usize, target_pos: usize, parent: u32| {
        let len = if parent == NO_NODE {
            1
        } else {
            nodes[parent as usize].len + 1
        };
        nodes.push(Node {
            kind,
            source_pos: source_pos as u32,
            target_pos: target_pos as u32,
            parent,
            len,
        });
        (nodes.len() - 1) as u32
    };
    let script_len = |nodes: &Vec<Node>, head: u32| {
        if head == NO_NODE {
            0
        } else {
            nodes[head as usize].len
        }
    };

    cells.push(Cell {
        distance: 0,
        head: NO_NODE,
    });
    for col in 1..cols {
        let parent = cells[col - 1].head;
        let head = push(&mut nodes, EditKind::Delete, col - 1, 0, parent);
        cells.push(Cell {
            distance: col as u32,
            head,
        });
    }
    for row in 1..rows {
        let parent = cells[(row - 1) * cols].head;
        let head = push(&mut nodes, EditKind::Insert, 0, row - 1, parent);
        cells.push(Cell {
            distance: row as u32,
            head,
        });
        let tb = &b[row - 1];
        for col in 1..cols {
            let here = row * cols + col;
            let diag = cells[here - cols - 1];
            if a[col - 1] == *tb {
                cells.push(diag);
                continue;
            }
            let up = cells[here - cols];
            let left = cells[here - 1];
            let distance = 1 + diag.distance.min(up.distance).min(left.distance);
            let pick = match rule {
                TieRule::Guarded => {
                    let (sub, del, ins) = (
                        script_len(&nodes, diag.head),
                        script_len(&nodes, left.head),
                        script_len(&nodes, up.head),
                    );
                    if sub <= del && sub <= ins {
                        EditKind::Substitute
                    } else if del <= ins {
                        EditKind::Delete
                    } else {
                        EditKind::Insert
                    }
                }
                TieRule::Unguarded => {
                    if up.distance == left.distance {
                        EditKind::Substitute
                    } else if up.distance < left.distance {
                        EditKind::Insert
                    } else {
                        EditKind::Delete
                    }
                }
            };
            let head = match pick {
                EditKind::Substitute => push(&mut nodes, pick, col - 1, row - 1, diag.head),
                EditKind::Delete => push(&mut nodes, pick, col - 1, row, left.head),
                EditKind::Insert => push(&mut nodes, pick, col, row - 1, up.head),
            };
            cells.push(Cell {
                distance: distance as u32,
                head,
            });
        }
    }

    Ok(ScriptMatrix {
        source: source.clone(),
        target: target.clone(),
        rule,
        cols,
        cells,
        nodes,
    })
}

/// A read-only view of one cell.
#[derive(Debug, Clone, Copy)]
pub struct ScriptCell<'a> {
    matrix: &'a ScriptMatrix,
    row: usize,
    col: usize,
    cell: Cell,
}

impl<'a> ScriptCell<'a> {
    pub fn row(&self) -> usize {
        self.row
    }

    pub fn col(&self) -> usize {
        self.col
    }

    pub fn edit_distance(&self) -> usize {
        self.cell.distance as usize
    }

    /// Length of the stored script, without materializing it.
    pub fn script_len(&self) -> usize {
        self.matrix.len_of(self.cell.head)
    }

    /// The stored script, from the first `col` source tokens to the first
    /// `row` target tokens.
    pub fn script(&self) -> EditScript {
        self.matrix.materialize(self.cell.head, self.col, self.row)
    }
}

impl ScriptMatrix {
    pub fn rows(&self) -> usize {
        self.cells.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn source(&self) -> &TokenSequence {
        &self.source
    }

    pub fn target(&self) -> &TokenSequence {
        &self.target
    }

    pub fn rule(&self) -> TieRule {
        self.rule
    }

    pub fn cell(&self, row: usize, col: usize) -> ScriptCell<'_> {
        assert!(row < self.rows() && col < self.cols, "cell out of range");
        ScriptCell {
            matrix: self,
            row,
            col,
            cell: self.cells[row * self.cols + col],
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = ScriptCell<'_>> + '_ {
        self.cells.iter().enumerate().map(move |(k, &cell)| ScriptCell {
            matrix: self,
            row: k / self.cols,
            col: k % self.cols,
            cell,
        })
    }

    pub fn final_cell(&self) -> ScriptCell<'_> {
        self.cell(self.rows() - 1, self.cols - 1)
    }

    pub fn distance(&self) -> usize {
        self.final_cell().edit_distance()
    }

    pub fn final_script(&self) -> EditScript {
        self.final_cell().script()
    }

    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix {
            rows: self.rows(),
            cols: self.cols,
            values: self.cells.iter().map(|c| c.distance as usize).collect(),
        }
    }

    /// Sum of script lengths over every cell: the instruction count of a
    /// table where each cell owns a full copy of its script.
    pub fn total_instructions(&self) -> u64 {
        self.cells.iter().map(|c| self.len_of(c.head) as u64).sum()
    }

    /// Longest script held by any cell.
    pub fn max_script_len(&self) -> usize {
        self.cells.iter().map(|c| self.len_of(c.head)).max().unwrap_or(0)
    }

    /// Ops physically stored in the shared-prefix arena.
    pub fn stored_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn len_of(&self, head: u32) -> usize {
        if head == NO_NODE {
            0
        } else {
            self.nodes[head as usize].len as usize
        }
    }

    fn materialize(&self, head: u32, source_len: usize, target_len: usize) -> EditScript {
        let mut ops = Vec::with_capacity(self.len_of(head));
        let mut at = head;
        while at != NO_NODE {
            let node = self.nodes[at as usize];
            ops.push(self.op_for(&node));
            at = node.parent;
        }
        ops.reverse();
        EditScript::from_ordered_unchecked(ops, source_len, target_len)
    }

    fn op_for(&self, node: &Node) -> EditOp {
        let source_pos = node.source_pos as usize;
        let target_pos = node.target_pos as usize;
        let src = |k: usize| self.source.tokens()[k].clone();
        let tgt = |k: usize| self.target.tokens()[k].clone();
        match node.kind {
            EditKind::Insert => EditOp::Insert {
                source_pos,
                target_pos,
                new: tgt(target_pos),
            },
            EditKind::Delete => EditOp::Delete {
                source_pos,
                target_pos,
                old: src(source_pos),
            },
            EditKind::Substitute => EditOp::Substitute {
                source_pos,
                target_pos,
                old: src(source_pos),
                new: tgt(target_pos),
            },
        }
    }
}

/// Shortest edit script from `source` to `target`, read from the final
/// cell of the script matrix.
pub fn shortest_script(
    source: &TokenSequence,
    target: &TokenSequence,
) -> Result<EditScript, MatrixError> {
    Ok(script_matrix(source, target)?.final_script())
}

/// Shortest script recovered by walking back from the final cell of the
/// distance matrix. Uses the same preference order as [`script_matrix`]
/// (match, then substitution, deletion, insertion), so it reproduces the
/// same script.
pub fn backtrace_script(
    source: &TokenSequence,
    target: &TokenSequence,
) -> Result<EditScript, MatrixError> {
    let dm = distance_matrix(source, target)?;
    let a = source.tokens();
    let b = target.tokens();
    let (mut row, mut col) = (b.len(), a.len());
    let mut ops = Vec::with_capacity(dm.distance());
    while row > 0 || col > 0 {
        let here = dm.at(row, col);
        if row > 0 && col > 0 && a[col - 1] == b[row - 1] {
            row -= 1;
            col -= 1;
        } else if row > 0 && col > 0 && dm.at(row - 1, col - 1) + 1 == here {
            ops.push(EditOp::Substitute {
                source_pos: col - 1,
                target_pos: row - 1,
                old: a[col - 1].clone(),
                new: b[row - 1].clone(),
            });
            row -= 1;
            col -= 1;
        } else if col > 0 && dm.at(row, col - 1) + 1 == here {
            ops.push(EditOp::Delete {
                source_pos: col - 1,
                target_pos: row,
                old: a[col - 1].clone(),
            });
            col -= 1;
        } else {
            debug_assert!(row > 0 && dm.at(row - 1, col) + 1 == here);
            ops.push(EditOp::Insert {
                source_pos: col,
                target_pos: row - 1,
                new: b[row - 1].clone(),
            });
            row -= 1;
        }
    }
    ops.reverse();
    Ok(EditScript::from_ordered_unchecked(ops, a.len(), b.len()))
}

/// Script matrix where every cell owns a full copy of its script.
///
/// Same choices as [`script_matrix`] under [`TieRule::Guarded`]; cost grows
/// with the total instruction count rather than the cell count.
#[derive(Debug, Clone)]
pub struct OwnedScriptMatrix {
    cols: usize,
    cells: Vec<(usize, Vec<EditOp>)>,
}

impl OwnedScriptMatrix {
    pub fn build(source: &TokenSequence, target: &TokenSequence) -> Result<Self, MatrixError> {
        check_granularity(source, target)?;
        let total = check_size(source, target)?;
        let a = source.tokens();
        let b = target.tokens();
        let cols = a.len() + 1;
        let rows = b.len() + 1;
        let mut cells: Vec<(usize, Vec<EditOp>)> = Vec::with_capacity(total);
        cells.push((0, Vec::new()));
        for col in 1..cols {
            let mut script = cells[col - 1].1.clone();
            script.push(EditOp::Delete {
                source_pos: col - 1,
                target_pos: 0,
                old: a[col - 1].clone(),
            });
            cells.push((col, script));
        }
        for row in 1..rows {
            let mut script = cells[(row - 1) * cols].1.clone();
            script.push(EditOp::Insert {
                source_pos: 0,
                target_pos: row - 1,
                new: b[row - 1].clone(),
            });
            cells.push((row, script));
            for col in 1..cols {
                let here = row * cols + col;
                let diag = here - cols - 1;
                if a[col - 1] == b[row - 1] {
                    let copy = cells[diag].clone();
                    cells.push(copy);
                    continue;
                }
                let (sub, del, ins) = (cells[diag].0, cells[here - 1].0, cells[here - cols].0);
                let (from, op) = if sub <= del && sub <= ins {
                    (
                        diag,
                        EditOp::Substitute {
                            source_pos: col - 1,
                            target_pos: row - 1,
                            old: a[col - 1].clone(),
                            new: b[row - 1].clone(),
                        },
                    )
                } else if del <= ins {
                    (
                        here - 1,
                        EditOp::Delete {
                            source_pos: col - 1,
                            target_pos: row,
                            old: a[col - 1].clone(),
                        },
                    )
                } else {
                    (
                        here - cols,
                        EditOp::Insert {
                            source_pos: col,
                            target_pos: row - 1,
                            new: b[row - 1].clone(),
                        },
                    )
                };
                let mut script = cells[from].1.clone();
                script.push(op);
                cells.push((script.len(), script));
            }
        }
        Ok(OwnedScriptMatrix { cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.cells.len() / self.cols
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn edit_distance(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.cols + col].0
    }

    pub fn script(&self, row: usize, col: usize) -> EditScript {
        let ops = self.cells[row * self.cols + col].1.clone();
        EditScript::from_ordered_unchecked(ops, col, row)
    }

    pub fn total_instructions(&self) -> u64 {
        self.cells.iter().map(|c| c.1.len() as u64).sum()
    }
}
