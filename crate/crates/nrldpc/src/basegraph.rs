//! Quasi-cyclic base graph loading, validation, and lifting.
//!
//! A base graph is a small prototype matrix whose non-null entries carry
//! circulant shift coefficients. Lifting by a factor `Z` replaces every entry
//! with the `Z x Z` circulant `P^s`, where `P^s(i, j) = 1` iff
//! `j = (i + s) mod Z` (the identity rotated right by `s`). The same
//! convention is used by the shift-network model, so rotating a block of
//! variable-node messages by an entry's coefficient aligns them with the
//! check-node lanes.
//!
//! The shipped table (`data/nr_bg1.txt`) is the 5G NR base graph 1: 46 rows,
//! 68 columns, 22 information columns, with eight shift coefficients per
//! entry (one per standard lifting set). Rows 4..45 each carry exactly one
//! entry in the extension columns 26..67, on the diagonal and with shift 0,
//! which is what makes single-connection extension variable nodes and
//! prefix-truncation rate selection work.

use std::io::BufRead;

use crate::error::{Error, Result};

/// Number of rows in base graph 1.
pub const BG1_ROWS: usize = 46;
/// Number of columns in base graph 1.
pub const BG1_COLS: usize = 68;
/// Number of information columns in base graph 1.
pub const BG1_INFO_COLS: usize = 22;
/// Core parity columns (the high-rate mother code is `4 x 26`).
pub const CORE_ROWS: usize = 4;
/// Largest supported lifting size.
pub const Z_MAX: usize = 96;
/// Number of shift-coefficient sets in the standard table.
pub const LIFTING_SETS: usize = 8;

/// One non-null base matrix cell and its shift coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraphEntry {
    pub row: usize,
    pub col: usize,
    /// One shift per lifting set; a single-element list when the source file
    /// carries only one set.
    pub shifts: Vec<u32>,
}

/// An immutable, validated base graph.
#[derive(Debug, Clone)]
pub struct BaseGraph {
    n_rows: usize,
    n_cols: usize,
    n_info_cols: usize,
    n_shift_sets: usize,
    /// Sorted by `(row, col)`; at most one entry per cell.
    entries: Vec<BaseGraphEntry>,
    /// `row_start[r]..row_start[r + 1]` indexes `entries` of base row `r`.
    row_start: Vec<usize>,
}

/// Outcome of one named validation rule, as printed by `validate`.
#[derive(Debug, Clone)]
pub struct RuleCheck {
    pub rule: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl BaseGraph {
    /// Parses and validates a base graph 1 table.
    ///
    /// The format is line oriented: `# comment` lines and blank lines are
    /// skipped, data lines are `row col shift [shift ...]` with 1 or 8 shift
    /// columns, whitespace separated. Duplicate cells and any violation of
    /// the BG1 structural rules are rejected.
    pub fn load_bg1(reader: impl BufRead) -> Result<BaseGraph> {
        let entries = parse_bg_table(reader)?;
        let bg = BaseGraph::from_entries(BG1_ROWS, BG1_COLS, BG1_INFO_COLS, entries)?;
        for check in bg.bg1_invariant_report() {
            if !check.passed {
                return Err(Error::Validation {
                    rule: check.rule,
                    detail: check.detail,
                });
            }
        }
        Ok(bg)
    }

    /// Loads the base graph 1 table shipped with the crate.
    pub fn bg1() -> BaseGraph {
        static TABLE: &str = include_str!("../data/nr_bg1.txt");
        BaseGraph::load_bg1(TABLE.as_bytes()).expect("shipped BG1 table is valid")
    }

    /// Builds a base graph with arbitrary dimensions.
    ///
    /// Only generic rules are enforced (index bounds, duplicate cells,
    /// consistent shift-set count); the BG1 structural rules are not. This is
    /// the entry point for small synthetic graphs in tests and for loading
    /// other quasi-cyclic tables such as base graph 2.
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        n_info_cols: usize,
        mut entries: Vec<BaseGraphEntry>,
    ) -> Result<BaseGraph> {
        if n_rows == 0 || n_cols == 0 || n_info_cols == 0 || n_info_cols >= n_cols {
            return Err(Error::Config(format!(
                "bad base graph dimensions {n_rows}x{n_cols} ({n_info_cols} info columns)"
            )));
        }
        let n_shift_sets = entries.first().map_or(1, |e| e.shifts.len());
        for e in &entries {
            if e.row >= n_rows {
                return Err(Error::Validation {
                    rule: "row index range",
                    detail: format!("entry ({}, {}) exceeds {} rows", e.row, e.col, n_rows),
                });
            }
            if e.col >= n_cols {
                return Err(Error::Validation {
                    rule: "column index range",
                    detail: format!("entry ({}, {}) exceeds {} columns", e.row, e.col, n_cols),
                });
            }
            if e.shifts.is_empty() || e.shifts.len() != n_shift_sets {
                return Err(Error::Validation {
                    rule: "shift set count",
                    detail: format!(
                        "entry ({}, {}) has {} shift values, expected {}",
                        e.row,
                        e.col,
                        e.shifts.len(),
                        n_shift_sets
                    ),
                });
            }
        }
        entries.sort_by_key(|e| (e.row, e.col));
        if let Some(w) = entries.windows(2).find(|w| {
            let (a, b) = (&w[0], &w[1]);
            a.row == b.row && a.col == b.col
        }) {
            return Err(Error::Validation {
                rule: "duplicate entry",
                detail: format!("cell ({}, {}) appears more than once", w[0].row, w[0].col),
            });
        }
        let mut row_start = vec![0usize; n_rows + 1];
        for e in &entries {
            row_start[e.row + 1] += 1;
        }
        for r in 0..n_rows {
            row_start[r + 1] += row_start[r];
        }
        Ok(BaseGraph {
            n_rows,
            n_cols,
            n_info_cols,
            n_shift_sets,
            entries,
            row_start,
        })
    }

    /// Runs every BG1 structural rule and reports each outcome. Used both by
    /// [`BaseGraph::load_bg1`] (first failure becomes the error) and by the
    /// `validate` CLI subcommand (all outcomes are printed).
    pub fn bg1_invariant_report(&self) -> Vec<RuleCheck> {
        let mut checks = Vec::new();
        let mut push = |rule: &'static str, passed: bool, detail: String| {
            checks.push(RuleCheck {
                rule,
                passed,
                detail,
            })
        };

        let dims_ok =
            self.n_rows == BG1_ROWS && self.n_cols == BG1_COLS && self.n_info_cols == BG1_INFO_COLS;
        push(
            "dimensions",
            dims_ok,
            format!(
                "{}x{} with {} info columns (expected {}x{} with {})",
                self.n_rows, self.n_cols, self.n_info_cols, BG1_ROWS, BG1_COLS, BG1_INFO_COLS
            ),
        );
        if !dims_ok {
            return checks;
        }

        let ext_cols = (BG1_INFO_COLS + CORE_ROWS)..BG1_COLS;

        // Core rows stay inside the mother code.
        let mut offenders = Vec::new();
        for e in self.entries.iter().filter(|e| e.row < CORE_ROWS) {
            if ext_cols.contains(&e.col) {
                offenders.push((e.row, e.col));
            }
        }
        push(
            "core rows extension-free",
            offenders.is_empty(),
            if offenders.is_empty() {
                "rows 0..3 have no entries in columns 26..67".into()
            } else {
                format!("core rows reach extension columns at {offenders:?}")
            },
        );

        // Every extension row carries exactly one extension entry...
        let mut degree_bad = Vec::new();
        let mut position_bad = Vec::new();
        let mut shift_bad = Vec::new();
        for r in CORE_ROWS..BG1_ROWS {
            let ext: Vec<_> = self
                .row_entries(r)
                .iter()
                .filter(|e| ext_cols.contains(&e.col))
                .collect();
            if ext.len() != 1 {
                degree_bad.push((r, ext.len()));
                continue;
            }
            // ...on the staircase diagonal...
            if ext[0].col != BG1_INFO_COLS + r {
                position_bad.push((r, ext[0].col));
            }
            // ...with shift zero, so the expansion is an identity block.
            if ext[0].shifts.iter().any(|&s| s != 0) {
                shift_bad.push((r, ext[0].shifts.clone()));
            }
        }
        push(
            "extension row degree",
            degree_bad.is_empty(),
            if degree_bad.is_empty() {
                "rows 4..45 each have exactly one entry in columns 26..67".into()
            } else {
                format!("rows with wrong extension degree: {degree_bad:?}")
            },
        );
        push(
            "extension column position",
            position_bad.is_empty(),
            if position_bad.is_empty() {
                "each extension entry of row r sits at column 22 + r".into()
            } else {
                format!("misplaced extension entries: {position_bad:?}")
            },
        );
        push(
            "extension shift zero",
            shift_bad.is_empty(),
            if shift_bad.is_empty() {
                "every extension entry has shift 0 in all lifting sets".into()
            } else {
                format!("nonzero extension shifts: {shift_bad:?}")
            },
        );
        checks
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn n_info_cols(&self) -> usize {
        self.n_info_cols
    }

    pub fn n_shift_sets(&self) -> usize {
        self.n_shift_sets
    }

    pub fn entries(&self) -> &[BaseGraphEntry] {
        &self.entries
    }

    /// Entries of base row `r`, sorted by column.
    pub fn row_entries(&self, r: usize) -> &[BaseGraphEntry] {
        &self.entries[self.row_start[r]..self.row_start[r + 1]]
    }

    /// Expands the base graph into the binary parity-check matrix selected by
    /// `cfg`: base rows `0..mb` over base columns `0..n_info_cols + mb`, each
    /// entry becoming the circulant `P^(shift mod Z)`.
    pub fn expand(&self, cfg: &CodeConfig) -> Result<ParityMatrix> {
        cfg.validate()?;
        if cfg.mb > self.n_rows {
            return Err(Error::Config(format!(
                "mb = {} exceeds the {} base rows",
                cfg.mb, self.n_rows
            )));
        }
        if cfg.lifting_set >= self.n_shift_sets {
            return Err(Error::Config(format!(
                "lifting set {} out of range (table has {})",
                cfg.lifting_set, self.n_shift_sets
            )));
        }
        let n_base_cols = self.n_info_cols + cfg.mb;
        if n_base_cols > self.n_cols {
            return Err(Error::Config(format!(
                "mb = {} needs {} base columns but the graph has {}",
                cfg.mb, n_base_cols, self.n_cols
            )));
        }
        let z = cfg.z;
        let mut blocks = Vec::new();
        let mut row_start = vec![0usize; cfg.mb + 1];
        for r in 0..cfg.mb {
            for e in self.row_entries(r) {
                if e.col < n_base_cols {
                    blocks.push(Block {
                        row: r,
                        col: e.col,
                        shift: e.shifts[cfg.lifting_set] as usize % z,
                    });
                }
            }
            row_start[r + 1] = blocks.len();
        }
        let mut col_blocks = vec![Vec::new(); n_base_cols];
        for (i, b) in blocks.iter().enumerate() {
            col_blocks[b.col].push(i);
        }
        Ok(ParityMatrix {
            z,
            mb: cfg.mb,
            n_info_cols: self.n_info_cols,
            n_base_cols,
            blocks,
            row_start,
            col_blocks,
        })
    }
}

/// Parses the text table format into raw entries (no structural validation).
pub fn parse_bg_table(reader: impl BufRead) -> Result<Vec<BaseGraphEntry>> {
    let mut entries = Vec::new();
    let mut n_shifts = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() < 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected `row col shift [shift ...]`, got {} fields",
                    fields.len()
                ),
            });
        }
        let parse = |s: &str, what: &str| -> Result<u32> {
            s.parse::<u32>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad {what} `{s}`"),
            })
        };
        let row = parse(fields[0], "row index")? as usize;
        let col = parse(fields[1], "column index")? as usize;
        let shifts = fields[2..]
            .iter()
            .map(|s| parse(s, "shift"))
            .collect::<Result<Vec<u32>>>()?;
        if shifts.len() != 1 && shifts.len() != LIFTING_SETS {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected 1 or {} shift values, got {}",
                    LIFTING_SETS,
                    shifts.len()
                ),
            });
        }
        match n_shifts {
            None => n_shifts = Some(shifts.len()),
            Some(n) if n != shifts.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!(
                        "{} shift values but earlier lines carry {}",
                        shifts.len(),
                        n
                    ),
                });
            }
            _ => {}
        }
        entries.push(BaseGraphEntry { row, col, shifts });
    }
    Ok(entries)
}

/// Code mode: lifting size, number of parity rows, and shift-set selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeConfig {
    /// Lifting size, `1..=96`.
    pub z: usize,
    /// Number of base parity rows in use, `4..=46`. `mb = 4` is the mother
    /// code (rate 11/12); `mb = 46` is the full graph (rate 1/3).
    pub mb: usize,
    /// Which shift column of the table to use.
    pub lifting_set: usize,
}

/// Lengths and rate derived from a [`CodeConfig`] for base graph 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeLengths {
    /// Information bits per frame, `22 * Z`.
    pub k: usize,
    /// Codeword bits, `(22 + mb) * Z`.
    pub n_code: usize,
    /// Transmitted bits after puncturing the first `2 * Z`, `(20 + mb) * Z`.
    pub n_tx: usize,
    /// Transmitted code rate, `22 / (20 + mb)`.
    pub rate: f64,
}

impl CodeConfig {
    /// Builds a configuration with an explicit lifting set.
    pub fn new(z: usize, mb: usize, lifting_set: usize) -> Result<CodeConfig> {
        let cfg = CodeConfig { z, mb, lifting_set };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a configuration using the standard lifting set for `z`
    /// (see [`standard_lifting_set`]).
    pub fn with_standard_set(z: usize, mb: usize) -> Result<CodeConfig> {
        let set = standard_lifting_set(z).ok_or_else(|| {
            Error::Config(format!(
                "Z = {z} is not a standard lifting size; pass an explicit lifting set"
            ))
        })?;
        CodeConfig::new(z, mb, set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.z == 0 || self.z > Z_MAX {
            return Err(Error::Config(format!(
                "lifting size Z = {} out of range 1..={}",
                self.z, Z_MAX
            )));
        }
        if !(CORE_ROWS..=BG1_ROWS).contains(&self.mb) {
            return Err(Error::Config(format!(
                "mb = {} out of range {}..={}",
                self.mb, CORE_ROWS, BG1_ROWS
            )));
        }
        if self.lifting_set >= LIFTING_SETS {
            return Err(Error::Config(format!(
                "lifting set {} out of range 0..{}",
                self.lifting_set, LIFTING_SETS
            )));
        }
        Ok(())
    }

    /// Derived frame lengths and rate (see [`CodeLengths`]).
    pub fn lengths(&self) -> CodeLengths {
        CodeLengths {
            k: BG1_INFO_COLS * self.z,
            n_code: (BG1_INFO_COLS + self.mb) * self.z,
            n_tx: (BG1_INFO_COLS - 2 + self.mb) * self.z,
            rate: BG1_INFO_COLS as f64 / (BG1_INFO_COLS - 2 + self.mb) as f64,
        }
    }
}

/// Maps a transmitted-rate alias like `11/12`, `1/2`, or `1/3` to `mb` via
/// `rate = 22 / (20 + mb)`.
pub fn mb_for_rate(num: u32, den: u32) -> Result<usize> {
    if num == 0 || den == 0 {
        return Err(Error::Config("rate must be a positive fraction".into()));
    }
    // mb = 22 * den / num - 20, if it divides exactly.
    let scaled = 22 * den as u64;
    if !scaled.is_multiple_of(num as u64) {
        return Err(Error::Config(format!(
            "rate {num}/{den} is not of the form 22/(20+mb)"
        )));
    }
    let total = scaled / num as u64;
    if total < 20 + CORE_ROWS as u64 || total > 20 + BG1_ROWS as u64 {
        return Err(Error::Config(format!(
            "rate {num}/{den} maps outside mb range 4..=46"
        )));
    }
    Ok((total - 20) as usize)
}

/// The standard lifting-set index for a lifting size, if `z` belongs to one
/// of the eight sets (`z = a * 2^j` with `a` in 2, 3, 5, 7, 9, 11, 13, 15).
pub fn standard_lifting_set(z: usize) -> Option<usize> {
    if !(2..=384).contains(&z) {
        return None;
    }
    let odd = z >> z.trailing_zeros();
    let a = if odd == 1 { 2 } else { odd };
    [2, 3, 5, 7, 9, 11, 13, 15].iter().position(|&x| x == a)
}

/// One lifted circulant block of the expanded matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    /// Base row index.
    pub row: usize,
    /// Base column index.
    pub col: usize,
    /// Shift coefficient already reduced mod Z.
    pub shift: usize,
}

/// The expanded sparse binary parity-check matrix.
///
/// Storage is by circulant block: expanded row `r * Z + i` has a one in
/// column `c * Z + (i + s) mod Z` for every block `(r, c, s)`. The matrix is
/// immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct ParityMatrix {
    z: usize,
    mb: usize,
    n_info_cols: usize,
    n_base_cols: usize,
    blocks: Vec<Block>,
    /// `row_start[r]..row_start[r + 1]` indexes `blocks` of base row `r`.
    row_start: Vec<usize>,
    /// Per base column: indices into `blocks`, ascending by base row.
    col_blocks: Vec<Vec<usize>>,
}

impl ParityMatrix {
    pub fn z(&self) -> usize {
        self.z
    }

    pub fn mb(&self) -> usize {
        self.mb
    }

    pub fn n_info_cols(&self) -> usize {
        self.n_info_cols
    }

    /// Number of base columns in use (`n_info_cols + mb`).
    pub fn n_base_cols(&self) -> usize {
        self.n_base_cols
    }

    /// Expanded row count, `mb * Z`.
    pub fn n_rows(&self) -> usize {
        self.mb * self.z
    }

    /// Expanded column count, `(n_info_cols + mb) * Z`.
    pub fn n_cols(&self) -> usize {
        self.n_base_cols * self.z
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Blocks of base row `r`, ascending by base column.
    pub fn row_blocks(&self, r: usize) -> &[Block] {
        &self.blocks[self.row_start[r]..self.row_start[r + 1]]
    }

    /// Indices into [`ParityMatrix::blocks`] covered by base row `r`.
    pub fn row_block_range(&self, r: usize) -> std::ops::Range<usize> {
        self.row_start[r]..self.row_start[r + 1]
    }

    /// Block indices touching base column `c`, ascending by base row.
    pub fn col_block_ids(&self, c: usize) -> &[usize] {
        &self.col_blocks[c]
    }

    /// Column indices with a one in expanded row `row`, ascending.
    pub fn expanded_row_cols(&self, row: usize) -> Vec<usize> {
        let (r, i) = (row / self.z, row % self.z);
        self.row_blocks(r)
            .iter()
            .map(|b| b.col * self.z + (i + b.shift) % self.z)
            .collect()
    }

    /// First extension column (variable nodes from here on have degree 1).
    pub fn extension_start_col(&self) -> usize {
        self.n_info_cols + CORE_ROWS
    }
}
