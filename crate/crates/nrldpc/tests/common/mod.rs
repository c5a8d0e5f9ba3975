//! Shared test oracles, kept independent of the production code paths they
//! check: a dense flooding reference decoder built straight from the base
//! graph, brute-force kernel references, and synthetic base-graph
//! generators.

#![allow(dead_code)]

use nrldpc::basegraph::{BaseGraph, BaseGraphEntry, CodeConfig};
use nrldpc::qllr::Qllr;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

pub const QMAX: i32 = 15;

/// Two-pass scan reference for the two-minimum comparator: global minimum
/// with lowest tying lane, then the minimum over the remaining lanes.
pub fn naive_two_min(mags: &[u8]) -> (u8, u8, usize) {
    let mut idx = 0;
    for (i, &m) in mags.iter().enumerate() {
        if m < mags[idx] {
            idx = i;
        }
    }
    let min2 = mags
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, &m)| m)
        .min()
        .expect("reference needs at least two lanes");
    (mags[idx], min2, idx)
}

/// Per-lane brute-force offset min-sum: no shared two-minimum search, each
/// output scans every other lane directly.
pub fn brute_cn_update(msgs: &[i32], offset: i32) -> Vec<i32> {
    (0..msgs.len())
        .map(|i| {
            let mut min = i32::MAX;
            let mut negative = false;
            for (j, &m) in msgs.iter().enumerate() {
                if j != i {
                    min = min.min(m.abs());
                    negative ^= m < 0;
                }
            }
            let mag = (min - offset).max(0);
            if negative {
                -mag
            } else {
                mag
            }
        })
        .collect()
}

fn sat(x: i32) -> i32 {
    x.clamp(-QMAX, QMAX)
}

/// Dense, block-free reference implementation of the quantized offset
/// min-sum flooding decoder. Works on an explicitly expanded dense matrix
/// with plain `i32` arithmetic and per-step clamping.
pub struct ReferenceDecoder {
    n_rows: usize,
    n_cols: usize,
    /// Dense row supports, ascending column order.
    rows: Vec<Vec<usize>>,
    /// Per column: connected rows, ascending.
    cols: Vec<Vec<usize>>,
}

pub struct ReferenceOutput {
    pub hard_bits: Vec<bool>,
    pub totals: Vec<i32>,
    pub iterations_run: u32,
    pub converged: bool,
}

impl ReferenceDecoder {
    /// Expands `bg` densely from the circulant definition:
    /// row `r*z + i` connects column `c*z + (i + s) mod z`.
    pub fn from_graph(bg: &BaseGraph, cfg: &CodeConfig) -> ReferenceDecoder {
        let z = cfg.z;
        let n_rows = cfg.mb * z;
        let n_cols = (bg.n_info_cols() + cfg.mb) * z;
        let mut dense = vec![vec![false; n_cols]; n_rows];
        for e in bg.entries() {
            if e.row < cfg.mb && e.col < bg.n_info_cols() + cfg.mb {
                let s = e.shifts[cfg.lifting_set] as usize % z;
                for i in 0..z {
                    dense[e.row * z + i][e.col * z + (i + s) % z] = true;
                }
            }
        }
        let rows: Vec<Vec<usize>> = dense
            .iter()
            .map(|row| (0..n_cols).filter(|&c| row[c]).collect())
            .collect();
        let mut cols = vec![Vec::new(); n_cols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        ReferenceDecoder {
            n_rows,
            n_cols,
            rows,
            cols,
        }
    }

    pub fn syndrome_ok(&self, bits: &[bool]) -> bool {
        self.rows
            .iter()
            .all(|row| !row.iter().fold(false, |acc, &c| acc ^ bits[c]))
    }

    pub fn decode(
        &self,
        llrs: &[i32],
        max_iters: u32,
        offset: i32,
        early_termination: bool,
    ) -> ReferenceOutput {
        assert_eq!(llrs.len(), self.n_cols);
        // Messages indexed densely by (row, col).
        let mut c2v = vec![vec![0i32; self.n_cols]; self.n_rows];
        let mut v2c = vec![vec![0i32; self.n_cols]; self.n_rows];
        let mut totals = vec![0i32; self.n_cols];
        let mut hard = vec![false; self.n_cols];
        let mut iterations_run = 0;
        let mut converged = false;

        for _ in 0..max_iters {
            // Variable nodes: saturated exclusion sums, channel first, then
            // messages in ascending row order.
            for c in 0..self.n_cols {
                for &skip in &self.cols[c] {
                    let mut acc = llrs[c];
                    for &r in &self.cols[c] {
                        if r != skip {
                            acc = sat(acc + c2v[r][c]);
                        }
                    }
                    v2c[skip][c] = acc;
                }
            }
            // Check nodes: per-lane brute force.
            for r in 0..self.n_rows {
                for &c in &self.rows[r] {
                    let mut min = i32::MAX;
                    let mut negative = false;
                    for &other in &self.rows[r] {
                        if other != c {
                            min = min.min(v2c[r][other].abs());
                            negative ^= v2c[r][other] < 0;
                        }
                    }
                    let mag = (min - offset).max(0);
                    c2v[r][c] = if negative { -mag } else { mag };
                }
            }
            // End-of-iteration totals and hard decisions.
            for c in 0..self.n_cols {
                let mut acc = llrs[c];
                for &r in &self.cols[c] {
                    acc = sat(acc + c2v[r][c]);
                }
                totals[c] = acc;
                hard[c] = acc < 0;
            }
            iterations_run += 1;
            converged = self.syndrome_ok(&hard);
            if converged && early_termination {
                break;
            }
        }
        ReferenceOutput {
            hard_bits: hard,
            totals,
            iterations_run,
            converged,
        }
    }
}

/// Random small base graph with the same structural shape as BG1: four core
/// rows with a lower-triangular parity part (always invertible), optional
/// identity-extension rows, and check degrees of at least two everywhere.
pub fn synthetic_graph(rng: &mut ChaCha12Rng, extension_rows: usize) -> (BaseGraph, CodeConfig) {
    let n_info = rng.random_range(2..=3usize);
    let mb = 4 + extension_rows;
    let n_cols = n_info + mb;
    let z = rng.random_range(1..=6usize);
    let mut entries = Vec::new();
    let mut push = |row: usize, col: usize, shift: u32| {
        entries.push(BaseGraphEntry {
            row,
            col,
            shifts: vec![shift],
        });
    };

    for r in 0..4 {
        // One or two info connections keep every core row at degree >= 2.
        push(r, r % n_info, rng.random_range(0..12));
        if rng.random_bool(0.6) && n_info > 1 {
            push(r, (r + 1) % n_info, rng.random_range(0..12));
        }
        // Lower-triangular core parity with a random diagonal shift.
        push(r, n_info + r, rng.random_range(0..12));
        for q in 0..r {
            if rng.random_bool(0.4) {
                push(r, n_info + q, rng.random_range(0..12));
            }
        }
    }
    for e in 0..extension_rows {
        let r = 4 + e;
        push(r, rng.random_range(0..n_info), rng.random_range(0..12));
        if rng.random_bool(0.5) {
            push(r, n_info + rng.random_range(0..4), rng.random_range(0..12));
        }
        // Identity extension entry.
        push(r, n_info + r, 0);
    }

    let bg = BaseGraph::from_entries(mb, n_cols, n_info, entries).expect("synthetic graph");
    (
        bg,
        CodeConfig {
            z,
            mb,
            lifting_set: 0,
        },
    )
}

/// Random quantized LLR vector.
pub fn random_llrs(n: usize, rng: &mut ChaCha12Rng) -> Vec<Qllr> {
    (0..n)
        .map(|_| Qllr::saturating_from(rng.random_range(-QMAX..=QMAX)))
        .collect()
}
