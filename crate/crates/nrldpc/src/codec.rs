//! Systematic encoding and rate matching.
//!
//! A codeword is `[info | core parity | extension parity]`. The four core
//! parity blocks are found by solving the `4Z x 4Z` linear system formed by
//! base rows 0..3 over the core parity columns; the system is factored
//! (inverted) once per configuration with plain GF(2) Gaussian elimination
//! and reused for every frame. Each extension parity block then follows
//! directly from its row: the extension entry is an identity circulant, so
//! the parity bits equal the XOR of the row's other connections, all of which
//! land in the already-known first `(n_info + 4) * Z` bits.

use crate::basegraph::{CodeConfig, ParityMatrix, CORE_ROWS};
use crate::error::{Error, Result};
use crate::qllr::Qllr;

/// A full codeword, `(22 + mb) * Z` bits, satisfying `H * bits = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    bits: Vec<bool>,
}

impl Codeword {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// A transmitted frame: the codeword with its first `2Z` bits punctured.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxFrame {
    bits: Vec<bool>,
}

impl TxFrame {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Drops the first `2Z` (always punctured) bits of a codeword.
pub fn puncture(c: &Codeword, cfg: &CodeConfig) -> TxFrame {
    TxFrame {
        bits: c.bits[2 * cfg.z..].to_vec(),
    }
}

/// Reinserts the punctured positions as zero LLRs (perfect erasures) in front
/// of the received values.
pub fn depuncture_llrs(rx: &[Qllr], cfg: &CodeConfig) -> Result<Vec<Qllr>> {
    let lengths = cfg.lengths();
    if rx.len() != lengths.n_tx {
        return Err(Error::Dimension(format!(
            "expected {} received LLRs, got {}",
            lengths.n_tx,
            rx.len()
        )));
    }
    let mut out = vec![Qllr::ZERO; lengths.n_code];
    out[2 * cfg.z..].copy_from_slice(rx);
    Ok(out)
}

/// A reusable systematic encoder for one expanded parity-check matrix.
pub struct Encoder {
    z: usize,
    k: usize,
    n_code: usize,
    core_cols_start: usize,
    /// Inverse of the core parity system, row-major bit rows.
    core_inv: BitMatrix,
}

impl Encoder {
    /// Factors the core parity system of `h`. Fails if the system is
    /// singular or if a core row reaches past the core parity columns.
    pub fn new(h: &ParityMatrix) -> Result<Encoder> {
        let z = h.z();
        let n_info = h.n_info_cols();
        let core_dim = CORE_ROWS * z;
        let core_cols_start = n_info * z;

        let mut core = BitMatrix::zero(core_dim, core_dim);
        for r in 0..CORE_ROWS {
            for b in h.row_blocks(r) {
                if b.col >= n_info + CORE_ROWS {
                    return Err(Error::Setup(format!(
                        "core row {} touches extension column {}",
                        b.row, b.col
                    )));
                }
                if b.col >= n_info {
                    for i in 0..z {
                        core.set(r * z + i, (b.col - n_info) * z + (i + b.shift) % z);
                    }
                }
            }
        }
        let core_inv = core.inverse().ok_or_else(|| {
            Error::Setup(format!("singular {core_dim}x{core_dim} core parity system"))
        })?;
        Ok(Encoder {
            z,
            k: core_cols_start,
            n_code: h.n_cols(),
            core_cols_start,
            core_inv,
        })
    }

    /// Encodes `info` (length `n_info_cols * Z`) into a codeword of `h`.
    pub fn encode(&self, info: &[bool], h: &ParityMatrix) -> Result<Codeword> {
        if info.len() != self.k {
            return Err(Error::Dimension(format!(
                "expected {} information bits, got {}",
                self.k,
                info.len()
            )));
        }
        let z = self.z;
        let n_info = h.n_info_cols();
        let mut bits = vec![false; self.n_code];
        bits[..self.k].copy_from_slice(info);

        // Right-hand side of the core system: the info contribution of rows 0..3.
        let core_dim = CORE_ROWS * z;
        let mut rhs = BitVector::zero(core_dim);
        for r in 0..CORE_ROWS {
            for b in h.row_blocks(r).iter().filter(|b| b.col < n_info) {
                for i in 0..z {
                    if bits[b.col * z + (i + b.shift) % z] {
                        rhs.flip(r * z + i);
                    }
                }
            }
        }
        let parity = self.core_inv.mul_vector(&rhs);
        for i in 0..core_dim {
            bits[self.core_cols_start + i] = parity.get(i);
        }

        // Extension parity: row r's identity entry sits at column n_info + r,
        // so its parity block is the XOR of the row's other connections.
        for r in CORE_ROWS..h.mb() {
            for b in h
                .row_blocks(r)
                .iter()
                .filter(|b| b.col < n_info + CORE_ROWS)
            {
                for i in 0..z {
                    bits[(n_info + r) * z + i] ^= bits[b.col * z + (i + b.shift) % z];
                }
            }
        }
        Ok(Codeword { bits })
    }
}

/// Dense bit matrix over GF(2), rows packed into `u64` words.
struct BitMatrix {
    n_cols: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    fn zero(n_rows: usize, n_cols: usize) -> BitMatrix {
        let words_per_row = n_cols.div_ceil(64);
        BitMatrix {
            n_cols,
            words_per_row,
            rows: vec![0; n_rows * words_per_row],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.rows[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        (self.rows[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.rows[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words_per_row;
        let (src_off, dst_off) = (src * w, dst * w);
        for j in 0..w {
            let v = self.rows[src_off + j];
            self.rows[dst_off + j] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for j in 0..w {
            self.rows.swap(a * w + j, b * w + j);
        }
    }

    /// Gauss-Jordan inverse; `None` when singular. Only for square matrices.
    fn inverse(&self) -> Option<BitMatrix> {
        let n = self.n_cols;
        let mut work = BitMatrix {
            n_cols: self.n_cols,
            words_per_row: self.words_per_row,
            rows: self.rows.clone(),
        };
        let mut inv = BitMatrix::zero(n, n);
        for i in 0..n {
            inv.set(i, i);
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.get(r, col))?;
            work.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            for r in 0..n {
                if r != col && work.get(r, col) {
                    work.xor_row_into(col, r);
                    inv.xor_row_into(col, r);
                }
            }
        }
        Some(inv)
    }

    fn mul_vector(&self, v: &BitVector) -> BitVector {
        let n_rows = self.rows.len() / self.words_per_row;
        let mut out = BitVector::zero(n_rows);
        for r in 0..n_rows {
            let dot = self
                .row(r)
                .iter()
                .zip(&v.words)
                .fold(0u64, |acc, (a, b)| acc ^ (a & b));
            if dot.count_ones() % 2 == 1 {
                out.flip(r);
            }
        }
        out
    }
}

struct BitVector {
    words: Vec<u64>,
}

impl BitVector {
    fn zero(n: usize) -> BitVector {
        BitVector {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }
}
