//! Offset-min-sum flooding decoder and its hardware-shaped kernels.
//!
//! The kernels mirror the processing units of a partially parallel
//! quasi-cyclic decoder:
//!
//! * [`two_min`] — a 16-input two-minimum comparator built as a balanced
//!   tree reduction; wider rows are handled serially by feeding the previous
//!   result back as two extra inputs ([`row_two_min`]).
//! * [`cn_update`] — check-node update: extrinsic sign product and first or
//!   second minimum, with a subtractive offset clamped at zero.
//! * [`vn_update`] — variable-node update: saturating accumulation of the
//!   channel LLR and incoming check messages in base-row order; the outgoing
//!   message toward each check excludes that check's own contribution from
//!   the accumulation.
//! * [`evn_update`] — the degree-1 extension variable node: no accumulator
//!   and no feedback, its outgoing message is the channel LLR every
//!   iteration.
//!
//! One flooding iteration of [`decode`] is: all VN/EVN updates using the
//! previous iteration's check messages (zero before the first iteration),
//! all CN updates, then hard decisions from the end-of-iteration totals and
//! a syndrome check for early termination. Decoding is fully deterministic.

use crate::basegraph::ParityMatrix;
use crate::error::{Error, Result};
use crate::qllr::Qllr;

/// Comparator inputs per [`two_min`] call.
pub const TWO_MIN_INPUTS: usize = 16;

/// First and second minimum of a set of magnitudes, plus the lane of the
/// first minimum. Ties resolve to the lowest lane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoMinResult {
    pub min1: u8,
    pub min2: u8,
    pub idx: usize,
}

/// Sentinel for an empty subtree; larger than any real magnitude and never
/// observable for two or more inputs.
const NO_MAG: u8 = u8::MAX;

fn combine(a: TwoMinResult, b: TwoMinResult) -> TwoMinResult {
    // Ties keep `a`: its lanes are the lower ones.
    if b.min1 < a.min1 {
        TwoMinResult {
            min1: b.min1,
            min2: b.min2.min(a.min1),
            idx: b.idx,
        }
    } else {
        TwoMinResult {
            min1: a.min1,
            min2: a.min2.min(b.min1),
            idx: a.idx,
        }
    }
}

fn tree_reduce(mags: &[u8], base: usize) -> TwoMinResult {
    match mags.len() {
        1 => TwoMinResult {
            min1: mags[0],
            min2: NO_MAG,
            idx: base,
        },
        n => {
            let mid = n / 2;
            combine(
                tree_reduce(&mags[..mid], base),
                tree_reduce(&mags[mid..], base + mid),
            )
        }
    }
}

/// Balanced-tree two-minimum reduction over 2..=16 magnitudes.
pub fn two_min(mags: &[u8]) -> Result<TwoMinResult> {
    if mags.len() < 2 || mags.len() > TWO_MIN_INPUTS {
        return Err(Error::Dimension(format!(
            "two_min takes 2..={} inputs, got {}",
            TWO_MIN_INPUTS,
            mags.len()
        )));
    }
    Ok(tree_reduce(mags, 0))
}

/// Two-minimum search over a whole check row, of any degree >= 2.
///
/// Rows up to 16 wide use one comparator pass. Wider rows run serially: the
/// previous pass's `(min1, min2)` are fed back as the first two comparator
/// inputs ahead of up to 14 new values, and the winning index is mapped back
/// to the original lane. The fed-back `min2` lane can never win: it is
/// `>= min1`, and on a tie the lower lane (the fed-back `min1`) is kept.
pub fn row_two_min(mags: &[u8]) -> TwoMinResult {
    debug_assert!(mags.len() >= 2);
    if mags.len() <= TWO_MIN_INPUTS {
        return tree_reduce(mags, 0);
    }
    let mut acc = tree_reduce(&mags[..TWO_MIN_INPUTS], 0);
    let mut next = TWO_MIN_INPUTS;
    while next < mags.len() {
        let take = (mags.len() - next).min(TWO_MIN_INPUTS - 2);
        let chunk = &mags[next..next + take];
        let mut lanes = [0u8; TWO_MIN_INPUTS];
        lanes[0] = acc.min1;
        lanes[1] = acc.min2;
        lanes[2..2 + take].copy_from_slice(chunk);
        let pass = tree_reduce(&lanes[..2 + take], 0);
        let idx = match pass.idx {
            0 => acc.idx,
            1 => unreachable!("fed-back second minimum cannot win"),
            j => next + (j - 2),
        };
        acc = TwoMinResult {
            min1: pass.min1,
            min2: pass.min2,
            idx,
        };
        next += take;
    }
    acc
}

/// Check-node update for one expanded row: offset min-sum.
///
/// Lane `i` receives `sign * max(m_i - offset, 0)` where `m_i` is the second
/// minimum on the first-minimum lane and the first minimum elsewhere, and the
/// sign is the product of all input signs except lane `i`'s (zero counts as
/// positive).
pub fn cn_update(in_msgs: &[Qllr], offset_lsb: u8) -> Vec<Qllr> {
    let mut out = vec![Qllr::ZERO; in_msgs.len()];
    cn_update_into(in_msgs, offset_lsb, &mut out);
    out
}

/// In-place variant of [`cn_update`] for the decoder hot loop.
pub fn cn_update_into(in_msgs: &[Qllr], offset_lsb: u8, out: &mut [Qllr]) {
    let mut mags = Vec::with_capacity(in_msgs.len());
    cn_update_scratch(in_msgs, offset_lsb, out, &mut mags);
}

fn cn_update_scratch(in_msgs: &[Qllr], offset_lsb: u8, out: &mut [Qllr], mags: &mut Vec<u8>) {
    debug_assert!(in_msgs.len() >= 2);
    debug_assert_eq!(in_msgs.len(), out.len());
    mags.clear();
    let mut sign_all = false;
    for q in in_msgs {
        mags.push(q.magnitude());
        sign_all ^= q.is_negative();
    }
    let tm = row_two_min(mags);
    for (i, (q, o)) in in_msgs.iter().zip(out.iter_mut()).enumerate() {
        let m = if i == tm.idx { tm.min2 } else { tm.min1 };
        let mag = m.saturating_sub(offset_lsb);
        let negative = sign_all ^ q.is_negative();
        *o = Qllr::from_sign_mag(negative, mag);
    }
}

/// Variable-node update for a mother-code column.
///
/// `incoming` are the check messages addressed to this node, in base-row
/// order. The total is the saturating accumulation of the channel LLR and
/// all incoming messages in that order; the outgoing message toward check
/// `j` is the same accumulation with message `j` left out, so a degree-1
/// node degenerates exactly to [`evn_update`].
pub fn vn_update(channel: Qllr, incoming: &[Qllr]) -> (Qllr, Vec<Qllr>) {
    let total = saturating_sum(channel, incoming, usize::MAX);
    let outgoing = (0..incoming.len())
        .map(|skip| saturating_sum(channel, incoming, skip))
        .collect();
    (total, outgoing)
}

/// Saturating accumulation of `channel` and `msgs` in order, skipping index
/// `skip` (pass `usize::MAX` to include everything).
fn saturating_sum(channel: Qllr, msgs: &[Qllr], skip: usize) -> Qllr {
    let mut acc = channel;
    for (j, &m) in msgs.iter().enumerate() {
        if j != skip {
            acc = acc.saturating_add(m);
        }
    }
    acc
}

/// Extension variable-node update (degree-1 column).
///
/// Returns `(hard_bit, outgoing)`: the hard decision of the saturated sum of
/// channel and check message, and the outgoing message, which is the channel
/// LLR itself on every iteration (there is nothing to accumulate).
pub fn evn_update(channel: Qllr, cn_msg: Qllr) -> (bool, Qllr) {
    (channel.saturating_add(cn_msg).is_negative(), channel)
}

/// True iff every expanded parity row of `h` has even parity over `bits`.
pub fn syndrome_ok(bits: &[bool], h: &ParityMatrix) -> bool {
    assert_eq!(bits.len(), h.n_cols(), "hard-decision length mismatch");
    let z = h.z();
    for r in 0..h.mb() {
        let blocks = h.row_blocks(r);
        for i in 0..z {
            let mut parity = false;
            for b in blocks {
                parity ^= bits[b.col * z + (i + b.shift) % z];
            }
            if parity {
                return false;
            }
        }
    }
    true
}

/// Decoder knobs. Defaults follow the reference operating point: offset 0.5
/// (one LSB), 10 iterations, early termination on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeParams {
    pub max_iters: u32,
    /// Offset in LSB units (one LSB is an LLR of 0.5).
    pub offset_lsb: u8,
    pub early_termination: bool,
}

impl Default for DecodeParams {
    fn default() -> Self {
        DecodeParams {
            max_iters: 10,
            offset_lsb: 1,
            early_termination: true,
        }
    }
}

/// Result of decoding one frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutput {
    /// Hard decisions, one per codeword bit; `true` means bit 1.
    pub hard_bits: Vec<bool>,
    /// End-of-iteration total LLRs the hard decisions were taken from.
    pub totals: Vec<Qllr>,
    pub iterations_run: u32,
    /// True iff the returned hard decisions satisfy every parity check.
    pub converged: bool,
}

/// Per-frame working state: the channel LLRs and the check-to-variable
/// message memory, indexed by `(block, check lane)` exactly over the nonzero
/// blocks of the expanded matrix.
struct DecoderState {
    /// Check-to-variable messages from the previous iteration.
    c2v: Vec<Qllr>,
    /// Variable-to-check messages of the current iteration.
    v2c: Vec<Qllr>,
    totals: Vec<Qllr>,
    hard_bits: Vec<bool>,
}

impl DecoderState {
    fn new(h: &ParityMatrix) -> DecoderState {
        let edges = h.blocks().len() * h.z();
        DecoderState {
            c2v: vec![Qllr::ZERO; edges],
            v2c: vec![Qllr::ZERO; edges],
            totals: vec![Qllr::ZERO; h.n_cols()],
            hard_bits: vec![false; h.n_cols()],
        }
    }
}

fn validate_for_decode(llrs: &[Qllr], h: &ParityMatrix, params: &DecodeParams) -> Result<()> {
    if llrs.len() != h.n_cols() {
        return Err(Error::Dimension(format!(
            "expected {} channel LLRs, got {}",
            h.n_cols(),
            llrs.len()
        )));
    }
    if params.max_iters == 0 {
        return Err(Error::Config("max_iters must be at least 1".into()));
    }
    for r in 0..h.mb() {
        if h.row_blocks(r).len() < 2 {
            return Err(Error::Config(format!(
                "check row {r} has degree {} (< 2)",
                h.row_blocks(r).len()
            )));
        }
    }
    for c in h.extension_start_col()..h.n_base_cols() {
        if h.col_block_ids(c).len() != 1 {
            return Err(Error::Config(format!(
                "extension column {c} has degree {} (expected 1)",
                h.col_block_ids(c).len()
            )));
        }
    }
    Ok(())
}

/// Decodes one frame of channel LLRs (punctured positions already zero).
pub fn decode(llrs: &[Qllr], h: &ParityMatrix, params: &DecodeParams) -> Result<DecodeOutput> {
    validate_for_decode(llrs, h, params)?;
    let mut state = DecoderState::new(h);
    let z = h.z();
    let ext_start = h.extension_start_col();

    // Per check lane `i` of a block with shift `s`, the connected variable
    // lane is `(i + s) mod z`; per variable lane `t` the check lane is
    // `(t + z - s) mod z`.
    let max_row_degree = (0..h.mb()).map(|r| h.row_blocks(r).len()).max().unwrap_or(0);
    let mut iterations_run = 0;
    let mut converged = false;
    let mut incoming: Vec<Qllr> = Vec::with_capacity(max_row_degree);
    let mut row_in = vec![Qllr::ZERO; max_row_degree];
    let mut row_out = vec![Qllr::ZERO; max_row_degree];
    let mut row_mags: Vec<u8> = Vec::with_capacity(max_row_degree);

    for _ in 0..params.max_iters {
        // Variable-node phase: build v2c from the previous c2v.
        for c in 0..h.n_base_cols() {
            let ids = h.col_block_ids(c);
            if c >= ext_start {
                // EVN: outgoing is the channel LLR, every iteration.
                let b = h.blocks()[ids[0]];
                let base = ids[0] * z;
                for t in 0..z {
                    let i = (t + z - b.shift) % z;
                    state.v2c[base + i] = llrs[c * z + t];
                }
            } else {
                for t in 0..z {
                    let ch = llrs[c * z + t];
                    incoming.clear();
                    for &id in ids {
                        let b = h.blocks()[id];
                        incoming.push(state.c2v[id * z + (t + z - b.shift) % z]);
                    }
                    for (pos, &id) in ids.iter().enumerate() {
                        let b = h.blocks()[id];
                        let out = saturating_sum(ch, &incoming, pos);
                        state.v2c[id * z + (t + z - b.shift) % z] = out;
                    }
                }
            }
        }

        // Check-node phase.
        for r in 0..h.mb() {
            let range = h.row_block_range(r);
            let deg = range.len();
            for i in 0..z {
                for (k, id) in range.clone().enumerate() {
                    row_in[k] = state.v2c[id * z + i];
                }
                cn_update_scratch(
                    &row_in[..deg],
                    params.offset_lsb,
                    &mut row_out[..deg],
                    &mut row_mags,
                );
                for (k, id) in range.clone().enumerate() {
                    state.c2v[id * z + i] = row_out[k];
                }
            }
        }

        // End-of-iteration totals, hard decisions, syndrome.
        for c in 0..h.n_base_cols() {
            let ids = h.col_block_ids(c);
            for t in 0..z {
                let mut acc = llrs[c * z + t];
                for &id in ids {
                    let b = h.blocks()[id];
                    acc = acc.saturating_add(state.c2v[id * z + (t + z - b.shift) % z]);
                }
                state.totals[c * z + t] = acc;
                state.hard_bits[c * z + t] = acc.is_negative();
            }
        }
        iterations_run += 1;
        converged = syndrome_ok(&state.hard_bits, h);
        if converged && params.early_termination {
            break;
        }
    }

    Ok(DecodeOutput {
        hard_bits: state.hard_bits,
        totals: state.totals,
        iterations_run,
        converged,
    })
}

/// Decodes a batch of frames.
///
/// This is the functional model of multi-frame hardware operation: results
/// are bitwise identical to decoding each frame independently (the
/// throughput benefit of frame-level parallelism is modeled separately).
pub fn decode_batch(
    frames: &[Vec<Qllr>],
    h: &ParityMatrix,
    params: &DecodeParams,
) -> Result<Vec<DecodeOutput>> {
    frames.iter().map(|f| decode(f, h, params)).collect()
}
