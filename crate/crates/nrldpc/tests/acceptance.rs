//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use common::{
    brute_cn_update, naive_two_min, random_llrs, synthetic_graph, ReferenceDecoder, QMAX,
};
use nrldpc::basegraph::{BaseGraph, CodeConfig};
use nrldpc::channel::{
    add_noise_with, frame_rng, llr, modulate, quantize_all, ChannelParams, GaussianSource,
};
use nrldpc::codec::{depuncture_llrs, puncture, Encoder};
use nrldpc::decoder::{
    cn_update, decode, decode_batch, evn_update, two_min, vn_update, DecodeParams,
};
use nrldpc::perfmodel::{
    frames_in_flight, throughput_bps, throughput_vs_z, BitsConvention, PerfParams,
};
use nrldpc::qllr::Qllr;
use nrldpc::shiftnet::{
    banyan_variant_shift, cyclic_shift_oracle, partitioned_shift, PartitionMode, ShiftConfig,
};
use nrldpc::sweep::{emit_csv, run_sweep, SweepConfig, SweepPoint};
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

/// Runs one criterion and prints its verdict.
fn criterion(name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(msg) => {
            println!("acceptance {name}: FAIL ({msg})");
            panic!("acceptance {name} failed: {msg}");
        }
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

#[test]
fn criterion_1_throughput_reproduction() {
    criterion("1 (throughput reproduction)", || {
        let synth = throughput_bps(&PerfParams::new(526e6, 2304)).map_err(|e| e.to_string())?;
        ensure(
            (synth / 13.46e9 - 1.0).abs() <= 1e-3,
            format!("526 MHz point gives {synth} bps, want 13.46 Gbps within 0.1%"),
        )?;
        let fpga = throughput_bps(&PerfParams::new(82e6, 2304)).map_err(|e| e.to_string())?;
        ensure(
            (fpga / 2.10e9 - 1.0).abs() <= 1e-2,
            format!("82 MHz point gives {fpga} bps, want 2.10 Gbps within 1%"),
        )
    });
}

#[test]
fn criterion_2_throughput_restoration() {
    criterion("2 (throughput restoration)", || {
        let base = PerfParams::new(526e6, 1);
        let rows = throughput_vs_z(&base, 4, BitsConvention::Tx, &[96, 48, 24])
            .map_err(|e| e.to_string())?;
        let full = rows[0].multi_bps;
        for (row, want_parallel, want_in_flight) in
            [(&rows[0], 1, 2), (&rows[1], 2, 4), (&rows[2], 4, 8)]
        {
            ensure(
                row.frames_parallel == want_parallel,
                format!(
                    "Z = {} picked {} parallel frames",
                    row.z, row.frames_parallel
                ),
            )?;
            ensure(
                row.multi_bps == full,
                format!(
                    "Z = {} restores {} bps, full width gives {}",
                    row.z, row.multi_bps, full
                ),
            )?;
            let p = PerfParams {
                frames_parallel: row.frames_parallel,
                bits_per_frame: row.bits_per_frame,
                ..base
            };
            ensure(
                frames_in_flight(&p) == want_in_flight,
                format!(
                    "Z = {} holds {} frames in flight",
                    row.z,
                    frames_in_flight(&p)
                ),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_3_shift_network_equivalence() {
    criterion("3 (shift-network equivalence)", || {
        let mut rng = ChaCha12Rng::seed_from_u64(0x5317);
        let mut cases = 0u32;
        for z in 1..=96usize {
            for sv in 0..z {
                let data: Vec<u32> = (0..z).map(|_| rng.random()).collect();
                let cfg = ShiftConfig { n: 96, z, sv };
                let got = banyan_variant_shift(&data, &cfg).map_err(|e| e.to_string())?;
                let want = cyclic_shift_oracle(&data, sv);
                ensure(got == want, format!("mismatch at Z = {z}, SV = {sv}"))?;
                cases += 1;
            }
        }
        ensure(
            cases == 4656,
            format!("swept {cases} configurations, expected 4656"),
        )?;

        // Partition isolation: corrupting one frame never leaks into another.
        for (mode, nets, zmax) in [
            (PartitionMode::Dual48, 2usize, 48),
            (PartitionMode::Quad24, 4, 24),
        ] {
            for _ in 0..200 {
                let z = rng.random_range(1..=zmax);
                let frames: Vec<(Vec<u32>, usize)> = (0..nets)
                    .map(|_| {
                        let sv = rng.random_range(0..z);
                        ((0..z).map(|_| rng.random()).collect(), sv)
                    })
                    .collect();
                let out = partitioned_shift(&frames, mode).map_err(|e| e.to_string())?;
                for ((data, sv), got) in frames.iter().zip(&out) {
                    ensure(
                        got == &cyclic_shift_oracle(data, *sv),
                        format!("{mode:?} frame mismatch at Z = {z}"),
                    )?;
                }
                let victim = rng.random_range(0..nets);
                let mut corrupted = frames.clone();
                for (f, (data, _)) in corrupted.iter_mut().enumerate() {
                    if f != victim {
                        for lane in data.iter_mut() {
                            *lane ^= 0xdead_beef;
                        }
                    }
                }
                let out2 = partitioned_shift(&corrupted, mode).map_err(|e| e.to_string())?;
                ensure(
                    out2[victim] == out[victim],
                    format!("{mode:?}: corruption leaked across sub-networks"),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_kernel_oracles() {
    criterion("4 (kernel oracles)", || {
        let mut rng = ChaCha12Rng::seed_from_u64(0x4e31);
        // Tree two-minimum against the naive scan: 1e5 vectors per length.
        for len in 2..=16usize {
            for _ in 0..100_000 {
                let mags: Vec<u8> = (0..len).map(|_| rng.random_range(0..=15)).collect();
                let got = two_min(&mags).map_err(|e| e.to_string())?;
                let (min1, min2, idx) = naive_two_min(&mags);
                ensure(
                    (got.min1, got.min2, got.idx) == (min1, min2, idx),
                    format!("two_min mismatch on {mags:?}"),
                )?;
            }
        }
        // Check-node update against the per-lane brute force: 1e5 rows.
        for _ in 0..100_000 {
            let deg = rng.random_range(2..=19usize);
            let offset = rng.random_range(0..=2);
            let raw: Vec<i32> = (0..deg).map(|_| rng.random_range(-QMAX..=QMAX)).collect();
            let msgs: Vec<Qllr> = raw.iter().map(|&v| Qllr::saturating_from(v)).collect();
            let got: Vec<i32> = cn_update(&msgs, offset as u8)
                .iter()
                .map(|q| i32::from(q.value()))
                .collect();
            let want = brute_cn_update(&raw, offset);
            ensure(
                got == want,
                format!("cn_update mismatch on {raw:?} offset {offset}"),
            )?;
        }
        // EVN equals a degree-1 VN on all 31 x 31 inputs.
        for ch in -QMAX..=QMAX {
            for msg in -QMAX..=QMAX {
                let (ch_q, msg_q) = (Qllr::saturating_from(ch), Qllr::saturating_from(msg));
                let (total, outgoing) = vn_update(ch_q, &[msg_q]);
                let (hard, out) = evn_update(ch_q, msg_q);
                ensure(
                    outgoing[0] == out && total.is_negative() == hard,
                    format!("EVN / VN divergence at channel {ch}, message {msg}"),
                )?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_5_encoder_validity() {
    criterion("5 (encoder validity)", || {
        let bg = BaseGraph::bg1();
        let mut rng = ChaCha12Rng::seed_from_u64(0xe4c0);
        let mut frames = 0u32;
        for &z in &[2usize, 8, 24, 48, 96] {
            for &mb in &[4usize, 10, 24, 46] {
                let cfg = CodeConfig::with_standard_set(z, mb).map_err(|e| e.to_string())?;
                let h = bg.expand(&cfg).map_err(|e| e.to_string())?;
                let enc = Encoder::new(&h).map_err(|e| e.to_string())?;
                let k = cfg.lengths().k;
                for _ in 0..50 {
                    let info: Vec<bool> = (0..k).map(|_| rng.random()).collect();
                    let cw = enc.encode(&info, &h).map_err(|e| e.to_string())?;
                    ensure(
                        cw.len() == cfg.lengths().n_code,
                        format!("wrong codeword length at Z = {z}, mb = {mb}"),
                    )?;
                    // Syndrome oracle: direct sparse multiply over the
                    // expanded rows.
                    for r in 0..h.n_rows() {
                        let parity = h
                            .expanded_row_cols(r)
                            .iter()
                            .fold(false, |acc, &c| acc ^ cw.bits()[c]);
                        ensure(
                            !parity,
                            format!("parity violation at Z = {z}, mb = {mb}, row {r}"),
                        )?;
                    }
                    frames += 1;
                }
            }
        }
        ensure(
            frames == 1000,
            format!("checked {frames} frames, expected 1000"),
        )
    });
}

fn sweep_base(z: usize, mb: usize, grid: Vec<f64>, seed: u64) -> SweepConfig {
    let lifting_set = nrldpc::basegraph::standard_lifting_set(z).unwrap();
    let mut cfg = SweepConfig::new(z, mb, lifting_set, grid);
    cfg.seed = seed;
    cfg
}

#[test]
fn criterion_6_end_to_end_decoding() {
    criterion("6 (end-to-end decoding sanity)", || {
        let bg = BaseGraph::bg1();
        let mut rng = ChaCha12Rng::seed_from_u64(0x6e2e);

        // (a) Noiseless quantized input: one iteration, zero errors, at all
        // four (rate, Z) corners.
        for &(z, mb) in &[(2usize, 4usize), (96, 4), (2, 46), (96, 46)] {
            let cfg = CodeConfig::with_standard_set(z, mb).map_err(|e| e.to_string())?;
            let h = bg.expand(&cfg).map_err(|e| e.to_string())?;
            let enc = Encoder::new(&h).map_err(|e| e.to_string())?;
            let info: Vec<bool> = (0..cfg.lengths().k).map(|_| rng.random()).collect();
            let cw = enc.encode(&info, &h).map_err(|e| e.to_string())?;
            let llrs: Vec<Qllr> = cw
                .bits()
                .iter()
                .map(|&b| if b { Qllr::MIN } else { Qllr::MAX })
                .collect();
            let out = decode(&llrs, &h, &DecodeParams::default()).map_err(|e| e.to_string())?;
            ensure(
                out.converged && out.iterations_run == 1 && out.hard_bits == cw.bits(),
                format!(
                    "noiseless corner (Z = {z}, mb = {mb}): converged {} in {} iterations",
                    out.converged, out.iterations_run
                ),
            )?;
        }

        // (b) 20 dB, rate 1/2, Z = 96: 100 seeded frames, zero bit errors.
        let mut cfg = sweep_base(96, 24, vec![20.0], 0x20db);
        cfg.max_frames = 100;
        let points = run_sweep(&bg, &cfg).map_err(|e| e.to_string())?;
        ensure(
            points[0].frames == 100 && points[0].bit_errors == 0,
            format!(
                "20 dB sweep: {} bit errors over {} frames",
                points[0].bit_errors, points[0].frames
            ),
        )?;
        ensure(
            points[0].avg_iterations <= 2.0,
            format!("20 dB sweep: avg iterations {}", points[0].avg_iterations),
        )?;

        // (c1) Statistical BER monotonicity at low SNR, >= 1e5 information
        // bits per point, one-sided 3-standard-error tolerance.
        let mut cfg = sweep_base(96, 24, vec![0.0, 0.5, 1.0, 1.5, 2.0], 0x3070);
        cfg.max_frames = 100;
        cfg.max_frame_errors = u64::MAX; // fixed frame count per point
        let points = run_sweep(&bg, &cfg).map_err(|e| e.to_string())?;
        let bits_per_point = 100.0 * 2112.0;
        ensure(
            bits_per_point >= 1e5,
            "not enough bits per point".to_string(),
        )?;
        for pair in points.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            let se = |p: &SweepPoint| (p.ber * (1.0 - p.ber) / bits_per_point).sqrt();
            let tolerance = 3.0 * (se(lo).powi(2) + se(hi).powi(2)).sqrt();
            ensure(
                hi.ber <= lo.ber + tolerance,
                format!(
                    "BER rose from {:.3e} at {} dB to {:.3e} at {} dB (tolerance {:.3e})",
                    lo.ber, lo.ebn0_db, hi.ber, hi.ebn0_db, tolerance
                ),
            )?;
        }

        // (c2) Rate ordering at an operating point found by a coarse
        // pre-scan: where rate 1/3 reaches BER < 1e-3, rate 11/12 must be
        // strictly worse.
        let mut scan = sweep_base(96, 46, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0], 0x0a7e);
        scan.max_frames = 60;
        scan.max_frame_errors = u64::MAX;
        let low_rate = run_sweep(&bg, &scan).map_err(|e| e.to_string())?;
        let operating = low_rate
            .iter()
            .find(|p| p.ber < 1e-3)
            .ok_or("rate 1/3 never reached BER < 1e-3 below 3 dB")?;
        let mut high = sweep_base(96, 4, vec![operating.ebn0_db], 0x0a7e);
        high.max_frames = 60;
        high.max_frame_errors = u64::MAX;
        let high_rate = run_sweep(&bg, &high).map_err(|e| e.to_string())?;
        ensure(
            high_rate[0].ber > operating.ber,
            format!(
                "at {} dB: rate 11/12 BER {:.3e} not above rate 1/3 BER {:.3e}",
                operating.ebn0_db, high_rate[0].ber, operating.ber
            ),
        )?;

        // (d) Batch decoding is bitwise identical to sequential decoding.
        let cfg = CodeConfig::with_standard_set(96, 24).map_err(|e| e.to_string())?;
        let h = bg.expand(&cfg).map_err(|e| e.to_string())?;
        let enc = Encoder::new(&h).map_err(|e| e.to_string())?;
        let chan = ChannelParams {
            ebn0_db: 1.5,
            rate: 0.5,
            seed: 0,
        };
        let sigma = chan.noise_sigma();
        let frames: Vec<Vec<Qllr>> = (0..8)
            .map(|f| {
                let mut frng = frame_rng(0xba7c, 0, f);
                let info: Vec<bool> = (0..cfg.lengths().k).map(|_| frng.random()).collect();
                let cw = enc.encode(&info, &h).unwrap();
                let tx = puncture(&cw, &cfg);
                let mut gauss = GaussianSource::from_rng(frng);
                let y = add_noise_with(&modulate(tx.bits()), sigma, &mut gauss);
                depuncture_llrs(&quantize_all(&llr(&y, &chan)), &cfg).unwrap()
            })
            .collect();
        let params = DecodeParams::default();
        let batch = decode_batch(&frames, &h, &params).map_err(|e| e.to_string())?;
        for (frame, out) in frames.iter().zip(&batch) {
            let single = decode(frame, &h, &params).map_err(|e| e.to_string())?;
            ensure(
                &single == out,
                "decode_batch diverged from sequential decode".to_string(),
            )?;
        }
        Ok(())
    });
}

#[test]
fn criterion_7_small_instance_oracle() {
    criterion("7 (small-instance oracle)", || {
        let mut rng = ChaCha12Rng::seed_from_u64(0x07ac1e);
        let mut vectors = 0u32;
        // Mother-code graphs (4 rows), plus graphs with identity-extension
        // rows to drive the EVN path, all with Z <= 6.
        for round in 0..250 {
            let extension_rows = round % 3; // 0, 1, or 2
            let (bg, cfg) = synthetic_graph(&mut rng, extension_rows);
            let h = bg.expand(&cfg).map_err(|e| e.to_string())?;
            let reference = ReferenceDecoder::from_graph(&bg, &cfg);
            for _ in 0..40 {
                let llrs = random_llrs(h.n_cols(), &mut rng);
                let raw: Vec<i32> = llrs.iter().map(|q| i32::from(q.value())).collect();
                for (max_iters, early) in [(1, true), (3, true), (3, false)] {
                    let params = DecodeParams {
                        max_iters,
                        offset_lsb: 1,
                        early_termination: early,
                    };
                    let got = decode(&llrs, &h, &params).map_err(|e| e.to_string())?;
                    let want = reference.decode(&raw, max_iters, 1, early);
                    let got_totals: Vec<i32> =
                        got.totals.iter().map(|q| i32::from(q.value())).collect();
                    ensure(
                        got.hard_bits == want.hard_bits
                            && got_totals == want.totals
                            && got.iterations_run == want.iterations_run
                            && got.converged == want.converged,
                        format!(
                            "decoder diverged from dense reference (round {round}, \
                             {max_iters} iters, early {early})"
                        ),
                    )?;
                }
                vectors += 1;
            }
        }
        ensure(
            vectors == 10_000,
            format!("compared {vectors} vectors, expected 10000"),
        )
    });
}

#[test]
fn criterion_8_worker_determinism() {
    criterion("8 (worker determinism)", || {
        let bg = BaseGraph::bg1();
        let render = |workers: usize| -> Result<String, String> {
            let mut cfg = sweep_base(96, 24, vec![1.0, 2.0], 0xd37e);
            cfg.max_frames = 96;
            cfg.workers = workers;
            let points = run_sweep(&bg, &cfg).map_err(|e| e.to_string())?;
            let mut buf = Vec::new();
            emit_csv(&cfg, &points, &mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).map_err(|e| e.to_string())
        };
        let single = render(1)?;
        let eight = render(8)?;
        ensure(
            single == eight,
            "CSV output differs between 1 and 8 workers".to_string(),
        )?;
        ensure(
            single.lines().count() == 3,
            "expected header plus two rows".to_string(),
        )
    });
}
