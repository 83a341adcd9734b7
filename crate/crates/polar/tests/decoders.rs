//! Cross-validation between the independent decoder implementations.
//!
//! The oracles here recompute path metrics from first principles (forced
//! successive-cancellation recursion over explicit input vectors) so the
//! list decoders are checked against something that shares none of their
//! machinery.

use polar::channel::{frame_rng, transmit};
use polar::code::CodeConfig;
use polar::crc::Crc;
use polar::decode::{
    decode_sc, decode_scl, decode_sscl, NodeSelection, PruneSchedule, SclOptions, SsclOptions,
};
use polar::kernel::{beta_combine, f_combine, g_combine, CombineMode};
use polar::select::SelectionProfile;
use rand::prelude::*;

/// Path metric of a fully specified input vector under min-sum, computed by
/// forcing every leaf decision along a fresh SC recursion.
fn forced_path_metric(llr: &[f64], u: &[u8]) -> (Vec<u8>, f64) {
    if llr.len() == 1 {
        let hard = u8::from(llr[0] < 0.0);
        let pen = if u[0] == hard { 0.0 } else { llr[0].abs() };
        return (vec![u[0]], pen);
    }
    let half = llr.len() / 2;
    let left = f_combine(llr, CombineMode::MinSum).unwrap();
    let (beta_l, pen_l) = forced_path_metric(&left, &u[..half]);
    let right = g_combine(llr, &beta_l).unwrap();
    let (beta_r, pen_r) = forced_path_metric(&right, &u[half..]);
    (beta_combine(&beta_l, &beta_r).unwrap(), pen_l + pen_r)
}

fn random_payload(rng: &mut impl Rng, k: usize) -> Vec<u8> {
    (0..k).map(|_| rng.gen_range(0u8..=1)).collect()
}

#[test]
fn scl_with_list_one_is_plain_sc() {
    let cfg = CodeConfig::new(64, 24, Some(Crc::crc11()), 4).unwrap();
    let mut opts = SclOptions::new(1);
    opts.crc_aided = false;
    for frame in 0..500 {
        let mut rng = frame_rng(101, frame);
        let payload = random_payload(&mut rng, 24);
        let x = cfg.encode(&payload).unwrap();
        let llr: Vec<f64> = transmit(&x, 3.0, &mut rng).unwrap();
        let sc = decode_sc(&cfg, &llr, CombineMode::MinSum).unwrap();
        let scl = decode_scl(&cfg, &llr, opts).unwrap();
        assert_eq!(sc, scl.u_hat, "frame {frame}");
    }
}

#[test]
fn scl_metrics_match_exhaustive_forced_paths() {
    // N=8, K=4, L=16: the list holds every possible information pattern, so
    // the decoder's final metrics must be exactly the 16 forced-path metrics.
    let cfg = CodeConfig::new(8, 4, None, 4).unwrap();
    let info = cfg.info_positions().to_vec();
    let mut opts = SclOptions::new(16);
    opts.crc_aided = false;
    for frame in 0..500 {
        let mut rng = frame_rng(102, frame);
        let payload = random_payload(&mut rng, 4);
        let x = cfg.encode(&payload).unwrap();
        let llr: Vec<f64> = transmit(&x, 1.0, &mut rng).unwrap();

        let mut expect: Vec<f64> = (0u32..16)
            .map(|assignment| {
                let mut u = vec![0u8; 8];
                for (bit, &pos) in info.iter().enumerate() {
                    u[pos] = (assignment >> bit & 1) as u8;
                }
                forced_path_metric(&llr, &u).1
            })
            .collect();
        expect.sort_by(f64::total_cmp);

        let out = decode_scl(&cfg, &llr, opts).unwrap();
        assert_eq!(out.path_metrics.len(), 16);
        for (got, want) in out.path_metrics.iter().zip(&expect) {
            assert!((got - want).abs() < 1e-12, "frame {frame}");
        }
    }
}

#[test]
fn sscl_candidates_match_forced_paths_per_survivor() {
    // Every path the node-based decoder reports must carry exactly the
    // metric a forced bit-level pass assigns to its input vector.
    let cfg = CodeConfig::new(32, 16, None, 4).unwrap();
    let mut opts = SsclOptions::full(8);
    opts.crc_aided = false;
    for frame in 0..200 {
        let mut rng = frame_rng(103, frame);
        let payload = random_payload(&mut rng, 16);
        let x = cfg.encode(&payload).unwrap();
        let llr: Vec<f64> = transmit(&x, 2.0, &mut rng).unwrap();
        let out = decode_sscl(&cfg, &llr, opts).unwrap();
        // The reported best path re-derives its own metric.
        let (_, pm) = forced_path_metric(&llr, &out.u_hat);
        let reported = out.path_metrics[out.chosen];
        assert!((pm - reported).abs() < 1e-9, "frame {frame}: {pm} vs {reported}");
    }
}

#[test]
fn node_decoder_equals_bit_decoder_with_deferred_pruning() {
    // Under min-sum the node-based decoder is bit-level list decoding with
    // pruning deferred to node boundaries; the surviving metric multisets
    // must agree to float accuracy.
    for (n, k, node_size) in [(32usize, 16usize, 4usize), (32, 12, 8), (64, 30, 4)] {
        let cfg = CodeConfig::new(n, k, None, node_size).unwrap();
        let mut bit_opts = SclOptions::new(4);
        bit_opts.crc_aided = false;
        bit_opts.prune = PruneSchedule::NodeBoundary;
        let mut node_opts = SsclOptions::full(4);
        node_opts.crc_aided = false;
        for frame in 0..100 {
            let mut rng = frame_rng(104, frame);
            let payload = random_payload(&mut rng, k);
            let x = cfg.encode(&payload).unwrap();
            let llr: Vec<f64> = transmit(&x, 1.0, &mut rng).unwrap();
            let bit = decode_scl(&cfg, &llr, bit_opts).unwrap();
            let node = decode_sscl(&cfg, &llr, node_opts).unwrap();
            assert_eq!(
                bit.path_metrics.len(),
                node.path_metrics.len(),
                "n={n} frame={frame}"
            );
            for (a, b) in bit.path_metrics.iter().zip(&node.path_metrics) {
                assert!((a - b).abs() < 1e-9, "n={n} frame={frame}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn partial_selection_rarely_disagrees_at_high_snr() {
    // With clean channels the best path dominates every stair band, so
    // partial selection must track full selection almost always; this guards
    // against gross selection bugs without demanding exact agreement.
    let cfg = CodeConfig::new(128, 38, Some(Crc::crc11()), 4).unwrap();
    let profile = SelectionProfile::new(4, 2, 1).unwrap();
    let mut agree = 0u32;
    for frame in 0..200 {
        let mut rng = frame_rng(105, frame);
        let payload = random_payload(&mut rng, 38);
        let x = cfg.encode(&payload).unwrap();
        let llr: Vec<f64> = transmit(&x, 4.5, &mut rng).unwrap();
        let full = decode_sscl(&cfg, &llr, SsclOptions::full(8)).unwrap();
        let ps = decode_sscl(
            &cfg,
            &llr,
            SsclOptions {
                selection: NodeSelection::Stair(profile),
                ..SsclOptions::full(8)
            },
        )
        .unwrap();
        agree += u32::from(full.u_hat == ps.u_hat);
    }
    assert!(agree >= 195, "only {agree}/200 agreed");
}

#[test]
fn decoded_frozen_bits_are_always_zero() {
    let cfg = CodeConfig::new(64, 20, None, 4).unwrap();
    for frame in 0..50 {
        let mut rng = frame_rng(106, frame);
        let payload = random_payload(&mut rng, 20);
        let x = cfg.encode(&payload).unwrap();
        let llr: Vec<f64> = transmit(&x, -3.0, &mut rng).unwrap();
        for u in [
            decode_sc(&cfg, &llr, CombineMode::MinSum).unwrap(),
            decode_scl(&cfg, &llr, SclOptions::new(8)).unwrap().u_hat,
            decode_sscl(&cfg, &llr, SsclOptions::full(8)).unwrap().u_hat,
        ] {
            for i in 0..64 {
                if cfg.is_frozen(i) {
                    assert_eq!(u[i], 0);
                }
            }
        }
    }
}
