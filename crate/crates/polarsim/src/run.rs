//! Monte-Carlo execution: BLER/BER sweeps and PMP-table collection.
//!
//! Every frame derives its RNG stream from `(seed, frame index)` alone, and
//! batches are cut into fixed-size chunks whose partial results merge by
//! integer addition, so results are identical for any worker count. The
//! stopping rule is evaluated only on completed batch prefixes, which keeps
//! it deterministic too.

use std::time::{Duration, Instant};

use polar::analysis::PmpAccumulator;
use polar::channel::{frame_rng, transmit};
use polar::code::CodeConfig;
use polar::decode::{
    decode_sc, NodeSelection, SclDecoder, SclOptions, SsclDecoder, SsclOptions,
};
use polar::kernel::CombineMode;
use rand::Rng;
use rayon::prelude::*;
use statrs::function::beta::beta_reg;
use thiserror::Error;

use crate::config::{ConfigError, DecoderKind, SimConfig};

/// Frames per stopping-rule evaluation.
const BATCH_FRAMES: u64 = 4096;
/// Frames per parallel work unit; fixed so splits never depend on the
/// number of workers.
const CHUNK_FRAMES: u64 = 256;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Decode(#[from] polar::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Result of one Es/N0 point of a sweep.
#[derive(Debug, Clone)]
pub struct PointRecord {
    pub esn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub bler: f64,
    pub ber: f64,
    /// 95% Clopper–Pearson interval for the BLER.
    pub bler_ci_low: f64,
    pub bler_ci_high: f64,
    /// Wall-clock time spent on this point (not serialized; timing is not
    /// reproducible and would break byte-identical output).
    pub wall: Duration,
}

/// Quantile of the Beta(a, b) distribution by bisection on the regularized
/// incomplete beta function, converged to machine precision. (The generic
/// quantile search shipped with the distribution type resolves only a few
/// binary digits, which is far too coarse for tail probabilities around
/// 1e-4.)
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // 1e3 halvings are unreachable; the midpoint stops moving after ~60.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact two-sided 95% Clopper–Pearson interval for `k` successes in `n`
/// trials.
pub fn clopper_pearson_95(k: u64, n: u64) -> (f64, f64) {
    assert!(k <= n && n > 0, "need 0 <= k <= n, n > 0");
    let (kf, nf) = (k as f64, n as f64);
    let low = if k == 0 {
        0.0
    } else {
        beta_quantile(kf, nf - kf + 1.0, 0.025)
    };
    let high = if k == n {
        1.0
    } else {
        beta_quantile(kf + 1.0, nf - kf, 0.975)
    };
    (low, high)
}

/// One decoder instance plus the scratch it reuses across frames.
enum FrameDecoder {
    Sc,
    Scl(Box<SclDecoder<f64>>),
    Sscl(Box<SsclDecoder<f64>>),
}

impl FrameDecoder {
    fn build(cfg: &SimConfig) -> Result<Self, polar::Error> {
        Ok(match cfg.decoder {
            DecoderKind::Sc => Self::Sc,
            DecoderKind::Scl => Self::Scl(Box::new(SclDecoder::new(
                &cfg.code,
                SclOptions::new(cfg.list_size),
            )?)),
            DecoderKind::Sscl => Self::Sscl(Box::new(SsclDecoder::new(
                &cfg.code,
                SsclOptions::full(cfg.list_size),
            )?)),
            DecoderKind::PsScl => {
                let profile = cfg.profile.ok_or(polar::Error::MissingProfile)?;
                Self::Sscl(Box::new(SsclDecoder::new(
                    &cfg.code,
                    SsclOptions {
                        selection: NodeSelection::Stair(profile),
                        ..SsclOptions::full(cfg.list_size)
                    },
                )?))
            }
        })
    }

    fn decode_input(&mut self, code: &CodeConfig, llr: &[f64]) -> Result<Vec<u8>, polar::Error> {
        Ok(match self {
            Self::Sc => decode_sc(code, llr, CombineMode::MinSum)?,
            Self::Scl(d) => d.decode(llr)?.u_hat,
            Self::Sscl(d) => d.decode(llr)?.u_hat,
        })
    }
}

/// Per-chunk error tallies; merged by addition in any order.
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
}

impl Tally {
    fn add(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            bit_errors: self.bit_errors + o.bit_errors,
            frame_errors: self.frame_errors + o.frame_errors,
        }
    }
}

/// Simulate frames `[start, end)` at one Es/N0 point on one worker.
fn run_chunk(
    cfg: &SimConfig,
    esn0_db: f64,
    start: u64,
    end: u64,
    observer: Option<&mut PmpAccumulator>,
) -> Result<Tally, polar::Error> {
    let code = &cfg.code;
    let k = code.k_payload();
    let mut decoder = FrameDecoder::build(cfg)?;
    let mut tally = Tally::default();
    let mut payload = vec![0u8; k];
    let mut observer = observer;
    for frame in start..end {
        let mut rng = frame_rng(cfg.seed, frame);
        for bit in payload.iter_mut() {
            *bit = rng.gen_range(0u8..=1);
        }
        let x = code.encode(&payload)?;
        let llr: Vec<f64> = transmit(&x, esn0_db, &mut rng)?;
        let u_hat = match (&mut decoder, observer.as_deref_mut()) {
            (FrameDecoder::Sscl(d), Some(acc)) => d.decode_observed(&llr, acc)?.u_hat,
            _ => decoder.decode_input(code, &llr)?,
        };
        let decoded = code.extract_payload(&u_hat);
        let wrong = payload
            .iter()
            .zip(&decoded)
            .filter(|(a, b)| a != b)
            .count() as u64;
        tally.frames += 1;
        tally.bit_errors += wrong;
        tally.frame_errors += u64::from(wrong > 0);
    }
    Ok(tally)
}

/// Run frames `[start, end)` split across workers in fixed chunks.
fn run_batch(cfg: &SimConfig, esn0_db: f64, start: u64, end: u64) -> Result<Tally, polar::Error> {
    let chunks: Vec<(u64, u64)> = (start..end)
        .step_by(CHUNK_FRAMES as usize)
        .map(|s| (s, (s + CHUNK_FRAMES).min(end)))
        .collect();
    chunks
        .into_par_iter()
        .map(|(s, e)| run_chunk(cfg, esn0_db, s, e, None))
        .try_reduce(Tally::default, |a, b| Ok(a.add(b)))
}

/// Monte-Carlo BLER/BER sweep over `config.esn0_sweep`.
///
/// Each point stops at the first batch boundary where either
/// `min_frame_errors` frame errors have accumulated or `max_frames` frames
/// have been simulated.
pub fn run_bler_sweep(cfg: &SimConfig) -> Result<Vec<PointRecord>, SimError> {
    // Surface construction problems (bad list size, missing profile) before
    // burning any compute.
    FrameDecoder::build(cfg)?;
    let k = cfg.code.k_payload() as u64;
    let mut records = Vec::with_capacity(cfg.esn0_sweep.len());
    for &esn0_db in &cfg.esn0_sweep {
        let t0 = Instant::now();
        let mut total = Tally::default();
        while total.frames < cfg.max_frames && total.frame_errors < cfg.min_frame_errors {
            let start = total.frames;
            let end = (start + BATCH_FRAMES).min(cfg.max_frames);
            total = total.add(run_batch(cfg, esn0_db, start, end)?);
        }
        let (lo, hi) = clopper_pearson_95(total.frame_errors, total.frames);
        records.push(PointRecord {
            esn0_db,
            frames: total.frames,
            bit_errors: total.bit_errors,
            frame_errors: total.frame_errors,
            bler: total.frame_errors as f64 / total.frames as f64,
            ber: total.bit_errors as f64 / (total.frames * k) as f64,
            bler_ci_low: lo,
            bler_ci_high: hi,
            wall: t0.elapsed(),
        });
    }
    Ok(records)
}

/// Collected PMP statistics for one configuration.
#[derive(Debug, Clone)]
pub struct PmpReport {
    pub accumulator: PmpAccumulator,
    pub frames: u64,
    pub esn0_db: f64,
    pub tally_bler: f64,
}

/// Decode `config.max_frames` frames with the full-selection node decoder,
/// recording which (parent-metric rank, branch-metric rank) cell each
/// survivor comes from.
pub fn run_pmp_collection(cfg: &SimConfig) -> Result<PmpReport, SimError> {
    let mut problems = Vec::new();
    if cfg.decoder != DecoderKind::Sscl {
        problems.push((
            "sim.decoder".to_string(),
            format!(
                "PMP collection measures the full-selection node decoder; got `{}`",
                cfg.decoder
            ),
        ));
    }
    if cfg.esn0_sweep.len() != 1 {
        problems.push((
            "sim.esn0_db".to_string(),
            format!(
                "PMP collection uses a single Es/N0 point, got {} of them",
                cfg.esn0_sweep.len()
            ),
        ));
    }
    if !problems.is_empty() {
        return Err(ConfigError { problems }.into());
    }
    let esn0_db = cfg.esn0_sweep[0];
    let frames = cfg.max_frames;
    let chunks: Vec<(u64, u64)> = (0..frames)
        .step_by(CHUNK_FRAMES as usize)
        .map(|s| (s, (s + CHUNK_FRAMES).min(frames)))
        .collect();
    let (tally, acc) = chunks
        .into_par_iter()
        .map(|(s, e)| {
            let mut acc = PmpAccumulator::new(cfg.list_size, cfg.code.node_size());
            let tally = run_chunk(cfg, esn0_db, s, e, Some(&mut acc))?;
            Ok::<_, polar::Error>((tally, acc))
        })
        .try_reduce(
            || {
                (
                    Tally::default(),
                    PmpAccumulator::new(cfg.list_size, cfg.code.node_size()),
                )
            },
            |(t1, mut a1), (t2, a2)| {
                a1.merge(&a2);
                Ok((t1.add(t2), a1))
            },
        )?;
    Ok(PmpReport {
        accumulator: acc,
        frames,
        esn0_db,
        tally_bler: tally.frame_errors as f64 / tally.frames.max(1) as f64,
    })
}
