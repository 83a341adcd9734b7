//! Gray-mapped QPSK over the AWGN channel, with LLR demapping.
//!
//! A symbol carries two bits, one per quadrature dimension, with bit 0 mapped
//! to `+1/sqrt(2)` and bit 1 to `-1/sqrt(2)` (unit symbol energy). At
//! `Es/N0 = s` dB the noise variance is `sigma^2 = 10^(-s/10)`, split evenly
//! across the two dimensions, and the per-bit channel LLR is
//! `2 sqrt(2) y / sigma^2` (positive favors bit 0).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::Real;

/// Deterministic per-frame random stream: one 64-bit seed keys the whole run
/// and the frame index selects an independent stream, so frame `i` sees the
/// same randomness no matter how frames are batched across workers.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

/// Noise variance `sigma^2 = 10^(-EsN0_dB/10)` for unit-energy symbols.
pub fn noise_variance(es_n0_db: f64) -> f64 {
    10f64.powf(-es_n0_db / 10.0)
}

/// Maps bit pairs to QPSK symbols `[i, q]`. Errors if the bit count is odd.
pub fn modulate_qpsk<R: Real>(bits: &[u8]) -> Result<Vec<[R; 2]>> {
    if bits.len() % 2 != 0 {
        return Err(Error::LengthMismatch {
            what: "qpsk bits (must be even)",
            expected: bits.len() + 1,
            got: bits.len(),
        });
    }
    let amp = R::from_f64(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let map = |b: u8| if b == 0 { amp } else { -amp };
    Ok(bits.chunks_exact(2).map(|p| [map(p[0]), map(p[1])]).collect())
}

/// Adds white Gaussian noise for the given `Es/N0` in dB, drawing from `rng`.
pub fn add_awgn<R, G>(symbols: &mut [[R; 2]], es_n0_db: f64, rng: &mut G)
where
    R: Real,
    G: Rng + ?Sized,
    StandardNormal: Distribution<R>,
{
    let std = R::from_f64((noise_variance(es_n0_db) / 2.0).sqrt()).unwrap();
    for s in symbols.iter_mut() {
        for dim in s.iter_mut() {
            let n: R = StandardNormal.sample(rng);
            *dim = *dim + std * n;
        }
    }
}

/// Per-bit channel LLRs for received symbols: `2 sqrt(2) y / sigma^2` in each
/// dimension, in transmit bit order.
pub fn demap_llr<R: Real>(symbols: &[[R; 2]], es_n0_db: f64) -> Vec<R> {
    let scale = R::from_f64(2.0 * std::f64::consts::SQRT_2 / noise_variance(es_n0_db)).unwrap();
    let mut llr = Vec::with_capacity(symbols.len() * 2);
    for s in symbols {
        llr.push(scale * s[0]);
        llr.push(scale * s[1]);
    }
    llr
}

/// Modulates, adds noise, and demaps in one step: the LLR vector a decoder
/// sees for `bits` sent at the given `Es/N0`.
pub fn transmit<R, G>(bits: &[u8], es_n0_db: f64, rng: &mut G) -> Result<Vec<R>>
where
    R: Real,
    G: Rng + ?Sized,
    StandardNormal: Distribution<R>,
{
    let mut symbols = modulate_qpsk(bits)?;
    add_awgn(&mut symbols, es_n0_db, rng);
    Ok(demap_llr(&symbols, es_n0_db))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mapping_and_energy() {
        let syms = modulate_qpsk::<f64>(&[0, 0, 1, 0, 0, 1, 1, 1]).unwrap();
        let a = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(syms[0], [a, a]);
        assert_eq!(syms[1], [-a, a]);
        assert_eq!(syms[2], [a, -a]);
        assert_eq!(syms[3], [-a, -a]);
        for s in &syms {
            assert_abs_diff_eq!(s[0] * s[0] + s[1] * s[1], 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn odd_bit_count_is_rejected() {
        assert!(modulate_qpsk::<f64>(&[0, 1, 0]).is_err());
    }

    #[test]
    fn noiseless_llr_magnitude_at_3db() {
        // 2 sqrt(2) * (1/sqrt(2)) / 10^-0.3 = 2 / 10^-0.3.
        let syms = modulate_qpsk::<f64>(&[0, 1]).unwrap();
        let llr = demap_llr(&syms, 3.0);
        let expect = 2.0 / 10f64.powf(-0.3);
        assert_abs_diff_eq!(llr[0], expect, epsilon = 1e-12);
        assert_abs_diff_eq!(llr[1], -expect, epsilon = 1e-12);
    }

    #[test]
    fn high_snr_is_effectively_noiseless() {
        let bits: Vec<u8> = (0..64).map(|i| (i % 3 == 0) as u8).collect();
        let mut rng = frame_rng(7, 0);
        let llr: Vec<f64> = transmit(&bits, 100.0, &mut rng).unwrap();
        for (l, &b) in llr.iter().zip(&bits) {
            assert_eq!((*l < 0.0) as u8, b);
        }
    }

    #[test]
    fn same_seed_and_frame_reproduce_noise() {
        let bits = vec![0u8; 128];
        let a: Vec<f64> = transmit(&bits, 1.0, &mut frame_rng(42, 5)).unwrap();
        let b: Vec<f64> = transmit(&bits, 1.0, &mut frame_rng(42, 5)).unwrap();
        assert_eq!(a, b);
        let c: Vec<f64> = transmit(&bits, 1.0, &mut frame_rng(42, 6)).unwrap();
        assert_ne!(a, c);
        let d: Vec<f64> = transmit(&bits, 1.0, &mut frame_rng(43, 5)).unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn noise_variance_matches_target() {
        let mut rng = frame_rng(9, 0);
        let mut symbols = vec![[0.0f64, 0.0]; 500_000];
        add_awgn(&mut symbols, 3.0, &mut rng);
        let n = 1_000_000.0;
        let mean: f64 = symbols.iter().flatten().sum::<f64>() / n;
        let var: f64 = symbols.iter().flatten().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
        let target = noise_variance(3.0) / 2.0;
        assert!((var - target).abs() / target < 0.01, "var {var} vs {target}");
        assert!(mean.abs() < 1e-3);
    }

    #[test]
    fn llr_sign_matches_bits_at_moderate_snr() {
        // At 20 dB a wrong sign is vanishingly rare across 1000 frames.
        let mut rng = frame_rng(11, 3);
        for _ in 0..1000 {
            let bits: Vec<u8> = (0..32).map(|_| rng.gen_range(0u8..=1)).collect();
            let llr: Vec<f64> = transmit(&bits, 20.0, &mut rng).unwrap();
            for (l, &b) in llr.iter().zip(&bits) {
                assert_eq!((*l < 0.0) as u8, b);
            }
        }
    }

    #[test]
    fn works_in_f32() {
        let bits = vec![1u8, 0, 0, 1];
        let llr: Vec<f32> = transmit(&bits, 6.0, &mut frame_rng(1, 1)).unwrap();
        assert_eq!(llr.len(), 4);
        assert!((llr[0]) < 0.0);
    }
}
