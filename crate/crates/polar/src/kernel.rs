//! The f/g/beta update kernel shared by every decoder.
//!
//! For a node with input LLRs `alpha` (length `2h`), the left child sees
//! `f(alpha[i], alpha[i+h])` and, once the left child's bits `beta_left` are
//! known, the right child sees `g(alpha[i], alpha[i+h], beta_left[i])`. The
//! parent's bit estimate is `(beta_left xor beta_right) ++ beta_right`.

use crate::error::{Error, Result};
use crate::Real;

/// How the check-node update `f` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CombineMode {
    /// Exact boxplus: `ln((1 + e^(a+b)) / (e^a + e^b))`.
    Exact,
    /// Min-sum approximation: `sign(a) sign(b) min(|a|, |b|)`.
    ///
    /// The default; node-level branch metrics reproduce bit-level path
    /// metrics exactly only under min-sum.
    #[default]
    MinSum,
}

/// Check-node update for a single LLR pair.
///
/// The exact mode is evaluated as
/// `sign(a) sign(b) min(|a|,|b|) + ln1p(e^-|a+b|) - ln1p(e^-|a-b|)`,
/// which feeds only non-positive arguments to the exponentials and so cannot
/// overflow.
pub fn f_pair<R: Real>(a: R, b: R, mode: CombineMode) -> R {
    let same_sign = (a >= R::zero()) == (b >= R::zero());
    let m = a.abs().min(b.abs());
    let min_sum = if same_sign { m } else { -m };
    match mode {
        CombineMode::MinSum => min_sum,
        CombineMode::Exact => {
            min_sum + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
        }
    }
}

/// Variable-node update for a single LLR pair given the left child's bit.
pub fn g_pair<R: Real>(a_first: R, a_second: R, beta_left: u8) -> R {
    if beta_left == 0 {
        a_second + a_first
    } else {
        a_second - a_first
    }
}

/// Left-child LLRs for a node: element `i` is `f(alpha[i], alpha[i+h])`.
pub fn f_combine<R: Real>(alpha: &[R], mode: CombineMode) -> Result<Vec<R>> {
    let half = half_len(alpha.len())?;
    Ok((0..half)
        .map(|i| f_pair(alpha[i], alpha[i + half], mode))
        .collect())
}

/// Right-child LLRs for a node: element `i` is
/// `alpha[i+h] + (1 - 2 beta_left[i]) alpha[i]`.
pub fn g_combine<R: Real>(alpha: &[R], beta_left: &[u8]) -> Result<Vec<R>> {
    let half = half_len(alpha.len())?;
    if beta_left.len() != half {
        return Err(Error::LengthMismatch {
            what: "beta_left",
            expected: half,
            got: beta_left.len(),
        });
    }
    Ok((0..half)
        .map(|i| g_pair(alpha[i], alpha[i + half], beta_left[i]))
        .collect())
}

/// Combines child bit estimates into the parent's:
/// `(beta_left xor beta_right) ++ beta_right`.
pub fn beta_combine(beta_left: &[u8], beta_right: &[u8]) -> Result<Vec<u8>> {
    if beta_left.len() != beta_right.len() {
        return Err(Error::LengthMismatch {
            what: "beta_right",
            expected: beta_left.len(),
            got: beta_right.len(),
        });
    }
    let mut out = Vec::with_capacity(beta_left.len() * 2);
    out.extend(beta_left.iter().zip(beta_right).map(|(l, r)| l ^ r));
    out.extend_from_slice(beta_right);
    Ok(out)
}

fn half_len(len: usize) -> Result<usize> {
    if len == 0 || len % 2 != 0 {
        return Err(Error::LengthMismatch {
            what: "alpha (must have even, non-zero length)",
            expected: len + 1,
            got: len,
        });
    }
    Ok(len / 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Direct evaluation of `ln((1 + e^(a+b)) / (e^a + e^b))`, safe only for
    /// small arguments. Used as the oracle for the stable rearrangement.
    fn f_exact_direct(a: f64, b: f64) -> f64 {
        ((1.0 + (a + b).exp()) / (a.exp() + b.exp())).ln()
    }

    #[test]
    fn f_with_zero_input_is_zero() {
        for mode in [CombineMode::Exact, CombineMode::MinSum] {
            assert_eq!(f_pair(0.0, 5.0, mode), 0.0);
            assert_eq!(f_pair(-3.0, 0.0, mode), 0.0);
        }
    }

    #[test]
    fn f_min_sum_examples() {
        assert_eq!(f_pair(3.0, -4.0, CombineMode::MinSum), -3.0);
        assert_eq!(f_pair(-2.0, -5.0, CombineMode::MinSum), 2.0);
        assert_eq!(f_pair(1.5, 2.0, CombineMode::MinSum), 1.5);
    }

    #[test]
    fn f_exact_examples() {
        let v = f_pair(2.0, 2.0, CombineMode::Exact);
        assert_abs_diff_eq!(v, f_exact_direct(2.0, 2.0), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 1.325002747358, epsilon = 1e-9);
        assert_abs_diff_eq!(
            f_pair(3.0, -4.0, CombineMode::Exact),
            f_exact_direct(3.0, -4.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn f_exact_never_overflows_on_large_inputs() {
        let v: f64 = f_pair(800.0, -750.0, CombineMode::Exact);
        assert!(v.is_finite());
        assert_abs_diff_eq!(v, -750.0, epsilon = 1e-9);
    }

    #[test]
    fn exact_and_min_sum_differ_by_at_most_ln2() {
        let ln2 = std::f64::consts::LN_2;
        let mut worst = 0.0f64;
        for ia in -100..=100 {
            for ib in -100..=100 {
                let a = ia as f64 * 0.1;
                let b = ib as f64 * 0.1;
                let exact = f_pair(a, b, CombineMode::Exact);
                let ms = f_pair(a, b, CombineMode::MinSum);
                let d = (exact - ms).abs();
                assert!(d <= ln2 + 1e-12, "gap {d} at ({a}, {b})");
                worst = worst.max(d);
                // Min-sum never understates the magnitude, and the signs agree
                // whenever the exact value is non-zero.
                assert!(exact.abs() <= ms.abs() + 1e-12);
                if exact != 0.0 {
                    assert_eq!(exact > 0.0, ms >= 0.0);
                }
            }
        }
        // The ln 2 bound is tight near |a| = |b| with large magnitudes.
        assert!(worst > 0.65);
    }

    #[test]
    fn stable_form_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let a = rng.gen_range(-30.0..30.0);
            let b = rng.gen_range(-30.0..30.0);
            assert_abs_diff_eq!(
                f_pair(a, b, CombineMode::Exact),
                f_exact_direct(a, b),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn g_combines_with_and_without_flip() {
        assert_eq!(g_pair(1.0, 2.0, 0), 3.0);
        assert_eq!(g_pair(1.0, 2.0, 1), 1.0);
        assert_eq!(g_pair(-1.5, 0.5, 1), 2.0);
        let out = g_combine(&[1.0, -1.0, 4.0, 0.5], &[0, 1]).unwrap();
        assert_eq!(out, vec![5.0, 1.5]);
    }

    #[test]
    fn f_combine_pairs_halves() {
        let out = f_combine(&[1.0, -2.0, 3.0, 4.0], CombineMode::MinSum).unwrap();
        assert_eq!(out, vec![1.0, -2.0]);
    }

    #[test]
    fn beta_combine_example() {
        let out = beta_combine(&[1, 0], &[1, 1]).unwrap();
        assert_eq!(out, vec![0, 1, 1, 1]);
    }

    #[test]
    fn length_mismatches_are_rejected() {
        assert!(f_combine(&[1.0, 2.0, 3.0], CombineMode::MinSum).is_err());
        assert!(f_combine::<f64>(&[], CombineMode::MinSum).is_err());
        assert!(g_combine(&[1.0, 2.0], &[0, 1]).is_err());
        assert!(beta_combine(&[1, 0], &[1]).is_err());
    }

    #[test]
    fn works_in_f32() {
        let v = f_pair(2.0f32, 2.0f32, CombineMode::Exact);
        assert_abs_diff_eq!(v, 1.325_002_7_f32, epsilon = 1e-6);
    }
}
