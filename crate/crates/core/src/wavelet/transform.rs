use crate::error::{Error, Result};

use std::f64::consts::FRAC_1_SQRT_2;

/// Orthonormal wavelet filters supported by the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wavelet {
    Haar,
    /// Daubechies least asymmetric wavelet with 10 vanishing moments.
    La10,
}

const HAAR: [f64; 2] = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];

const LA10: [f64; 20] = [
    0.000_770_159_809_114_490_1,
    9.563_267_072_289_475e-5,
    -0.008_641_299_277_022_422,
    -0.001_465_382_581_305_051_3,
    0.045_927_239_231_092_2,
    0.011_609_893_903_711_381,
    -0.159_494_278_884_917_57,
    -0.070_880_535_783_243_85,
    0.471_690_666_938_439_25,
    0.769_510_037_021_107_1,
    0.383_826_761_067_085_46,
    -0.035_536_740_473_817_55,
    -0.031_990_056_882_427_8,
    0.049_994_972_077_376_69,
    0.005_764_912_033_581_909,
    -0.020_354_939_812_311_29,
    -0.000_804_358_932_016_544_9,
    0.004_593_173_585_311_828,
    5.703_608_361_849_428_4e-5,
    -0.000_459_329_421_004_658_8,
];

impl Wavelet {
    /// Low-pass analysis filter `h`.
    pub fn low_pass(&self) -> &'static [f64] {
        match self {
            Wavelet::Haar => &HAAR,
            Wavelet::La10 => &LA10,
        }
    }

    /// High-pass filter `g[m] = (-1)^m h[L-1-m]`.
    pub fn high_pass(&self) -> Vec<f64> {
        let h = self.low_pass();
        let l = h.len();
        (0..l)
            .map(|m| if m % 2 == 0 { h[l - 1 - m] } else { -h[l - 1 - m] })
            .collect()
    }
}

/// Detail coefficients of a signal of length `n = 2^J`, stored level by
/// level: level `j` (`0..J`) holds `2^j` coefficients starting at flat
/// index `2^j - 1`. Level 0 is the coarsest.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTree {
    levels: usize,
    pub scaling: f64,
    pub details: Vec<f64>,
}

impl CoefficientTree {
    pub fn new(levels: usize, scaling: f64, details: Vec<f64>) -> Result<Self> {
        if details.len() != (1 << levels) - 1 {
            return Err(Error::InvalidInput(format!(
                "{} detail coefficients do not fill {levels} levels",
                details.len()
            )));
        }
        Ok(Self { levels, scaling, details })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn signal_len(&self) -> usize {
        1 << self.levels
    }

    pub fn level(&self, j: usize) -> &[f64] {
        &self.details[(1 << j) - 1..(1 << (j + 1)) - 1]
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.details[flat_index(j, k)]
    }
}

pub fn flat_index(j: usize, k: usize) -> usize {
    (1 << j) - 1 + k
}

/// Inverse of [`flat_index`].
pub fn level_position(index: usize) -> (usize, usize) {
    let j = (usize::BITS - 1 - (index + 1).leading_zeros()) as usize;
    (j, index + 1 - (1 << j))
}

fn levels_of(n: usize) -> Result<usize> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidInput(format!("signal length {n} is not a power of two ≥ 2")));
    }
    Ok(n.trailing_zeros() as usize)
}

/// Periodic orthonormal pyramid transform down to a single scaling
/// coefficient.
pub fn dwt(signal: &[f64], wavelet: Wavelet) -> Result<CoefficientTree> {
    let levels = levels_of(signal.len())?;
    let h = wavelet.low_pass();
    let g = wavelet.high_pass();
    let mut details = vec![0.0; signal.len() - 1];
    let mut c = signal.to_vec();
    for j in (0..levels).rev() {
        let len = c.len();
        let half = len / 2;
        let mut smooth = vec![0.0; half];
        let out = &mut details[(1 << j) - 1..(1 << (j + 1)) - 1];
        for k in 0..half {
            let (mut a, mut d) = (0.0, 0.0);
            for (m, (hm, gm)) in h.iter().zip(&g).enumerate() {
                let x = c[(2 * k + m) % len];
                a += hm * x;
                d += gm * x;
            }
            smooth[k] = a;
            out[k] = d;
        }
        c = smooth;
    }
    Ok(CoefficientTree { levels, scaling: c[0], details })
}

/// Inverse of [`dwt`].
pub fn idwt(tree: &CoefficientTree, wavelet: Wavelet) -> Vec<f64> {
    let h = wavelet.low_pass();
    let g = wavelet.high_pass();
    let mut c = vec![tree.scaling];
    for j in 0..tree.levels {
        let d = tree.level(j);
        let len = 2 * c.len();
        let mut next = vec![0.0; len];
        for k in 0..c.len() {
            for (m, (hm, gm)) in h.iter().zip(&g).enumerate() {
                next[(2 * k + m) % len] += hm * c[k] + gm * d[k];
            }
        }
        c = next;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn filters_are_orthonormal() {
        for w in [Wavelet::Haar, Wavelet::La10] {
            let h = w.low_pass();
            let sum: f64 = h.iter().sum();
            assert!((sum - std::f64::consts::SQRT_2).abs() < 1e-12);
            for shift in (0..h.len()).step_by(2) {
                let dot: f64 = (0..h.len() - shift).map(|m| h[m] * h[m + shift]).sum();
                let expect = if shift == 0 { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12, "{w:?} shift {shift}: {dot}");
            }
            assert!(w.high_pass().iter().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn index_round_trip() {
        for idx in 0..1023 {
            let (j, k) = level_position(idx);
            assert!(k < 1 << j);
            assert_eq!(flat_index(j, k), idx);
        }
    }

    #[test]
    fn haar_constant_has_no_details() {
        let t = dwt(&[3.0; 64], Wavelet::Haar).unwrap();
        assert!(t.details.iter().all(|d| d.abs() < 1e-12));
        assert!((t.scaling - 3.0 * 8.0).abs() < 1e-12);
    }

    #[test]
    fn la10_constant_has_no_details() {
        let t = dwt(&[1.5; 256], Wavelet::La10).unwrap();
        assert!(t.details.iter().all(|d| d.abs() < 1e-10));
    }

    #[test]
    fn haar_step_by_hand() {
        let t = dwt(&[1.0, 3.0], Wavelet::Haar).unwrap();
        assert!((t.scaling - 4.0 * FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((t.details[0] + 2.0 * FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(dwt(&[1.0; 6], Wavelet::Haar).is_err());
        assert!(dwt(&[1.0], Wavelet::Haar).is_err());
        assert!(CoefficientTree::new(3, 0.0, vec![0.0; 6]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_energy(signal in prop::collection::vec(-10.0..10.0f64, 256), la in any::<bool>()) {
            let w = if la { Wavelet::La10 } else { Wavelet::Haar };
            let t = dwt(&signal, w).unwrap();
            let back = idwt(&t, w);
            let norm: f64 = signal.iter().map(|x| x * x).sum();
            let err: f64 = back.iter().zip(&signal).map(|(a, b)| (a - b).powi(2)).sum();
            prop_assert!(err.sqrt() <= 1e-10 * norm.sqrt().max(1.0));
            let energy: f64 = t.details.iter().map(|x| x * x).sum::<f64>() + t.scaling * t.scaling;
            prop_assert!((energy - norm).abs() <= 1e-10 * norm.max(1.0));
        }
    }
}
