//! Constant-composition matcher: one Maxwell–Boltzmann-shaped composition for every block.

use crate::combinatorics::{input_bits, AmplitudeAlphabet, Composition, Pmf};
use crate::error::{Error, Result};
use crate::scheme::{CompositionSet, SchemeTag};

/// Upper end of the shaping-parameter search interval.
pub const LAMBDA_MAX: f64 = 2.0;
/// Bisection steps; the final bracket is far narrower than any quantization jump.
pub const LAMBDA_ITERATIONS: usize = 60;

/// Maxwell–Boltzmann shaping parameter, `p_i ∝ exp(-lambda * a_i^2)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MbParameter(f64);

impl MbParameter {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self(lambda))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn mb_pmf(lambda: MbParameter, a: &AmplitudeAlphabet) -> Pmf {
    // shift by the smallest energy so large lambda cannot underflow every entry
    let e0 = a.energies()[0];
    let w: Vec<f64> = a
        .energies()
        .iter()
        .map(|e| (-lambda.0 * (e - e0)).exp())
        .collect();
    Pmf::from_weights(w).expect("weights are positive")
}

/// Largest-remainder n-type approximation; ties go to the lower index.
pub fn quantize_pmf(p: &Pmf, n: u32) -> Composition {
    let scaled: Vec<f64> = p.probs().iter().map(|x| x * n as f64).collect();
    let mut counts: Vec<u32> = scaled.iter().map(|x| x.floor() as u32).collect();
    let assigned: u32 = counts.iter().sum();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&i, &j| {
        let ri = scaled[i] - scaled[i].floor();
        let rj = scaled[j] - scaled[j].floor();
        rj.total_cmp(&ri).then(i.cmp(&j))
    });
    for &i in order.iter().take(n.saturating_sub(assigned) as usize) {
        counts[i] += 1;
    }
    Composition::new(counts).expect("non-empty")
}

pub fn mb_composition(lambda: f64, n: u32, a: &AmplitudeAlphabet) -> Composition {
    quantize_pmf(&mb_pmf(MbParameter(lambda), a), n)
}

/// Bracket found by [`lambda_search`]: `feasible` satisfies the predicate, `infeasible`
/// (one bisection step above) does not, unless `feasible` is the interval end.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaBracket {
    pub feasible: f64,
    pub infeasible: Option<f64>,
    pub composition: Composition,
}

/// Bisection for the largest lambda in [0, LAMBDA_MAX] whose quantized MB composition
/// satisfies `pred`.
pub fn lambda_search(
    n: u32,
    a: &AmplitudeAlphabet,
    mut pred: impl FnMut(&Composition) -> bool,
) -> Option<LambdaBracket> {
    let at_max = mb_composition(LAMBDA_MAX, n, a);
    if pred(&at_max) {
        return Some(LambdaBracket {
            feasible: LAMBDA_MAX,
            infeasible: None,
            composition: at_max,
        });
    }
    let at_zero = mb_composition(0.0, n, a);
    if !pred(&at_zero) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, LAMBDA_MAX);
    for _ in 0..LAMBDA_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if pred(&mb_composition(mid, n, a)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(LambdaBracket {
        feasible: lo,
        infeasible: Some(hi),
        composition: mb_composition(lo, n, a),
    })
}

/// Lowest-entropy MB-family composition with at least `k` input bits.
pub fn select_ccdm(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<Composition> {
    lambda_search(n, a, |c| input_bits(c) >= k)
        .map(|b| b.composition)
        .ok_or_else(|| {
            Error::RateInfeasible(format!(
                "no constant composition of n={n} over {} levels carries k={k} bits",
                a.m()
            ))
        })
}

pub fn build_ccdm(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<CompositionSet> {
    if n == 0 {
        return Err(Error::Domain("block length must be positive".into()));
    }
    let c0 = select_ccdm(n, k, a)?;
    CompositionSet::from_tree(SchemeTag::Ccdm, n, k, a, vec![(c0, k)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{count_compositions, enumerate_compositions, entropy, pmf_of};
    use proptest::prelude::*;

    fn comp(v: &[u32]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mb_examples() {
        let a = AmplitudeAlphabet::qam64();
        let u = mb_pmf(MbParameter::new(0.0).unwrap(), &a);
        assert!(u.probs().iter().all(|p| (p - 0.25).abs() < 1e-15));
        let hard = mb_pmf(MbParameter::new(10.0).unwrap(), &a);
        assert!((hard.probs()[0] - 1.0).abs() < 1e-30);
        let p = mb_pmf(MbParameter::new(0.05).unwrap(), &a);
        let w: Vec<f64> = [0.05f64, 0.45, 1.25, 2.45].iter().map(|x| (-x).exp()).collect();
        let s: f64 = w.iter().sum();
        for (pi, wi) in p.probs().iter().zip(&w) {
            assert!((pi - wi / s).abs() < 1e-15);
        }
        let rounded: Vec<f64> = p.probs().iter().map(|x| (x * 1e4).round() / 1e4).collect();
        assert_eq!(rounded, vec![0.4849, 0.325, 0.1461, 0.044]);
        assert!(MbParameter::new(-1.0).is_err());
    }

    #[test]
    fn quantize_examples() {
        let q = |p: &[f64], n| quantize_pmf(&Pmf::new(p.to_vec()).unwrap(), n);
        assert_eq!(q(&[0.25; 4], 216), comp(&[54, 54, 54, 54]));
        assert_eq!(q(&[0.5, 0.5], 3), comp(&[2, 1]));
        assert_eq!(q(&[0.46, 0.31, 0.14, 0.09], 100), comp(&[46, 31, 14, 9]));
    }

    #[test]
    fn toy_ccdm() {
        let a = AmplitudeAlphabet::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(select_ccdm(4, 0, &a).unwrap(), comp(&[4, 0]));
        // brute force over the 5 compositions of 4: MC >= 4 for [3,1], [2,2], [1,3]
        let ok: Vec<Composition> = enumerate_compositions(4, 2)
            .filter(|c| input_bits(c) >= 2)
            .collect();
        assert_eq!(ok, vec![comp(&[3, 1]), comp(&[2, 2]), comp(&[1, 3])]);
        // the lowest-energy feasible type is the one the search lands on
        let set = build_ccdm(4, 2, &a).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.leaves[0].composition, comp(&[3, 1]));
        assert!(matches!(build_ccdm(4, 3, &a), Err(Error::RateInfeasible(_))));
        assert_eq!(set.weight_sum(), 1.0);
        assert_eq!(count_compositions(4, 2), 5u32.into());
    }

    #[test]
    fn feasibility_boundary_at_216() {
        let a = AmplitudeAlphabet::qam64();
        // the uniform type carries the most bits at n = 216
        assert_eq!(input_bits(&comp(&[54, 54, 54, 54])), 420);
        let c = select_ccdm(216, 420, &a).unwrap();
        assert_eq!(input_bits(&c), 420);
        assert!(c.counts().windows(2).all(|w| w[0] >= w[1]));
        assert!(matches!(select_ccdm(216, 421, &a), Err(Error::RateInfeasible(_))));
        assert!(matches!(select_ccdm(216, 433, &a), Err(Error::RateInfeasible(_))));
    }

    #[test]
    fn ccdm_at_216_349() {
        let a = AmplitudeAlphabet::qam64();
        let set = build_ccdm(216, 349, &a).unwrap();
        let c0 = &set.leaves[0].composition;
        assert!(input_bits(c0) >= 349);
        let h = entropy(&pmf_of(c0));
        assert!((h - 1.669).abs() < 0.005, "entropy {h}");
        assert!((set.rate_loss - 0.053).abs() < 0.005);
    }

    #[test]
    fn search_bracket_is_tight() {
        let a = AmplitudeAlphabet::qam64();
        let b = lambda_search(216, &a, |c| input_bits(c) >= 349).unwrap();
        let hi = b.infeasible.unwrap();
        // bisection runs down to f64 resolution at this lambda
        assert!(hi - b.feasible <= 1e-15);
        assert!(input_bits(&b.composition) >= 349);
        assert!(input_bits(&mb_composition(hi, 216, &a)) < 349);
        // along a coarse sweep the quantized compositions below the bracket stay feasible
        let mut lam = b.feasible;
        while lam > b.feasible - 0.002 {
            lam -= 1e-4;
            assert!(input_bits(&mb_composition(lam, 216, &a)) >= 349);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn quantize_sums_to_n(w in prop::collection::vec(0.0f64..1.0, 2..8), n in 1u32..400) {
            prop_assume!(w.iter().sum::<f64>() > 1e-6);
            let p = Pmf::from_weights(w).unwrap();
            prop_assert_eq!(quantize_pmf(&p, n).n(), n);
        }

        #[test]
        fn mb_decreasing_in_energy(lambda in 1e-3f64..2.0) {
            let p = mb_pmf(MbParameter::new(lambda).unwrap(), &AmplitudeAlphabet::qam64());
            prop_assert!(p.probs().windows(2).all(|w| w[0] > w[1]));
        }
    }
}
