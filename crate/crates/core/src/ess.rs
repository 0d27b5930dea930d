//! Enumerative sphere shaping viewed through its compositions.
//!
//! ESS uses the lowest-energy amplitude sequences of length `n`. Grouped by composition,
//! that is every energy shell strictly inside a radius `E_max`, plus part of the shells
//! on it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    composition_kurtosis, count_compositions, AmplitudeAlphabet, Composition, Compositions,
    EnergyGrid, FactorialTable,
};
use crate::error::{Error, Result};
use crate::scheme::{CompositionSet, SchemeTag};

const SCAN_CHUNKS: u128 = 256;

/// Which shells count as "inside" the radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadiusConvention {
    /// Smallest `E` with enough sequences at energy `<= E`.
    #[default]
    Inclusive,
    /// Smallest `E` with enough sequences at energy `< E`.
    Exclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub composition: Composition,
    pub mc: BigUint,
    /// Grid coordinate of the shell energy (see [`EnergyGrid`]).
    pub steps: u64,
}

/// All shells up to the selected radius, sorted by energy then colexicographically.
#[derive(Debug, Clone)]
pub struct EnergyShellIndex {
    pub n: u32,
    pub k: u64,
    pub grid: EnergyGrid,
    pub e_max: f64,
    pub e_max_steps: u64,
    pub convention: RadiusConvention,
    pub shells: Vec<Shell>,
    pub cumulative: Vec<BigUint>,
}

impl EnergyShellIndex {
    pub fn build(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<Self> {
        Self::build_with(n, k, a, RadiusConvention::Inclusive)
    }

    pub fn build_with(
        n: u32,
        k: u64,
        a: &AmplitudeAlphabet,
        convention: RadiusConvention,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("block length must be positive".into()));
        }
        let grid = a.energy_grid()?;
        let table = FactorialTable::new(n);
        let m = a.m();
        let target = BigUint::one() << k;

        let totals = merge_histograms(scan(n, m, |acc: &mut BTreeMap<u64, BigUint>, c| {
            let s = steps(&grid, c);
            *acc.entry(s).or_default() += table.multinomial(c);
        }));
        let mut cum = BigUint::zero();
        let mut inclusive = None;
        for (&s, t) in &totals {
            cum += t;
            if cum >= target {
                inclusive = Some(s);
                break;
            }
        }
        let Some(inclusive) = inclusive else {
            return Err(Error::RateInfeasible(format!(
                "only {} sequences of length {n} exist, fewer than 2^{k}",
                totals.values().sum::<BigUint>()
            )));
        };
        let e_max_steps = match convention {
            RadiusConvention::Inclusive => inclusive,
            // the next achievable energy above the inclusive radius
            RadiusConvention::Exclusive => totals
                .range(inclusive + 1..)
                .next()
                .map(|(&s, _)| s)
                .unwrap_or(inclusive + 1),
        };

        let chunks = scan(n, m, |acc: &mut Vec<Shell>, c| {
            let s = steps(&grid, c);
            if s <= e_max_steps {
                acc.push(Shell {
                    composition: Composition::new(c.to_vec()).unwrap(),
                    mc: table.multinomial(c),
                    steps: s,
                });
            }
        });
        let mut shells: Vec<Shell> = chunks.into_iter().flatten().collect();
        // chunks arrive in colex order, so a stable sort keeps colex within each energy
        shells.sort_by_key(|s| s.steps);
        let mut acc = BigUint::zero();
        let cumulative = shells
            .iter()
            .map(|s| {
                acc += &s.mc;
                acc.clone()
            })
            .collect();
        Ok(Self {
            n,
            k,
            e_max: grid.energy_at(n, e_max_steps),
            grid,
            e_max_steps,
            convention,
            shells,
            cumulative,
        })
    }

    /// Sequences with energy `<= E_max`.
    pub fn total(&self) -> BigUint {
        self.cumulative.last().cloned().unwrap_or_default()
    }

    pub fn shells_at_or_below(&self) -> usize {
        self.shells.len()
    }

    pub fn shells_below(&self) -> usize {
        self.shells
            .iter()
            .filter(|s| s.steps < self.e_max_steps)
            .count()
    }

    pub fn sequences_below(&self) -> BigUint {
        self.shells
            .iter()
            .filter(|s| s.steps < self.e_max_steps)
            .map(|s| &s.mc)
            .sum()
    }

    /// Per-shell used sequence counts: full shells in order, the last one truncated.
    pub fn usage(&self) -> Vec<(Composition, BigUint)> {
        let mut need = BigUint::one() << self.k;
        let mut out = Vec::new();
        for s in &self.shells {
            if need.is_zero() {
                break;
            }
            let used = if s.mc <= need { s.mc.clone() } else { need.clone() };
            need -= &used;
            out.push((s.composition.clone(), used));
        }
        out
    }
}

fn steps(grid: &EnergyGrid, c: &[u32]) -> u64 {
    c.iter()
        .zip(&grid.steps)
        .map(|(&x, &s)| x as u64 * s as u64)
        .sum()
}

/// Runs `f` over every composition, split into contiguous colex chunks; the returned
/// accumulators are in stream order.
fn scan<T: Default + Send>(n: u32, m: usize, f: impl Fn(&mut T, &[u32]) + Sync) -> Vec<T> {
    let total = count_compositions(n, m).to_u128().expect("composition count fits u128");
    let per = total.div_ceil(SCAN_CHUNKS).max(1);
    let starts: Vec<u128> = (0..total).step_by(per as usize).collect();
    starts
        .into_par_iter()
        .map(|start| {
            let mut acc = T::default();
            let mut left = per.min(total - start);
            let mut it = Compositions::starting_at(n, m, start);
            // a bounded walk over the chunk; Compositions has no length limit of its own
            while left > 0 {
                let Some(c) = it.next() else { break };
                f(&mut acc, c.counts());
                left -= 1;
            }
            acc
        })
        .collect()
}

fn merge_histograms(parts: Vec<BTreeMap<u64, BigUint>>) -> BTreeMap<u64, BigUint> {
    let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
    for p in parts {
        for (s, v) in p {
            *out.entry(s).or_default() += v;
        }
    }
    out
}

/// Smallest achievable energy whose ball holds at least 2^k sequences.
pub fn select_emax(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<f64> {
    Ok(EnergyShellIndex::build(n, k, a)?.e_max)
}

pub fn build_ess(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<CompositionSet> {
    let index = EnergyShellIndex::build(n, k, a)?;
    build_ess_from(&index, a)
}

pub fn build_ess_from(index: &EnergyShellIndex, a: &AmplitudeAlphabet) -> Result<CompositionSet> {
    CompositionSet::from_shells(SchemeTag::Ess, index.n, index.k, a, index.usage())
}

/// Kurtosis range over the shells ESS actually uses.
pub fn ess_kurtosis_range(set: &CompositionSet) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for leaf in set.leaves.iter().filter(|l| l.weight > 0.0) {
        let kappa = composition_kurtosis(&leaf.composition, &set.alphabet)?;
        lo = lo.min(kappa);
        hi = hi.max(kappa);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{energy, multinomial_coefficient};
    use proptest::prelude::*;

    fn comp(v: &[u32]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    fn two_level() -> AmplitudeAlphabet {
        AmplitudeAlphabet::new(vec![1.0, 3.0]).unwrap()
    }

    /// All m^n sequences sorted by energy; returns the energy of the 2^k-th.
    fn brute_emax(n: u32, k: u64, a: &AmplitudeAlphabet) -> Option<f64> {
        let m = a.m() as u64;
        let mut es: Vec<f64> = (0..m.pow(n))
            .map(|mut x| {
                let mut e = 0.0;
                for _ in 0..n {
                    e += a.energies()[(x % m) as usize];
                    x /= m;
                }
                e
            })
            .collect();
        es.sort_by(f64::total_cmp);
        es.get((1usize << k) - 1).copied()
    }

    #[test]
    fn emax_examples() {
        let a = two_level();
        assert_eq!(select_emax(2, 1, &a).unwrap(), 10.0);
        assert_eq!(select_emax(2, 2, &a).unwrap(), 18.0);
        assert!(matches!(select_emax(2, 3, &a), Err(Error::RateInfeasible(_))));
    }

    #[test]
    fn toy_weights() {
        let set = build_ess(2, 1, &two_level()).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.leaves[0].composition, comp(&[2, 0]));
        assert_eq!(set.leaves[1].composition, comp(&[1, 1]));
        assert_eq!(set.leaves[0].weight, 0.5);
        assert_eq!(set.leaves[1].weight, 0.5);
        assert!(set.leaves.iter().all(|l| l.payload_bits().is_none()));
    }

    #[test]
    fn range_over_three_shells() {
        let set = build_ess(2, 2, &two_level()).unwrap();
        assert_eq!(set.len(), 3);
        let (lo, hi) = ess_kurtosis_range(&set).unwrap();
        // [2,0] and [0,2] are constant-modulus, [1,1] is the spread one
        assert_eq!(lo, 1.0);
        let p11 = crate::combinatorics::block_moments(
            &crate::combinatorics::pmf_of(&comp(&[1, 1])),
            &two_level(),
        )
        .unwrap();
        assert!((hi - p11.kurtosis_2d).abs() < 1e-15);
    }

    #[test]
    fn all_lowest_level_shell_present_at_toy_scale() {
        let set = build_ess(6, 3, &two_level()).unwrap();
        assert_eq!(set.leaves[0].composition, comp(&[6, 0]));
        assert_eq!(ess_kurtosis_range(&set).unwrap().0, 1.0);
    }

    #[test]
    fn exclusive_convention_moves_one_grid_step() {
        let a = two_level();
        let inc = EnergyShellIndex::build(4, 2, &a).unwrap();
        let exc = EnergyShellIndex::build_with(4, 2, &a, RadiusConvention::Exclusive).unwrap();
        assert!(exc.e_max > inc.e_max);
        assert_eq!(exc.shells_below(), inc.shells_at_or_below());
        assert!(exc.sequences_below() >= BigUint::from(4u32));
    }

    #[test]
    fn brute_force_small_blocks() {
        let a = two_level();
        for n in 1..=8u32 {
            for k in 0..=n as u64 {
                let idx = EnergyShellIndex::build(n, k, &a).unwrap();
                assert_eq!(Some(idx.e_max), brute_emax(n, k, &a), "n={n} k={k}");
                let set = build_ess_from(&idx, &a).unwrap();
                assert_eq!(set.address_total(), BigUint::one() << k);
                assert!((set.weight_sum() - 1.0).abs() < 1e-12);
            }
        }
        let a3 = AmplitudeAlphabet::new(vec![1.0, 3.0, 5.0]).unwrap();
        for k in 0..=6 {
            assert_eq!(Some(select_emax(5, k, &a3).unwrap()), brute_emax(5, k, &a3));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn minimality_and_membership(n in 1u32..30, frac in 0.0f64..1.0) {
            let a = AmplitudeAlphabet::qam64();
            let k = (frac * 2.0 * n as f64).floor() as u64;
            let idx = EnergyShellIndex::build(n, k, &a).unwrap();
            let target = BigUint::one() << k;
            prop_assert!(idx.sequences_below() < target);
            prop_assert!(idx.total() >= target);
            prop_assert!(idx.cumulative.windows(2).all(|w| w[0] <= w[1]));
            let set = build_ess_from(&idx, &a).unwrap();
            prop_assert_eq!(set.address_total(), target);
            for l in &set.leaves {
                prop_assert!(energy(&l.composition, &a) <= idx.e_max + 1e-9);
                prop_assert!(l.address_count() <= multinomial_coefficient(&l.composition));
            }
        }
    }
}
