//! Exact composition arithmetic.
//!
//! A [`Composition`] counts how often each amplitude level occurs in one shaped
//! block. Everything that counts sequences (multinomial coefficients, input bit
//! counts, address totals) is done in arbitrary precision; floating point only
//! appears where a real value is the actual output (entropy, moments).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision sequence count.
pub type BigCount = BigUint;

/// Ascending set of positive amplitude levels.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeAlphabet {
    levels: Vec<f64>,
    energies: Vec<f64>,
}

impl AmplitudeAlphabet {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::InvalidAlphabet(format!(
                "need at least 2 levels, got {}",
                levels.len()
            )));
        }
        if levels.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
            return Err(Error::InvalidAlphabet("levels must be finite and positive".into()));
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphabet("levels must be strictly ascending".into()));
        }
        let energies = levels.iter().map(|l| l * l).collect();
        Ok(Self { levels, energies })
    }

    /// Amplitudes of dual-polarization 64QAM: {1, 3, 5, 7}.
    pub fn qam64() -> Self {
        Self::new(vec![1.0, 3.0, 5.0, 7.0]).expect("static alphabet")
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn m(&self) -> usize {
        self.levels.len()
    }

    /// Scaled copy; used to check scale invariance of the moments.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.levels.iter().map(|l| l * s).collect())
    }

    /// Index of the level equal to `value`, if any.
    pub fn level_index(&self, value: f64) -> Option<usize> {
        self.levels
            .iter()
            .position(|&l| (l - value).abs() <= 1e-9 * l.max(1.0))
    }

    /// Discrete energy grid: every level energy is `base + steps[i] * unit`.
    pub fn energy_grid(&self) -> Result<EnergyGrid> {
        let base = self.energies[0];
        let diffs: Vec<f64> = self.energies[1..].iter().map(|e| e - base).collect();
        let scale = diffs.iter().cloned().fold(0.0, f64::max);
        let tol = 1e-9 * scale;
        let mut unit = diffs[0];
        for &d in &diffs[1..] {
            unit = float_gcd(unit, d, tol);
        }
        let mut steps = vec![0u32];
        for &d in &diffs {
            let s = (d / unit).round();
            if (s * unit - d).abs() > 1e-7 * d || s > u32::MAX as f64 {
                return Err(Error::InvalidAlphabet(
                    "level energies are not commensurate; no discrete energy grid".into(),
                ));
            }
            steps.push(s as u32);
        }
        if *steps.last().unwrap() > 1 << 20 {
            return Err(Error::InvalidAlphabet(
                "energy grid too fine for trellis enumeration".into(),
            ));
        }
        Ok(EnergyGrid { base, unit, steps })
    }
}

impl Default for AmplitudeAlphabet {
    fn default() -> Self {
        Self::qam64()
    }
}

impl fmt::Display for AmplitudeAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

fn float_gcd(mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b > tol {
        let r = a % b;
        a = b;
        b = if r > b - tol { 0.0 } else { r };
    }
    a
}

/// Level energies expressed as integer steps on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid {
    pub base: f64,
    pub unit: f64,
    pub steps: Vec<u32>,
}

impl EnergyGrid {
    /// Grid coordinate of a composition's energy above the all-lowest-level block.
    pub fn steps_of(&self, c: &Composition) -> u64 {
        c.counts()
            .iter()
            .zip(&self.steps)
            .map(|(&n, &s)| n as u64 * s as u64)
            .sum()
    }

    pub fn energy_at(&self, n: u32, steps: u64) -> f64 {
        n as f64 * self.base + steps as f64 * self.unit
    }

    /// Largest grid coordinate whose energy does not exceed `energy`.
    pub fn steps_below(&self, n: u32, energy: f64) -> Option<u64> {
        let rel = (energy - n as f64 * self.base) / self.unit;
        if rel < -1e-9 {
            None
        } else {
            Some((rel + 1e-9).floor() as u64)
        }
    }
}

/// Occurrence counts of each level in one block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    counts: Vec<u32>,
}

impl Composition {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidComposition("empty count vector".into()));
        }
        if counts.iter().map(|&c| c as u64).sum::<u64>() > u32::MAX as u64 {
            return Err(Error::InvalidComposition("block length overflows u32".into()));
        }
        Ok(Self { counts })
    }

    /// Checks `counts.len()` against an alphabet.
    pub fn for_alphabet(counts: Vec<u32>, a: &AmplitudeAlphabet) -> Result<Self> {
        if counts.len() != a.m() {
            return Err(Error::InvalidComposition(format!(
                "{} counts for a {}-level alphabet",
                counts.len(),
                a.m()
            )));
        }
        Self::new(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn n(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn m(&self) -> usize {
        self.counts.len()
    }

    /// Colexicographic order: compare the reversed count vectors lexicographically.
    pub fn colex_cmp(&self, other: &Self) -> Ordering {
        self.counts.iter().rev().cmp(other.counts.iter().rev())
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", s.join(","))
    }
}

/// Probability mass function over the alphabet levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf(Vec<f64>);

impl Pmf {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&x| !(x.is_finite() && x >= 0.0)) {
            return Err(Error::InvalidPmf("entries must be finite and non-negative".into()));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPmf(format!("entries sum to {s}, not 1")));
        }
        Ok(Self(p))
    }

    /// Normalizes non-negative weights.
    pub fn from_weights(w: Vec<f64>) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidPmf("weights must have a positive finite sum".into()));
        }
        Self::new(w.into_iter().map(|x| x / s).collect())
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Raw 1D amplitude moments plus the 2D symbol statistics derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMoments {
    pub mu2_1d: f64,
    pub mu4_1d: f64,
    pub mu6_1d: f64,
    /// E[|X|^4] / E[|X|^2]^2 for X = A_I + j A_Q with i.i.d. quadratures.
    pub kurtosis_2d: f64,
    /// E[|X|^6] / E[|X|^2]^3 - 9 kurtosis + 12.
    pub psi_2d: f64,
}

impl BlockMoments {
    /// Standardized fourth moment of the 1D amplitude, for diagnostics.
    pub fn kurtosis_1d(&self) -> f64 {
        self.mu4_1d / (self.mu2_1d * self.mu2_1d)
    }

    /// Excess kurtosis of the 2D symbol relative to a circular Gaussian.
    pub fn excess_kurtosis(&self) -> f64 {
        self.kurtosis_2d - 2.0
    }
}

/// n! / prod(n_i!), exact.
pub fn multinomial_coefficient(c: &Composition) -> BigCount {
    // prod over i of binom(n_0 + .. + n_i, n_i)
    let mut acc = BigUint::one();
    let mut total: u64 = 0;
    for &k in c.counts() {
        for j in 1..=k as u64 {
            total += 1;
            acc *= total;
            acc /= j;
        }
    }
    acc
}

/// floor(log2 MC(c)) from the bit length of the exact value.
pub fn input_bits(c: &Composition) -> u64 {
    multinomial_coefficient(c).bits() - 1
}

/// Precomputed factorials for repeated multinomials at one block length.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    exact: Vec<BigUint>,
    log2: Vec<f64>,
}

impl FactorialTable {
    pub fn new(max_n: u32) -> Self {
        let mut exact = Vec::with_capacity(max_n as usize + 1);
        let mut log2 = Vec::with_capacity(max_n as usize + 1);
        let mut f = BigUint::one();
        let mut l = 0.0f64;
        exact.push(f.clone());
        log2.push(0.0);
        for i in 1..=max_n as u64 {
            f *= i;
            l += (i as f64).log2();
            exact.push(f.clone());
            log2.push(l);
        }
        Self { exact, log2 }
    }

    pub fn max_n(&self) -> u32 {
        (self.exact.len() - 1) as u32
    }

    pub fn multinomial(&self, counts: &[u32]) -> BigCount {
        let n: u32 = counts.iter().sum();
        let mut den = BigUint::one();
        for &c in counts {
            if c > 1 {
                den *= &self.exact[c as usize];
            }
        }
        &self.exact[n as usize] / den
    }

    /// Floating-point log2 of the multinomial coefficient.
    pub fn log2_multinomial(&self, counts: &[u32]) -> f64 {
        let n: u32 = counts.iter().sum();
        self.log2[n as usize] - counts.iter().map(|&c| self.log2[c as usize]).sum::<f64>()
    }

    /// Exact floor(log2 MC); falls back to big integers only near an integer boundary.
    pub fn input_bits(&self, counts: &[u32]) -> u64 {
        let l = self.log2_multinomial(counts);
        let fl = l.floor();
        if l - fl > 1e-7 && fl + 1.0 - l > 1e-7 {
            fl.max(0.0) as u64
        } else {
            self.multinomial(counts).bits() - 1
        }
    }
}

pub fn pmf_of(c: &Composition) -> Pmf {
    let n = c.n() as f64;
    Pmf(c.counts().iter().map(|&k| k as f64 / n).collect())
}

/// Entropy in bits with 0 log 0 = 0.
pub fn entropy(p: &Pmf) -> f64 {
    -p.probs()
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

pub fn energy(c: &Composition, a: &AmplitudeAlphabet) -> f64 {
    c.counts()
        .iter()
        .zip(a.energies())
        .map(|(&k, e)| k as f64 * e)
        .sum()
}

pub fn block_moments(p: &Pmf, a: &AmplitudeAlphabet) -> Result<BlockMoments> {
    if p.len() != a.m() {
        return Err(Error::InvalidPmf(format!(
            "pmf has {} entries for a {}-level alphabet",
            p.len(),
            a.m()
        )));
    }
    let (mut m2, mut m4, mut m6) = (0.0, 0.0, 0.0);
    for (&pi, &e) in p.probs().iter().zip(a.energies()) {
        m2 += pi * e;
        m4 += pi * e * e;
        m6 += pi * e * e * e;
    }
    if !(m2 > 0.0) {
        return Err(Error::DegeneratePmf);
    }
    let kurtosis_2d = (m4 / (m2 * m2) + 1.0) / 2.0;
    let e_x2 = 2.0 * m2;
    let e_x6 = 2.0 * m6 + 6.0 * m4 * m2;
    let psi_2d = e_x6 / (e_x2 * e_x2 * e_x2) - 9.0 * kurtosis_2d + 12.0;
    Ok(BlockMoments {
        mu2_1d: m2,
        mu4_1d: m4,
        mu6_1d: m6,
        kurtosis_2d,
        psi_2d,
    })
}

/// Kurtosis of a single block's empirical PMF.
pub fn composition_kurtosis(c: &Composition, a: &AmplitudeAlphabet) -> Result<f64> {
    Ok(block_moments(&pmf_of(c), a)?.kurtosis_2d)
}

/// H(avg) - k/n in bits per 1D symbol.
pub fn rate_loss(avg: &Pmf, k: u64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("block length must be positive".into()));
    }
    let rl = entropy(avg) - k as f64 / n as f64;
    if rl < -1e-9 {
        return Err(Error::ConstructionBug(format!(
            "negative rate loss {rl:e}: rate k/n exceeds the entropy of the output"
        )));
    }
    Ok(rl.max(0.0))
}

/// C(n + m - 1, m - 1), the number of compositions of n into m parts.
pub fn count_compositions(n: u32, m: usize) -> BigCount {
    if m == 0 {
        return BigUint::zero();
    }
    let c = Composition {
        counts: vec![n, (m - 1) as u32],
    };
    multinomial_coefficient(&c)
}

fn count_u128(n: u32, m: usize) -> u128 {
    count_compositions(n, m).to_u128().unwrap_or(u128::MAX)
}

/// Every composition of `n` into `m` parts, in colexicographic order.
pub fn enumerate_compositions(n: u32, m: usize) -> Compositions {
    Compositions::new(n, m)
}

/// Colexicographic composition stream; see [`enumerate_compositions`].
#[derive(Debug, Clone)]
pub struct Compositions {
    cur: Option<Vec<u32>>,
}

impl Compositions {
    fn new(n: u32, m: usize) -> Self {
        let cur = (m > 0).then(|| {
            let mut v = vec![0; m];
            v[0] = n;
            v
        });
        Self { cur }
    }

    /// Stream starting at colex position `index`; used to split the range across workers.
    pub fn starting_at(n: u32, m: usize, index: u128) -> Self {
        Self {
            cur: composition_at(n, m, index).map(|c| c.counts),
        }
    }

    fn advance(v: &mut [u32]) -> bool {
        let mut low_sum = 0u32;
        for j in 1..v.len() {
            low_sum += v[j - 1];
            if low_sum >= 1 {
                for x in v[..j].iter_mut() {
                    *x = 0;
                }
                v[0] = low_sum - 1;
                v[j] += 1;
                return true;
            }
        }
        false
    }

    /// Visits every remaining composition with a borrowed buffer.
    pub fn for_each_counts(mut self, mut f: impl FnMut(&[u32])) {
        if let Some(mut v) = self.cur.take() {
            loop {
                f(&v);
                if !Self::advance(&mut v) {
                    break;
                }
            }
        }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let v = self.cur.as_mut()?;
        let out = v.clone();
        if !Self::advance(v) {
            self.cur = None;
        }
        Some(Composition { counts: out })
    }
}

/// Colex unranking: the composition at stream position `index`.
pub fn composition_at(n: u32, m: usize, mut index: u128) -> Option<Composition> {
    if m == 0 || index >= count_u128(n, m) {
        return None;
    }
    let mut counts = vec![0u32; m];
    let mut rest = n;
    for pos in (1..m).rev() {
        // most significant coordinate first; c_pos = v leaves `rest - v` for pos parts
        let mut v = 0;
        loop {
            let block = count_u128(rest - v, pos);
            if index < block {
                break;
            }
            index -= block;
            v += 1;
        }
        counts[pos] = v;
        rest -= v;
    }
    counts[0] = rest;
    Some(Composition { counts })
}

/// Inverse of [`composition_at`].
pub fn colex_rank(c: &Composition) -> u128 {
    let m = c.m();
    let mut rest = c.n();
    let mut index = 0u128;
    for pos in (1..m).rev() {
        for v in 0..c.counts[pos] {
            index += count_u128(rest - v, pos);
        }
        rest -= c.counts[pos];
    }
    index
}

/// f64 value of `num / 2^den_bits`, accurate for very large operands.
pub fn ratio_pow2(num: &BigUint, den_bits: u64) -> f64 {
    let nb = num.bits();
    if nb <= 1000 && den_bits <= 1000 {
        return num.to_f64().unwrap_or(f64::INFINITY) * (-(den_bits as f64)).exp2();
    }
    let shift = nb.saturating_sub(64);
    let top = (num >> shift).to_f64().unwrap_or(0.0);
    top * (shift as f64 - den_bits as f64).exp2()
}

/// f64 value of `num / den` for big integers.
pub fn ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = den.bits().saturating_sub(64);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    let n = ratio_pow2(num, shift);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn comp(v: &[u32]) -> Composition {
        Composition::new(v.to_vec()).unwrap()
    }

    fn brute_force_count(c: &Composition) -> u64 {
        let n = c.n() as usize;
        let m = c.m();
        let mut hits = 0;
        let total = (m as u64).pow(n as u32);
        for mut x in 0..total {
            let mut cnt = vec![0u32; m];
            for _ in 0..n {
                cnt[(x % m as u64) as usize] += 1;
                x /= m as u64;
            }
            if cnt == c.counts() {
                hits += 1;
            }
        }
        hits
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial_coefficient(&comp(&[1, 1, 1])), BigUint::from(6u32));
        assert_eq!(multinomial_coefficient(&comp(&[3, 0, 0, 0])), BigUint::from(1u32));
        let c = comp(&[2, 1, 0, 0]);
        assert_eq!(brute_force_count(&c), 3);
        assert_eq!(multinomial_coefficient(&c), BigUint::from(3u32));
    }

    #[test]
    fn input_bits_examples() {
        assert_eq!(input_bits(&comp(&[3, 0, 0, 0])), 0);
        assert_eq!(brute_force_count(&comp(&[2, 2, 0, 0])), 6);
        assert_eq!(input_bits(&comp(&[2, 2, 0, 0])), 2);
    }

    #[test]
    fn table_matches_direct() {
        let t = FactorialTable::new(216);
        for v in [[54u32, 54, 54, 54], [102, 70, 33, 11], [216, 0, 0, 0], [0, 0, 1, 215]] {
            let c = comp(&v);
            assert_eq!(t.multinomial(&v), multinomial_coefficient(&c));
            assert_eq!(t.input_bits(&v), input_bits(&c));
        }
        // exactly a power of two: MC = 2
        assert_eq!(t.input_bits(&[1, 1]), 1);
        assert_eq!(t.input_bits(&[3, 1]), 2);
    }

    #[test]
    fn entropy_examples() {
        let h = |v: &[f64]| entropy(&Pmf::new(v.to_vec()).unwrap());
        assert!((h(&[0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(h(&[0.0, 0.0, 1.0, 0.0]), 0.0);
        assert!((h(&[0.5, 0.25, 0.125, 0.125]) - 1.75).abs() < 1e-15);
    }

    #[test]
    fn energy_examples() {
        let a = AmplitudeAlphabet::qam64();
        assert_eq!(energy(&comp(&[216, 0, 0, 0]), &a), 216.0);
        assert_eq!(energy(&comp(&[0, 0, 0, 216]), &a), 10584.0);
        assert_eq!(energy(&comp(&[1, 1, 0, 0]), &a), 10.0);
    }

    #[test]
    fn moments_examples() {
        let a = AmplitudeAlphabet::qam64();
        let u = block_moments(&Pmf::new(vec![0.25; 4]).unwrap(), &a).unwrap();
        // mu2 = 21, mu4 = 777: (777/441 + 1)/2
        assert!((u.kurtosis_2d - 1.380_952_380_952_381).abs() < 1e-12);
        let d = block_moments(&Pmf::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap(), &a).unwrap();
        assert!((d.kurtosis_2d - 1.0).abs() < 1e-15);
        assert!(matches!(
            block_moments(&Pmf::new(vec![1.0, 0.0]).unwrap(), &a),
            Err(Error::InvalidPmf(_))
        ));
    }

    #[test]
    fn rate_loss_sign() {
        let c = comp(&[5, 3, 2]);
        let rl = rate_loss(&pmf_of(&c), input_bits(&c), c.n()).unwrap();
        assert!(rl >= 0.0);
        assert!(matches!(
            rate_loss(&Pmf::new(vec![0.5, 0.5]).unwrap(), 5, 4),
            Err(Error::ConstructionBug(_))
        ));
    }

    #[test]
    fn enumeration_order_and_count() {
        let v: Vec<Vec<u32>> = enumerate_compositions(2, 2).map(|c| c.counts).collect();
        assert_eq!(v, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let a = AmplitudeAlphabet::new(vec![1.0, 3.0]).unwrap();
        let f: Vec<Composition> = enumerate_compositions(2, 2)
            .filter(|c| energy(c, &a) <= 2.0)
            .collect();
        assert_eq!(f, vec![comp(&[2, 0])]);
        assert_eq!(count_compositions(216, 4), BigUint::from(1_726_669u32));
    }

    #[test]
    fn enumeration_is_duplicate_free_and_colex_sorted() {
        for n in 0..=7 {
            for m in 1..=4 {
                let all: Vec<Composition> = enumerate_compositions(n, m).collect();
                let set: HashSet<_> = all.iter().cloned().collect();
                assert_eq!(set.len(), all.len());
                assert_eq!(BigUint::from(all.len()), count_compositions(n, m));
                assert!(all.windows(2).all(|w| w[0].colex_cmp(&w[1]) == Ordering::Less));
                for (i, c) in all.iter().enumerate() {
                    assert_eq!(c.n(), n);
                    assert_eq!(colex_rank(c), i as u128);
                    assert_eq!(composition_at(n, m, i as u128).as_ref(), Some(c));
                }
            }
        }
    }

    #[test]
    fn partitioned_stream_resumes() {
        let full: Vec<Composition> = enumerate_compositions(9, 4).collect();
        let tail: Vec<Composition> = Compositions::starting_at(9, 4, 100).collect();
        assert_eq!(&full[100..], &tail[..]);
        let mut seen = 0;
        Compositions::starting_at(9, 4, 0).for_each_counts(|_| seen += 1);
        assert_eq!(seen, full.len());
    }

    #[test]
    fn energy_grid_for_qam64() {
        let g = AmplitudeAlphabet::qam64().energy_grid().unwrap();
        assert_eq!(g.base, 1.0);
        assert_eq!(g.unit, 8.0);
        assert_eq!(g.steps, vec![0, 1, 3, 6]);
        let c = comp(&[1, 1, 0, 0]);
        assert_eq!(g.energy_at(2, g.steps_of(&c)), 10.0);
        assert!(AmplitudeAlphabet::new(vec![1.0, 2.0_f64.sqrt() + 0.1, 3.0_f64.sqrt() * 1.7])
            .unwrap()
            .energy_grid()
            .is_err());
    }

    #[test]
    fn alphabet_validation() {
        assert!(AmplitudeAlphabet::new(vec![1.0]).is_err());
        assert!(AmplitudeAlphabet::new(vec![3.0, 1.0]).is_err());
        assert!(AmplitudeAlphabet::new(vec![-1.0, 1.0]).is_err());
    }

    #[test]
    fn big_ratio() {
        let num = BigUint::one() << 500u32;
        assert!((ratio_pow2(&num, 501) - 0.5).abs() < 1e-15);
        let den = BigUint::from(3u32) << 2000u32;
        let num = BigUint::one() << 2000u32;
        assert!((ratio(&num, &den) - 1.0 / 3.0).abs() < 1e-15);
    }
}
