//! Shaping schemes as weighted sets of compositions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combinatorics::{
    block_moments, multinomial_coefficient, pmf_of, rate_loss, ratio_pow2, AmplitudeAlphabet,
    Composition, Pmf,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeTag {
    Ccdm,
    Mpdm,
    Ess,
    OptMpdm,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 4] = [Self::Ccdm, Self::Ess, Self::Mpdm, Self::OptMpdm];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ccdm => "ccdm",
            Self::Mpdm => "mpdm",
            Self::Ess => "ess",
            Self::OptMpdm => "opt-mpdm",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ccdm" => Ok(Self::Ccdm),
            "mpdm" => Ok(Self::Mpdm),
            "ess" => Ok(Self::Ess),
            "opt-mpdm" => Ok(Self::OptMpdm),
            _ => Err(Error::Domain(format!("unknown scheme '{s}'"))),
        }
    }
}

/// How a leaf is reached from the k input bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Addressing {
    /// Prefix-tree leaf carrying `payload_bits` bits at depth `k - payload_bits`.
    Tree { payload_bits: u64, depth: u64 },
    /// Energy shell using `used` of its sequences.
    Shell { used: BigUint },
}

/// One composition in a scheme; the tree variant is an addressed composition.
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub composition: Composition,
    pub addressing: Addressing,
    /// Fraction of the 2^k inputs that land on this composition.
    pub weight: f64,
}

impl Leaf {
    pub fn payload_bits(&self) -> Option<u64> {
        match self.addressing {
            Addressing::Tree { payload_bits, .. } => Some(payload_bits),
            Addressing::Shell { .. } => None,
        }
    }

    /// Number of input words mapped to this leaf.
    pub fn address_count(&self) -> BigUint {
        match &self.addressing {
            Addressing::Tree { payload_bits, .. } => BigUint::one() << *payload_bits,
            Addressing::Shell { used } => used.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSet {
    pub tag: SchemeTag,
    pub n: u32,
    pub k: u64,
    pub alphabet: AmplitudeAlphabet,
    pub leaves: Vec<Leaf>,
    pub avg_pmf: Pmf,
    pub rate_loss: f64,
}

impl CompositionSet {
    /// Builds a prefix-tree scheme. Leaves are stored by payload descending (stable),
    /// which makes the canonical prefix assignment in list order valid.
    pub fn from_tree(
        tag: SchemeTag,
        n: u32,
        k: u64,
        alphabet: &AmplitudeAlphabet,
        mut items: Vec<(Composition, u64)>,
    ) -> Result<Self> {
        items.sort_by_key(|item| std::cmp::Reverse(item.1));
        if items.iter().any(|(_, p)| *p > k) {
            return Err(Error::ConstructionBug("leaf payload exceeds k".into()));
        }
        let leaves: Vec<Leaf> = items
            .into_iter()
            .map(|(composition, p)| Leaf {
                composition,
                addressing: Addressing::Tree {
                    payload_bits: p,
                    depth: k - p,
                },
                weight: (p as f64 - k as f64).exp2(),
            })
            .collect();
        Self::assemble(tag, n, k, alphabet, leaves)
    }

    /// Builds a shell-weighted scheme (no prefix tree).
    pub fn from_shells(
        tag: SchemeTag,
        n: u32,
        k: u64,
        alphabet: &AmplitudeAlphabet,
        items: Vec<(Composition, BigUint)>,
    ) -> Result<Self> {
        let leaves: Vec<Leaf> = items
            .into_iter()
            .map(|(composition, used)| {
                let weight = ratio_pow2(&used, k);
                Leaf {
                    composition,
                    addressing: Addressing::Shell { used },
                    weight,
                }
            })
            .collect();
        Self::assemble(tag, n, k, alphabet, leaves)
    }

    fn assemble(
        tag: SchemeTag,
        n: u32,
        k: u64,
        alphabet: &AmplitudeAlphabet,
        leaves: Vec<Leaf>,
    ) -> Result<Self> {
        if leaves.is_empty() {
            return Err(Error::ConstructionBug("scheme without leaves".into()));
        }
        let m = alphabet.m();
        // exact weighted level totals: sum_j count_j * c_j[i], over 2^k * n
        let mut totals = vec![BigUint::zero(); m];
        for leaf in &leaves {
            if leaf.composition.m() != m || leaf.composition.n() != n {
                return Err(Error::ConstructionBug(format!(
                    "leaf {} does not match n={n}, m={m}",
                    leaf.composition
                )));
            }
            let cnt = leaf.address_count();
            for (t, &c) in totals.iter_mut().zip(leaf.composition.counts()) {
                *t += &cnt * c;
            }
        }
        let avg: Vec<f64> = totals.iter().map(|t| ratio_pow2(t, k) / n as f64).collect();
        let avg_pmf = Pmf::from_weights(avg)?;
        let rate_loss = rate_loss(&avg_pmf, k, n)?;
        let set = Self {
            tag,
            n,
            k,
            alphabet: alphabet.clone(),
            leaves,
            avg_pmf,
            rate_loss,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn is_tree(&self) -> bool {
        self.leaves
            .iter()
            .all(|l| matches!(l.addressing, Addressing::Tree { .. }))
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Total number of addressed input words; equals 2^k for every valid scheme.
    pub fn address_total(&self) -> BigUint {
        self.leaves.iter().map(Leaf::address_count).sum()
    }

    /// Kraft sum of the prefix depths (tree schemes only).
    pub fn kraft_sum(&self) -> Option<f64> {
        self.is_tree().then(|| {
            self.leaves
                .iter()
                .map(|l| match l.addressing {
                    Addressing::Tree { depth, .. } => (-(depth as f64)).exp2(),
                    Addressing::Shell { .. } => 0.0,
                })
                .sum()
        })
    }

    /// First input word of each leaf under the canonical prefix assignment.
    pub fn leaf_offsets(&self) -> Vec<BigUint> {
        let mut acc = BigUint::zero();
        self.leaves
            .iter()
            .map(|l| {
                let start = acc.clone();
                acc += l.address_count();
                start
            })
            .collect()
    }

    /// 2D kurtosis of every leaf's PMF, in leaf order.
    pub fn leaf_kurtosis(&self) -> Result<Vec<f64>> {
        self.leaves
            .iter()
            .map(|l| Ok(block_moments(&pmf_of(&l.composition), &self.alphabet)?.kurtosis_2d))
            .collect()
    }

    pub fn weight_sum(&self) -> f64 {
        self.leaves.iter().map(|l| l.weight).sum()
    }

    /// Checks address conservation, leaf capacity, distinctness and prefix alignment.
    pub fn validate(&self) -> Result<()> {
        let target = BigUint::one() << self.k;
        if self.address_total() != target {
            return Err(Error::ConstructionBug(format!(
                "{} scheme addresses {} words, expected 2^{}",
                self.tag,
                self.address_total(),
                self.k
            )));
        }
        let mut seen = HashSet::with_capacity(self.leaves.len());
        for leaf in &self.leaves {
            if !seen.insert(leaf.composition.counts()) {
                return Err(Error::ConstructionBug(format!(
                    "duplicate leaf {}",
                    leaf.composition
                )));
            }
            let cap = leaf.address_count();
            if cap.is_zero() || cap > multinomial_coefficient(&leaf.composition) {
                return Err(Error::ConstructionBug(format!(
                    "leaf {} addresses more sequences than it has",
                    leaf.composition
                )));
            }
            if let Addressing::Tree { payload_bits, depth } = leaf.addressing {
                if payload_bits + depth != self.k {
                    return Err(Error::ConstructionBug("depth != k - payload".into()));
                }
            }
        }
        if self.is_tree() {
            for (leaf, off) in self.leaves.iter().zip(self.leaf_offsets()) {
                let p = leaf.payload_bits().unwrap();
                if (&off >> p) << p != off {
                    return Err(Error::ConstructionBug(format!(
                        "leaf {} is not prefix aligned",
                        leaf.composition
                    )));
                }
            }
        }
        Ok(())
    }
}
