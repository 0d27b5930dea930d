//! Bit-exact matchers: k input bits to n amplitudes and back.
//!
//! Input words are non-negative integers below `2^k`, most significant bit first.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{Num, One, Zero};

use crate::combinatorics::{multinomial_coefficient, AmplitudeAlphabet, Composition, EnergyGrid};
use crate::error::{Error, Result};
use crate::scheme::CompositionSet;

/// Level indices of the `index`-th permutation (lexicographic) of the multiset `counts`.
pub fn cc_unrank_indices(index: &BigUint, counts: &[u32]) -> Result<Vec<usize>> {
    let mut left = counts.to_vec();
    let n: u32 = counts.iter().sum();
    let mut total = multinomial_coefficient(&Composition::new(counts.to_vec())?);
    if index >= &total {
        return Err(Error::Domain(format!(
            "index {index} out of range for a composition with {total} sequences"
        )));
    }
    let mut idx = index.clone();
    let mut out = Vec::with_capacity(n as usize);
    for len in (1..=n).rev() {
        for (l, cnt) in left.iter_mut().enumerate() {
            if *cnt == 0 {
                continue;
            }
            // sequences that start with level l
            let block = &total * *cnt / len;
            if idx < block {
                total = block;
                *cnt -= 1;
                out.push(l);
                break;
            }
            idx -= block;
        }
    }
    Ok(out)
}

/// Inverse of [`cc_unrank_indices`]; the composition is read off the sequence.
pub fn cc_rank_indices(seq: &[usize], m: usize) -> Result<BigUint> {
    let mut left = vec![0u32; m];
    for &s in seq {
        *left
            .get_mut(s)
            .ok_or_else(|| Error::Decode(format!("level index {s} outside the alphabet")))? += 1;
    }
    let mut total = multinomial_coefficient(&Composition::new(left.clone())?);
    let mut rank = BigUint::zero();
    for (pos, &s) in seq.iter().enumerate() {
        let len = (seq.len() - pos) as u32;
        for &cnt in left[..s].iter().filter(|&&c| c > 0) {
            rank += &total * cnt / len;
        }
        total = &total * left[s] / len;
        left[s] -= 1;
    }
    Ok(rank)
}

pub fn cc_unrank(index: &BigUint, c: &Composition, a: &AmplitudeAlphabet) -> Result<Vec<f64>> {
    Ok(to_levels(&cc_unrank_indices(index, c.counts())?, a))
}

pub fn cc_rank(seq: &[f64], a: &AmplitudeAlphabet) -> Result<BigUint> {
    cc_rank_indices(&to_indices(seq, a)?, a.m())
}

fn to_levels(idx: &[usize], a: &AmplitudeAlphabet) -> Vec<f64> {
    idx.iter().map(|&i| a.levels()[i]).collect()
}

fn to_indices(seq: &[f64], a: &AmplitudeAlphabet) -> Result<Vec<usize>> {
    seq.iter()
        .map(|&x| {
            a.level_index(x)
                .ok_or_else(|| Error::Decode(format!("{x} is not a level of {{{a}}}")))
        })
        .collect()
}

/// Suffix counts over the energy grid: `counts[i][u]` sequences of length `n - i` whose
/// energy is at most `u` grid steps above the all-lowest-level suffix.
#[derive(Debug, Clone)]
pub struct EssTrellis {
    pub n: u32,
    pub grid: EnergyGrid,
    pub max_steps: u64,
    pub counts: Vec<Vec<BigUint>>,
}

impl EssTrellis {
    pub fn new(n: u32, a: &AmplitudeAlphabet, e_max: f64) -> Result<Self> {
        let grid = a.energy_grid()?;
        let max_steps = grid.steps_below(n, e_max).ok_or_else(|| {
            Error::Domain(format!("radius {e_max} is below the lowest block energy"))
        })?;
        Ok(Self::with_steps(n, grid, max_steps))
    }

    pub fn with_steps(n: u32, grid: EnergyGrid, max_steps: u64) -> Self {
        let width = max_steps as usize + 1;
        let mut counts = vec![vec![BigUint::zero(); width]; n as usize + 1];
        counts[n as usize] = vec![BigUint::one(); width];
        for i in (0..n as usize).rev() {
            let (head, tail) = counts.split_at_mut(i + 1);
            let (row, next) = (&mut head[i], &tail[0]);
            for (u, cell) in row.iter_mut().enumerate() {
                for &s in &grid.steps {
                    if s as usize <= u {
                        *cell += &next[u - s as usize];
                    }
                }
            }
        }
        Self {
            n,
            grid,
            max_steps,
            counts,
        }
    }

    /// Sequences inside the ball.
    pub fn total(&self) -> &BigUint {
        &self.counts[0][self.max_steps as usize]
    }

    pub fn e_max(&self) -> f64 {
        self.grid.energy_at(self.n, self.max_steps)
    }

    pub fn unrank_indices(&self, index: &BigUint) -> Result<Vec<usize>> {
        if index >= self.total() {
            return Err(Error::Domain(format!(
                "index {index} out of range for a ball of {} sequences",
                self.total()
            )));
        }
        let mut idx = index.clone();
        let mut u = self.max_steps as usize;
        let mut out = Vec::with_capacity(self.n as usize);
        for i in 0..self.n as usize {
            for (l, &s) in self.grid.steps.iter().enumerate() {
                let s = s as usize;
                if s > u {
                    break;
                }
                let block = &self.counts[i + 1][u - s];
                if &idx < block {
                    out.push(l);
                    u -= s;
                    break;
                }
                idx -= block;
            }
        }
        Ok(out)
    }

    pub fn rank_indices(&self, seq: &[usize]) -> Result<BigUint> {
        if seq.len() != self.n as usize {
            return Err(Error::Decode(format!(
                "expected {} symbols, got {}",
                self.n,
                seq.len()
            )));
        }
        let mut rank = BigUint::zero();
        let mut u = self.max_steps as usize;
        for (i, &l) in seq.iter().enumerate() {
            let s = *self
                .grid
                .steps
                .get(l)
                .ok_or_else(|| Error::Decode(format!("level index {l} outside the alphabet")))?
                as usize;
            if s > u {
                return Err(Error::Decode("sequence energy exceeds the ball radius".into()));
            }
            for &t in &self.grid.steps[..l] {
                rank += &self.counts[i + 1][u - t as usize];
            }
            u -= s;
        }
        Ok(rank)
    }
}

pub fn ess_unrank(index: &BigUint, a: &AmplitudeAlphabet, trellis: &EssTrellis) -> Result<Vec<f64>> {
    Ok(to_levels(&trellis.unrank_indices(index)?, a))
}

pub fn ess_rank(seq: &[f64], a: &AmplitudeAlphabet, trellis: &EssTrellis) -> Result<BigUint> {
    trellis.rank_indices(&to_indices(seq, a)?)
}

#[derive(Debug, Clone)]
enum Engine {
    Tree {
        offsets: Vec<BigUint>,
        lookup: HashMap<Vec<u32>, usize>,
    },
    Ess(EssTrellis),
}

/// Encoder/decoder for a built scheme. Tree schemes address leaf `j` through the input
/// words `offset_j .. offset_j + 2^p_j`; ESS uses the first `2^k` sequences of its ball.
#[derive(Debug, Clone)]
pub struct Codec {
    set: CompositionSet,
    engine: Engine,
}

impl Codec {
    pub fn new(set: &CompositionSet) -> Result<Self> {
        let engine = if set.is_tree() {
            let lookup = set
                .leaves
                .iter()
                .enumerate()
                .map(|(i, l)| (l.composition.counts().to_vec(), i))
                .collect();
            Engine::Tree {
                offsets: set.leaf_offsets(),
                lookup,
            }
        } else {
            let grid = set.alphabet.energy_grid()?;
            let max_steps = set
                .leaves
                .iter()
                .map(|l| grid.steps_of(&l.composition))
                .max()
                .unwrap_or(0);
            Engine::Ess(EssTrellis::with_steps(set.n, grid, max_steps))
        };
        Ok(Self {
            set: set.clone(),
            engine,
        })
    }

    pub fn trellis(&self) -> Option<&EssTrellis> {
        match &self.engine {
            Engine::Ess(t) => Some(t),
            Engine::Tree { .. } => None,
        }
    }

    pub fn encode_indices(&self, word: &BigUint) -> Result<Vec<usize>> {
        if word.bits() > self.set.k {
            return Err(Error::Domain(format!(
                "input word 0x{word:x} has more than {} bits",
                self.set.k
            )));
        }
        match &self.engine {
            Engine::Tree { offsets, .. } => {
                let j = offsets.partition_point(|o| o <= word) - 1;
                let leaf = &self.set.leaves[j];
                cc_unrank_indices(&(word - &offsets[j]), leaf.composition.counts())
            }
            Engine::Ess(t) => t.unrank_indices(word),
        }
    }

    pub fn decode_indices(&self, seq: &[usize]) -> Result<BigUint> {
        if seq.len() != self.set.n as usize {
            return Err(Error::Decode(format!(
                "expected {} symbols, got {}",
                self.set.n,
                seq.len()
            )));
        }
        match &self.engine {
            Engine::Tree { offsets, lookup } => {
                let mut counts = vec![0u32; self.set.alphabet.m()];
                for &s in seq {
                    *counts.get_mut(s).ok_or_else(|| {
                        Error::Decode(format!("level index {s} outside the alphabet"))
                    })? += 1;
                }
                let &j = lookup.get(&counts).ok_or_else(|| {
                    Error::Decode(format!(
                        "composition {} is not used by this scheme",
                        Composition::new(counts.clone()).unwrap()
                    ))
                })?;
                let r = cc_rank_indices(seq, counts.len())?;
                if r >= self.set.leaves[j].address_count() {
                    return Err(Error::Decode("sequence is outside the leaf's addressed range".into()));
                }
                Ok(&offsets[j] + r)
            }
            Engine::Ess(t) => {
                let r = t.rank_indices(seq)?;
                if r.bits() > self.set.k {
                    return Err(Error::Decode("sequence is not among the encoded words".into()));
                }
                Ok(r)
            }
        }
    }

    pub fn encode(&self, word: &BigUint) -> Result<Vec<f64>> {
        Ok(to_levels(&self.encode_indices(word)?, &self.set.alphabet))
    }

    pub fn decode(&self, seq: &[f64]) -> Result<BigUint> {
        self.decode_indices(&to_indices(seq, &self.set.alphabet)?)
    }
}

pub fn scheme_encode(word: &BigUint, set: &CompositionSet) -> Result<Vec<f64>> {
    Codec::new(set)?.encode(word)
}

pub fn scheme_decode(seq: &[f64], set: &CompositionSet) -> Result<BigUint> {
    Codec::new(set)?.decode(seq)
}

/// Parses `0x..` (or bare) hexadecimal.
pub fn parse_hex_word(s: &str) -> Result<BigUint> {
    let t = s.trim();
    let digits = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if digits.is_empty() {
        return Err(Error::Domain(format!("'{s}' is not a hexadecimal word")));
    }
    BigUint::from_str_radix(digits, 16)
        .map_err(|_| Error::Domain(format!("'{s}' is not a hexadecimal word")))
}

pub fn format_hex_word(w: &BigUint) -> String {
    format!("0x{w:x}")
}

/// Parses a comma-separated amplitude list.
pub fn parse_sequence(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("'{x}' is not a number")))
        })
        .collect()
}

pub fn format_sequence(seq: &[f64]) -> String {
    seq.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
