//! Pairwise multiset-partition distribution matching.
//!
//! Every composition `C` around a target `C0` has a complement `2*C0 - C`; a pair used
//! with equal payload on both members keeps the average composition at `C0`. Pairs and
//! the target itself are placed as leaves of a binary prefix tree that addresses exactly
//! `2^k` input words.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::ccdm::{mb_composition, LAMBDA_MAX};
use crate::combinatorics::{entropy, pmf_of, AmplitudeAlphabet, Composition, FactorialTable};
use crate::error::{Error, Result};
use crate::scheme::{CompositionSet, SchemeTag};

/// Pairs whose payload is more than this many bits below the target's own input bits
/// are not considered; their share of the address space is below 2^-40.
pub const PAIR_PAYLOAD_WINDOW: u64 = 40;

/// Shaping-parameter grid used to collect MB-family target candidates.
pub const TARGET_LAMBDA_STEP: f64 = 1e-4;

/// A composition and its complement around the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionPair {
    /// Colexicographically smaller member.
    pub c: Composition,
    pub c_bar: Composition,
    pub payload_bits: u64,
}

/// Something that can be placed in the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeItem {
    Singleton { c: Composition, payload_bits: u64 },
    Pair(CompositionPair),
}

impl TreeItem {
    fn payload(&self) -> u64 {
        match self {
            Self::Singleton { payload_bits, .. } => *payload_bits,
            Self::Pair(p) => p.payload_bits,
        }
    }

    fn canonical(&self) -> &Composition {
        match self {
            Self::Singleton { c, .. } => c,
            Self::Pair(p) => &p.c,
        }
    }

    fn addresses(&self) -> BigUint {
        match self {
            Self::Singleton { payload_bits, .. } => BigUint::one() << *payload_bits,
            Self::Pair(p) => BigUint::one() << (p.payload_bits + 1),
        }
    }
}

pub fn min_pair_payload(c0: &Composition, table: &FactorialTable) -> u64 {
    table
        .input_bits(c0.counts())
        .saturating_sub(PAIR_PAYLOAD_WINDOW)
}

/// Visits every `C != C0` with `0 <= C_i <= 2 * C0_i` and `sum C = n` whose pair payload
/// is at least `min_payload`, calling `f(C, payload)`. Both members of each pair are
/// visited. Work is split on the first coordinate; results are merged in order.
fn scan_box<T: Send>(
    c0: &Composition,
    min_payload: u64,
    table: &FactorialTable,
    init: impl Fn() -> T + Sync,
    f: impl Fn(&mut T, &[u32], u64) + Sync,
) -> Vec<T> {
    let c0v = c0.counts();
    let n = c0.n();
    let m = c0v.len();
    let floor_limit = min_payload as f64 - 1e-6;
    (0..=2 * c0v[0])
        .into_par_iter()
        .map(|first| {
            let mut acc = init();
            if first > n {
                return acc;
            }
            let mut cur = vec![0u32; m];
            let mut bar = vec![0u32; m];
            cur[0] = first;
            bar[0] = 2 * c0v[0] - first;
            fill(1, n - first, c0v, &mut cur, &mut bar, &mut |cur, bar| {
                if cur == c0v {
                    return;
                }
                let l1 = table.log2_multinomial(cur);
                let l2 = table.log2_multinomial(bar);
                if l1.min(l2) < floor_limit {
                    return;
                }
                let p = table.input_bits(cur).min(table.input_bits(bar));
                if p >= min_payload {
                    f(&mut acc, cur, p);
                }
            });
            acc
        })
        .collect()
}

fn fill(
    pos: usize,
    rest: u32,
    c0: &[u32],
    cur: &mut [u32],
    bar: &mut [u32],
    visit: &mut impl FnMut(&[u32], &[u32]),
) {
    let m = c0.len();
    if pos == m - 1 {
        if rest <= 2 * c0[pos] {
            cur[pos] = rest;
            bar[pos] = 2 * c0[pos] - rest;
            visit(cur, bar);
        }
        return;
    }
    // the remaining coordinates can absorb at most this much
    let tail_cap: u32 = c0[pos + 1..].iter().map(|c| 2 * c).sum();
    let lo = rest.saturating_sub(tail_cap);
    let hi = (2 * c0[pos]).min(rest);
    for v in lo..=hi {
        cur[pos] = v;
        bar[pos] = 2 * c0[pos] - v;
        fill(pos + 1, rest - v, c0, cur, bar, visit);
    }
}

/// Every unordered complement pair around `c0` with payload at least `min_payload`,
/// sorted by payload descending, then colexicographically by canonical member.
pub fn enumerate_pairs(c0: &Composition, min_payload: u64) -> Vec<CompositionPair> {
    let table = FactorialTable::new(c0.n());
    enumerate_pairs_with(c0, min_payload, &table)
}

pub fn enumerate_pairs_with(
    c0: &Composition,
    min_payload: u64,
    table: &FactorialTable,
) -> Vec<CompositionPair> {
    let c0v = c0.counts().to_vec();
    let chunks = scan_box(c0, min_payload, table, Vec::new, |acc, cur, p| {
        let bar: Vec<u32> = c0v.iter().zip(cur).map(|(a, b)| 2 * a - b).collect();
        if cur.iter().rev().cmp(bar.iter().rev()) == Ordering::Less {
            acc.push(CompositionPair {
                c: Composition::new(cur.to_vec()).unwrap(),
                c_bar: Composition::new(bar).unwrap(),
                payload_bits: p,
            });
        }
    });
    let mut pairs: Vec<CompositionPair> = chunks.into_iter().flatten().collect();
    pairs.sort_by(|a, b| b.payload_bits.cmp(&a.payload_bits).then(a.c.colex_cmp(&b.c)));
    pairs
}

/// Address space available from `c0` and all its pairs: 2^input_bits(C0) + sum 2 * 2^p.
pub fn pair_capacity(c0: &Composition, table: &FactorialTable) -> BigUint {
    let pmin = min_pair_payload(c0, table);
    let hists = scan_box(c0, pmin, table, BTreeMap::<u64, u64>::new, |h, _, p| {
        *h.entry(p).or_default() += 1;
    });
    let mut total = BigUint::one() << table.input_bits(c0.counts());
    for h in hists {
        for (p, cnt) in h {
            total += BigUint::from(cnt) << p;
        }
    }
    total
}

/// Greedy exact cover of the tree: items by payload descending (ties colexicographic on
/// the canonical member), the last item shortened so the total is exactly 2^k.
pub fn assemble_tree(
    tag: SchemeTag,
    a: &AmplitudeAlphabet,
    mut items: Vec<TreeItem>,
    k: u64,
) -> Result<CompositionSet> {
    let n = items
        .first()
        .map(|i| i.canonical().n())
        .ok_or_else(|| Error::RateInfeasible("no compositions to place".into()))?;
    let target = BigUint::one() << k;
    let available: BigUint = items.iter().map(TreeItem::addresses).sum();
    if available < target {
        return Err(Error::RateInfeasible(format!(
            "pairs address {} words, fewer than 2^{k}",
            available
        )));
    }
    items.sort_by(|x, y| {
        y.payload()
            .cmp(&x.payload())
            .then(x.canonical().colex_cmp(y.canonical()))
    });
    let mut need = target;
    let mut leaves = Vec::new();
    for item in items {
        if need.is_zero() {
            break;
        }
        let take = match &item {
            TreeItem::Singleton { payload_bits, .. } => {
                let fit = need.bits() - 1;
                (*payload_bits).min(fit)
            }
            TreeItem::Pair(p) => {
                if need < BigUint::from(2u32) {
                    continue;
                }
                let fit = need.bits() - 2;
                p.payload_bits.min(fit)
            }
        };
        match item {
            TreeItem::Singleton { c, .. } => {
                need -= BigUint::one() << take;
                leaves.push((c, take));
            }
            TreeItem::Pair(p) => {
                need -= BigUint::one() << (take + 1);
                leaves.push((p.c, take));
                leaves.push((p.c_bar, take));
            }
        }
    }
    if !need.is_zero() {
        return Err(Error::ConstructionBug(format!(
            "greedy cover left {need} words unaddressed"
        )));
    }
    CompositionSet::from_tree(tag, n, k, a, leaves)
}

/// MB-family quantizations plus every composition one unit away per level.
pub fn target_candidates(n: u32, a: &AmplitudeAlphabet) -> Vec<Composition> {
    let steps = (LAMBDA_MAX / TARGET_LAMBDA_STEP).round() as usize;
    let mut base = BTreeSet::new();
    for i in 0..=steps {
        base.insert(mb_composition(i as f64 * TARGET_LAMBDA_STEP, n, a).counts().to_vec());
    }
    let m = a.m();
    let mut deltas: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..m {
        deltas = deltas
            .into_iter()
            .flat_map(|d| {
                (-1..=1).map(move |x| {
                    let mut e = d.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    deltas.retain(|d| d.iter().sum::<i64>() == 0);
    let mut out = BTreeSet::new();
    for b in &base {
        for d in &deltas {
            let v: Option<Vec<u32>> = b
                .iter()
                .zip(d)
                .map(|(&c, &x)| u32::try_from(c as i64 + x).ok())
                .collect();
            if let Some(v) = v {
                out.insert(v);
            }
        }
    }
    out.into_iter()
        .map(|v| Composition::new(v).unwrap())
        .collect()
}

/// Lowest-entropy target candidate whose pair-augmented capacity reaches 2^k.
pub fn select_mpdm_target(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<Composition> {
    let table = FactorialTable::new(n);
    select_mpdm_target_with(n, k, a, &table)
}

pub fn select_mpdm_target_with(
    n: u32,
    k: u64,
    a: &AmplitudeAlphabet,
    table: &FactorialTable,
) -> Result<Composition> {
    if n == 0 {
        return Err(Error::Domain("block length must be positive".into()));
    }
    let rate = k as f64 / n as f64;
    let mut cands: Vec<(f64, Composition)> = target_candidates(n, a)
        .into_iter()
        .map(|c| (entropy(&pmf_of(&c)), c))
        // an average type below the rate cannot carry k bits
        .filter(|(h, _)| *h >= rate - 1e-12)
        .collect();
    cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.colex_cmp(&y.1)));
    let target = BigUint::one() << k;
    for (_, c0) in cands {
        if pair_capacity(&c0, table) >= target {
            return Ok(c0);
        }
    }
    Err(Error::RateInfeasible(format!(
        "no MPDM target of n={n} over {} levels reaches 2^{k} addresses",
        a.m()
    )))
}

/// A built MPDM with the target it was built around.
#[derive(Debug, Clone)]
pub struct MpdmDesign {
    pub target: Composition,
    pub pairs_considered: usize,
    pub set: CompositionSet,
}

pub fn design_mpdm(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<MpdmDesign> {
    let table = FactorialTable::new(n);
    let c0 = select_mpdm_target_with(n, k, a, &table)?;
    let pairs = enumerate_pairs_with(&c0, min_pair_payload(&c0, &table), &table);
    let pairs_considered = pairs.len();
    let mut items = vec![TreeItem::Singleton {
        payload_bits: table.input_bits(c0.counts()),
        c: c0.clone(),
    }];
    items.extend(pairs.into_iter().map(TreeItem::Pair));
    let set = assemble_tree(SchemeTag::Mpdm, a, items, k)?;
    Ok(MpdmDesign {
        target: c0,
        pairs_considered,
        set,
    })
}

pub fn build_mpdm(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<CompositionSet> {
    design_mpdm(n, k, a).map(|d| d.set)
}
