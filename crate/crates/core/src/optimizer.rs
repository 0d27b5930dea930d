//! NLI-optimised MPDM and the scheme comparison table.
//!
//! An MPDM is designed with one spare input bit, its leaves are ranked by kurtosis, and
//! the worst ones are dropped until the remaining tree still addresses `2^k` words.

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::ccdm::build_ccdm;
use crate::combinatorics::{composition_kurtosis, AmplitudeAlphabet};
use crate::error::{Error, Result};
use crate::ess::build_ess;
use crate::mpdm::{assemble_tree, build_mpdm, design_mpdm, MpdmDesign, TreeItem};
use crate::nli::{analyze, Aggregates, Config, NliModel};
use crate::scheme::{CompositionSet, SchemeTag};

#[derive(Debug, Clone)]
pub struct OptMpdm {
    pub set: CompositionSet,
    /// The MPDM at `k + 1` the pruning started from.
    pub reference: MpdmDesign,
    /// Leaves dropped by the kurtosis pruning, before the re-cover.
    pub pruned: usize,
    pub survivors: usize,
}

pub fn build_opt_mpdm(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<OptMpdm> {
    let reference = design_mpdm(n, k + 1, a)?;
    let kappa: Vec<f64> = reference
        .set
        .leaves
        .par_iter()
        .map(|l| composition_kurtosis(&l.composition, a))
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..kappa.len()).collect();
    // worst first; equal kurtosis in colex order
    order.sort_by(|&i, &j| {
        kappa[j].total_cmp(&kappa[i]).then_with(|| {
            let li = &reference.set.leaves[i].composition;
            let lj = &reference.set.leaves[j].composition;
            li.colex_cmp(lj)
        })
    });
    let target = BigUint::one() << k;
    let mut capacity = reference.set.address_total();
    let mut pruned = 0;
    for &i in &order {
        let cnt = reference.set.leaves[i].address_count();
        if &capacity - &cnt < target {
            break;
        }
        capacity -= cnt;
        pruned += 1;
    }
    let items: Vec<TreeItem> = order[pruned..]
        .iter()
        .map(|&i| {
            let leaf = &reference.set.leaves[i];
            TreeItem::Singleton {
                c: leaf.composition.clone(),
                payload_bits: leaf.payload_bits().expect("MPDM leaves are tree addressed"),
            }
        })
        .collect();
    let survivors = items.len();
    let set = assemble_tree(SchemeTag::OptMpdm, a, items, k)?;
    Ok(OptMpdm {
        set,
        reference,
        pruned,
        survivors,
    })
}

/// One line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub scheme: SchemeTag,
    pub n_compositions: usize,
    pub rate_loss: f64,
    pub snr: Aggregates,
}

/// All four schemes at the same `(n, k)`, in table order.
pub fn build_all(n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<Vec<CompositionSet>> {
    SchemeTag::ALL
        .iter()
        .map(|&t| build_scheme(t, n, k, a))
        .collect()
}

pub fn build_scheme(tag: SchemeTag, n: u32, k: u64, a: &AmplitudeAlphabet) -> Result<CompositionSet> {
    match tag {
        SchemeTag::Ccdm => build_ccdm(n, k, a),
        SchemeTag::Mpdm => build_mpdm(n, k, a),
        SchemeTag::Ess => build_ess(n, k, a),
        SchemeTag::OptMpdm => build_opt_mpdm(n, k, a).map(|o| o.set),
    }
}

pub fn compare_sets(sets: &[CompositionSet], model: &NliModel) -> Result<Vec<ComparisonRow>> {
    sets.iter()
        .map(|s| {
            Ok(ComparisonRow {
                scheme: s.tag,
                n_compositions: s.len(),
                rate_loss: s.rate_loss,
                snr: analyze(s, model)?.aggregates,
            })
        })
        .collect()
}

pub fn compare_schemes(
    n: u32,
    k: u64,
    a: &AmplitudeAlphabet,
    model: &NliModel,
) -> Result<Vec<ComparisonRow>> {
    compare_sets(&build_all(n, k, a)?, model)
}

pub fn min_leaf_kurtosis(set: &CompositionSet) -> Result<f64> {
    set.leaf_kurtosis()?
        .into_iter()
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Domain("empty scheme".into()))
}

/// Model for a link configuration: explicit `eta1` wins; otherwise two anchors, the second at
/// the configured kurtosis or at the lowest leaf kurtosis of `mpdm`.
pub fn model_for(cfg: &Config, mpdm: Option<&CompositionSet>) -> Result<NliModel> {
    if let Some(m) = cfg.physics_model()? {
        return Ok(m);
    }
    let k2 = match (cfg.anchor2_kurtosis, mpdm) {
        (Some(k), _) => Some(k),
        (None, Some(set)) => Some(min_leaf_kurtosis(set)?),
        (None, None) => None,
    };
    cfg.calibrated_model(k2)
}

/// Comparison table under the default calibration (second anchor from the MPDM at `(n, k)`).
pub fn compare_with_config(
    n: u32,
    k: u64,
    a: &AmplitudeAlphabet,
    cfg: &Config,
) -> Result<(Vec<CompositionSet>, NliModel, Vec<ComparisonRow>)> {
    let sets = build_all(n, k, a)?;
    let mpdm = sets.iter().find(|s| s.tag == SchemeTag::Mpdm);
    let model = model_for(cfg, mpdm)?;
    let rows = compare_sets(&sets, &model)?;
    Ok((sets, model, rows))
}

pub fn max_leaf_kurtosis(set: &CompositionSet) -> Result<f64> {
    set.leaf_kurtosis()?
        .into_iter()
        .max_by(f64::total_cmp)
        .ok_or_else(|| Error::Domain("empty scheme".into()))
}
