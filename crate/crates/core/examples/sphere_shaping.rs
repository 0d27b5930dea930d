//! ESS shells at n=216: radius, shell counts on both sides of it, kurtosis spread.
use nlidm::ess::{build_ess_from, ess_kurtosis_range, EnergyShellIndex, RadiusConvention};
use nlidm::AmplitudeAlphabet;

fn main() -> nlidm::Result<()> {
    let a = AmplitudeAlphabet::qam64();
    for conv in [RadiusConvention::Inclusive, RadiusConvention::Exclusive] {
        let idx = EnergyShellIndex::build_with(216, 349, &a, conv)?;
        let set = build_ess_from(&idx, &a)?;
        let (lo, hi) = ess_kurtosis_range(&set)?;
        println!(
            "{conv:?}: E_max {}, shells < E_max {}, <= E_max {}, used {}, rate loss {:.4}, kurtosis [{lo:.3}, {hi:.3}]",
            idx.e_max,
            idx.shells_below(),
            idx.shells_at_or_below(),
            set.len(),
            set.rate_loss
        );
    }
    Ok(())
}
