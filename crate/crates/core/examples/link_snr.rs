//! Link budget: ASE, GN coefficient, optimum launch power, SNR against kurtosis.
use nlidm::nli::{optimal_power, snr_eff, w_to_dbm, Config, NliModel};

fn main() -> nlidm::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(p) => Config::load(p.as_ref())?,
        None => Config::default(),
    };
    let ase = cfg.ase_variance();
    let eta0 = cfg.gn_eta0()?;
    let p = optimal_power(ase, eta0);
    println!("ASE {ase:.4e} W ({:.2} dBm), eta0 {eta0:.1} 1/W^2", w_to_dbm(ase));
    println!("GN optimum {:.2} dBm -> {:.2} dB", w_to_dbm(p), snr_eff(2.0, 0.0, &NliModel::new(eta0, 0.0, ase, p)?)?);
    let model = cfg.calibrated_model(Some(1.6088))?;
    println!("calibrated eta0 {:.1}, eta1 {:.1}", model.eta0, model.eta1);
    for i in 0..=10 {
        let k = 1.0 + 0.1 * i as f64;
        println!("  kurtosis {k:.1}: {:.3} dB", snr_eff(k, 0.0, &model)?);
    }
    Ok(())
}
