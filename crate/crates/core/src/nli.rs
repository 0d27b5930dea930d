//! Per-block effective SNR over a WDM fibre link.
//!
//! NLI power is modelled as `eta(kappa) * P^3` with `eta` affine in the excess kurtosis of
//! the block's complex symbol distribution, on top of a closed-form GN baseline.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::combinatorics::{block_moments, pmf_of};
use crate::error::{Error, Result};
use crate::scheme::CompositionSet;

pub const PLANCK: f64 = 6.626_070_15e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const DEFAULT_BIN_DB: f64 = 0.01;

/// Kurtosis of the Gaussian reference.
pub const GAUSSIAN_KURTOSIS: f64 = 2.0;

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_w(dbm: f64) -> f64 {
    db_to_lin(dbm) * 1e-3
}

pub fn w_to_dbm(w: f64) -> f64 {
    lin_to_db(w * 1e3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    pub gamma_per_w_km: f64,
    pub beta2_ps2_per_km: f64,
    pub alpha_db_per_km: f64,
    pub span_km: f64,
    pub n_spans: u32,
    pub nf_db: f64,
    pub wavelength_nm: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            gamma_per_w_km: 1.3,
            beta2_ps2_per_km: -21.8,
            alpha_db_per_km: 0.2,
            span_km: 80.0,
            n_spans: 30,
            nf_db: 5.0,
            wavelength_nm: 1550.0,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("gamma_per_w_km", self.gamma_per_w_km),
            ("alpha_db_per_km", self.alpha_db_per_km),
            ("span_km", self.span_km),
            ("nf_db", self.nf_db),
            ("wavelength_nm", self.wavelength_nm),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.beta2_ps2_per_km.is_finite() && self.beta2_ps2_per_km != 0.0) {
            return Err(Error::Config("beta2_ps2_per_km must be nonzero".into()));
        }
        if self.n_spans == 0 {
            return Err(Error::Config("n_spans must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WdmConfig {
    pub n_channels: u32,
    pub spacing_ghz: f64,
    pub symbol_rate_gbaud: f64,
    pub rolloff: f64,
}

impl Default for WdmConfig {
    fn default() -> Self {
        Self {
            n_channels: 11,
            spacing_ghz: 50.0,
            symbol_rate_gbaud: 45.0,
            rolloff: 0.05,
        }
    }
}

impl WdmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_channels.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n_channels must be odd, got {}",
                self.n_channels
            )));
        }
        if !(self.symbol_rate_gbaud > 0.0) || !(0.0..=1.0).contains(&self.rolloff) {
            return Err(Error::Config("symbol rate must be positive, rolloff in [0,1]".into()));
        }
        if self.spacing_ghz < self.symbol_rate_gbaud * (1.0 + self.rolloff) {
            return Err(Error::Config(format!(
                "spacing {} GHz is narrower than the occupied bandwidth",
                self.spacing_ghz
            )));
        }
        Ok(())
    }
}

/// Accumulated amplifier noise in the symbol-rate bandwidth, in W.
pub fn ase_variance(link: &LinkConfig, wdm: &WdmConfig) -> f64 {
    let f = db_to_lin(link.nf_db);
    let g = db_to_lin(link.alpha_db_per_km * link.span_km);
    let nu = SPEED_OF_LIGHT / (link.wavelength_nm * 1e-9);
    link.n_spans as f64 * f * PLANCK * nu * (g - 1.0) * wdm.symbol_rate_gbaud * 1e9
}

/// GN-model NLI coefficient of the centre channel with incoherent span accumulation, in 1/W^2.
pub fn gn_eta0(link: &LinkConfig, wdm: &WdmConfig) -> Result<f64> {
    let b = wdm.symbol_rate_gbaud * 1e9;
    let df = wdm.spacing_ghz * 1e9;
    if df <= b {
        return Err(Error::Config(format!(
            "channel spacing {} GHz must exceed the symbol rate {} GBaud",
            wdm.spacing_ghz, wdm.symbol_rate_gbaud
        )));
    }
    let gamma = link.gamma_per_w_km * 1e-3;
    let beta2 = link.beta2_ps2_per_km.abs() * 1e-27;
    let alpha = link.alpha_db_per_km * 10f64.ln() / 10.0 * 1e-3;
    let l = link.span_km * 1e3;
    let l_eff = (1.0 - (-alpha * l).exp()) / alpha;
    let l_asym = 1.0 / alpha;
    let x = PI * beta2 * l_asym * b * b;
    let own = (PI * x / 2.0).asinh();
    let cross: f64 = (1..=(wdm.n_channels - 1) / 2)
        .map(|i| {
            let f = i as f64 * df;
            2.0 * ((f + b / 2.0) / (f - b / 2.0)).ln()
        })
        .sum();
    Ok(link.n_spans as f64 * (8.0 / 27.0) * (gamma * l_eff).powi(2) / x * (own + cross))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NliModel {
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub ase_variance: f64,
    pub launch_power: f64,
}

impl NliModel {
    pub fn new(eta0: f64, eta1: f64, ase_variance: f64, launch_power: f64) -> Result<Self> {
        let m = Self {
            eta0,
            eta1,
            eta2: 0.0,
            ase_variance,
            launch_power,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta0 > 0.0 && self.eta1 >= 0.0 && self.ase_variance > 0.0 && self.launch_power > 0.0) {
            return Err(Error::ModelDomain(format!(
                "need eta0 > 0, eta1 >= 0, ase > 0, power > 0: {self:?}"
            )));
        }
        Ok(())
    }

    /// NLI coefficient for a block with the given 2D kurtosis and sixth-order term.
    pub fn eta(&self, kurtosis: f64, psi: f64) -> f64 {
        self.eta0 + self.eta1 * (kurtosis - GAUSSIAN_KURTOSIS) + self.eta2 * psi
    }

    pub fn with_power(self, launch_power: f64) -> Self {
        Self { launch_power, ..self }
    }
}

/// Effective SNR in dB.
pub fn snr_eff(kurtosis: f64, psi: f64, model: &NliModel) -> Result<f64> {
    let p = model.launch_power;
    let den = model.ase_variance + model.eta(kurtosis, psi) * p.powi(3);
    if !(den > 0.0) {
        return Err(Error::ModelDomain(format!(
            "noise power {den:e} W is not positive at kurtosis {kurtosis}"
        )));
    }
    Ok(lin_to_db(p / den))
}

/// Least-squares fit of `(eta0, eta1)` to `(kurtosis, snr_db)` anchors at fixed ASE and power.
pub fn calibrate(anchors: &[(f64, f64)], ase: f64, power: f64) -> Result<NliModel> {
    if anchors.len() < 2 {
        return Err(Error::Calibration("need at least two anchors".into()));
    }
    // y_i = eta0 + eta1 * phi_i
    let pts: Vec<(f64, f64)> = anchors
        .iter()
        .map(|&(k, s)| (k - GAUSSIAN_KURTOSIS, (power / db_to_lin(s) - ase) / power.powi(3)))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let spread = pts.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    if sxx <= 1e-24 * spread * spread {
        return Err(Error::Calibration("anchors need distinct kurtosis values".into()));
    }
    let eta1 = sxy / sxx;
    let eta0 = my - eta1 * mx;
    if !(eta0 > 0.0) || eta1 < 0.0 {
        return Err(Error::Calibration(format!(
            "fit gives eta0 = {eta0:e}, eta1 = {eta1:e}; both must be nonnegative"
        )));
    }
    NliModel::new(eta0, eta1, ase, power)
}

/// Power maximizing the SNR at a fixed NLI coefficient.
pub fn optimal_power(ase: f64, eta: f64) -> f64 {
    (ase / (2.0 * eta)).cbrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrEntry {
    /// Leaf position in the scheme.
    pub id: usize,
    pub kurtosis: f64,
    pub weight: f64,
    pub snr_db: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregates {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
    pub p2p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnrReport {
    pub entries: Vec<SnrEntry>,
    pub aggregates: Aggregates,
    /// `(bin_center_db, weight)`, ascending.
    pub histogram: Vec<(f64, f64)>,
    /// `(snr_db, cumulative_weight)`, ascending.
    pub cdf: Vec<(f64, f64)>,
}

pub fn analyze(set: &CompositionSet, model: &NliModel) -> Result<SnrReport> {
    analyze_with_bins(set, model, DEFAULT_BIN_DB)
}

pub fn analyze_with_bins(set: &CompositionSet, model: &NliModel, bin_db: f64) -> Result<SnrReport> {
    if !(bin_db > 0.0) {
        return Err(Error::Domain(format!("bin width must be positive, got {bin_db}")));
    }
    let entries: Vec<SnrEntry> = set
        .leaves
        .par_iter()
        .enumerate()
        .map(|(id, leaf)| {
            let bm = block_moments(&pmf_of(&leaf.composition), &set.alphabet)?;
            Ok(SnrEntry {
                id,
                kurtosis: bm.kurtosis_2d,
                weight: leaf.weight,
                snr_db: snr_eff(bm.kurtosis_2d, bm.psi_2d, model)?,
            })
        })
        .collect::<Result<_>>()?;
    report_from_entries(entries, bin_db)
}

pub fn report_from_entries(entries: Vec<SnrEntry>, bin_db: f64) -> Result<SnrReport> {
    let active: Vec<&SnrEntry> = entries.iter().filter(|e| e.weight > 0.0).collect();
    if active.is_empty() {
        return Err(Error::Domain("report without weighted entries".into()));
    }
    let total: f64 = active.iter().map(|e| e.weight).sum();
    let min = active.iter().map(|e| e.snr_db).fold(f64::INFINITY, f64::min);
    let max = active.iter().map(|e| e.snr_db).fold(f64::NEG_INFINITY, f64::max);
    let avg = (active.iter().map(|e| e.weight * e.snr_db).sum::<f64>() / total).clamp(min, max);

    let mut bins: BTreeMap<i64, f64> = BTreeMap::new();
    for e in &active {
        *bins.entry((e.snr_db / bin_db).floor() as i64).or_default() += e.weight;
    }
    let histogram = bins
        .into_iter()
        .map(|(b, w)| ((b as f64 + 0.5) * bin_db, w))
        .collect();

    let mut sorted: Vec<(f64, f64)> = active.iter().map(|e| (e.snr_db, e.weight)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut cdf: Vec<(f64, f64)> = Vec::new();
    let mut acc = 0.0;
    for (s, w) in sorted {
        acc += w;
        match cdf.last_mut() {
            Some(last) if last.0 == s => last.1 = acc,
            _ => cdf.push((s, acc)),
        }
    }
    Ok(SnrReport {
        entries,
        aggregates: Aggregates {
            min,
            max,
            avg,
            p2p: max - min,
        },
        histogram,
        cdf,
    })
}

/// Contents of a link configuration file. Missing keys take the defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub link: LinkConfig,
    pub wdm: WdmConfig,
    pub launch_power_dbm: Option<f64>,
    pub eta0: Option<f64>,
    pub eta1: Option<f64>,
    pub anchor1: (f64, f64),
    /// Kurtosis defaults to the minimum leaf kurtosis of an MPDM at the analysed (n, k).
    pub anchor2_kurtosis: Option<f64>,
    pub anchor2_snr_db: f64,
}

/// CCDM reference point: kurtosis and SNR of the constant-composition scheme.
pub const DEFAULT_ANCHOR1: (f64, f64) = (1.82, 14.26);
/// SNR assigned to the lowest-kurtosis MPDM composition.
pub const DEFAULT_ANCHOR2_SNR_DB: f64 = 14.44;

impl Default for Config {
    fn default() -> Self {
        Self {
            link: LinkConfig::default(),
            wdm: WdmConfig::default(),
            launch_power_dbm: None,
            eta0: None,
            eta1: None,
            anchor1: DEFAULT_ANCHOR1,
            anchor2_kurtosis: None,
            anchor2_snr_db: DEFAULT_ANCHOR2_SNR_DB,
        }
    }
}

impl Config {
    pub const KEYS: [&'static str; 18] = [
        "gamma_per_w_km",
        "beta2_ps2_per_km",
        "alpha_db_per_km",
        "span_km",
        "n_spans",
        "nf_db",
        "wavelength_nm",
        "n_channels",
        "spacing_ghz",
        "symbol_rate_gbaud",
        "rolloff",
        "launch_power_dbm",
        "eta0",
        "eta1",
        "anchor1_kurtosis",
        "anchor1_snr_db",
        "anchor2_kurtosis",
        "anchor2_snr_db",
    ];

    pub fn load(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.wdm.validate()
    }

    pub fn ase_variance(&self) -> f64 {
        ase_variance(&self.link, &self.wdm)
    }

    pub fn gn_eta0(&self) -> Result<f64> {
        gn_eta0(&self.link, &self.wdm)
    }

    /// Configured launch power, or the GN optimum at Gaussian kurtosis.
    pub fn launch_power(&self) -> Result<f64> {
        match self.launch_power_dbm {
            Some(dbm) => Ok(dbm_to_w(dbm)),
            None => Ok(optimal_power(self.ase_variance(), self.gn_eta0()?)),
        }
    }

    /// Model without anchors: GN baseline (or the `eta0` override) plus the `eta1` slope.
    /// `None` when no `eta1` is configured.
    pub fn physics_model(&self) -> Result<Option<NliModel>> {
        let Some(eta1) = self.eta1 else {
            return Ok(None);
        };
        let eta0 = match self.eta0 {
            Some(e) => e,
            None => self.gn_eta0()?,
        };
        NliModel::new(eta0, eta1, self.ase_variance(), self.launch_power()?).map(Some)
    }

    /// Two-anchor calibrated model; `anchor2_kurtosis` overrides the configured one.
    pub fn calibrated_model(&self, anchor2_kurtosis: Option<f64>) -> Result<NliModel> {
        let k2 = anchor2_kurtosis.or(self.anchor2_kurtosis).ok_or_else(|| {
            Error::CalibrationRequired(
                "no kurtosis for the second anchor and no eta0/eta1 overrides".into(),
            )
        })?;
        calibrate(
            &[self.anchor1, (k2, self.anchor2_snr_db)],
            self.ase_variance(),
            self.launch_power()?,
        )
    }
}

impl FromStr for Config {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !Self::KEYS.contains(&key) {
                return Err(parse_err(format!("unknown key '{key}'")));
            }
            if !seen.insert(key.to_string()) {
                return Err(parse_err(format!("duplicate key '{key}'")));
            }
            let num: f64 = value
                .parse()
                .map_err(|_| parse_err(format!("'{value}' is not a number")))?;
            let int = || -> Result<u32> {
                value
                    .parse()
                    .map_err(|_| parse_err(format!("'{value}' is not a nonnegative integer")))
            };
            match key {
                "gamma_per_w_km" => cfg.link.gamma_per_w_km = num,
                "beta2_ps2_per_km" => cfg.link.beta2_ps2_per_km = num,
                "alpha_db_per_km" => cfg.link.alpha_db_per_km = num,
                "span_km" => cfg.link.span_km = num,
                "n_spans" => cfg.link.n_spans = int()?,
                "nf_db" => cfg.link.nf_db = num,
                "wavelength_nm" => cfg.link.wavelength_nm = num,
                "n_channels" => cfg.wdm.n_channels = int()?,
                "spacing_ghz" => cfg.wdm.spacing_ghz = num,
                "symbol_rate_gbaud" => cfg.wdm.symbol_rate_gbaud = num,
                "rolloff" => cfg.wdm.rolloff = num,
                "launch_power_dbm" => cfg.launch_power_dbm = Some(num),
                "eta0" => cfg.eta0 = Some(num),
                "eta1" => cfg.eta1 = Some(num),
                "anchor1_kurtosis" => cfg.anchor1.0 = num,
                "anchor1_snr_db" => cfg.anchor1.1 = num,
                "anchor2_kurtosis" => cfg.anchor2_kurtosis = Some(num),
                "anchor2_snr_db" => cfg.anchor2_snr_db = num,
                _ => unreachable!(),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.link;
        let w = &self.wdm;
        writeln!(f, "gamma_per_w_km={}", l.gamma_per_w_km)?;
        writeln!(f, "beta2_ps2_per_km={}", l.beta2_ps2_per_km)?;
        writeln!(f, "alpha_db_per_km={}", l.alpha_db_per_km)?;
        writeln!(f, "span_km={}", l.span_km)?;
        writeln!(f, "n_spans={}", l.n_spans)?;
        writeln!(f, "nf_db={}", l.nf_db)?;
        writeln!(f, "wavelength_nm={}", l.wavelength_nm)?;
        writeln!(f, "n_channels={}", w.n_channels)?;
        writeln!(f, "spacing_ghz={}", w.spacing_ghz)?;
        writeln!(f, "symbol_rate_gbaud={}", w.symbol_rate_gbaud)?;
        writeln!(f, "rolloff={}", w.rolloff)?;
        if let Some(p) = self.launch_power_dbm {
            writeln!(f, "launch_power_dbm={p}")?;
        }
        if let Some(e) = self.eta0 {
            writeln!(f, "eta0={e}")?;
        }
        if let Some(e) = self.eta1 {
            writeln!(f, "eta1={e}")?;
        }
        writeln!(f, "anchor1_kurtosis={}", self.anchor1.0)?;
        writeln!(f, "anchor1_snr_db={}", self.anchor1.1)?;
        if let Some(k) = self.anchor2_kurtosis {
            writeln!(f, "anchor2_kurtosis={k}")?;
        }
        writeln!(f, "anchor2_snr_db={}", self.anchor2_snr_db)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{AmplitudeAlphabet, Composition};
    use crate::scheme::SchemeTag;
    use proptest::prelude::*;

    fn d() -> (LinkConfig, WdmConfig) {
        (LinkConfig::default(), WdmConfig::default())
    }

    #[test]
    fn ase_hand_value() {
        let (l, w) = d();
        // 30 * 10^0.5 * 1.2816e-19 J * (10^1.6 - 1) * 45e9 Hz
        let hand = 30.0 * 3.162_277_66 * 1.2816e-19 * (39.810_717 - 1.0) * 45e9;
        let s = ase_variance(&l, &w);
        assert!((s / hand - 1.0).abs() < 1e-3, "{s} vs {hand}");
        assert!((w_to_dbm(s) + 16.73).abs() < 0.05);
        let l2 = LinkConfig { n_spans: 60, ..l.clone() };
        assert_eq!(ase_variance(&l2, &w), 2.0 * s);
        let l3 = LinkConfig { nf_db: 8.0, ..l };
        assert!((ase_variance(&l3, &w) / s - 10f64.powf(0.3)).abs() < 1e-12);
    }

    #[test]
    fn eta0_and_optimum() {
        let (l, w) = d();
        let e = gn_eta0(&l, &w).unwrap();
        assert!((e / 1.46e4 - 1.0).abs() < 0.01, "{e}");
        let l2 = LinkConfig { n_spans: 60, ..l.clone() };
        assert!((gn_eta0(&l2, &w).unwrap() / e - 2.0).abs() < 1e-12);
        let s = ase_variance(&l, &w);
        let p = optimal_power(s, e);
        assert!((w_to_dbm(p) + 0.46).abs() < 0.05);
        let m = NliModel::new(e, 0.0, s, p).unwrap();
        let snr = snr_eff(2.0, 0.0, &m).unwrap();
        assert!((snr - 14.26).abs() < 1.0, "{snr}");
        // first-order condition: NLI power is half the ASE
        assert!((e * p.powi(3) / (s / 2.0) - 1.0).abs() < 1e-12);
        assert!((optimal_power(8.0 * s, e) / p - 2.0).abs() < 1e-12);
        // grid sweep over [P/4, 4P] never beats the closed form
        for i in 0..=400 {
            let q = p / 4.0 * 16f64.powf(i as f64 / 400.0);
            assert!(snr_eff(2.0, 0.0, &m.with_power(q)).unwrap() <= snr + 1e-12);
        }
    }

    #[test]
    fn single_channel_bracket() {
        let (l, w) = d();
        let one = WdmConfig { n_channels: 1, ..w.clone() };
        let b = 45e9;
        let alpha = 0.2 * 10f64.ln() / 10.0 * 1e-3;
        let x = PI * 21.8e-27 / alpha * b * b;
        let l_eff = (1.0 - (-alpha * 80e3).exp()) / alpha;
        let hand = 30.0 * 8.0 / 27.0 * (1.3e-3 * l_eff).powi(2) / x * (PI * x / 2.0).asinh();
        assert!((gn_eta0(&l, &one).unwrap() / hand - 1.0).abs() < 1e-12);
        let tight = WdmConfig { spacing_ghz: 45.0, ..w };
        assert!(gn_eta0(&l, &tight).is_err());
    }

    #[test]
    fn calibration_examples() {
        let s = 2.1e-5;
        let p = 0.9e-3;
        let m = calibrate(&[(1.82, 14.26), (1.61, 14.44)], s, p).unwrap();
        assert!((snr_eff(1.82, 0.0, &m).unwrap() - 14.26).abs() < 1e-9);
        assert!((snr_eff(1.61, 0.0, &m).unwrap() - 14.44).abs() < 1e-9);
        assert!(matches!(
            calibrate(&[(1.82, 14.26), (1.82, 14.26)], s, p),
            Err(Error::Calibration(_))
        ));
        assert!(calibrate(&[(1.82, 14.26)], s, p).is_err());
        // a rising SNR with kurtosis needs a negative slope
        assert!(calibrate(&[(1.82, 14.44), (1.61, 14.26)], s, p).is_err());
    }

    #[test]
    fn gaussian_kurtosis_is_gn_baseline() {
        let m = NliModel::new(1.5e4, 9e3, 2.1e-5, 1e-3).unwrap();
        let gn = lin_to_db(1e-3 / (2.1e-5 + 1.5e4 * 1e-9));
        assert!((snr_eff(2.0, 0.0, &m).unwrap() - gn).abs() < 1e-12);
        assert!(snr_eff(1.0, 0.0, &m).unwrap() > snr_eff(1.5, 0.0, &m).unwrap());
        let bad = NliModel { eta0: 1.0, eta1: 1e6, ..m };
        assert!(matches!(snr_eff(1.0, 0.0, &bad), Err(Error::ModelDomain(_))));
    }

    fn toy_set() -> CompositionSet {
        let a = AmplitudeAlphabet::new(vec![1.0, 3.0, 5.0]).unwrap();
        let c = |v: &[u32]| Composition::new(v.to_vec()).unwrap();
        CompositionSet::from_tree(
            SchemeTag::Mpdm,
            4,
            3,
            &a,
            vec![(c(&[2, 1, 1]), 2), (c(&[3, 1, 0]), 1), (c(&[1, 1, 2]), 1)],
        )
        .unwrap()
    }

    #[test]
    fn report_invariants() {
        let m = NliModel::new(1.5e4, 9e3, 2.1e-5, 0.9e-3).unwrap();
        let set = toy_set();
        let r = analyze(&set, &m).unwrap();
        let w: f64 = r.entries.iter().map(|e| e.weight).sum();
        assert!((w - 1.0).abs() < 1e-9);
        let a = r.aggregates;
        assert_eq!(a.p2p, a.max - a.min);
        assert!(a.min <= a.avg && a.avg <= a.max);
        assert!(r.cdf.windows(2).all(|x| x[0].0 < x[1].0 && x[0].1 <= x[1].1));
        assert!((r.cdf.last().unwrap().1 - 1.0).abs() < 1e-12);
        assert!((r.histogram.iter().map(|h| h.1).sum::<f64>() - 1.0).abs() < 1e-12);
        // permuting leaves changes no aggregate
        let mut rev = set.clone();
        rev.leaves.reverse();
        let r2 = analyze(&rev, &m).unwrap();
        assert!((r2.aggregates.avg - a.avg).abs() < 1e-12);
        assert_eq!((r2.aggregates.min, r2.aggregates.max), (a.min, a.max));
        assert_eq!(r2.histogram, r.histogram);
    }

    #[test]
    fn config_parse() {
        let c: Config = "n_spans = 60\n# comment\nlaunch_power_dbm=0\n".parse().unwrap();
        assert_eq!(c.link.n_spans, 60);
        assert_eq!(c.launch_power_dbm, Some(0.0));
        assert_eq!(c.wdm, WdmConfig::default());
        assert!(matches!("foo=1".parse::<Config>(), Err(Error::Parse { line: 1, .. })));
        assert!(matches!("\nn_spans=x".parse::<Config>(), Err(Error::Parse { line: 2, .. })));
        assert!("n_spans=1\nn_spans=2".parse::<Config>().is_err());
        assert!("n_channels=10".parse::<Config>().is_err());
        let round: Config = c.to_string().parse().unwrap();
        assert_eq!(round, c);
        assert!(matches!(
            Config::default().calibrated_model(None),
            Err(Error::CalibrationRequired(_))
        ));
        assert_eq!(Config::default().physics_model().unwrap(), None);
    }

    proptest! {
        #[test]
        fn calibration_round_trip(eta0 in 1e3f64..1e5, eta1 in 0.0f64..3e4,
                                  k1 in 1.0f64..1.9, dk in 0.05f64..0.9) {
            let s = 2.1e-5;
            let p = 0.9e-3;
            let m = NliModel::new(eta0, eta1, s, p).unwrap();
            let k2 = k1 + dk;
            let anchors = [
                (k1, snr_eff(k1, 0.0, &m).unwrap()),
                (k2, snr_eff(k2, 0.0, &m).unwrap()),
                ((k1 + k2) / 2.0, snr_eff((k1 + k2) / 2.0, 0.0, &m).unwrap()),
            ];
            let fit = calibrate(&anchors, s, p).unwrap();
            prop_assert!((fit.eta0 / eta0 - 1.0).abs() < 1e-10);
            prop_assert!((fit.eta1 - eta1).abs() <= 1e-10 * eta0.max(eta1));
        }

        #[test]
        fn snr_decreasing_in_kurtosis(eta1 in 1.0f64..3e4, k in 1.0f64..1.99) {
            let m = NliModel::new(2e4, eta1, 2.1e-5, 0.9e-3).unwrap();
            prop_assert!(snr_eff(k, 0.0, &m).unwrap() > snr_eff(k + 0.01, 0.0, &m).unwrap());
        }
    }
}
