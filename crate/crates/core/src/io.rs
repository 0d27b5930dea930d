//! Scheme files and CSV reports.
//!
//! A scheme file is line-oriented text: `key=value` header lines, then one line per leaf.
//! Tree leaves are `counts|payload_bits|depth|weight`, shell leaves `counts|used||weight`.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use crate::combinatorics::{AmplitudeAlphabet, Composition};
use crate::error::{Error, Result};
use crate::nli::{Aggregates, SnrReport};
use crate::optimizer::ComparisonRow;
use crate::scheme::{Addressing, CompositionSet, SchemeTag};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn format_scheme(set: &CompositionSet) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scheme={}", set.tag);
    let _ = writeln!(s, "n={}", set.n);
    let _ = writeln!(s, "k={}", set.k);
    let _ = writeln!(s, "alphabet={}", set.alphabet);
    let _ = writeln!(s, "rate_loss={}", set.rate_loss);
    let _ = writeln!(s, "avg_pmf={}", join(set.avg_pmf.probs()));
    let _ = writeln!(s, "compositions={}", set.len());
    let _ = writeln!(s, "tool_version={TOOL_VERSION}");
    for leaf in &set.leaves {
        let counts = join(leaf.composition.counts());
        let _ = match &leaf.addressing {
            Addressing::Tree { payload_bits, depth } => {
                writeln!(s, "{counts}|{payload_bits}|{depth}|{}", leaf.weight)
            }
            Addressing::Shell { used } => writeln!(s, "{counts}|{used}||{}", leaf.weight),
        };
    }
    s
}

/// Parses and re-validates a scheme file; derived fields must match what the leaves imply.
pub fn parse_scheme(text: &str) -> Result<CompositionSet> {
    let mut header: Vec<(usize, &str, &str)> = Vec::new();
    let mut tree: Vec<(Composition, u64)> = Vec::new();
    let mut shells: Vec<(Composition, BigUint)> = Vec::new();
    let mut depths: Vec<(usize, u64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let perr = |msg: String| Error::Parse { line: line_no, msg };
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !line.contains('|') {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| perr(format!("expected key=value, got '{line}'")))?;
            if !(tree.is_empty() && shells.is_empty()) {
                return Err(perr("header line after leaf lines".into()));
            }
            header.push((line_no, k.trim(), v.trim()));
            continue;
        }
        let f: Vec<&str> = line.split('|').collect();
        if f.len() != 4 {
            return Err(perr(format!("leaf line needs 4 fields, got {}", f.len())));
        }
        let counts: Vec<u32> = f[0]
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| perr(format!("bad counts '{}'", f[0])))?;
        let c = Composition::new(counts).map_err(|e| perr(e.to_string()))?;
        if f[2].is_empty() {
            let used: BigUint = f[1]
                .parse()
                .map_err(|_| perr(format!("bad used count '{}'", f[1])))?;
            shells.push((c, used));
        } else {
            let p: u64 = f[1].parse().map_err(|_| perr(format!("bad payload '{}'", f[1])))?;
            let d: u64 = f[2].parse().map_err(|_| perr(format!("bad depth '{}'", f[2])))?;
            depths.push((line_no, p + d));
            tree.push((c, p));
        }
        f[3].parse::<f64>()
            .map_err(|_| perr(format!("bad weight '{}'", f[3])))?;
    }
    let get = |key: &str| -> Result<(usize, &str)> {
        header
            .iter()
            .find(|h| h.1 == key)
            .map(|h| (h.0, h.2))
            .ok_or_else(|| Error::Parse {
                line: 0,
                msg: format!("missing header '{key}'"),
            })
    };
    let num = |key: &str| -> Result<u64> {
        let (line, v) = get(key)?;
        v.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("{key} must be an integer, got '{v}'"),
        })
    };
    let (tl, tv) = get("scheme")?;
    let tag: SchemeTag = tv.parse().map_err(|e: Error| Error::Parse {
        line: tl,
        msg: e.to_string(),
    })?;
    let n = u32::try_from(num("n")?).map_err(|_| Error::Parse {
        line: 0,
        msg: "n out of range".into(),
    })?;
    let k = num("k")?;
    let (al, av) = get("alphabet")?;
    let levels: Vec<f64> = av
        .split(',')
        .map(|x| x.trim().parse())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse {
            line: al,
            msg: format!("bad alphabet '{av}'"),
        })?;
    let a = AmplitudeAlphabet::new(levels)?;
    for (line, total) in depths {
        if total != k {
            return Err(Error::Parse {
                line,
                msg: "payload + depth must equal k".into(),
            });
        }
    }
    let set = match (tree.is_empty(), shells.is_empty()) {
        (false, true) => CompositionSet::from_tree(tag, n, k, &a, tree)?,
        (true, false) => CompositionSet::from_shells(tag, n, k, &a, shells)?,
        (true, true) => {
            return Err(Error::Parse {
                line: 0,
                msg: "no leaf lines".into(),
            })
        }
        _ => {
            return Err(Error::Parse {
                line: 0,
                msg: "tree and shell leaves mixed".into(),
            })
        }
    };
    let (rl_line, rl) = get("rate_loss")?;
    let rl: f64 = rl.parse().map_err(|_| Error::Parse {
        line: rl_line,
        msg: "bad rate_loss".into(),
    })?;
    if (rl - set.rate_loss).abs() > 1e-9 {
        return Err(Error::Parse {
            line: rl_line,
            msg: format!("rate_loss {rl} disagrees with the leaves ({})", set.rate_loss),
        });
    }
    Ok(set)
}

pub fn save_scheme(path: &Path, set: &CompositionSet) -> Result<()> {
    std::fs::write(path, format_scheme(set))?;
    Ok(())
}

pub fn load_scheme(path: &Path) -> Result<CompositionSet> {
    parse_scheme(&std::fs::read_to_string(path)?)
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_rows<W: Write>(w: W, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for r in rows {
        out.write_record(&r).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_scatter<W: Write>(w: W, report: &SnrReport) -> Result<()> {
    let rows = report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.id.to_string(),
                e.kurtosis.to_string(),
                e.snr_db.to_string(),
                e.weight.to_string(),
            ]
        })
        .collect();
    write_rows(w, &["leaf", "kurtosis", "snr_db", "weight"], rows)
}

pub fn write_histogram<W: Write>(w: W, report: &SnrReport) -> Result<()> {
    let rows = report
        .histogram
        .iter()
        .map(|(c, x)| vec![c.to_string(), x.to_string()])
        .collect();
    write_rows(w, &["bin_center_db", "weight"], rows)
}

pub fn write_cdf<W: Write>(w: W, report: &SnrReport) -> Result<()> {
    let rows = report
        .cdf
        .iter()
        .map(|(s, x)| vec![s.to_string(), x.to_string()])
        .collect();
    write_rows(w, &["snr_db", "cumulative_weight"], rows)
}

pub fn write_aggregates<W: Write>(w: W, tag: SchemeTag, agg: &Aggregates) -> Result<()> {
    let row = vec![
        tag.to_string(),
        agg.min.to_string(),
        agg.max.to_string(),
        agg.avg.to_string(),
        agg.p2p.to_string(),
    ];
    write_rows(
        w,
        &["scheme", "min_snr_db", "max_snr_db", "avg_snr_db", "p2p_db"],
        vec![row],
    )
}

pub fn write_comparison<W: Write>(w: W, rows: &[ComparisonRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                r.scheme.to_string(),
                r.n_compositions.to_string(),
                r.rate_loss.to_string(),
                r.snr.max.to_string(),
                r.snr.min.to_string(),
                r.snr.p2p.to_string(),
                r.snr.avg.to_string(),
            ]
        })
        .collect();
    write_rows(
        w,
        &[
            "scheme",
            "n_compositions",
            "rate_loss",
            "max_snr_db",
            "min_snr_db",
            "p2p_db",
            "avg_snr_db",
        ],
        rows,
    )
}

/// Writes `<prefix>_scatter.csv`, `_histogram.csv`, `_cdf.csv` and `_aggregates.csv`.
pub fn write_report_files(prefix: &Path, tag: SchemeTag, report: &SnrReport) -> Result<Vec<PathBuf>> {
    let name = |suffix: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(format!("_{suffix}.csv"));
        PathBuf::from(s)
    };
    let paths = [
        name("scatter"),
        name("histogram"),
        name("cdf"),
        name("aggregates"),
    ];
    write_scatter(std::fs::File::create(&paths[0])?, report)?;
    write_histogram(std::fs::File::create(&paths[1])?, report)?;
    write_cdf(std::fs::File::create(&paths[2])?, report)?;
    write_aggregates(std::fs::File::create(&paths[3])?, tag, &report.aggregates)?;
    Ok(paths.to_vec())
}
