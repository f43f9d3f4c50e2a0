use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::ExperimentRecord;
use crate::descent::Method;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "method",
    "n",
    "m",
    "k",
    "trial",
    "seed",
    "success",
    "certified",
    "hamming_error",
    "runtime_ms",
    "sdp_iterations",
    "reinits",
];

/// Exact recovery rate of one `(method, m, k)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub method: Method,
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<RateRow> {
    let mut cells: BTreeMap<(Method, usize, usize), (usize, usize)> = BTreeMap::new();
    for r in records {
        let e = cells.entry((r.method, r.k, r.m)).or_default();
        e.0 += 1;
        e.1 += usize::from(r.success);
    }
    cells
        .into_iter()
        .map(|((method, k, m), (trials, successes))| RateRow {
            method,
            m,
            k,
            trials,
            successes,
            rate: successes as f64 / trials as f64,
        })
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    }
}

pub fn write_csv_to<W: std::io::Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(io_err(path))?;
    write_csv_to(records, file).map_err(|e| match e {
        Error::Csv(e) => csv_err(path, e),
        other => other,
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            path: path.to_owned(),
            message: format!("unexpected header {header:?}"),
        });
    }
    rdr.deserialize()
        .map(|r| r.map_err(|e| csv_err(path, e)))
        .collect()
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Rate-vs-m curves, one panel per method and one curve per k.
pub fn render_svg(table: &[RateRow]) -> String {
    let methods: Vec<Method> = {
        let mut v: Vec<Method> = table.iter().map(|r| r.method).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut ks: Vec<usize> = table.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let (m_lo, m_hi) = table
        .iter()
        .fold((usize::MAX, 0), |(lo, hi), r| (lo.min(r.m), hi.max(r.m)));

    let (pw, ph, margin) = (360.0, 240.0, 50.0);
    let cols = methods.len().clamp(1, 3);
    let rows = methods.len().div_ceil(cols).max(1);
    let legend_h = 20.0 * ks.len() as f64 + 20.0;
    let width = cols as f64 * (pw + margin) + margin + 80.0;
    let height = rows as f64 * (ph + margin + 20.0) + margin;
    let height = height.max(legend_h + margin);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let span = (m_hi.saturating_sub(m_lo)).max(1) as f64;
    for (idx, method) in methods.iter().enumerate() {
        let ox = margin + (idx % cols) as f64 * (pw + margin);
        let oy = margin + (idx / cols) as f64 * (ph + margin + 20.0);
        let px = |m: usize| ox + (m.saturating_sub(m_lo)) as f64 / span * pw;
        let py = |rate: f64| oy + (1.0 - rate) * ph;
        let _ = writeln!(
            s,
            r##"<rect x="{ox}" y="{oy}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-weight="bold">{method}</text>"#,
            ox + pw / 2.0,
            oy - 8.0
        );
        for tick in 0..=4 {
            let rate = f64::from(tick) / 4.0;
            let _ = writeln!(
                s,
                r##"<line x1="{ox}" x2="{}" y1="{y}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">{rate:.2}</text>"##,
                ox + pw,
                ox - 4.0,
                py(rate) + 4.0,
                y = py(rate)
            );
        }
        let mut ms: Vec<usize> = table.iter().map(|r| r.m).collect();
        ms.sort_unstable();
        ms.dedup();
        for m in ms {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{m}</text>"#,
                px(m),
                oy + ph + 14.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">m</text>"#,
            ox + pw / 2.0,
            oy + ph + 30.0
        );
        for (ki, &k) in ks.iter().enumerate() {
            let mut pts: Vec<(usize, f64)> = table
                .iter()
                .filter(|r| r.method == *method && r.k == k)
                .map(|r| (r.m, r.rate))
                .collect();
            pts.sort_by_key(|p| p.0);
            if pts.is_empty() {
                continue;
            }
            let color = PALETTE[ki % PALETTE.len()];
            let path: Vec<String> = pts
                .iter()
                .map(|&(m, r)| format!("{:.2},{:.2}", px(m), py(r)))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                path.join(" ")
            );
            for &(m, r) in &pts {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    px(m),
                    py(r)
                );
            }
        }
    }
    let lx = width - 70.0;
    for (ki, &k) in ks.iter().enumerate() {
        let y = margin + 20.0 * ki as f64;
        let color = PALETTE[ki % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" x2="{}" y1="{y}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">k={k}</text>"#,
            lx + 18.0,
            lx + 22.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(table: &[RateRow], path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(table)).map_err(io_err(path))
}
