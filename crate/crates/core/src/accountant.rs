//! Budget composition, curve tables and figure data for the command line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mechanism::{Mechanism, RenyiOrder};
use crate::rdp::RdpCurve;
use crate::zcdp::{zcdp_bound, zcdp_to_approx_dp, ZcdpBound};

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

/// One composed mechanism.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub label: String,
    pub bound: ZcdpBound,
}

/// zCDP constants compose by addition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetLedger {
    pub entries: Vec<LedgerEntry>,
    pub total: f64,
}

impl BudgetLedger {
    /// `(eps, delta)`-DP guarantee implied by the total.
    pub fn approx_dp(&self, delta: f64) -> Result<f64> {
        zcdp_to_approx_dp(self.total, delta)
    }
}

/// Compose bounds labelled by their mechanism.
pub fn compose(bounds: &[ZcdpBound]) -> Result<BudgetLedger> {
    compose_labeled(
        bounds
            .iter()
            .map(|b| LedgerEntry {
                label: b.mechanism.to_string(),
                bound: b.clone(),
            })
            .collect(),
    )
}

pub fn compose_labeled(entries: Vec<LedgerEntry>) -> Result<BudgetLedger> {
    if entries.is_empty() {
        return Err(usage("nothing to compose"));
    }
    let total = entries.iter().map(|e| e.bound.rho).sum();
    Ok(BudgetLedger { entries, total })
}

/// Optional mechanism parameters as they arrive from flags.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MechanismFlags {
    pub eps: Option<f64>,
    pub eta: Option<f64>,
    pub k: Option<u64>,
    pub delta: Option<u64>,
    pub d: Option<u64>,
}

/// Mechanism names accepted on the command line.
pub const MECHANISM_NAMES: [&str; 6] = ["generic", "laplace", "dlaplace", "krr", "rappor", "br"];

impl MechanismFlags {
    /// Builds the mechanism called `kind`. RAPPOR's `d` defaults to 2 since the
    /// bound does not depend on it; every other parameter is required.
    pub fn build(&self, kind: &str) -> Result<Mechanism> {
        let need_eps = || self.eps.ok_or_else(|| usage(format!("{kind} needs --eps")));
        let m = match kind {
            "generic" | "generic_dp" => Mechanism::GenericDp { eps: need_eps()? },
            "laplace" => Mechanism::Laplace { eps: need_eps()? },
            "dlaplace" | "discrete_laplace" => Mechanism::DiscreteLaplace {
                eps: need_eps()?,
                delta: self.delta.ok_or_else(|| usage("dlaplace needs --delta"))?,
            },
            "krr" => Mechanism::Krr {
                eps: need_eps()?,
                k: self.k.ok_or_else(|| usage("krr needs --k"))?,
            },
            "rappor" => Mechanism::Rappor {
                eps: need_eps()?,
                d: self.d.unwrap_or(2),
            },
            "br" | "bounded_range" => Mechanism::BoundedRange {
                eta: self
                    .eta
                    .or(self.eps)
                    .ok_or_else(|| usage("br needs --eta"))?,
            },
            other => {
                return Err(usage(format!(
                    "unknown mechanism '{other}' (expected one of {})",
                    MECHANISM_NAMES.join(", ")
                )))
            }
        };
        m.validated().map_err(|e| usage(e.to_string()))
    }
}

/// Parses `kind --flag value ...` (also `--flag=value`).
pub fn parse_mechanism_tokens(tokens: &[&str]) -> Result<Mechanism> {
    let (kind, rest) = tokens
        .split_first()
        .ok_or_else(|| usage("missing mechanism name"))?;
    let mut flags = MechanismFlags::default();
    let mut i = 0;
    while i < rest.len() {
        let tok = rest[i];
        let (name, value) = match tok.split_once('=') {
            Some((n, v)) => (n, v),
            None => {
                i += 1;
                let v = rest
                    .get(i)
                    .ok_or_else(|| usage(format!("flag {tok} needs a value")))?;
                (tok, *v)
            }
        };
        i += 1;
        let real = || {
            value
                .parse::<f64>()
                .map_err(|_| usage(format!("{name} expects a number, got '{value}'")))
        };
        let int = || {
            value.parse::<u64>().map_err(|_| {
                usage(format!(
                    "{name} expects a non-negative integer, got '{value}'"
                ))
            })
        };
        match name {
            "--eps" => flags.eps = Some(real()?),
            "--eta" => flags.eta = Some(real()?),
            "--k" => flags.k = Some(int()?),
            "--delta" => flags.delta = Some(int()?),
            "--d" => flags.d = Some(int()?),
            _ => return Err(usage(format!("unknown flag '{name}'"))),
        }
    }
    flags.build(kind)
}

/// Reads a composition file: one `mechanism --flag value ...` per line,
/// blank lines and `#` comments ignored.
pub fn parse_compose_file(text: &str) -> Result<Vec<LedgerEntry>> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let m =
            parse_mechanism_tokens(&tokens).map_err(|e| usage(format!("line {}: {e}", n + 1)))?;
        entries.push(LedgerEntry {
            label: line.to_string(),
            bound: zcdp_bound(&m)?,
        });
    }
    Ok(entries)
}

/// `x` to 12 significant digits in plain decimal (scientific below 1e-5 or
/// at 1e15 and above).
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `(alpha, eps_hat, eps_hat / alpha)` rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub eps_hat: f64,
    pub eps_hat_over_alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub mechanism: Mechanism,
    pub rows: Vec<CurveRow>,
}

pub const CURVE_ALPHA_LIMIT: f64 = 1e6;

impl CurveTable {
    /// `points` orders log-spaced in `alpha - 1` between `alpha_min` and
    /// `alpha_max` inclusive, with `1 < alpha_min < alpha_max <= 1e6`.
    pub fn new(m: &Mechanism, alpha_min: f64, alpha_max: f64, points: usize) -> Result<Self> {
        if !(alpha_min > 1.0 && alpha_min < alpha_max && alpha_max <= CURVE_ALPHA_LIMIT) {
            return Err(usage(format!(
                "need 1 < alpha-min < alpha-max <= 1e6, got [{alpha_min}, {alpha_max}]"
            )));
        }
        if points == 0 {
            return Err(usage("need at least one point"));
        }
        let curve = RdpCurve::new(*m).map_err(|e| usage(e.to_string()))?;
        let (lo, hi) = ((alpha_min - 1.0).ln(), (alpha_max - 1.0).ln());
        let rows = (0..points)
            .map(|i| {
                let h = if points == 1 {
                    alpha_min - 1.0
                } else if i + 1 == points {
                    alpha_max - 1.0
                } else {
                    (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp()
                };
                let order = RenyiOrder::excess_unchecked(h);
                let eps_hat = curve.eval(order);
                CurveRow {
                    alpha: order.alpha(),
                    eps_hat,
                    eps_hat_over_alpha: eps_hat / order.alpha(),
                }
            })
            .collect();
        Ok(Self {
            mechanism: *m,
            rows,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,eps_hat,eps_hat_over_alpha\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{}", r.alpha, r.eps_hat, r.eps_hat_over_alpha);
        }
        out
    }
}

/// Parameters of the comparison figure. Defaults: `eps` in `[0.01, 10]`,
/// 200 log-spaced points, discrete Laplace sensitivity 2, k-RR with `k = 3`,
/// bounded range with `eta = eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureSpec {
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
    pub delta: u64,
    pub k: u64,
}

impl Default for FigureSpec {
    fn default() -> Self {
        Self {
            eps_min: 0.01,
            eps_max: 10.0,
            points: 200,
            delta: 2,
            k: 3,
        }
    }
}

pub const FIGURE_EPS_LIMIT: f64 = 20.0;
pub const FIGURE_COLUMNS: [&str; 6] = ["generic", "laplace", "dlaplace", "krr", "rappor", "br"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureRow {
    pub eps: f64,
    /// `rho` per column of [`FIGURE_COLUMNS`].
    pub rho: [f64; 6],
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub spec: FigureSpec,
    pub rows: Vec<FigureRow>,
}

impl FigureTable {
    pub fn new(spec: FigureSpec) -> Result<Self> {
        if !(spec.eps_min > 0.0 && spec.eps_min <= spec.eps_max && spec.eps_max <= FIGURE_EPS_LIMIT)
        {
            return Err(usage(format!(
                "need 0 < eps-min <= eps-max <= 20, got [{}, {}]",
                spec.eps_min, spec.eps_max
            )));
        }
        if spec.points < 2 && spec.eps_min != spec.eps_max {
            return Err(usage("need at least two points for a range"));
        }
        let (lo, hi) = (spec.eps_min.ln(), spec.eps_max.ln());
        let mut rows = Vec::with_capacity(spec.points);
        for i in 0..spec.points.max(1) {
            let eps = if i == 0 {
                spec.eps_min
            } else if i + 1 == spec.points {
                spec.eps_max
            } else {
                (lo + (hi - lo) * i as f64 / (spec.points - 1) as f64).exp()
            };
            let ms = [
                Mechanism::GenericDp { eps },
                Mechanism::Laplace { eps },
                Mechanism::DiscreteLaplace {
                    eps,
                    delta: spec.delta,
                },
                Mechanism::Krr { eps, k: spec.k },
                Mechanism::Rappor { eps, d: 2 },
                Mechanism::BoundedRange { eta: eps },
            ];
            let mut rho = [0.0; 6];
            for (slot, m) in rho.iter_mut().zip(&ms) {
                *slot = zcdp_bound(m).map_err(|e| usage(e.to_string()))?.rho;
            }
            rows.push(FigureRow { eps, rho });
        }
        Ok(Self { spec, rows })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,");
        out.push_str(&FIGURE_COLUMNS.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.eps.to_string());
            for v in r.rho {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// Log-log line chart of every column against `eps`.
    pub fn to_svg(&self) -> String {
        const W: f64 = 720.0;
        const H: f64 = 480.0;
        const PAD: f64 = 60.0;
        const COLORS: [&str; 6] = [
            "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
        ];

        let xs: Vec<f64> = self.rows.iter().map(|r| r.eps.log10()).collect();
        let ys = self
            .rows
            .iter()
            .flat_map(|r| r.rho.iter().map(|v| v.log10()));
        let (x0, x1) = bounds(xs.iter().copied());
        let (y0, y1) = bounds(ys);
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            W - 2.0 * PAD,
            H - 2.0 * PAD
        );
        for e in x0.ceil() as i32..=x1.floor() as i32 {
            let x = sx(e as f64);
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">1e{e}</text>"#,
                H - PAD + 18.0
            );
        }
        for e in y0.ceil() as i32..=y1.floor() as i32 {
            let y = sy(e as f64);
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{y:.2}" font-size="12" text-anchor="end">1e{e}</text>"#,
                PAD - 6.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">eps</text>"#,
            W / 2.0,
            H - 15.0
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{:.2}" font-size="14" transform="rotate(-90 15 {:.2})" text-anchor="middle">rho</text>"#,
            H / 2.0,
            H / 2.0
        );
        for (c, name) in FIGURE_COLUMNS.iter().enumerate() {
            let pts: Vec<String> = self
                .rows
                .iter()
                .map(|r| format!("{:.2},{:.2}", sx(r.eps.log10()), sy(r.rho[c].log10())))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                COLORS[c],
                pts.join(" ")
            );
            let ly = PAD + 16.0 + 18.0 * c as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#,
                PAD + 12.0,
                PAD + 36.0,
                COLORS[c]
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" font-size="12">{name}</text>"#,
                PAD + 42.0,
                ly + 4.0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
        (a.min(v), b.max(v))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zcdp::zcdp_laplace;

    fn fake(rho: f64) -> ZcdpBound {
        ZcdpBound {
            rho,
            tight: true,
            source: "test".into(),
            mechanism: Mechanism::GenericDp { eps: 1.0 },
        }
    }

    #[test]
    fn compose_adds() {
        let l = compose(&[fake(0.1), fake(0.2)]).unwrap();
        assert_eq!(l.total, 0.1 + 0.2);
        assert_eq!(l.entries.len(), 2);
        assert_eq!(compose(&[fake(0.25)]).unwrap().total, 0.25);
        assert!(matches!(compose(&[]), Err(Error::Usage(_))));
        let lap = zcdp_laplace(1.0).unwrap();
        let n = 10;
        let l = compose(&vec![lap.clone(); n]).unwrap();
        assert!((l.total - n as f64 * (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn sig12() {
        assert_eq!(format_sig12((-1f64).exp()), "0.367879441171");
        assert_eq!(format_sig12(0.300_489_767_736_2), "0.300489767736");
        assert_eq!(format_sig12(12.5), "12.5000000000");
        assert_eq!(format_sig12(2.5e-8), "2.50000000000e-8");
    }

    #[test]
    fn parse_flags() {
        let m = parse_mechanism_tokens(&["krr", "--eps", "1", "--k=4"]).unwrap();
        assert_eq!(m, Mechanism::Krr { eps: 1.0, k: 4 });
        assert_eq!(
            parse_mechanism_tokens(&["br", "--eta", "2"]).unwrap(),
            Mechanism::BoundedRange { eta: 2.0 }
        );
        for bad in [
            vec!["krr", "--eps", "1"],
            vec!["laplace"],
            vec!["laplace", "--eps", "-1"],
            vec!["laplace", "--eps", "x"],
            vec!["gauss", "--eps", "1"],
            vec!["laplace", "--eps"],
            vec!["laplace", "--eps", "1", "--zz", "2"],
        ] {
            assert!(
                matches!(parse_mechanism_tokens(&bad), Err(Error::Usage(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn compose_file() {
        let text = "# budget\nlaplace --eps 1\n\nkrr --eps 1 --k 4  # trailing\n";
        let entries = parse_compose_file(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[1].label, "krr --eps 1 --k 4");
        let err = parse_compose_file("laplace --eps 1\nkrr --eps 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn curve_table_shape() {
        let t = CurveTable::new(&Mechanism::Laplace { eps: 1.0 }, 1.000001, 100.0, 5).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows.windows(2).all(|w| w[0].alpha < w[1].alpha));
        assert!(t
            .rows
            .windows(2)
            .all(|w| w[0].eps_hat_over_alpha >= w[1].eps_hat_over_alpha));
        assert!((t.rows[0].eps_hat - 0.3679).abs() < 1e-4);
        assert_eq!(t.rows[4].alpha, 100.0);
        let csv = t.to_csv();
        assert!(csv.starts_with("alpha,eps_hat,eps_hat_over_alpha\n"));
        assert_eq!(csv.lines().count(), 6);
        assert!(CurveTable::new(&Mechanism::Laplace { eps: 1.0 }, 1.0, 100.0, 5).is_err());
        assert!(CurveTable::new(&Mechanism::Laplace { eps: 1.0 }, 2.0, 2e6, 5).is_err());
    }

    #[test]
    fn figure_rows() {
        let f = FigureTable::new(FigureSpec::default()).unwrap();
        assert_eq!(f.rows.len(), 200);
        for r in &f.rows {
            let [generic, laplace, dlaplace, _, _, br] = r.rho;
            assert!(generic >= dlaplace && dlaplace >= laplace);
            assert!(br <= generic);
        }
        let one = FigureTable::new(FigureSpec {
            eps_min: 1.0,
            eps_max: 1.0,
            points: 1,
            ..FigureSpec::default()
        })
        .unwrap();
        let csv = one.to_csv();
        assert!(csv.starts_with("eps,generic,laplace,dlaplace,krr,rappor,br\n"));
        assert!(csv.contains("0.462117") && csv.contains("0.367879"));
        assert_eq!(f.to_svg(), f.to_svg());
        assert!(FigureTable::new(FigureSpec {
            eps_max: 30.0,
            ..FigureSpec::default()
        })
        .is_err());
    }
}
