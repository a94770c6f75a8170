//! Log–log growth of the bound ratios across a grid.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::report::Row;
use crate::HarnessError;

/// Ratio columns, by name.
pub const RATIO_COLUMNS: [&str; 4] = ["ratioT1", "ratioT2", "ratioT3", "ratioT4"];

/// The ratio a family is judged by: the bound stated for that family.
pub fn primary_ratio(family: &str) -> &'static str {
    match family {
        "natural" => "ratioT2",
        "square-norm" => "ratioT3",
        _ => "ratioT1",
    }
}

fn column(row: &Row, name: &str) -> Option<f64> {
    match name {
        "ratioT1" => row.ratio_t1,
        "ratioT2" => row.ratio_t2,
        "ratioT3" => row.ratio_t3,
        "ratioT4" => row.ratio_t4,
        _ => None,
    }
}

/// `log ratio ≈ c + q_slope·log Q + n_slope·log N`, least squares.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub family: String,
    pub coeff: String,
    pub column: String,
    pub q_slope: f64,
    pub n_slope: f64,
    pub points: usize,
}

/// Joint least-squares fit of `y` on `(a, b)` with intercept. Returns `None`
/// when the design does not separate the two regressors.
pub fn fit_plane(points: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let k = points.len() as f64;
    let (ma, mb, my) = points.iter().fold((0.0, 0.0, 0.0), |(a, b, y), p| (a + p.0 / k, b + p.1 / k, y + p.2 / k));
    let (mut saa, mut sbb, mut sab, mut say, mut sby) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(a, b, y) in points {
        let (da, db, dy) = (a - ma, b - mb, y - my);
        saa += da * da;
        sbb += db * db;
        sab += da * db;
        say += da * dy;
        sby += db * dy;
    }
    let det = saa * sbb - sab * sab;
    if !(det > 1e-12 * (saa * sbb).max(1e-300)) {
        return None;
    }
    Some(((say * sbb - sby * sab) / det, (sby * saa - say * sab) / det))
}

type Groups<'a> = BTreeMap<(String, String, &'a str), Vec<(f64, f64, f64)>>;

/// One fit per `(family, coeff, ratio column)` that has data. Rows with an
/// empty or nonpositive ratio are left out of the fit.
pub fn slope_report(rows: &[Row]) -> Result<Vec<SlopeFit>, HarnessError> {
    let mut groups = Groups::new();
    for row in rows {
        for name in RATIO_COLUMNS {
            if let Some(r) = column(row, name).filter(|r| *r > 0.0) {
                groups
                    .entry((row.family.clone(), row.coeff.clone(), name))
                    .or_default()
                    .push((row.q.ln(), (row.n as f64).ln(), r.ln()));
            }
        }
    }
    if groups.is_empty() {
        return Err(HarnessError::Degenerate("no positive ratios to fit".into()));
    }
    let mut out = Vec::new();
    for ((family, coeff, name), pts) in groups {
        let distinct = |f: fn(&(f64, f64, f64)) -> f64| {
            let mut v: Vec<f64> = pts.iter().map(f).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v.len()
        };
        if distinct(|p| p.0) < 2 || distinct(|p| p.1) < 2 {
            return Err(HarnessError::Degenerate(format!("{family}/{coeff}/{name}: need two distinct Q and N values")));
        }
        let (q_slope, n_slope) = fit_plane(&pts)
            .ok_or_else(|| HarnessError::Degenerate(format!("{family}/{coeff}/{name}: Q and N are collinear")))?;
        out.push(SlopeFit { family, coeff, column: name.to_string(), q_slope, n_slope, points: pts.len() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(q: f64, n: i64, ratio: f64) -> Row {
        Row {
            family: "all".into(),
            q,
            n,
            coeff: "random".into(),
            mode: "windowed".into(),
            epsilon: 0.1,
            lhs: 1.0,
            z: 1.0,
            bound_t1: Some(1.0 / ratio),
            bound_t2: None,
            bound_t3: None,
            bound_t4: None,
            ratio_t1: Some(ratio),
            ratio_t2: None,
            ratio_t3: None,
            ratio_t4: None,
            elapsed_ms: None,
        }
    }

    fn grid(f: impl Fn(f64, f64) -> f64) -> Vec<Row> {
        let mut rows = Vec::new();
        for q in [2.0, 4.0, 8.0] {
            for n in [4, 16, 64] {
                rows.push(row(q, n, f(q, n as f64)));
            }
        }
        rows
    }

    #[test]
    fn constant_ratio_has_zero_slope() {
        let fit = &slope_report(&grid(|_, _| 0.3)).unwrap()[0];
        assert!(fit.q_slope.abs() < 1e-12 && fit.n_slope.abs() < 1e-12);
    }

    #[test]
    fn doubling_with_q_has_unit_slope() {
        let fit = &slope_report(&grid(|q, n| q * n.powf(-0.5))).unwrap()[0];
        assert!((fit.q_slope - 1.0).abs() < 1e-12);
        assert!((fit.n_slope + 0.5).abs() < 1e-12);
        assert_eq!(fit.points, 9);
    }

    #[test]
    fn degenerate_grids_are_rejected() {
        let one_q: Vec<_> = [4, 16].iter().map(|&n| row(2.0, n, 1.0)).collect();
        assert!(matches!(slope_report(&one_q), Err(HarnessError::Degenerate(_))));
        assert!(matches!(slope_report(&[]), Err(HarnessError::Degenerate(_))));
        // Q and N move together.
        let diagonal: Vec<_> = [(2.0, 4), (4.0, 16), (8.0, 64)].iter().map(|&(q, n)| row(q, n, 1.0)).collect();
        assert!(matches!(slope_report(&diagonal), Err(HarnessError::Degenerate(_))));
    }
}
