use crate::error::{Error, Result};

/// Piecewise grid used for the penalty strength in the benchmarks.
pub const PAPER_LAMBDA_GRID: &str = "0:0.01:1,2:1:10,20:10:100,200:100:1000,2000:1000:10000";
pub const PAPER_K_GRID: &str = "1:0.01:2";
pub const PAPER_L1_RATIO_GRID: &str = "0.01:0.01:1";

/// A named, strictly increasing list of grid values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parses `name=start:step:end[,start:step:end...]`. Ends are inclusive, a
/// bare number is a one-point segment, and the union is sorted with
/// duplicates removed. Values are rounded to 12 decimals so that
/// accumulated steps land on the printed grid.
pub fn parse_grid(spec: &str) -> Result<Grid> {
    let (name, ranges) = spec
        .split_once('=')
        .ok_or_else(|| Error::InvalidGrid(format!("expected name=ranges, got {spec:?}")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::InvalidGrid(format!("missing grid name in {spec:?}")));
    }
    Ok(Grid {
        name: name.to_string(),
        values: parse_ranges(ranges)?,
    })
}

/// Parses the range list without a name.
pub fn parse_ranges(ranges: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for segment in ranges.split(',') {
        let segment = segment.trim();
        if segment.is_empty() {
            continue;
        }
        let parts: Vec<&str> = segment.split(':').map(str::trim).collect();
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidGrid(format!("bad number {s:?} in {segment:?}")))
        };
        match parts.as_slice() {
            [v] => values.push(num(v)?),
            [a, s, b] => {
                let (a, s, b) = (num(a)?, num(s)?, num(b)?);
                if !(s > 0.0) {
                    return Err(Error::InvalidGrid(format!("step must be positive in {segment:?}")));
                }
                if b < a {
                    return Err(Error::InvalidGrid(format!("end precedes start in {segment:?}")));
                }
                let n = ((b - a) / s + 1e-9).floor() as usize;
                if n > 10_000_000 {
                    return Err(Error::InvalidGrid(format!("too many points in {segment:?}")));
                }
                values.extend((0..=n).map(|i| round12(a + i as f64 * s)));
            }
            _ => {
                return Err(Error::InvalidGrid(format!(
                    "expected start:step:end or a single value, got {segment:?}"
                )))
            }
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidGrid("grid has no values".into()));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}

fn round12(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn paper_lambda_grid() -> Vec<f64> {
    parse_ranges(PAPER_LAMBDA_GRID).expect("static grid")
}

pub fn paper_k_grid() -> Vec<f64> {
    parse_ranges(PAPER_K_GRID).expect("static grid")
}

pub fn paper_l1_ratio_grid() -> Vec<f64> {
    parse_ranges(PAPER_L1_RATIO_GRID).expect("static grid")
}
