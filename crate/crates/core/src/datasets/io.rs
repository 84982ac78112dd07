use std::fs;
use std::path::Path;

use super::{standardize_with, Dataset, ScaleKind};
use crate::error::{Error, Result};
use crate::linalg::Mat;

/// Loads a comma-separated numeric table. Columns listed in `target_columns`
/// become targets, the rest predictors, both in file order. Without a header
/// columns are named by their 0-based position.
pub fn load_csv(path: &Path, target_columns: &[&str], has_header: bool) -> Result<Dataset> {
    let io_err = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let text = fs::read_to_string(path).map_err(io_err)?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut names: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let row_no = line + 1;
        let record = record.map_err(|e| Error::ParseError {
            row: row_no,
            column: String::new(),
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if has_header && names.is_none() {
            names = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let header = names.get_or_insert_with(|| (0..record.len()).map(|j| j.to_string()).collect());
        if record.len() != header.len() {
            return Err(Error::RaggedRows {
                row: row_no,
                expected: header.len(),
                found: record.len(),
            });
        }
        let parsed = record
            .iter()
            .enumerate()
            .map(|(j, field)| {
                field.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::ParseError {
                    row: row_no,
                    column: header[j].clone(),
                    message: format!("cannot parse {field:?} as a finite number"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(parsed);
    }
    let names = names.unwrap_or_default();
    if rows.is_empty() {
        return Err(Error::ParseError {
            row: 0,
            column: String::new(),
            message: format!("{} contains no data rows", path.display()),
        });
    }
    let mut target_idx = Vec::with_capacity(target_columns.len());
    for t in target_columns {
        let j = names.iter().position(|n| n == t).ok_or_else(|| Error::ParseError {
            row: 0,
            column: t.to_string(),
            message: "target column not found".into(),
        })?;
        target_idx.push(j);
    }
    let feature_idx: Vec<usize> = (0..names.len()).filter(|j| !target_idx.contains(j)).collect();
    if feature_idx.is_empty() || target_idx.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one predictor and one target column".into(),
        ));
    }
    let pick = |idx: &[usize]| Mat::from_fn(rows.len(), idx.len(), |i, j| rows[i][idx[j]]);
    Dataset::new(
        pick(&feature_idx),
        pick(&target_idx),
        feature_idx.iter().map(|&j| names[j].clone()).collect(),
        target_idx.iter().map(|&j| names[j].clone()).collect(),
    )
}

pub const PROSTATE_PREDICTORS: [&str; 8] = [
    "lcavol", "lweight", "age", "lbph", "svi", "lcp", "gleason", "pgg45",
];

/// Raw prostate predictors and `lpsa`, split by the file's train indicator.
#[derive(Clone, Debug, PartialEq)]
pub struct ProstateSplit {
    pub train: Dataset,
    pub test: Dataset,
}

/// Reads the whitespace-delimited prostate table: a header naming the eight
/// predictors, `lpsa` and `train`, rows optionally prefixed by a row id,
/// and a `T`/`F` train indicator.
pub fn load_prostate(path: &Path) -> Result<ProstateSplit> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let header: Vec<&str> = match lines.next() {
        Some((_, l)) => l.split_whitespace().map(|t| t.trim_matches('"')).collect(),
        None => {
            return Err(Error::ParseError {
                row: 0,
                column: String::new(),
                message: "empty prostate file".into(),
            })
        }
    };
    let locate = |name: &str| {
        header.iter().position(|h| *h == name).ok_or_else(|| Error::ParseError {
            row: 1,
            column: name.to_string(),
            message: "missing column in header".into(),
        })
    };
    let predictors = PROSTATE_PREDICTORS
        .iter()
        .map(|n| locate(n))
        .collect::<Result<Vec<_>>>()?;
    let target = locate("lpsa")?;
    let flag = locate("train")?;

    let mut train = (Vec::new(), Vec::new());
    let mut test = (Vec::new(), Vec::new());
    for (line, text) in lines {
        let row = line + 1;
        let mut fields: Vec<&str> = text.split_whitespace().map(|t| t.trim_matches('"')).collect();
        if fields.len() == header.len() + 1 {
            fields.remove(0);
        }
        if fields.len() != header.len() {
            return Err(Error::RaggedRows {
                row,
                expected: header.len(),
                found: fields.len(),
            });
        }
        let number = |j: usize| {
            fields[j].parse::<f64>().map_err(|_| Error::ParseError {
                row,
                column: header[j].to_string(),
                message: format!("cannot parse {:?} as a number", fields[j]),
            })
        };
        let x = predictors.iter().map(|&j| number(j)).collect::<Result<Vec<_>>>()?;
        let y = number(target)?;
        let dest = match fields[flag] {
            "T" | "TRUE" | "true" | "1" => &mut train,
            "F" | "FALSE" | "false" | "0" => &mut test,
            other => {
                return Err(Error::ParseError {
                    row,
                    column: "train".into(),
                    message: format!("expected T or F, found {other:?}"),
                })
            }
        };
        dest.0.push(x);
        dest.1.push(y);
    }
    let build = |(x, y): (Vec<Vec<f64>>, Vec<f64>)| -> Result<Dataset> {
        if x.is_empty() {
            return Err(Error::InvalidParameter("prostate split has no rows".into()));
        }
        Dataset::new(
            Mat::from_rows(&x)?,
            Mat::column(&y),
            PROSTATE_PREDICTORS.iter().map(|s| s.to_string()).collect(),
            vec!["lpsa".to_string()],
        )
    };
    Ok(ProstateSplit {
        train: build(train)?,
        test: build(test)?,
    })
}

/// Standardizes both splits with the training means and population standard
/// deviations, then prepends the intercept column.
pub fn prostate_design(split: &ProstateSplit) -> Result<(Dataset, Dataset)> {
    let train = standardize_with(&split.train, ScaleKind::Population)?;
    let transform = train.standardization.clone().expect("just standardized");
    let test = Dataset {
        x: transform.apply(&split.test.x),
        standardization: Some(transform),
        ..split.test.clone()
    };
    Ok((train.with_intercept(), test.with_intercept()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_with_header() {
        let f = write("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
        let ds = load_csv(f.path(), &["y"], true).unwrap();
        assert_eq!(ds.x.shape(), (3, 2));
        assert_eq!(ds.y.col(0), vec![3.0, 6.0, 9.0]);
        assert_eq!(ds.feature_names, vec!["a", "b"]);
    }

    #[test]
    fn csv_without_header() {
        let f = write("1,2,3\n4,5,6\n");
        let ds = load_csv(f.path(), &["0"], false).unwrap();
        assert_eq!(ds.x.col(0), vec![2.0, 5.0]);
        assert_eq!(ds.y.col(0), vec![1.0, 4.0]);
    }

    #[test]
    fn csv_errors() {
        let f = write("a,b,y\n1,2,3\n4,oops,6\n");
        match load_csv(f.path(), &["y"], true) {
            Err(Error::ParseError { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
        let f = write("a,b,y\n1,2,3\n4,6\n");
        assert!(matches!(
            load_csv(f.path(), &["y"], true),
            Err(Error::RaggedRows { row: 3, expected: 3, found: 2 })
        ));
        let missing = Path::new("/nonexistent/bridgekit.csv");
        assert!(matches!(load_csv(missing, &["y"], true), Err(Error::Io { .. })));
        let f = write("a,b,y\n1,2,3\n");
        assert!(load_csv(f.path(), &["z"], true).is_err());
    }

    const PROSTATE_FIXTURE: &str = "\tlcavol\tlweight\tage\tlbph\tsvi\tlcp\tgleason\tpgg45\tlpsa\ttrain
1\t-0.58\t2.77\t50\t-1.39\t0\t-1.39\t6\t0\t-0.43\tT
2\t-0.99\t3.32\t58\t-1.39\t0\t-1.39\t6\t0\t-0.16\tT
3\t-0.51\t2.69\t74\t-1.39\t0\t-1.39\t7\t20\t-0.16\tT
4\t-1.20\t3.28\t58\t-1.39\t0\t-1.39\t6\t0\t-0.16\tF
5\t0.75\t3.43\t62\t-1.39\t0\t-1.39\t6\t0\t0.37\tT
";

    #[test]
    fn prostate_table() {
        let f = write(PROSTATE_FIXTURE);
        let split = load_prostate(f.path()).unwrap();
        assert_eq!(split.train.x.shape(), (4, 8));
        assert_eq!(split.test.x.shape(), (1, 8));
        assert_eq!(split.test.y[(0, 0)], -0.16);
        let (train, test) = prostate_design(&split).unwrap();
        assert_eq!(train.x.shape(), (4, 9));
        assert_eq!(test.x.col(0), vec![1.0]);
        let col = train.x.col(1);
        assert!(col.iter().sum::<f64>().abs() < 1e-12);
        let var = col.iter().map(|v| v * v).sum::<f64>() / 4.0;
        assert!((var - 1.0).abs() < 1e-12);
    }

    #[test]
    fn prostate_bad_flag() {
        let f = write(&PROSTATE_FIXTURE.replace("\tF\n", "\tX\n"));
        assert!(matches!(load_prostate(f.path()), Err(Error::ParseError { .. })));
    }
}
