//! CSV input: a `date` column (`YYYY-MM`) plus one numeric column per
//! variable, consecutive months only.

use std::io::{Read, Write};
use std::path::Path;

use tsecon::{Dataset, Period, TimeSeries};

use crate::error::{CliError, Result};

/// Variable columns of the header, in file order.
pub fn header_columns(path: &Path) -> Result<Vec<String>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers().map_err(|e| csv_error(&e))?;
    Ok(headers.iter().filter(|h| *h != "date").map(str::to_string).collect())
}

pub fn load_csv(path: &Path, columns: &[String]) -> Result<Vec<TimeSeries>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_csv(file, columns)
}

fn csv_error(e: &csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line() as usize);
    CliError::Parse {
        line,
        column: String::new(),
        message: e.to_string(),
    }
}

pub fn read_csv<R: Read>(input: R, columns: &[String]) -> Result<Vec<TimeSeries>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(&e))?.clone();
    let position = |name: &str| headers.iter().position(|h| h == name);
    let date_col = position("date").ok_or_else(|| CliError::MissingColumn("date".into()))?;
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| position(c).ok_or_else(|| CliError::MissingColumn(c.clone())))
        .collect::<Result<_>>()?;

    let mut start: Option<Period> = None;
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); columns.len()];
    for (rows, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let raw = &record[date_col];
        let period: Period = raw.parse().map_err(|_| CliError::Parse {
            line,
            column: "date".into(),
            message: format!("`{raw}` is not a YYYY-MM month"),
        })?;
        match start {
            None => start = Some(period),
            Some(s) => {
                let expected = s.offset(rows as i64);
                if period > expected {
                    return Err(CliError::Gap { missing: expected });
                }
                if period < expected {
                    return Err(CliError::Parse {
                        line,
                        column: "date".into(),
                        message: format!("{period} is out of order (expected {expected})"),
                    });
                }
            }
        }
        for (j, &c) in idx.iter().enumerate() {
            let cell = &record[c];
            let v: f64 = cell
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| CliError::Parse {
                    line,
                    column: columns[j].clone(),
                    message: format!("`{cell}` is not a finite number"),
                })?;
            values[j].push(v);
        }
    }
    let start = start.ok_or_else(|| CliError::Parse {
        line: 1,
        column: String::new(),
        message: "no data rows".into(),
    })?;
    columns
        .iter()
        .zip(values)
        .map(|(name, v)| {
            TimeSeries::new(name.clone(), start, v).map_err(|e| CliError::Parse {
                line: 0,
                column: name.clone(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Writes `date` plus every column with shortest round-trip formatting.
pub fn write_csv<W: Write>(ds: &Dataset, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["date".to_string()];
    header.extend(ds.names().iter().cloned());
    w.write_record(&header)?;
    for r in 0..ds.nobs() {
        let mut row = vec![ds.start().offset(r as i64).to_string()];
        row.extend((0..ds.nvars()).map(|j| ds.data()[(r, j)].to_string()));
        w.write_record(&row)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cols(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reads_well_formed_file() {
        let mut text = String::from("date,DK,IHR,ITH\n");
        let start = Period::new(2003, 1).unwrap();
        for i in 0..157 {
            text += &format!("{},{},{},{}\n", start.offset(i), 1.0 + i as f64, 2.0, 3.5);
        }
        let series = read_csv(text.as_bytes(), &cols(&["DK", "IHR", "ITH"])).unwrap();
        assert_eq!(series.len(), 3);
        for s in &series {
            assert_eq!(s.len(), 157);
            assert_eq!(s.start(), start);
        }
        assert_eq!(series[0].values()[156], 157.0);
    }

    #[test]
    fn gap_names_missing_month() {
        let text = "date,a\n2003-01,1\n2003-02,2\n2003-04,3\n";
        match read_csv(text.as_bytes(), &cols(&["a"])) {
            Err(CliError::Gap { missing }) => assert_eq!(missing.to_string(), "2003-03"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_cell_has_location() {
        let text = "date,a,b\n2003-01,1,2\n2003-02,x,2\n";
        match read_csv(text.as_bytes(), &cols(&["a", "b"])) {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(column, "a");
            }
            other => panic!("{other:?}"),
        }
        let text = "date,a\n2003-13,1\n";
        assert!(matches!(read_csv(text.as_bytes(), &cols(&["a"])), Err(CliError::Parse { .. })));
    }

    #[test]
    fn missing_column() {
        let text = "date,a\n2003-01,1\n";
        match read_csv(text.as_bytes(), &cols(&["a", "zz"])) {
            Err(CliError::MissingColumn(c)) => assert_eq!(c, "zz"),
            other => panic!("{other:?}"),
        }
        let text = "month,a\n2003-01,1\n";
        assert!(matches!(read_csv(text.as_bytes(), &cols(&["a"])), Err(CliError::MissingColumn(_))));
    }

    #[test]
    fn write_then_read() {
        let ds = Dataset::from_columns(
            vec!["u".into(), "v".into()],
            Period::new(2010, 11).unwrap(),
            &[vec![0.1, 1e-7, 3.0], vec![-2.5, 1.0 / 3.0, 7.0]],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), &cols(&["u", "v"])).unwrap();
        assert_eq!(back[1].values(), &[-2.5, 1.0 / 3.0, 7.0]);
        assert_eq!(back[0].start(), Period::new(2010, 11).unwrap());
    }
}
