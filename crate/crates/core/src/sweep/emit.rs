//! CSV and JSON-lines output. Column order is fixed (see `docs/columns.md`);
//! floats are written with 17 significant digits so they re-parse exactly.

use std::path::Path;

use super::{Format, Row, Table};
use crate::error::{Error, Result};
use crate::flags;

const COLUMNS: [&str; 38] = [
    "point", "ix", "iy", "omega1", "omega2", "delta", "gamma1", "gamma2", "t1", "t2", "mu1", "mu2",
    "status", "residual", "rho11", "rho22", "rho33", "rho44", "rho23_re", "rho23_im", "f_total",
    "f_e", "f_n", "qfi_step", "f_oracle", "coherence", "linear_entropy", "concurrence", "qmi",
    "classical_corr", "discord", "i1", "i2", "j1", "j2", "epr", "flags", "error",
];

pub fn columns() -> &'static [&'static str] {
    &COLUMNS
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
            Cell::Float(_) | Cell::Empty => "null".into(),
        }
    }
}

fn opt<T>(v: Option<T>, f: impl FnOnce(T) -> Vec<f64>, n: usize) -> Vec<Cell> {
    match v {
        Some(x) => f(x).into_iter().map(Cell::Float).collect(),
        None => vec![Cell::Empty; n],
    }
}

/// Cells of one row in column order.
pub fn cells(row: &Row) -> Vec<Cell> {
    let p = &row.point;
    let mut out = vec![Cell::Int(p.index)];
    out.extend(p.coords.iter().map(|c| c.map_or(Cell::Empty, Cell::Int)));
    let (s, b) = (&p.params, &p.baths);
    out.extend(
        [s.omega1, s.omega2, s.delta, s.gamma1, s.gamma2, b.t1, b.t2, b.mu1, b.mu2].map(Cell::Float),
    );
    match &row.outcome {
        Ok(d) => {
            out.push(Cell::Text("ok".into()));
            out.push(Cell::Float(d.residual));
            let pop = d.rho.populations();
            let r23 = d.rho.rho23();
            out.extend([pop[0], pop[1], pop[2], pop[3], r23.re, r23.im].map(Cell::Float));
            out.extend(opt(d.qfi.as_ref(), |q| vec![q.f_total, q.f_e, q.f_n, q.step], 4));
            out.extend(opt(d.f_oracle, |f| vec![f], 1));
            out.extend(opt(
                d.correlations.as_ref(),
                |c| {
                    vec![
                        c.coherence,
                        c.linear_entropy,
                        c.concurrence,
                        c.qmi,
                        c.classical_corr,
                        c.discord,
                    ]
                },
                6,
            ));
            out.extend(opt(d.thermo.as_ref(), |t| vec![t.i1, t.i2, t.j1, t.j2, t.epr], 5));
            out.push(Cell::Text(flags::join(&d.flags())));
            out.push(Cell::Empty);
        }
        Err(msg) => {
            out.push(Cell::Text("error".into()));
            out.extend(vec![Cell::Empty; COLUMNS.len() - out.len() - 2]);
            out.push(Cell::Text(String::new()));
            out.push(Cell::Text(msg.clone()));
        }
    }
    debug_assert_eq!(out.len(), COLUMNS.len());
    out
}

/// Serializes a table; CSV always starts with a header row.
pub fn emit(table: &Table, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS).expect("writing to memory");
            for row in &table.rows {
                w.write_record(cells(row).iter().map(Cell::csv))
                    .expect("writing to memory");
            }
            w.into_inner().expect("flushing to memory")
        }
        Format::Jsonl => {
            let mut out = String::new();
            for row in &table.rows {
                let fields: Vec<String> = COLUMNS
                    .iter()
                    .zip(cells(row))
                    .map(|(k, c)| format!("\"{k}\":{}", c.json()))
                    .collect();
                out.push('{');
                out.push_str(&fields.join(","));
                out.push_str("}\n");
            }
            out.into_bytes()
        }
    }
}

pub fn write_table(path: &Path, table: &Table, format: Format) -> Result<()> {
    std::fs::write(path, emit(table, format)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, RunOptions, SweepSpec};

    #[test]
    fn empty_table_is_header_only() {
        let bytes = emit(&Table::default(), Format::Csv);
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text, format!("{}\n", COLUMNS.join(",")));
        assert!(emit(&Table::default(), Format::Jsonl).is_empty());
    }

    fn temperature_bias_table() -> Table {
        let spec = SweepSpec::from_toml(
            r#"
            observables = ["state", "qfi", "thermo"]
            [fixed]
            omega = 1.0
            delta = 0.005
            gamma = 0.002
            t1 = 0.1
            mu = 0.5
            [[axes]]
            name = "dt"
            start = 0.0
            stop = 1.0
            count = 5
            "#,
        )
        .unwrap();
        run_sweep(&spec, &RunOptions { threads: Some(1) }).unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let table = temperature_bias_table();
        let bytes = emit(&table, Format::Csv);
        let mut r = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS);
        let records: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(records.len(), table.rows.len());
        for (rec, row) in records.iter().zip(&table.rows) {
            for (field, cell) in rec.iter().zip(cells(row)) {
                match cell {
                    Cell::Float(x) => assert_eq!(field.parse::<f64>().unwrap().to_bits(), x.to_bits()),
                    Cell::Empty => assert_eq!(field, ""),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn jsonl_round_trip_is_exact() {
        let table = temperature_bias_table();
        let text = String::from_utf8(emit(&table, Format::Jsonl)).unwrap();
        for (line, row) in text.lines().zip(&table.rows) {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            let obj = v.as_object().unwrap();
            for (k, cell) in COLUMNS.iter().zip(cells(row)) {
                match cell {
                    Cell::Float(x) => assert_eq!(obj[*k].as_f64().unwrap().to_bits(), x.to_bits(), "{k}"),
                    Cell::Empty => assert!(obj[*k].is_null()),
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn error_rows_keep_column_count() {
        let mut table = temperature_bias_table();
        table.rows[0].outcome = Err("boom".into());
        let c = cells(&table.rows[0]);
        assert_eq!(c.len(), COLUMNS.len());
        assert_eq!(c.last(), Some(&Cell::Text("boom".into())));
    }
}
