//! Sweep tables on disk: the row CSV, the optimum CSV and a gnuplot script.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use qtd_core::sweep::{Optimum, RowStatus, SweepRow};

use crate::error::CliError;
use crate::output::full_precision;

pub const SWEEP_HEADER: [&str; 6] = ["beta", "diff", "k_classical", "k_quantum", "gamma_eff_inv", "status"];
pub const OPTIMAL_HEADER: [&str; 3] = ["beta", "diff_star", "k_quantum_star"];

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source: io::Error::other(e) }
}

pub fn write_rows<W: Write>(rows: &[SweepRow], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record([
            full_precision(r.beta),
            full_precision(r.diff),
            full_precision(r.k_classical),
            full_precision(r.k_quantum),
            full_precision(r.gamma_eff_inv),
            r.status.as_str().to_owned(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_optima<W: Write>(optima: &[Optimum], w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(OPTIMAL_HEADER)?;
    for o in optima {
        out.write_record([full_precision(o.beta), full_precision(o.diff_star), full_precision(o.k_quantum_star)])?;
    }
    out.flush()?;
    Ok(())
}

/// Writes the sweep table to `path` with LF line endings and full precision.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(io_err(path))?;
    write_rows(rows, BufWriter::new(file)).map_err(|e| csv_err(path, e))
}

pub fn parse_rows<R: Read>(r: R) -> Result<Vec<SweepRow>, String> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num =
            |j: usize| rec[j].parse::<f64>().map_err(|e| format!("row {}: column {}: {e}", i + 1, SWEEP_HEADER[j]));
        let status = RowStatus::parse(&rec[5]).ok_or_else(|| format!("row {}: unknown status `{}`", i + 1, &rec[5]))?;
        rows.push(SweepRow {
            beta: num(0)?,
            diff: num(1)?,
            k_classical: num(2)?,
            k_quantum: num(3)?,
            gamma_eff_inv: num(4)?,
            status,
        });
    }
    Ok(rows)
}

/// `optimal.csv` next to the sweep table.
pub fn optimal_path(sweep: &Path) -> PathBuf {
    sweep.with_file_name("optimal.csv")
}

/// Gnuplot script next to the sweep table, same stem with a `.gp` extension.
pub fn plot_path(sweep: &Path) -> PathBuf {
    sweep.with_extension("gp")
}

/// A gnuplot script drawing `|k_quantum|` against the momentum difference,
/// one curve per β, with the optimal-difference trace dotted on top.
pub fn plot_script(sweep: &Path, betas: &[f64]) -> String {
    let data = sweep.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let optimal = optimal_path(sweep).file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set xlabel '(p_A'' - p_A)/mc'\n");
    s.push_str("set ylabel '|K_quantum|'\n");
    s.push_str("set key top right\n");
    s.push_str("plot \\\n");
    for b in betas {
        let b = full_precision(*b);
        s.push_str(&format!(
            "  '{data}' skip 1 using 2:($1 == {b} ? abs($4) : 1/0) with lines title sprintf('beta = %g', {b}), \\\n"
        ));
    }
    s.push_str(&format!(
        "  '{optimal}' skip 1 using 2:(abs($3)) with linespoints dashtype 3 lc rgb 'black' title 'optimal difference'\n"
    ));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(beta: f64, diff: f64) -> SweepRow {
        SweepRow {
            beta,
            diff,
            k_classical: 1.0 / 3.0,
            k_quantum: -1.3447071068499747e-05,
            gamma_eff_inv: 0.1 + 0.2,
            status: RowStatus::Ok,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        write_rows(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "beta,diff,k_classical,k_quantum,gamma_eff_inv,status\n");
    }

    #[test]
    fn three_rows_are_four_lf_lines() {
        let mut buf = Vec::new();
        write_rows(&[row(0.1, 0.0), row(0.1, 0.01), row(0.1, 0.02)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut flagged = row(0.0, 0.0);
        flagged.k_quantum = f64::NAN;
        flagged.status = RowStatus::NearNullNormalization;
        let rows = vec![row(0.1, 0.0), row(0.05, 0.007), flagged];
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let back = parse_rows(buf.as_slice()).unwrap();
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.beta.to_bits(), b.beta.to_bits());
            assert_eq!(a.diff.to_bits(), b.diff.to_bits());
            assert_eq!(a.k_classical.to_bits(), b.k_classical.to_bits());
            assert_eq!(a.k_quantum.is_nan(), b.k_quantum.is_nan());
            if !a.k_quantum.is_nan() {
                assert_eq!(a.k_quantum.to_bits(), b.k_quantum.to_bits());
            }
            assert_eq!(a.status, b.status);
        }
    }

    #[test]
    fn companion_paths() {
        let p = Path::new("/tmp/out/fig2.csv");
        assert_eq!(optimal_path(p), Path::new("/tmp/out/optimal.csv"));
        assert_eq!(plot_path(p), Path::new("/tmp/out/fig2.gp"));
        let script = plot_script(p, &[0.1]);
        assert!(script.contains("'fig2.csv'") && script.contains("'optimal.csv'"));
    }
}
