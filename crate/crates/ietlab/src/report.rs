//! Report assembly: bit-exact serialization helpers and atomic file output.
//!
//! Big integers are serialized as decimal strings and rationals as
//! "numerator/denominator" strings, so nothing is rounded. Floats appear
//! only as 15-significant-digit decimal renderings of reporting artifacts.
//! Identical configs produce byte-identical output: JSON maps are sorted,
//! and files are written to a sibling temp path and renamed, so failures
//! leave no partial files.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// 15 significant digits, scientific notation.
pub fn f64_15(x: f64) -> String {
    format!("{x:.14e}")
}

/// Top-level JSON envelope shared by every command.
pub fn envelope(config: Value, results: Value, verdict: bool) -> Value {
    json!({
        "tool_version": TOOL_VERSION,
        "config": config,
        "results": results,
        "verdict": if verdict { "pass" } else { "fail" },
    })
}

/// Writes to the path via a sibling temp file and rename, or to stdout when
/// no path is given.
pub fn write_output(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
        Some(p) => {
            let mut tmp = p.as_os_str().to_owned();
            tmp.push(".tmp");
            let tmp_path = std::path::PathBuf::from(tmp);
            std::fs::write(&tmp_path, content)?;
            std::fs::rename(&tmp_path, p)
        }
    }
}

/// CSV table of measures: one row per `λ_j(I_i^{(k)})`, reduced fraction.
pub fn measures_csv(lab: &crate::measure::MeasureLab, levels: usize) -> String {
    let mut out = String::from("j,k,i,numerator,denominator\n");
    for j in 1..=lab.n() {
        for k in 0..=levels {
            for i in 1..=lab.n() {
                let v = lab.measure_of_interval(j, k, i);
                out.push_str(&format!("{j},{k},{i},{},{}\n", v.numer(), v.denom()));
            }
        }
    }
    out
}

/// CSV of one dimension-series pair.
pub fn dimension_csv(series: &crate::dimension::DimensionSeries) -> String {
    let mut out = String::from("k,lower,upper,gap_bound,lambda_i,lambda_j,b\n");
    for row in &series.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.k,
            f64_15(row.lower),
            f64_15(row.upper),
            f64_15(row.gap),
            rational_str(&row.lambda_i),
            rational_str(&row.lambda_j),
            row.return_time,
        ));
    }
    out
}

pub fn biguint_str(x: &BigUint) -> String {
    x.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn formatting() {
        let r = BigRational::new(BigInt::from(57), BigInt::from(77));
        assert_eq!(rational_str(&r), "57/77");
        assert_eq!(f64_15(0.5), "5.00000000000000e-1");
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_output(Some(&path), "{}").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{}");
        assert!(!dir.path().join("out.json.tmp").exists());
    }
}
