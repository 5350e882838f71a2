//! CSV and manifest emission. All numbers are written in scientific notation
//! with 17 significant digits so files round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::ineqlab::LemmaRow;
use crate::potential::BoundCertificate;

/// Scientific notation, 17 significant digits, '.' decimal separator.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Certificate rows: sweep id, descriptor, sup ratio, argmax point, verdict.
pub fn certificates_csv(rows: &[(String, &BoundCertificate)]) -> String {
    let mut out = String::from("sweep_id,descriptor,sup_ratio,argmax_x,argmax_y,passed\n");
    for (id, cert) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            csv_escape(id),
            csv_escape(&cert.sweep_descriptor),
            fmt_g17(cert.sup_ratio),
            fmt_g17(cert.argmax_x),
            fmt_g17(cert.argmax_y),
            cert.passed
        );
    }
    out
}

/// Lemma rows with labeled parameter columns. All rows must share one
/// parameter layout; the header is taken from the first row.
pub fn lemma_csv(rows: &[LemmaRow]) -> String {
    let mut out = String::from("lemma_id");
    if let Some(first) = rows.first() {
        for (name, _) in &first.params {
            let _ = write!(out, ",{}", csv_escape(name));
        }
    }
    out.push_str(",lhs,rhs,ratio,ceiling,passed\n");
    for row in rows {
        let _ = write!(out, "{}", row.lemma.as_str());
        for (_, v) in &row.params {
            let _ = write!(out, ",{}", fmt_g17(*v));
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            fmt_g17(row.lhs),
            fmt_g17(row.rhs),
            fmt_g17(row.ratio),
            fmt_g17(row.ceiling),
            row.passed
        );
    }
    out
}

/// Norm sweep rows: exponents, weights, both sides, ratio.
pub fn norms_csv(rows: &[(f64, f64, f64, f64, f64, f64, f64)]) -> String {
    let mut out = String::from("p,q,r,t,s,lhs,rhs,ratio\n");
    for &(p, q, r, t, s, lhs, rhs) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_g17(p),
            fmt_g17(q),
            fmt_g17(r),
            fmt_g17(t),
            fmt_g17(s),
            fmt_g17(lhs),
            fmt_g17(rhs),
            fmt_g17(if rhs != 0.0 { lhs / rhs } else { f64::NAN })
        );
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| crate::Error::Precondition(format!("cannot create {parent:?}: {e}")))?;
    }
    fs::write(path, contents)
        .map_err(|e| crate::Error::Precondition(format!("cannot write {path:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_round_trip() {
        for &x in &[1.0 / 3.0, 2.5e-17, -9.87654321e120, 0.1 + 0.2] {
            let s = fmt_g17(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("q\"q"), "\"q\"\"q\"");
    }
}
