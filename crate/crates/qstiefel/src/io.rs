//! Text formats: QMAT1 matrices, problem bundles, solver traces, and
//! tolerance overrides.
//!
//! All parsers are total over arbitrary byte strings fed through `&str`:
//! malformed input yields `Error::Parse`, never a panic, and allocation is
//! bounded by the input length (the header-declared shape is checked
//! against the actual token count before any matrix is built).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eig::EigProblem;
use crate::error::{Error, Result};
use crate::qmat::QuatMatrix;
use crate::quat::Quaternion;
use crate::solver::TraceRow;

const QMAT_MAGIC: &str = "QMAT1";

/// Serializes a matrix in the QMAT1 text format: a `QMAT1 <rows> <cols>`
/// header, then one `w x y z` line per entry in row-major order, every
/// float carrying 17 significant digits.
pub fn format_qmat(m: &QuatMatrix) -> String {
    let (rows, cols) = m.shape();
    let mut out = String::with_capacity(16 + rows * cols * 100);
    out.push_str(&format!("{QMAT_MAGIC} {rows} {cols}\n"));
    for r in 0..rows {
        for c in 0..cols {
            let q = m.get(r, c);
            out.push_str(&format!(
                "{:.16e} {:.16e} {:.16e} {:.16e}\n",
                q.w, q.x, q.y, q.z
            ));
        }
    }
    out
}

/// Parses the QMAT1 format. Token boundaries are arbitrary whitespace.
pub fn parse_qmat(text: &str) -> Result<QuatMatrix> {
    let mut tokens = text.split_whitespace();
    match tokens.next() {
        Some(QMAT_MAGIC) => {}
        Some(other) => {
            return Err(Error::Parse(format!(
                "expected {QMAT_MAGIC} magic, found {other:?}"
            )))
        }
        None => return Err(Error::Parse("empty QMAT1 input".into())),
    }
    let rows = parse_dim(tokens.next(), "rows")?;
    let cols = parse_dim(tokens.next(), "cols")?;
    let entries = rows
        .checked_mul(cols)
        .and_then(|e| e.checked_mul(4))
        .ok_or_else(|| Error::Parse("matrix shape overflows".into()))?;

    let values: Vec<&str> = tokens.collect();
    if values.len() != entries {
        return Err(Error::Parse(format!(
            "expected {entries} float tokens for a {rows}x{cols} matrix, found {}",
            values.len()
        )));
    }
    let mut m = QuatMatrix::zeros(rows, cols);
    for (idx, chunk) in values.chunks_exact(4).enumerate() {
        let r = idx / cols.max(1);
        let c = idx % cols.max(1);
        let mut comp = [0.0; 4];
        for (slot, tok) in comp.iter_mut().zip(chunk) {
            *slot = parse_finite(tok)?;
        }
        m.set(r, c, Quaternion::new(comp[0], comp[1], comp[2], comp[3]));
    }
    Ok(m)
}

fn parse_dim(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::Parse(format!("missing {what} in QMAT1 header")))?
        .parse::<usize>()
        .map_err(|e| Error::Parse(format!("bad {what} in QMAT1 header: {e}")))
}

fn parse_finite(tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|e| Error::Parse(format!("bad float {tok:?}: {e}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite value {tok:?}")));
    }
    Ok(v)
}

pub fn write_qmat_file<P: AsRef<Path>>(path: P, m: &QuatMatrix) -> Result<()> {
    fs::write(path, format_qmat(m))?;
    Ok(())
}

pub fn read_qmat_file<P: AsRef<Path>>(path: P) -> Result<QuatMatrix> {
    let text = fs::read_to_string(path)?;
    parse_qmat(&text)
}

/// Schema of a bundle's `meta.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleMeta {
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    #[serde(rename = "N")]
    pub weights: Vec<f64>,
}

/// Parses the `meta.json` payload of a problem bundle.
pub fn parse_bundle_meta(text: &str) -> Result<BundleMeta> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("meta.json: {e}")))
}

/// Writes a problem bundle: `A.qmat`, `G.qmat`, `meta.json`.
pub fn write_bundle<P: AsRef<Path>>(dir: P, prob: &EigProblem) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    write_qmat_file(dir.join("A.qmat"), prob.a())?;
    write_qmat_file(dir.join("G.qmat"), prob.g())?;
    let meta = BundleMeta {
        n: prob.n(),
        p: prob.p(),
        seed: prob.seed(),
        weights: prob.weights().to_vec(),
    };
    let json = serde_json::to_string_pretty(&meta)
        .map_err(|e| Error::Parse(format!("meta.json: {e}")))?;
    fs::write(dir.join("meta.json"), json)?;
    Ok(())
}

/// Reads a problem bundle back, cross-checking the metadata against the
/// matrix shapes.
pub fn read_bundle<P: AsRef<Path>>(dir: P) -> Result<EigProblem> {
    let dir = dir.as_ref();
    let a = read_qmat_file(dir.join("A.qmat"))?;
    let g = read_qmat_file(dir.join("G.qmat"))?;
    let meta = parse_bundle_meta(&fs::read_to_string(dir.join("meta.json"))?)?;
    if a.shape() != (meta.n, meta.n) || g.shape() != (meta.n, meta.n) {
        return Err(Error::Parse(format!(
            "bundle metadata says n = {}, but A is {:?} and G is {:?}",
            meta.n,
            a.shape(),
            g.shape()
        )));
    }
    if meta.weights.len() != meta.p {
        return Err(Error::Parse(format!(
            "bundle metadata says p = {}, but N has {} entries",
            meta.p,
            meta.weights.len()
        )));
    }
    EigProblem::new(a, g, meta.weights, meta.seed)
}

const TRACE_HEADER: &str = "iter,elapsed_s,cost,grad_norm,step_size";

/// Serializes a solver trace as CSV with 17-significant-digit floats.
pub fn format_trace(rows: &[TraceRow]) -> String {
    let mut out = String::with_capacity(32 + rows.len() * 100);
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            row.iter, row.elapsed_s, row.cost, row.grad_norm, row.step_size
        ));
    }
    out
}

/// Parses a trace CSV produced by [`format_trace`].
pub fn parse_trace(text: &str) -> Result<Vec<TraceRow>> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some(TRACE_HEADER) => {}
        other => {
            return Err(Error::Parse(format!(
                "expected trace header {TRACE_HEADER:?}, found {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!(
                "trace line {}: expected 5 fields, found {}",
                lineno + 2,
                fields.len()
            )));
        }
        let iter = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("trace line {}: {e}", lineno + 2)))?;
        let mut vals = [0.0f64; 4];
        for (slot, field) in vals.iter_mut().zip(&fields[1..]) {
            *slot = field
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("trace line {}: {e}", lineno + 2)))?;
        }
        rows.push(TraceRow {
            iter,
            elapsed_s: vals[0],
            cost: vals[1],
            grad_norm: vals[2],
            step_size: vals[3],
        });
    }
    Ok(rows)
}

pub fn write_trace_file<P: AsRef<Path>>(path: P, rows: &[TraceRow]) -> Result<()> {
    fs::write(path, format_trace(rows))?;
    Ok(())
}

/// Tolerance overrides carried by the `QSTIEFEL_TOLS` environment variable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TolOverrides {
    pub feas: Option<f64>,
    pub grad: Option<f64>,
}

/// Parses `feas=...,grad=...` (either key optional, empty input allowed).
pub fn parse_tol_overrides(s: &str) -> Result<TolOverrides> {
    let mut out = TolOverrides::default();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, found {part:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad tolerance {value:?}: {e}")))?;
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Parse(format!(
                "tolerance must be positive and finite, found {value}"
            )));
        }
        let slot = match key.trim() {
            "feas" => &mut out.feas,
            "grad" => &mut out.grad,
            other => {
                return Err(Error::Parse(format!(
                    "unknown tolerance key {other:?} (expected feas or grad)"
                )))
            }
        };
        if slot.replace(value).is_some() {
            return Err(Error::Parse(format!("duplicate tolerance key {key:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::generate_problem;
    use crate::testutil::random_matrix;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn qmat_round_trip_is_exact() {
        let mut rng = StdRng::seed_from_u64(151);
        let m = random_matrix(&mut rng, 5, 3);
        let parsed = parse_qmat(&format_qmat(&m)).unwrap();
        assert_eq!(parsed, m, "17 significant digits must round-trip f64");
    }

    #[test]
    fn qmat_accepts_arbitrary_whitespace() {
        let text = "QMAT1\t2 1\n 1.0 0 0 0\n\n\t0.5\r\n-1 2e0   3.25 ";
        let m = parse_qmat(text).unwrap();
        assert_eq!(m.shape(), (2, 1));
        assert_eq!(m.get(0, 0), Quaternion::ONE);
        assert_eq!(m.get(1, 0), Quaternion::new(0.5, -1.0, 2.0, 3.25));
    }

    #[test]
    fn qmat_rejects_malformed_input() {
        for bad in [
            "",
            "QMAT2 1 1 1 0 0 0",
            "QMAT1 1",
            "QMAT1 x 1",
            "QMAT1 1 1 1 0 0",            // short
            "QMAT1 1 1 1 0 0 0 9",        // long
            "QMAT1 1 1 1 bad 0 0",        // non-float
            "QMAT1 1 1 inf 0 0 0",        // non-finite
            "QMAT1 99999999999999999999 1", // overflow dims
        ] {
            assert!(parse_qmat(bad).is_err(), "accepted {bad:?}");
        }
        // Degenerate shapes parse.
        assert_eq!(parse_qmat("QMAT1 0 3").unwrap().shape(), (0, 3));
    }

    #[test]
    fn bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let prob = generate_problem(6, 2, 99).unwrap();
        write_bundle(dir.path(), &prob).unwrap();
        let back = read_bundle(dir.path()).unwrap();
        assert_eq!(back.a(), prob.a());
        assert_eq!(back.g(), prob.g());
        assert_eq!(back.weights(), prob.weights());
        assert_eq!(back.seed(), prob.seed());
    }

    #[test]
    fn bundle_rejects_inconsistent_meta() {
        let dir = tempfile::tempdir().unwrap();
        let prob = generate_problem(4, 2, 1).unwrap();
        write_bundle(dir.path(), &prob).unwrap();
        std::fs::write(
            dir.path().join("meta.json"),
            r#"{"n": 5, "p": 2, "seed": 1, "N": [2.0, 1.0]}"#,
        )
        .unwrap();
        assert!(matches!(read_bundle(dir.path()), Err(Error::Parse(_))));
    }

    #[test]
    fn trace_round_trip_and_errors() {
        let rows = vec![
            TraceRow {
                iter: 0,
                elapsed_s: 0.0,
                cost: -1.25,
                grad_norm: 3.5e-2,
                step_size: 0.0,
            },
            TraceRow {
                iter: 1,
                elapsed_s: 0.125,
                cost: -2.5,
                grad_norm: 1.0e-3,
                step_size: 0.5,
            },
        ];
        let parsed = parse_trace(&format_trace(&rows)).unwrap();
        assert_eq!(parsed, rows);

        assert!(parse_trace("").is_err());
        assert!(parse_trace("nope\n1,2,3,4,5\n").is_err());
        assert!(parse_trace("iter,elapsed_s,cost,grad_norm,step_size\n1,2,3\n").is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn finite_f64() -> impl Strategy<Value = f64> {
            any::<u64>().prop_map(|bits| {
                let v = f64::from_bits(bits);
                if v.is_finite() {
                    v
                } else {
                    0.0
                }
            })
        }

        fn qmat() -> impl Strategy<Value = QuatMatrix> {
            (0usize..5, 0usize..5).prop_flat_map(|(rows, cols)| {
                prop::collection::vec(finite_f64(), rows * cols * 4).prop_map(
                    move |vals| {
                        QuatMatrix::from_fn(rows, cols, |r, c| {
                            let base = 4 * (r * cols + c);
                            Quaternion::new(
                                vals[base],
                                vals[base + 1],
                                vals[base + 2],
                                vals[base + 3],
                            )
                        })
                    },
                )
            })
        }

        proptest! {
            /// 17 significant digits uniquely determine an f64, so the text
            /// form must round-trip bit-for-bit (modulo -0.0 == 0.0).
            #[test]
            fn qmat_text_round_trips(m in qmat()) {
                let parsed = parse_qmat(&format_qmat(&m)).unwrap();
                prop_assert_eq!(parsed, m);
            }
        }
    }

    #[test]
    fn tol_overrides_parse() {
        assert_eq!(parse_tol_overrides("").unwrap(), TolOverrides::default());
        let t = parse_tol_overrides("feas=1e-9,grad=1e-7").unwrap();
        assert_eq!(t.feas, Some(1e-9));
        assert_eq!(t.grad, Some(1e-7));
        let t = parse_tol_overrides(" grad = 2.5e-5 ").unwrap();
        assert_eq!(t.feas, None);
        assert_eq!(t.grad, Some(2.5e-5));
        for bad in ["feas", "feas=-1", "feas=nan", "x=1", "feas=1,feas=2"] {
            assert!(parse_tol_overrides(bad).is_err(), "accepted {bad:?}");
        }
    }
}
