//! Fixture catalog, run manifests, and file persistence for the `thinset`
//! binary.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thinset_core::{Polynomial, SievedForm};

pub const SCHEMA: &str = "thinset/v1";

#[derive(Clone, Debug, Serialize)]
pub struct Fixture {
    pub id: &'static str,
    pub poly: &'static str,
    pub n: usize,
    pub m: u32,
    pub d: u32,
    pub note: &'static str,
}

impl Fixture {
    pub fn parse(&self) -> Polynomial {
        Polynomial::parse(self.poly, self.n).expect("fixture parses")
    }

    pub fn decompose(&self) -> SievedForm {
        SievedForm::decompose(&self.parse(), self.m).expect("fixture decomposes")
    }
}

/// Example families exercised throughout the test suite. Each entry must
/// parse and decompose with its declared m.
pub fn catalog() -> Vec<Fixture> {
    vec![
        Fixture {
            id: "sharp",
            poly: "Y^2 - X1",
            n: 2,
            m: 2,
            d: 1,
            note: "x1 a perfect square; the count is exactly of order B^{n-1/2}",
        },
        Fixture {
            id: "diag-4-2",
            poly: "Y^4 - X1^2 - X2^2",
            n: 2,
            m: 2,
            d: 2,
            note: "diagonal family Y^d - sum X_i^{k_i}, d=4, quadratic terms",
        },
        Fixture {
            id: "diag-4-3",
            poly: "Y^4 - X1^3 - X2^3 - X3^3",
            n: 3,
            m: 2,
            d: 2,
            note: "diagonal family with three cubic terms",
        },
        Fixture {
            id: "cyclic-3",
            poly: "Y^3 - X1^3 - X2",
            n: 2,
            m: 3,
            d: 1,
            note: "cyclic family Y^d - H(X) with d=3",
        },
        Fixture {
            id: "weighted-m2",
            poly: "Y^4 + X1*Y^2 + X2",
            n: 2,
            m: 2,
            d: 2,
            note: "structured form in Y^2 with a nontrivial interior coefficient",
        },
        Fixture {
            id: "composita-6",
            poly: "Y^6 - 3*X1*Y^4 - 2*X2*Y^3 + 3*X1^2*Y^2 - 6*X1*X2*Y + X2^2 - X1^3",
            n: 2,
            m: 1,
            d: 6,
            note: "minimal polynomial of sqrt(X1) + cbrt(X2); compositum of two radical extensions",
        },
        Fixture {
            id: "linear-2",
            poly: "Y^2 - X1 - X2",
            n: 2,
            m: 2,
            d: 1,
            note: "degenerate linear case: one essential variable after a change of basis",
        },
    ]
}

pub fn find_fixture(id: &str) -> Option<Fixture> {
    catalog().into_iter().find(|f| f.id == id)
}

#[derive(Clone, Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub config: serde_json::Value,
    pub input: String,
    pub seed: u64,
    pub wall_ms: u128,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, config: serde_json::Value, input: String, seed: u64) -> RunManifest {
        RunManifest {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            input,
            seed,
            wall_ms: 0,
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Write via a temporary sibling and rename, so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp.partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Flatten a JSON value into `key,value` CSV rows (arrays of objects become
/// a header row plus one row per element).
pub fn to_csv(value: &serde_json::Value) -> String {
    use serde_json::Value;
    fn scalar(v: &Value) -> String {
        match v {
            Value::String(s) => {
                if s.contains(',') || s.contains('"') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            other => other.to_string(),
        }
    }
    match value {
        Value::Array(rows)
            if !rows.is_empty() && rows.iter().all(|r| r.is_object()) =>
        {
            let keys: Vec<&String> = match &rows[0] {
                Value::Object(m) => m.keys().collect(),
                _ => unreachable!(),
            };
            let mut out = keys
                .iter()
                .map(|k| k.as_str())
                .collect::<Vec<_>>()
                .join(",");
            out.push('\n');
            for row in rows {
                let m = row.as_object().unwrap();
                let line: Vec<String> = keys
                    .iter()
                    .map(|k| m.get(*k).map(scalar).unwrap_or_default())
                    .collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            out
        }
        Value::Object(m) => {
            let mut out = String::from("key,value\n");
            for (k, v) in m {
                out.push_str(&format!("{},{}\n", k, scalar(v)));
            }
            out
        }
        other => format!("value\n{other}\n"),
    }
}
