//! Parsing of code specifiers.

use std::path::PathBuf;

use cell24_core::constructions::{c_theta_at, d4, hex_design, HexFamilyAngles};
use cell24_core::geometry::random_code;
use cell24_core::{Code, Error, Result};

/// `d4`, `ctheta:<θ>`, `hex:<θ>,<φ>,<ψ>`, `file:<path>` or `random:<n>:<seed>`.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeSpec {
    D4,
    CTheta(f64),
    Hex(f64, f64, f64),
    File(PathBuf),
    Random { n: usize, seed: u64 },
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

impl std::str::FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "d4" if rest.is_empty() => Ok(CodeSpec::D4),
            "ctheta" => Ok(CodeSpec::CTheta(num(rest, "theta")?)),
            "hex" => {
                let v: Vec<f64> = rest
                    .split(',')
                    .map(|x| num(x, "angle"))
                    .collect::<Result<_>>()?;
                match v[..] {
                    [a, b, c] => Ok(CodeSpec::Hex(a, b, c)),
                    _ => Err(Error::Parse(format!(
                        "hex needs three angles, got {rest:?}"
                    ))),
                }
            }
            "file" if !rest.is_empty() => Ok(CodeSpec::File(rest.into())),
            "random" => {
                let (n, seed) = rest.split_once(':').ok_or_else(|| {
                    Error::Parse(format!("random needs <n>:<seed>, got {rest:?}"))
                })?;
                Ok(CodeSpec::Random {
                    n: num(n, "point count")?,
                    seed: num(seed, "seed")?,
                })
            }
            _ => Err(Error::Parse(format!("unknown code specifier {s:?}"))),
        }
    }
}

impl CodeSpec {
    pub fn build(&self) -> Result<Code> {
        match self {
            CodeSpec::D4 => Ok(d4()),
            CodeSpec::CTheta(t) => c_theta_at(*t),
            CodeSpec::Hex(a, b, c) => Ok(hex_design(HexFamilyAngles::new(*a, *b, *c))),
            CodeSpec::File(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                let code: Code = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
                if code.max_norm_defect() > 1e-9 {
                    return Err(Error::DegenerateCode(format!(
                        "{} has non-unit points",
                        p.display()
                    )));
                }
                Ok(code)
            }
            CodeSpec::Random { n, seed } => random_code(*n, *seed),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            CodeSpec::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}
