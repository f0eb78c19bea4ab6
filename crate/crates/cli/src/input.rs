//! JSON input documents for each subcommand.

use geo_spinor::blocks::{comm_block, geo_block, CommAlgebraLocal, GeoType, HostBlock};
use geo_spinor::classfield::GenusInput;
use geo_spinor::gamma::GammaClass;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

/// `{"n": 3, "b": [2, 1], "permutation": "(12)(345)"}`; the permutation is optional.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassInput {
    pub n: usize,
    pub b: Vec<i64>,
    #[serde(default)]
    pub permutation: Option<String>,
}

impl ClassInput {
    pub fn class(&self) -> Result<GammaClass, CliError> {
        class_of(self.n, &self.b)
    }
}

fn class_of(n: usize, b: &[i64]) -> Result<GammaClass, CliError> {
    if n < 2 || b.len() + 1 != n {
        return Err(CliError::Input(format!("rank {n} needs {} bracket entries, got {}", n.max(1) - 1, b.len())));
    }
    Ok(GammaClass::new(b.to_vec()))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeInput {
    pub n: usize,
    pub b: Vec<i64>,
}

impl TypeInput {
    pub fn class(&self) -> Result<GammaClass, CliError> {
        class_of(self.n, &self.b)
    }

    pub fn geo_type(&self) -> Result<GeoType, CliError> {
        Ok(GeoType::new(self.class()?)?)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum HostInput {
    Grid(TypeInput),
    Comm {
        /// `(e, f)` per field factor
        comm: Vec<(u32, u32)>,
    },
}

impl HostInput {
    pub fn block(&self) -> Result<HostBlock, CliError> {
        Ok(match self {
            HostInput::Grid(t) => geo_block(&t.geo_type()?).into(),
            HostInput::Comm { comm } => comm_block(&CommAlgebraLocal::from_pairs(comm)?).into(),
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedInput {
    pub host: HostInput,
    pub guest: TypeInput,
    #[serde(default)]
    pub shift_bound: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub ranks: Vec<usize>,
    pub max_entry: i64,
    pub primes: Vec<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum OracleInput {
    Single { n: usize, b: Vec<i64>, p: u32 },
    Sweep { sweep: SweepSpec },
}

pub const ORACLE_MAX_RANK: usize = 4;
pub const ORACLE_MAX_ENTRY: i64 = 4;

impl OracleInput {
    /// Every `(type, prime)` pair to check.
    pub fn cases(&self) -> Result<Vec<(GeoType, u32)>, CliError> {
        let check = |n: usize| {
            if n > ORACLE_MAX_RANK {
                Err(CliError::Input(format!("oracle rank {n} exceeds {ORACLE_MAX_RANK}")))
            } else {
                Ok(())
            }
        };
        match self {
            OracleInput::Single { n, b, p } => {
                check(*n)?;
                if b.iter().any(|&x| x > ORACLE_MAX_ENTRY) {
                    return Err(CliError::Input(format!("oracle entries exceed {ORACLE_MAX_ENTRY}")));
                }
                Ok(vec![(GeoType::new(class_of(*n, b)?)?, *p)])
            }
            OracleInput::Sweep { sweep } => {
                if !(0..=ORACLE_MAX_ENTRY).contains(&sweep.max_entry) {
                    return Err(CliError::Input(format!("max_entry must lie in 0..={ORACLE_MAX_ENTRY}")));
                }
                let mut out = Vec::new();
                for &n in &sweep.ranks {
                    check(n)?;
                    if n < 2 {
                        return Err(CliError::Input("ranks start at 2".into()));
                    }
                    for b in all_vectors(n - 1, sweep.max_entry) {
                        for &p in &sweep.primes {
                            out.push((GeoType::from_brackets(&b)?, p));
                        }
                    }
                }
                Ok(out)
            }
        }
    }
}

fn all_vectors(len: usize, max: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn parse_value(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))
}

pub fn decode<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::Input(e.to_string()))
}

pub fn genus(v: &Value) -> Result<GenusInput, CliError> {
    let inp: GenusInput = decode(v)?;
    inp.validate()?;
    Ok(inp)
}
