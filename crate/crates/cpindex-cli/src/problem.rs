//! Problem files: a JSON object with a top-level `kind`, a `payload` whose
//! shape depends on the kind, the horizon `T` and an optional `options`
//! object. Matrices are arrays of rows.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::num::{self, Num};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    SecondOrder,
    Symplectic,
    LieAlgebra,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::SecondOrder => "second_order",
            Kind::Symplectic => "symplectic",
            Kind::LieAlgebra => "lie_algebra",
        }
    }
}

/// `v'' = Av` with `gA = Aᵀg`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondOrderPayload {
    pub g: Vec<Vec<f64>>,
    pub a: Vec<Vec<f64>>,
}

/// `v' = 𝔄v + 𝔅α`, `α' = ℭv − 𝔄ᵀα`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymplecticPayload {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<Vec<f64>>,
}

/// Structure constants `structure_constants[k][i][j] = Cᵏᵢⱼ` in an
/// orthonormal basis with `h(Xᵢ, Xᵢ) = metric_signs[i]`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraPayload {
    pub structure_constants: Vec<Vec<Vec<f64>>>,
    pub metric_signs: Vec<i8>,
    pub direction: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    SecondOrder(SecondOrderPayload),
    Symplectic(SymplecticPayload),
    LieAlgebra(LieAlgebraPayload),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol_sym: Option<f64>,
    pub tol_null: Option<f64>,
    pub tol_eig: Option<f64>,
    pub tol_rank: Option<f64>,
    pub tol_recon: Option<f64>,
    pub tol_merge: Option<f64>,
    pub oracle: Option<bool>,
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub horizon: f64,
    pub payload: Payload,
    pub options: Options,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    schema_version: Option<u32>,
    kind: Kind,
    horizon: f64,
    payload: Value,
    #[serde(default)]
    options: Options,
}

fn rectangular(what: &str, m: &[Vec<f64>], n: usize) -> Result<(), CliError> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(CliError::schema(format!("payload.{what} must be a {n}×{n} array of rows")));
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawProblem = serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))?;
        let version = raw.schema_version.unwrap_or(SCHEMA_VERSION);
        if version != SCHEMA_VERSION {
            return Err(CliError::schema(format!("unsupported schema_version {version}")));
        }
        let payload_err = |e: serde_json::Error| CliError::schema(format!("payload: {e}"));
        let payload = match raw.kind {
            Kind::SecondOrder => {
                let p: SecondOrderPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                let n = p.g.len();
                rectangular("g", &p.g, n)?;
                rectangular("a", &p.a, n)?;
                Payload::SecondOrder(p)
            }
            Kind::Symplectic => {
                let p: SymplecticPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                let n = p.a.len();
                rectangular("a", &p.a, n)?;
                rectangular("b", &p.b, n)?;
                rectangular("c", &p.c, n)?;
                Payload::Symplectic(p)
            }
            Kind::LieAlgebra => {
                let p: LieAlgebraPayload = serde_json::from_value(raw.payload).map_err(payload_err)?;
                let n = p.metric_signs.len();
                if p.structure_constants.len() != n {
                    return Err(CliError::schema(format!("payload.structure_constants must have {n} planes")));
                }
                for (k, plane) in p.structure_constants.iter().enumerate() {
                    rectangular(&format!("structure_constants[{k}]"), plane, n)?;
                }
                if p.direction.len() != n {
                    return Err(CliError::schema(format!("payload.direction must have length {n}")));
                }
                Payload::LieAlgebra(p)
            }
        };
        if let Some(0) = raw.options.grid {
            return Err(CliError::schema("options.grid must be positive"));
        }
        Ok(ProblemFile { schema_version: version, horizon: raw.horizon, payload, options: raw.options })
    }

    pub fn kind(&self) -> Kind {
        match self.payload {
            Payload::SecondOrder(_) => Kind::SecondOrder,
            Payload::Symplectic(_) => Kind::Symplectic,
            Payload::LieAlgebra(_) => Kind::LieAlgebra,
        }
    }

    pub fn echo(&self) -> Echo {
        let payload = match &self.payload {
            Payload::SecondOrder(p) => EchoPayload::SecondOrder { g: num::rows(&p.g), a: num::rows(&p.a) },
            Payload::Symplectic(p) => {
                EchoPayload::Symplectic { a: num::rows(&p.a), b: num::rows(&p.b), c: num::rows(&p.c) }
            }
            Payload::LieAlgebra(p) => EchoPayload::LieAlgebra {
                structure_constants: p.structure_constants.iter().map(|m| num::rows(m)).collect(),
                metric_signs: p.metric_signs.clone(),
                direction: num::vector(&p.direction),
            },
        };
        let o = &self.options;
        Echo {
            schema_version: self.schema_version,
            kind: self.kind(),
            horizon: Num(self.horizon),
            payload,
            options: EchoOptions {
                tol_sym: o.tol_sym.map(Num),
                tol_null: o.tol_null.map(Num),
                tol_eig: o.tol_eig.map(Num),
                tol_rank: o.tol_rank.map(Num),
                tol_recon: o.tol_recon.map(Num),
                tol_merge: o.tol_merge.map(Num),
                oracle: o.oracle,
                grid: o.grid,
            },
        }
    }
}

/// The problem as read, re-serialized with fixed float formatting. Parses
/// back to an identical [`ProblemFile`].
#[derive(Debug, Clone, Serialize)]
pub struct Echo {
    pub schema_version: u32,
    pub kind: Kind,
    pub horizon: Num,
    pub payload: EchoPayload,
    pub options: EchoOptions,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum EchoPayload {
    SecondOrder { g: Vec<Vec<Num>>, a: Vec<Vec<Num>> },
    Symplectic { a: Vec<Vec<Num>>, b: Vec<Vec<Num>>, c: Vec<Vec<Num>> },
    LieAlgebra { structure_constants: Vec<Vec<Vec<Num>>>, metric_signs: Vec<i8>, direction: Vec<Num> },
}

#[derive(Debug, Clone, Serialize)]
pub struct EchoOptions {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_sym: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_null: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_eig: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_rank: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_recon: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol_merge: Option<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips() {
        let text = r#"{"kind":"second_order","horizon":3.5,"payload":{"g":[[1,0],[0,1]],"a":[[-1,0],[0,-0.1]]},
            "options":{"tol_eig":1e-5,"oracle":false}}"#;
        let p = ProblemFile::parse(text).unwrap();
        let echoed = serde_json::to_string(&p.echo()).unwrap();
        assert_eq!(ProblemFile::parse(&echoed).unwrap(), p);
    }

    #[test]
    fn shape_errors_are_schema_errors() {
        for text in [
            r#"{"kind":"second_order","horizon":1,"payload":{"g":[[1,0],[0,1]],"a":[[1]]}}"#,
            r#"{"kind":"third_order","horizon":1,"payload":{}}"#,
            r#"{"kind":"symplectic","horizon":1,"payload":{"a":[[0]],"b":[[1]]}}"#,
            r#"{"kind":"second_order","horizon":1,"payload":{"g":[[1]],"a":[[1]]},"extra":0}"#,
            r#"{"kind":"lie_algebra","horizon":1,"payload":{"structure_constants":[[[0]]],"metric_signs":[1],"direction":[]}}"#,
            "not json",
        ] {
            assert_eq!(ProblemFile::parse(text).unwrap_err().exit_code(), 2, "{text}");
        }
    }
}
