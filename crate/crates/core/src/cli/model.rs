//! JSON model files, schema 1.
//!
//! ```json
//! { "schema": 1, "kind": "lindblad",
//!   "hamiltonian": [[[-0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]],
//!   "jumps": [{ "rate": 0.58, "op": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]] }] }
//! ```
//!
//! Complex entries are `[re, im]`, matrices are row-major. A `lindblad`
//! model gives either `kossakowski` (optionally with its operator `basis`,
//! default Gell-Mann) or `jumps`. A `kraus` model lists `ops`; a `bloch4`
//! model gives `omega` and the real 4×4 matrix `bloch` with
//! `∂_τ(1, r) = −2·bloch·(1, r)`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::{gell_mann, KrausChannel, LindbladGenerator, Picture, SuperOperator};
use crate::error::{Error, Result};
use crate::examples::example_frame;
use crate::matlin::{c, ComplexMatrix};
use crate::states::HamiltonianSpec;

pub const SCHEMA: u32 = 1;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpJson {
    pub rate: f64,
    pub op: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Lindblad {
        hamiltonian: MatrixJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kossakowski: Option<MatrixJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<Vec<MatrixJson>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        jumps: Option<Vec<JumpJson>>,
    },
    Kraus {
        hamiltonian: MatrixJson,
        ops: Vec<MatrixJson>,
    },
    Bloch4 {
        omega: f64,
        bloch: [[f64; 4]; 4],
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema: u32,
    #[serde(flatten)]
    pub model: ModelSpec,
    /// Inverse temperature of the reference Gibbs state. When absent it is
    /// inferred from the asymptotic state, falling back to `--beta-f`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_f: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

/// A model ready for evaluation.
#[derive(Clone, Debug)]
pub enum Model {
    Semigroup(LindbladGenerator),
    Channel { channel: KrausChannel, hamiltonian: HamiltonianSpec },
}

impl Model {
    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        match self {
            Model::Semigroup(g) => g.hamiltonian(),
            Model::Channel { hamiltonian, .. } => hamiltonian,
        }
    }
}

/// Failure to read or decode a model file, as opposed to a decoded model
/// that violates an invariant.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("unsupported schema {0}, expected {SCHEMA}")]
    Schema(u32),
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<_>> = m.iter().map(|r| r.iter().map(|&[x, y]| c(x, y)).collect()).collect();
    if rows.is_empty() {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    ComplexMatrix::from_rows(&rows)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

impl ModelFile {
    pub fn parse(text: &str, path: &str) -> std::result::Result<Self, LoadError> {
        let f: ModelFile = serde_json::from_str(text).map_err(|source| LoadError::Parse { path: path.into(), source })?;
        if f.schema != SCHEMA {
            return Err(LoadError::Schema(f.schema));
        }
        Ok(f)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, LoadError> {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: p.clone(), source })?;
        Self::parse(&text, &p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    fn wrap(model: ModelSpec) -> Self {
        Self { schema: SCHEMA, model, beta_f: None, metadata: BTreeMap::new() }
    }

    pub fn with_beta_f(mut self, beta_f: f64) -> Self {
        self.beta_f = Some(beta_f);
        self
    }

    /// Kossakowski form with an explicit operator basis.
    pub fn from_generator(gen: &LindbladGenerator) -> Self {
        Self::wrap(ModelSpec::Lindblad {
            hamiltonian: matrix_to_json(gen.hamiltonian().matrix()),
            kossakowski: Some(matrix_to_json(gen.kossakowski())),
            basis: Some(gen.basis().iter().map(matrix_to_json).collect()),
            jumps: None,
        })
    }

    pub fn from_channel(channel: &KrausChannel, h: &HamiltonianSpec) -> Self {
        Self::wrap(ModelSpec::Kraus {
            hamiltonian: matrix_to_json(h.matrix()),
            ops: channel.ops().iter().map(matrix_to_json).collect(),
        })
    }

    pub fn from_bloch(omega: f64, bloch: [[f64; 4]; 4]) -> Self {
        Self::wrap(ModelSpec::Bloch4 { omega, bloch })
    }

    pub fn build(&self) -> Result<Model> {
        match &self.model {
            ModelSpec::Lindblad { hamiltonian, kossakowski, basis, jumps } => {
                let h = HamiltonianSpec::new(matrix_from_json(hamiltonian)?)?;
                match (kossakowski, jumps) {
                    (Some(k), None) => {
                        let k = matrix_from_json(k)?;
                        let basis = match basis {
                            Some(b) => b.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?,
                            None => gell_mann(h.dim()),
                        };
                        Ok(Model::Semigroup(LindbladGenerator::with_basis(h, k, basis)?))
                    }
                    (None, Some(j)) => {
                        let jumps = j.iter().map(|x| Ok((x.rate, matrix_from_json(&x.op)?))).collect::<Result<Vec<_>>>()?;
                        Ok(Model::Semigroup(LindbladGenerator::from_jumps(h, &jumps)?))
                    }
                    (None, None) => Ok(Model::Semigroup(LindbladGenerator::unitary(h))),
                    (Some(_), Some(_)) => {
                        Err(Error::InvalidParameter("give either kossakowski or jumps, not both".into()))
                    }
                }
            }
            ModelSpec::Kraus { hamiltonian, ops } => {
                let h = HamiltonianSpec::new(matrix_from_json(hamiltonian)?)?;
                let ops = ops.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                let channel = KrausChannel::new(ops)?;
                if channel.dim() != h.dim() {
                    return Err(Error::DimensionMismatch(format!(
                        "Kraus operators on dimension {} vs Hamiltonian dim {}",
                        channel.dim(),
                        h.dim()
                    )));
                }
                Ok(Model::Channel { channel, hamiltonian: h })
            }
            ModelSpec::Bloch4 { omega, bloch } => {
                if !(*omega > 0.0) || !omega.is_finite() {
                    return Err(Error::InvalidParameter(format!("omega = {omega}")));
                }
                let rows: Vec<&[f64]> = bloch.iter().map(|r| r.as_slice()).collect();
                let b = ComplexMatrix::from_real_rows(&rows).scale_re(-2.0);
                let s = SuperOperator::new(example_frame().superop_from_bloch(&b), Picture::Schrodinger)?;
                Ok(Model::Semigroup(LindbladGenerator::from_superop(HamiltonianSpec::qubit(*omega), &s)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{sigma_minus, ExampleBParams, ExampleCParams};

    #[test]
    fn generator_roundtrip_is_exact() {
        let gen = ExampleBParams::new(1.0, 1.0, 1.0).unwrap().generator();
        let f = ModelFile::from_generator(&gen);
        let back = ModelFile::parse(&f.to_json(), "mem").unwrap();
        assert_eq!(back, f);
        match back.build().unwrap() {
            Model::Semigroup(g) => assert_eq!(g.lindblad_superop().matrix(), gen.lindblad_superop().matrix()),
            _ => panic!("expected a semigroup"),
        }
    }

    #[test]
    fn jumps_form() {
        let text = r#"{"schema":1,"kind":"lindblad",
            "hamiltonian":[[[-0.5,0],[0,0]],[[0,0],[0.5,0]]],
            "jumps":[{"rate":0.5,"op":[[[0,0],[1,0]],[[0,0],[0,0]]]}]}"#;
        let f = ModelFile::parse(text, "mem").unwrap();
        let Model::Semigroup(g) = f.build().unwrap() else { panic!() };
        let expect = LindbladGenerator::from_jumps(HamiltonianSpec::qubit(1.0), &[(0.5, sigma_minus())]).unwrap();
        assert!(g.lindblad_superop().matrix().distance(expect.lindblad_superop().matrix()) < 1e-15);
    }

    #[test]
    fn bloch_form_matches_example_c() {
        let p = ExampleCParams::default_instance(1.0, 1.0).unwrap();
        let m = p.bloch_matrix();
        let bloch: [[f64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)].re));
        let Model::Semigroup(g) = ModelFile::from_bloch(1.0, bloch).build().unwrap() else { panic!() };
        assert!(g.lindblad_superop().matrix().distance(p.superop().matrix()) < 1e-12);
    }

    #[test]
    fn invariant_violations_are_named() {
        let h = matrix_to_json(HamiltonianSpec::qubit(1.0).matrix());
        let mut k = ComplexMatrix::identity(3);
        k[(0, 0)] = c(-0.1, 0.0);
        let f = ModelFile::wrap(ModelSpec::Lindblad {
            hamiltonian: h.clone(),
            kossakowski: Some(matrix_to_json(&k)),
            basis: None,
            jumps: None,
        });
        assert_eq!(f.build().unwrap_err().name(), "KossakowskiNotPSD");
        let f = ModelFile::wrap(ModelSpec::Kraus { hamiltonian: h, ops: vec![matrix_to_json(&ComplexMatrix::identity(2).scale_re(0.9))] });
        assert_eq!(f.build().unwrap_err().name(), "NotTracePreserving");
    }

    #[test]
    fn parse_failures() {
        assert!(matches!(ModelFile::parse("{", "mem"), Err(LoadError::Parse { .. })));
        assert!(matches!(ModelFile::parse(r#"{"schema":2,"kind":"bloch4","omega":1,"bloch":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#, "mem"), Err(LoadError::Schema(2))));
        assert!(matches!(ModelFile::parse(r#"{"schema":1,"kind":"qubit"}"#, "mem"), Err(LoadError::Parse { .. })));
    }
}
