// SPDX-License-Identifier: MIT OR Apache-2.0
//! Scenario manifests and group files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

/// A matrix group given by generator matrices of expression strings in `w`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default)]
    pub name: Option<String>,
    pub conductor: u32,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    pub order: Option<usize>,
}

/// Where a scenario's group comes from.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    File(String),
    Inline(GroupFile),
}

/// One generator of the invariant set.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvariantDef {
    pub name: String,
    #[serde(default)]
    pub poly: Option<String>,
    /// Name of an earlier invariant whose Hessian is taken.
    #[serde(default)]
    pub hessian: Option<String>,
    /// Names of two earlier invariants `[P, Q]` for the bordered Hessian.
    #[serde(default)]
    pub bordered: Option<[String; 2]>,
    #[serde(default)]
    pub constant: Option<String>,
}

/// A dynamical system `P_i(X) = target_i` differentiated along `variable`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDef {
    pub name: String,
    pub primaries: Vec<String>,
    pub targets: Vec<String>,
    pub variable: String,
}

/// Monic equation `x^(n) + a_{n-1} x^(n-1) + … + a_0 x`, coefficients
/// listed from `a_0`.
pub type EquationDef = Vec<String>;

/// A requested pipeline step. `expect` fields are compared exactly when
/// present; otherwise the step only reports what it computed.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Step {
    GroupCheck {
        #[serde(default)]
        expect_order: Option<usize>,
    },
    InvariantsCheck {
        #[serde(default)]
        expect: BTreeMap<String, String>,
    },
    BuildSystem {
        system: String,
        #[serde(default)]
        expect_rhs: Option<Vec<String>>,
        /// Components expected with the opposite overall sign.
        #[serde(default)]
        expect_negated: Vec<usize>,
        #[serde(default)]
        equivariance: Option<Equivariance>,
        /// The construction is expected to refuse these inputs.
        #[serde(default)]
        expect_rejected: bool,
    },
    Witness {
        #[serde(default)]
        evaluations: Option<Vec<String>>,
        #[serde(default)]
        expect_b: Option<Vec<u32>>,
        #[serde(default)]
        expect_none: bool,
    },
    Project {
        coords: Vec<Vec<u32>>,
        #[serde(default)]
        evaluations: Option<Vec<String>>,
        #[serde(default)]
        expect: Option<Vec<String>>,
    },
    Standardize {
        equation: EquationDef,
        #[serde(default)]
        evaluations: Option<Vec<String>>,
        #[serde(default)]
        expect: Option<EquationDef>,
        #[serde(default)]
        expect_gauge: Option<String>,
        #[serde(default)]
        expect_evaluations: Option<Vec<String>>,
    },
    DeriveOde {
        variable: String,
        #[serde(default)]
        evaluations: Option<Vec<String>>,
        /// Parameter substitutions applied to the evaluations only.
        #[serde(default)]
        at: BTreeMap<String, String>,
        #[serde(default)]
        expect: Option<EquationDef>,
    },
    Residual {
        system: String,
        equation: EquationDef,
        #[serde(default)]
        evaluations: Option<Vec<String>>,
    },
    Bracket {
        systems: [String; 2],
        #[serde(default = "default_true")]
        expect_zero: bool,
    },
    Discriminant {
        poly: String,
        variable: String,
        #[serde(default)]
        expect: Option<String>,
        /// Leading coefficient times the product of the distinct factors.
        #[serde(default)]
        expect_squarefree_part: Option<String>,
    },
    Conjugate {
        variable: String,
        equation: EquationDef,
        factor: String,
        #[serde(default)]
        expect: Option<EquationDef>,
    },
    Pullback {
        variable: String,
        equation: EquationDef,
        map: String,
        #[serde(default)]
        expect: Option<EquationDef>,
    },
    NumericCheck {
        system: String,
        equation: EquationDef,
        /// Complex waypoints `[re, im]`.
        path: Vec<[f64; 2]>,
        /// Values of the remaining parameters.
        #[serde(default)]
        params: BTreeMap<String, [f64; 2]>,
        #[serde(default = "default_drift")]
        max_drift: f64,
        #[serde(default = "default_residual")]
        max_residual: f64,
        #[serde(default)]
        trace: Option<String>,
    },
}

/// How `F(Xg) = F(X)g` is verified for the group generators.
#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Equivariance {
    /// Symbolic identity of rational expressions.
    Exact,
    /// Exact arithmetic at deterministic sample points.
    Sampled,
}

fn default_true() -> bool {
    true
}

fn default_drift() -> f64 {
    1e-8
}

fn default_residual() -> f64 {
    1e-6
}

impl Step {
    pub fn op(&self) -> &'static str {
        match self {
            Step::GroupCheck { .. } => "group-check",
            Step::InvariantsCheck { .. } => "invariants-check",
            Step::BuildSystem { .. } => "build-system",
            Step::Witness { .. } => "witness",
            Step::Project { .. } => "project",
            Step::Standardize { .. } => "standardize",
            Step::DeriveOde { .. } => "derive-ode",
            Step::Residual { .. } => "residual",
            Step::Bracket { .. } => "bracket",
            Step::Discriminant { .. } => "discriminant",
            Step::Conjugate { .. } => "conjugate",
            Step::Pullback { .. } => "pullback",
            Step::NumericCheck { .. } => "numeric-check",
        }
    }
}

/// A scenario manifest.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_conductor")]
    pub conductor: u32,
    /// Number of coordinates `X1..Xn`.
    #[serde(default)]
    pub coordinates: usize,
    /// Names of the independent variables and parameters, in order.
    #[serde(default)]
    pub space: Vec<String>,
    /// Rational substitutions for parameters, applied to every expression.
    #[serde(default)]
    pub substitutions: BTreeMap<String, String>,
    #[serde(default)]
    pub group: Option<GroupRef>,
    #[serde(default)]
    pub invariants: Vec<InvariantDef>,
    /// Named polynomial abbreviations, usable after the invariants.
    #[serde(default)]
    pub definitions: BTreeMap<String, String>,
    /// Evaluations of the invariants, in declaration order.
    #[serde(default)]
    pub evaluations: Vec<String>,
    /// Total-degree safety bound; the command line may override it.
    #[serde(default)]
    pub degree_bound: Option<u32>,
    /// Common degree `Λ` of the projective coordinates.
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub systems: Vec<SystemDef>,
    #[serde(default)]
    pub steps: Vec<Step>,
    /// Free-form notes carried into the report.
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_conductor() -> u32 {
    1
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut s: Scenario =
            serde_json::from_str(&text).map_err(|e| CliError::Manifest(format!("{}: {e}", path.display())))?;
        s.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(s)
    }

    pub fn group_file(&self) -> Result<Option<GroupFile>, CliError> {
        match &self.group {
            None => Ok(None),
            Some(GroupRef::Inline(g)) => Ok(Some(g.clone())),
            Some(GroupRef::File(f)) => GroupFile::load(&self.base_dir.join(f)).map(Some),
        }
    }
}

impl GroupFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Manifest(format!("{}: {e}", path.display())))
    }
}
