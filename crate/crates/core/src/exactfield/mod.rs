//! Exact arithmetic in absolute number fields, their automorphisms and inclusions.
//!
//! Every field is ℚ[x]/(f) in the power basis. Subfields are realized by
//! [`TowerMap`]s and relative traces and norms by registered [`Extension`]s.

pub mod embed;
pub mod field;
pub mod modp;
pub mod poly;

pub use field::{
    eval_poly, field_arith, relative_trace_norm, ArithOp, Automorphism, Extension, FieldElement, NumberField,
    TowerMap, TraceOrNorm,
};
pub use modp::{factor_poly_mod_p, Factorization, FpPoly, ModpError};

use std::sync::Arc;

use num_complex::Complex64;
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("minimal polynomial is zero or constant")]
    ZeroPolynomial,
    #[error("minimal polynomial is not monic")]
    NotMonic,
    #[error("minimal polynomial must have integer coefficients")]
    NotIntegral,
    #[error("minimal polynomial has the factor {0:?}")]
    Reducible(Vec<String>),
    #[error("irreducibility screen failed: {0}")]
    Screen(String),
    #[error("root refinement stalled at relative residual {0:e}")]
    RootRefinement(f64),
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateLength { expected: usize, got: usize },
    #[error("image is not a root of the minimal polynomial")]
    NotARoot,
    #[error("map does not have finite order dividing the degree")]
    InfiniteOrder,
    #[error("invalid extension: {0}")]
    BadExtension(String),
    #[error("value does not descend to the subfield")]
    DescentFailed,
    #[error("unparsable rational {0:?}")]
    Parse(String),
}

/// Numeric image of `x` under the `i`-th embedding of its field.
pub fn numeric_embed(x: &FieldElement, i: usize) -> Complex64 {
    x.embed(i)
}

/// Image of `x` under `σ`; errors on a field mismatch.
pub fn apply_automorphism(sigma: &Automorphism, x: &FieldElement) -> Result<FieldElement, FieldError> {
    sigma.try_apply(x)
}

/// JSON form of a field definition.
#[derive(Debug, Clone, Deserialize, serde::Serialize)]
pub struct FieldDef {
    pub label: String,
    pub minpoly: Vec<String>,
}

/// JSON form of a tower map.
#[derive(Debug, Clone, Deserialize, serde::Serialize)]
pub struct TowerMapDef {
    pub source: String,
    pub target: String,
    pub generator_image: Vec<String>,
}

fn parse_all(v: &[String]) -> Result<Vec<num_rational::BigRational>, FieldError> {
    v.iter().map(|s| poly::parse_rational(s).ok_or_else(|| FieldError::Parse(s.clone()))).collect()
}

impl FieldDef {
    pub fn build(&self) -> Result<Arc<NumberField>, FieldError> {
        NumberField::new(&self.label, parse_all(&self.minpoly)?)
    }
}

impl TowerMapDef {
    /// Resolves source and target by label among `fields`.
    pub fn build(&self, fields: &[Arc<NumberField>]) -> Result<TowerMap, FieldError> {
        let find = |l: &str| {
            fields
                .iter()
                .find(|f| f.label() == l)
                .cloned()
                .ok_or_else(|| FieldError::BadExtension(format!("unknown field {l}")))
        };
        let source = find(&self.source)?;
        let target = find(&self.target)?;
        let image = FieldElement::new(&target, parse_all(&self.generator_image)?)?;
        TowerMap::new(&source, &target, image)
    }
}
