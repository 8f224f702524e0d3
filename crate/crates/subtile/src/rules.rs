//! Rule-file loading. A rule file is a JSON document with exact rational
//! string entries; no floating point is ever read from or written to one.

use crate::geom::{polygon_area2, polygon_is_simple, GeomError, Isometry2, Point2, Rotation2};
use crate::scalar::{QScalar, ScalarError};
use crate::tiling::{Chirality, ChildPlacement, Prototile, SubstitutionSystem};
use crate::validate::{validate_rule, ValidateOptions};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("cannot read rule file: {0}")]
    Io(#[from] std::io::Error),
    #[error("rule file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("rule fails validation: {0}")]
    Invalid(String),
    #[error("unknown built-in rule `{0}`")]
    UnknownBuiltin(String),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct QPairDoc {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PrototileDoc {
    pub id: usize,
    pub label: String,
    pub chirality: String,
    /// vertex = [[a, b], [a, b]] — x and y, each `a + b√D` as rational strings
    pub vertices: Vec<[[String; 2]; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RotationDoc {
    pub c: QPairDoc,
    pub s: QPairDoc,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChildDoc {
    pub child: usize,
    pub rotation: RotationDoc,
    pub reflect: bool,
    pub translation: [[String; 2]; 2],
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RuleDoc {
    pub field_d: u32,
    pub expansion: QPairDoc,
    pub prototiles: Vec<PrototileDoc>,
    pub children: BTreeMap<String, Vec<ChildDoc>>,
}

fn scalar_from_strings(a: &str, b: &str, d: u32) -> Result<QScalar, RuleError> {
    Ok(QScalar::new(
        crate::scalar::parse_ratio(a)?,
        crate::scalar::parse_ratio(b)?,
        d,
    ))
}

fn point_from_doc(doc: &[[String; 2]; 2], d: u32) -> Result<Point2, RuleError> {
    Ok(Point2::new(
        scalar_from_strings(&doc[0][0], &doc[0][1], d)?,
        scalar_from_strings(&doc[1][0], &doc[1][1], d)?,
    ))
}

fn is_square_free(mut n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u32;
    while f * f <= n {
        if n.is_multiple_of(f * f) {
            return false;
        }
        while n.is_multiple_of(f) {
            n /= f;
        }
        f += 1;
    }
    true
}

/// Build the in-memory system from a parsed document, checking structure
/// only (the substitution conditions are the validator's job).
pub fn system_from_doc(doc: &RuleDoc) -> Result<SubstitutionSystem, RuleError> {
    let d = doc.field_d;
    if !is_square_free(d) {
        return Err(RuleError::Structural(format!(
            "field_d must be a square-free integer ≥ 2, got {d}"
        )));
    }
    let expansion = scalar_from_strings(&doc.expansion.a, &doc.expansion.b, d)?;
    if !expansion.is_positive() {
        return Err(RuleError::Structural("expansion must be positive".into()));
    }

    let mut alphabet = Vec::new();
    for (i, p) in doc.prototiles.iter().enumerate() {
        if p.id != i {
            return Err(RuleError::Structural(format!(
                "prototile ids must be consecutive from 0; found {} at position {}",
                p.id, i
            )));
        }
        let chirality = match p.chirality.as_str() {
            "base" => Chirality::Base,
            "reflected" => Chirality::Reflected,
            other => {
                return Err(RuleError::Structural(format!(
                    "chirality must be `base` or `reflected`, got `{other}`"
                )))
            }
        };
        let vertices = p
            .vertices
            .iter()
            .map(|v| point_from_doc(v, d))
            .collect::<Result<Vec<_>, _>>()?;
        if vertices.len() < 3 {
            return Err(RuleError::Structural(format!(
                "prototile {} needs at least 3 vertices",
                p.id
            )));
        }
        if !polygon_is_simple(&vertices) {
            return Err(RuleError::Structural(format!(
                "prototile {} is not a simple polygon",
                p.id
            )));
        }
        let area2 = polygon_area2(&vertices);
        if !area2.is_positive() {
            return Err(RuleError::Structural(format!(
                "prototile {} must be counterclockwise with positive area",
                p.id
            )));
        }
        alphabet.push(Prototile {
            id: p.id,
            label: p.label.clone(),
            chirality,
            vertices,
        });
    }
    if alphabet.is_empty() {
        return Err(RuleError::Structural("alphabet is empty".into()));
    }

    let mut children = vec![Vec::new(); alphabet.len()];
    for (key, kids) in &doc.children {
        let pid: usize = key
            .parse()
            .map_err(|_| RuleError::Structural(format!("bad children key `{key}`")))?;
        if pid >= alphabet.len() {
            return Err(RuleError::Structural(format!(
                "children given for unknown prototile {pid}"
            )));
        }
        let mut rule = Vec::new();
        for kid in kids {
            if kid.child >= alphabet.len() {
                return Err(RuleError::Structural(format!(
                    "child id {} of prototile {} is not in the alphabet",
                    kid.child, pid
                )));
            }
            let c = scalar_from_strings(&kid.rotation.c.a, &kid.rotation.c.b, d)?;
            let s = scalar_from_strings(&kid.rotation.s.a, &kid.rotation.s.b, d)?;
            let rot = Rotation2::new(c, s)?;
            let trans = point_from_doc(&kid.translation, d)?;
            rule.push(ChildPlacement {
                child: kid.child,
                pose: Isometry2 {
                    rot,
                    reflect: kid.reflect,
                    trans,
                },
            });
        }
        children[pid] = rule;
    }
    for (pid, rule) in children.iter().enumerate() {
        if rule.is_empty() {
            return Err(RuleError::Structural(format!(
                "prototile {pid} has no children"
            )));
        }
    }

    Ok(SubstitutionSystem {
        field_d: d,
        expansion,
        alphabet,
        children,
    })
}

pub fn parse_document(text: &str) -> Result<RuleDoc, RuleError> {
    Ok(serde_json::from_str(text)?)
}

/// Parse a rule document without running the substitution-condition
/// validator. Structural problems still error out.
pub fn load_system_unvalidated(text: &str) -> Result<SubstitutionSystem, RuleError> {
    system_from_doc(&parse_document(text)?)
}

/// Parse and fully validate a rule document. Any failed substitution
/// condition is an error naming that condition.
pub fn load_system(text: &str) -> Result<SubstitutionSystem, RuleError> {
    let sys = load_system_unvalidated(text)?;
    let report = validate_rule(&sys, &ValidateOptions::default());
    if let Some(failed) = report.first_failure() {
        return Err(RuleError::Invalid(failed));
    }
    Ok(sys)
}

pub fn load_system_from_path(path: &Path) -> Result<SubstitutionSystem, RuleError> {
    load_system(&std::fs::read_to_string(path)?)
}

pub const BUILTIN_PINWHEEL: &str = include_str!("../rules/pinwheel.json");
pub const BUILTIN_PINWHEEL_VARIANT: &str = include_str!("../rules/pinwheel_variant.json");

/// Names accepted: `pinwheel`, `pinwheel_variant` (aliases `variant`).
pub fn builtin_rule_text(name: &str) -> Option<&'static str> {
    match name {
        "pinwheel" => Some(BUILTIN_PINWHEEL),
        "pinwheel_variant" | "variant" => Some(BUILTIN_PINWHEEL_VARIANT),
        _ => None,
    }
}

pub fn builtin_system(name: &str) -> Result<SubstitutionSystem, RuleError> {
    let text = builtin_rule_text(name).ok_or_else(|| RuleError::UnknownBuiltin(name.into()))?;
    load_system_unvalidated(text)
}

/// Resolve a CLI rule argument: an existing file path wins; otherwise the
/// bare name (with or without `.json`) may name a bundled rule.
pub fn resolve_rule_text(arg: &str) -> Result<String, RuleError> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(std::fs::read_to_string(path)?);
    }
    let stem = arg.strip_suffix(".json").unwrap_or(arg);
    if let Some(text) = builtin_rule_text(stem) {
        return Ok(text.to_string());
    }
    Err(RuleError::Io(std::io::Error::new(
        std::io::ErrorKind::NotFound,
        format!("no such file or built-in rule: {arg}"),
    )))
}
