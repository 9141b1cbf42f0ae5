//! JSON proof files.
//!
//! ```json
//! {"format_version": 1, "n": 2,
//!  "proof": {"rule": "Const", "params": {"i": 1},
//!            "conclusion": "|-1 e1", "premises": []}}
//! ```
//!
//! Formulas and sequents are stored in their concrete syntax, permutations as
//! arrays of images. Unknown fields and rule names are rejected.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ProofTree, RuleParams, RuleTag};
use crate::syntax::{parse_formula, parse_sequent, Dimension, Permutation, SyntaxError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed proof file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("invalid dimension {0}")]
    Dimension(usize),
    #[error("in `{text}`: {source}")]
    Syntax { text: String, source: SyntaxError },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileRepr {
    format_version: u32,
    n: usize,
    proof: NodeRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRepr {
    rule: String,
    #[serde(default)]
    params: ParamsRepr,
    conclusion: String,
    #[serde(default)]
    premises: Vec<NodeRepr>,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    formula: Option<String>,
}

fn node_to_repr(t: &ProofTree) -> NodeRepr {
    let p = &t.params;
    NodeRepr {
        rule: t.rule.name().to_owned(),
        params: ParamsRepr {
            i: p.i,
            j: p.j,
            k: p.k,
            pi: p.pi.as_ref().map(|x| x.images()),
            rho: p.rho.as_ref().map(|x| x.images()),
            formula: p.formula.as_ref().map(ToString::to_string),
        },
        conclusion: t.conclusion.to_string(),
        premises: t.premises.iter().map(node_to_repr).collect(),
    }
}

fn syntax(text: &str) -> impl FnOnce(SyntaxError) -> FormatError + '_ {
    move |source| FormatError::Syntax {
        text: text.to_owned(),
        source,
    }
}

fn perm_from_repr(images: &[usize], n: Dimension) -> Result<Permutation, FormatError> {
    let text = format!("{images:?}");
    let perm = Permutation::from_images(images).map_err(syntax(&text))?;
    if perm.degree() != n.get() {
        return Err(FormatError::Syntax {
            text,
            source: SyntaxError::DimensionMismatch {
                expected: n.get(),
                found: perm.degree(),
            },
        });
    }
    Ok(perm)
}

fn node_from_repr(r: NodeRepr, n: Dimension) -> Result<ProofTree, FormatError> {
    let rule: RuleTag = r.rule.parse().map_err(FormatError::UnknownRule)?;
    let p = r.params;
    let params = RuleParams {
        i: p.i,
        j: p.j,
        k: p.k,
        pi: p.pi.as_deref().map(|x| perm_from_repr(x, n)).transpose()?,
        rho: p.rho.as_deref().map(|x| perm_from_repr(x, n)).transpose()?,
        formula: p
            .formula
            .as_deref()
            .map(|text| parse_formula(text, n).map_err(syntax(text)))
            .transpose()?,
    };
    let conclusion = parse_sequent(&r.conclusion, n).map_err(syntax(&r.conclusion))?;
    let premises = r
        .premises
        .into_iter()
        .map(|c| node_from_repr(c, n))
        .collect::<Result<_, _>>()?;
    Ok(ProofTree::new(rule, params, conclusion, premises))
}

fn file_repr(tree: &ProofTree, n: Dimension) -> FileRepr {
    FileRepr {
        format_version: FORMAT_VERSION,
        n: n.get(),
        proof: node_to_repr(tree),
    }
}

pub fn to_json_value(tree: &ProofTree, n: Dimension) -> serde_json::Value {
    serde_json::to_value(file_repr(tree, n)).expect("proof trees always serialise")
}

/// Pretty-printed proof file, keys in schema order.
pub fn to_json(tree: &ProofTree, n: Dimension) -> String {
    serde_json::to_string_pretty(&file_repr(tree, n)).expect("proof trees always serialise")
}

pub fn from_json_value(value: serde_json::Value) -> Result<(ProofTree, Dimension), FormatError> {
    let file: FileRepr = serde_json::from_value(value)?;
    decode(file)
}

/// Parses a proof file; returns the tree together with its declared `n`.
pub fn from_json(text: &str) -> Result<(ProofTree, Dimension), FormatError> {
    let file: FileRepr = serde_json::from_str(text)?;
    decode(file)
}

fn decode(file: FileRepr) -> Result<(ProofTree, Dimension), FormatError> {
    if file.format_version != FORMAT_VERSION {
        return Err(FormatError::Version(file.format_version));
    }
    let n = u8::try_from(file.n)
        .ok()
        .and_then(|v| Dimension::new(v as usize).ok())
        .ok_or(FormatError::Dimension(file.n))?;
    Ok((node_from_repr(file.proof, n)?, n))
}
