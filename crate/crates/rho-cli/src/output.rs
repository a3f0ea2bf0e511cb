//! Machine-readable result record emitted by `rho compute --json`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use rho_core::{GeneralResult, Term};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermRecord {
    #[serde(rename = "type")]
    pub kind: String,
    pub coeff: String,
    pub exp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
}

/// Symbolic terms of one prime-power factor p^s of n.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactorTerms {
    pub p: String,
    pub s: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct OutputRecord {
    pub engine: String,
    pub k: String,
    pub n: String,
    pub lambda: String,
    /// Per prime factor of n, the symbolic terms of rho at that factor.
    pub terms: Vec<FactorTerms>,
    pub mod_evals: BTreeMap<String, String>,
    pub digits10_estimate: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub timings_ns: u64,
    pub op_count: u64,
}

impl OutputRecord {
    pub fn new(
        engine: &str,
        k: &str,
        lambda: &str,
        n: &str,
        result: &GeneralResult,
        mod_evals: BTreeMap<String, String>,
        exact: Option<String>,
        timings_ns: u64,
        op_count: u64,
    ) -> Self {
        let terms = result
            .factors()
            .iter()
            .map(|(q, v)| FactorTerms {
                p: q.p().to_string(),
                s: q.s().to_string(),
                terms: v
                    .terms()
                    .iter()
                    .map(|t| match t {
                        Term::Pow(pt) => TermRecord {
                            kind: "pow".into(),
                            coeff: pt.coeff.to_string(),
                            exp: pt.exp.to_string(),
                            step: None,
                            count: None,
                        },
                        Term::Geom(gt) => TermRecord {
                            kind: "geom".into(),
                            coeff: gt.coeff.to_string(),
                            exp: gt.exp0.to_string(),
                            step: Some(gt.step.to_string()),
                            count: Some(gt.count.to_string()),
                        },
                    })
                    .collect(),
            })
            .collect();
        OutputRecord {
            engine: engine.to_string(),
            k: k.to_string(),
            n: n.to_string(),
            lambda: lambda.to_string(),
            terms,
            mod_evals,
            digits10_estimate: result.digits_estimate().to_string(),
            exact,
            timings_ns,
            op_count,
        }
    }
}
