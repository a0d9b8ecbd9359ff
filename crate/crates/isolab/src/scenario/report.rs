//! Run reports: the dimension matrix, the coincidence table, per-module
//! summaries, invariant degree lists, the theorem-check ledger, and the
//! expectation comparison. Serialization is deterministic (sorted maps and
//! fixed struct order), so equal seeds give byte-identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cartan::CoincidenceTable;
use crate::contraction::StabilizerReport;
use crate::invariants::VanishingReport;

#[derive(Clone, Serialize, Deserialize, Default)]
pub struct Expected {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_matrix: Option<[[usize; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub css_dims: Option<BTreeMap<String, usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidences: Option<BTreeMap<String, bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_coincidences: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_degrees: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trdeg: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_g00: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim_g11: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing_degrees: Option<Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    Satisfied,
    NotSatisfied,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Serialize)]
pub struct TheoremCheck {
    pub name: String,
    pub hypothesis: Hypothesis,
    pub conclusion: Conclusion,
    pub detail: String,
}

impl TheoremCheck {
    pub fn applicable_pass(name: &str, detail: String) -> TheoremCheck {
        TheoremCheck {
            name: name.into(),
            hypothesis: Hypothesis::Satisfied,
            conclusion: Conclusion::Pass,
            detail,
        }
    }

    pub fn na(name: &str, detail: String) -> TheoremCheck {
        TheoremCheck {
            name: name.into(),
            hypothesis: Hypothesis::NotSatisfied,
            conclusion: Conclusion::NotApplicable,
            detail,
        }
    }

    pub fn of(name: &str, hypothesis_holds: bool, conclusion_holds: bool, detail: String) -> Self {
        TheoremCheck {
            name: name.into(),
            hypothesis: if hypothesis_holds {
                Hypothesis::Satisfied
            } else {
                Hypothesis::NotSatisfied
            },
            conclusion: if !hypothesis_holds {
                Conclusion::NotApplicable
            } else if conclusion_holds {
                Conclusion::Pass
            } else {
                Conclusion::Fail
            },
            detail,
        }
    }
}

#[derive(Clone, Serialize)]
pub struct ExpectationResult {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Serialize)]
pub struct Report {
    pub scenario: String,
    pub algebra: String,
    pub seed: u64,
    pub suite: String,
    pub dim_matrix: [[usize; 2]; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_table: Option<CoincidenceTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<StabilizerReport>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub invariant_degrees: BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<VanishingReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gradient_independence_at_seed: Option<bool>,
    pub theorems: Vec<TheoremCheck>,
    pub expectations: Vec<ExpectationResult>,
}

impl Report {
    pub fn all_expectations_ok(&self) -> bool {
        self.expectations.iter().all(|e| e.ok)
    }

    pub fn all_applicable_theorems_pass(&self) -> bool {
        self.theorems.iter().all(|t| t.conclusion != Conclusion::Fail)
    }

    /// 0 clean, 2 expectation mismatch or failed applicable theorem.
    pub fn exit_code(&self) -> i32 {
        if self.all_expectations_ok() && self.all_applicable_theorems_pass() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# {} ({})\n\n", self.scenario, self.algebra));
        s.push_str(&format!("seed {}, suite {}\n\n", self.seed, self.suite));
        s.push_str("| | sigma2 = +1 | sigma2 = -1 |\n|---|---|---|\n");
        s.push_str(&format!(
            "| sigma1 = +1 | g00: {} | g01: {} |\n",
            self.dim_matrix[0][0], self.dim_matrix[0][1]
        ));
        s.push_str(&format!(
            "| sigma1 = -1 | g10: {} | g11: {} |\n\n",
            self.dim_matrix[1][0], self.dim_matrix[1][1]
        ));
        if let Some(t) = &self.rank_table {
            s.push_str("## Cartan subspaces\n\n");
            s.push_str("| space | dim |\n|---|---|\n");
            for (k, v) in &t.little_dims {
                s.push_str(&format!("| {} | {} |\n", k, v));
            }
            for (k, v) in &t.big_dims {
                s.push_str(&format!("| {} | {} |\n", k, v));
            }
            s.push_str("\n## Coincidences\n\n| little | inside | coincide | dims |\n|---|---|---|---|\n");
            for e in &t.entries {
                s.push_str(&format!(
                    "| c{} | g{}+g{} | {} | {}/{} |\n",
                    e.alpha, e.alpha, e.gamma, e.coincide, e.little_dim, e.big_dim
                ));
            }
            s.push('\n');
        }
        if !self.modules.is_empty() {
            s.push_str("## Degenerated modules\n\n");
            s.push_str("| perm | max orbit | target reached | stab dim | trdeg | agree |\n|---|---|---|---|---|---|\n");
            for m in &self.modules {
                s.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} |\n",
                    m.perm, m.max_orbit_dim, m.witness_found, m.stabilizer_dim, m.trdeg_a, m.agree
                ));
            }
            s.push('\n');
        }
        if !self.invariant_degrees.is_empty() {
            s.push_str("## Invariant degrees\n\n");
            for (k, v) in &self.invariant_degrees {
                s.push_str(&format!("- {}: {:?}\n", k, v));
            }
            s.push('\n');
        }
        if let Some(v) = &self.vanishing {
            s.push_str("## Vanishing on the saturation of g10\n\n");
            s.push_str(&format!(
                "slice dimension {}, vanishing invariants {} ({})\n\n",
                v.k_expected,
                v.vanishing_count,
                if v.count_matches { "matches" } else { "MISMATCH" }
            ));
            for e in &v.entries {
                s.push_str(&format!(
                    "- degree {}: vanishes {} (top bidegree {:?})\n",
                    e.degree, e.vanishes_on_x, e.top_bidegree
                ));
            }
            s.push('\n');
        }
        s.push_str("## Theorem ledger\n\n| check | hypothesis | conclusion | detail |\n|---|---|---|---|\n");
        for t in &self.theorems {
            s.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                t.name,
                match t.hypothesis {
                    Hypothesis::Satisfied => "satisfied",
                    Hypothesis::NotSatisfied => "not satisfied",
                    Hypothesis::Unknown => "unknown",
                },
                match t.conclusion {
                    Conclusion::Pass => "pass",
                    Conclusion::Fail => "FAIL",
                    Conclusion::NotApplicable => "n/a",
                },
                t.detail
            ));
        }
        if !self.expectations.is_empty() {
            s.push_str("\n## Expectations\n\n| name | expected | actual | ok |\n|---|---|---|---|\n");
            for e in &self.expectations {
                s.push_str(&format!(
                    "| {} | {} | {} | {} |\n",
                    e.name, e.expected, e.actual, e.ok
                ));
            }
        }
        s
    }
}
