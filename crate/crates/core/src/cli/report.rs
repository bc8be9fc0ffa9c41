//! JSON documents emitted by the CLI. Field order is the serialization order.

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::network::{AnalysisReport, BasisSource, TerminalForm, TheoremUsed};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub s_invariant: bool,
    /// `A_i` for each agent, row-major.
    pub block_row_sums: Vec<Vec<Vec<u64>>>,
    /// Canonical basis vectors of `W1`.
    pub w1_basis: Vec<Vec<u64>>,
    pub d: usize,
    pub q: QDocument,
    /// Ascending coefficient lists.
    pub char_poly_a: Vec<u64>,
    pub char_poly_a1: Vec<u64>,
    pub char_poly_q: Vec<u64>,
    pub min_poly_q: Vec<u64>,
    pub verdicts: VerdictDocument,
    pub cross_checks: CrossCheckDocument,
    pub terminal: Option<TerminalDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDocument {
    /// `"canonical"` or `"paper"` (the file's `basis=` block).
    pub basis_source: String,
    /// Basis vectors `Q` is expressed in.
    pub basis: Vec<Vec<u64>>,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDocument {
    pub synchronizes: bool,
    pub consensus: bool,
    /// `"thm1"` (invariant synchronized set) or `"thm2"` (general case).
    pub theorem_used: String,
    /// `"fixed_point"` for min poly `x^s (x - 1)`, `"zero"` for the nilpotent
    /// form `x^s`, `null` when there is no consensus.
    pub consensus_form: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckDocument {
    pub theorem1: Option<bool>,
    pub theorem2: bool,
    pub reduction_nilpotent: bool,
    pub oracle_agrees: Option<bool>,
    pub lemma1_dim_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalDocument {
    /// `"A1"` or `"Q"`.
    pub governed_by: String,
    pub form: String,
    pub cycle_dim: usize,
    pub period: Option<u64>,
}

fn form_name(f: TerminalForm) -> &'static str {
    match f {
        TerminalForm::FixedPoint { .. } => "fixed_point",
        TerminalForm::Nilpotent { .. } => "zero",
        TerminalForm::Cycling => "cycling",
    }
}

fn theorem_name(t: TheoremUsed) -> &'static str {
    match t {
        TheoremUsed::Invariant => "thm1",
        TheoremUsed::General => "thm2",
    }
}

impl From<&AnalysisReport> for ReportDocument {
    fn from(r: &AnalysisReport) -> Self {
        let s = &r.structure;
        let consensus_form = r
            .verdicts
            .consensus
            .then(|| form_name(s.terminal_form()).to_string());
        ReportDocument {
            p: r.p,
            n: r.n,
            m: r.m,
            s_invariant: s.s_invariant,
            block_row_sums: s.block_row_sums.iter().map(Matrix::to_rows).collect(),
            w1_basis: s.w1.vectors(),
            d: s.d,
            q: QDocument {
                basis_source: match s.q_basis_source {
                    BasisSource::Canonical => "canonical",
                    BasisSource::Explicit => "paper",
                }
                .to_string(),
                basis: s.q_basis.to_columns(),
                matrix: s.q.to_rows(),
            },
            char_poly_a: s.char_poly_a.to_vec(),
            char_poly_a1: s.char_poly_a1.to_vec(),
            char_poly_q: s.char_poly_q.to_vec(),
            min_poly_q: s.min_poly_q.to_vec(),
            verdicts: VerdictDocument {
                synchronizes: r.verdicts.synchronizes,
                consensus: r.verdicts.consensus,
                theorem_used: theorem_name(r.verdicts.theorem_used).to_string(),
                consensus_form,
            },
            cross_checks: CrossCheckDocument {
                theorem1: r.cross_checks.theorem1,
                theorem2: r.cross_checks.theorem2,
                reduction_nilpotent: r.cross_checks.reduction_nilpotent,
                oracle_agrees: r.cross_checks.oracle_agrees,
                lemma1_dim_ok: r.cross_checks.lemma1_dim_ok,
            },
            terminal: r.terminal.as_ref().map(|t| TerminalDocument {
                governed_by: match t.governed_by {
                    TheoremUsed::Invariant => "A1",
                    TheoremUsed::General => "Q",
                }
                .to_string(),
                form: form_name(t.form).to_string(),
                cycle_dim: t.cycle_dim,
                period: t.period,
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictPair {
    pub sync: bool,
    pub consensus: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub algebraic: VerdictPair,
    /// `null` when run with `--algebraic-only`.
    pub exhaustive: Option<VerdictPair>,
    pub states: Option<u64>,
    /// Verdicts of the characteristic-polynomial criteria.
    pub analysis: VerdictPair,
    pub agree: bool,
}
