//! Networks of `n` agents with `m`-dimensional states, `x(t+1) = A x(t)`,
//! where `A` is an `nm x nm` matrix made of `m x m` coupling blocks `A_ij`.
//!
//! Synchronization is decided through the subspace
//!
//! ```text
//! W1 = { a in F_p^m : (A_i - A_1) A_1^t a = 0,  i = 2..n,  t = 0..m-1 }
//! ```
//!
//! where `A_i` is the i-th block row sum. `W1` is `A_1`-invariant; if `Q` is
//! the matrix of `A_1` restricted to `W1` (in some basis) and `d = dim W1`, the
//! network synchronizes iff `P_A(x) = x^(nm-d) P_Q(x)`. It reaches consensus
//! iff additionally every trajectory of `Q` ends at a fixed point.
//!
//! When all block row sums agree, the set of synchronized states is itself
//! `A`-invariant and the test reduces to `P_A(x) = x^(nm-m) P_{A_1}(x)`.

use crate::dynamics;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{extend_to_full_basis, solve_right, Matrix, SubspaceBasis};
use crate::par::{self, Execution};
use crate::poly::Polynomial;

/// `(p, n, m, A)` with `A` square of dimension `n * m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSystem {
    n: usize,
    m: usize,
    a: Matrix,
}

impl NetworkSystem {
    pub fn new(n: usize, m: usize, a: Matrix) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Dimension(format!(
                "agent count and state dimension must be positive (n={n}, m={m})"
            )));
        }
        if a.rows() != n * m || a.cols() != n * m {
            return Err(Error::Dimension(format!(
                "coefficient matrix is {}x{}, expected {}x{}",
                a.rows(),
                a.cols(),
                n * m,
                n * m
            )));
        }
        Ok(Self { n, m, a })
    }

    pub fn field(&self) -> PrimeField {
        self.a.field()
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn agent_dim(&self) -> usize {
        self.m
    }

    /// Total state dimension `n * m`.
    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// Coupling block `A_ij` (zero-based).
    pub fn block(&self, i: usize, j: usize) -> Matrix {
        let m = self.m;
        self.a.submatrix(i * m, j * m, m, m)
    }

    /// `A_i = sum_j A_ij` for every agent `i`.
    pub fn block_row_sums(&self) -> Vec<Matrix> {
        let (n, m, f) = (self.n, self.m, self.field());
        (0..n)
            .map(|i| {
                Matrix::from_fn(f, m, m, |r, c| {
                    (0..n).fold(0u64, |acc, j| acc + self.a[(i * m + r, j * m + c)] as u64)
                })
            })
            .collect()
    }

    /// Whether `A` maps synchronized states to synchronized states, which
    /// holds exactly when all block row sums coincide.
    pub fn sync_set_is_invariant(&self) -> bool {
        let sums = self.block_row_sums();
        sums.windows(2).all(|w| w[0] == w[1])
    }

    /// `W1` as the kernel of the stacked blocks `(A_i - A_1) A_1^t`.
    pub fn compute_w1(&self) -> Result<SubspaceBasis> {
        let sums = self.block_row_sums();
        let a1 = &sums[0];
        let diffs = sums[1..]
            .iter()
            .map(|ai| ai.sub(a1))
            .collect::<Result<Vec<_>>>()?;
        let mut blocks = Vec::with_capacity(diffs.len() * self.m);
        let mut power = Matrix::identity(self.field(), self.m);
        for _ in 0..self.m {
            for d in &diffs {
                blocks.push(d.mul(&power)?);
            }
            power = power.mul(a1)?;
        }
        Ok(Matrix::vstack(self.field(), self.m, &blocks)?.kernel_basis())
    }

    /// `W1` in the equivalent power form `A_1^t a = A_i^t a`, `t = 1..m`.
    pub fn compute_w1_alt(&self) -> Result<SubspaceBasis> {
        let sums = self.block_row_sums();
        let mut powers = sums.clone();
        let mut blocks = Vec::new();
        for t in 1..=self.m {
            if t > 1 {
                for (pw, s) in powers.iter_mut().zip(&sums) {
                    *pw = pw.mul(s)?;
                }
            }
            for pi in &powers[1..] {
                blocks.push(pi.sub(&powers[0])?);
            }
        }
        Ok(Matrix::vstack(self.field(), self.m, &blocks)?.kernel_basis())
    }

    /// The `d x d` matrix `Q` with `A_1 B = B Q`, where `B` holds a basis of
    /// `W1` as columns.
    ///
    /// `basis` must have full column rank. If its span is not
    /// `A_1`-invariant the system has no solution, which for a true `W1`
    /// basis is an internal error.
    pub fn compute_q(&self, basis: &Matrix) -> Result<Matrix> {
        let a1 = &self.block_row_sums()[0];
        let rhs = a1.mul(basis)?;
        solve_right(basis, &rhs).map_err(|e| match e {
            Error::Inconsistent(msg) => {
                Error::Consistency(format!("W1 basis span is not A_1-invariant: {msg}"))
            }
            other => other,
        })
    }

    /// `P_A = x^(nm-m) P_{A_1}`; only defined when the synchronized set is invariant.
    pub fn check_theorem1(&self) -> Result<bool> {
        if !self.sync_set_is_invariant() {
            return Err(Error::Precondition(
                "block row sums differ; the invariant-set criterion does not apply".into(),
            ));
        }
        let a1 = &self.block_row_sums()[0];
        let rhs = a1.char_poly()?.shift(self.dim() - self.m);
        Ok(self.a.char_poly()? == rhs)
    }

    /// The error block of `T A T^-1` for `z_1 = x_1`, `z_i = x_i - x_1`.
    ///
    /// Requires equal block row sums; the lower-left `(n-1)m x m` block of the
    /// transformed matrix is then zero and the returned `(n-1)m x (n-1)m`
    /// block governs the agent differences.
    pub fn difference_dynamics(&self) -> Result<Matrix> {
        if !self.sync_set_is_invariant() {
            return Err(Error::Precondition("block row sums differ".into()));
        }
        let (n, m, f) = (self.n, self.m, self.field());
        let nm = n * m;
        let minus_one = f.modulus() - 1;
        let t = Matrix::from_fn(f, nm, nm, |r, c| {
            if r == c {
                1
            } else if r >= m && c == r % m {
                minus_one
            } else {
                0
            }
        });
        let t_inv = Matrix::from_fn(f, nm, nm, |r, c| {
            u64::from(r == c || (r >= m && c == r % m))
        });
        let conj = t.mul(&self.a)?.mul(&t_inv)?;
        if !conj.submatrix(m, 0, nm - m, m).is_zero() {
            return Err(Error::Consistency(
                "difference coordinates are coupled to the first agent".into(),
            ));
        }
        Ok(conj.submatrix(m, m, nm - m, nm - m))
    }

    pub fn check_theorem2(&self) -> Result<bool> {
        let s = SyncStructure::compute(self, &BasisChoice::Canonical)?;
        self.theorem2_holds(&s)
    }

    fn theorem2_holds(&self, s: &SyncStructure) -> Result<bool> {
        Ok(s.char_poly_a == s.char_poly_q.shift(self.dim() - s.d))
    }

    pub fn check_consensus(&self) -> Result<bool> {
        let s = SyncStructure::compute(self, &BasisChoice::Canonical)?;
        Ok(self.theorem2_holds(&s)? && s.terminal_form().reaches_fixed_point())
    }

    /// One-dimensional agents with a common row sum `alpha`:
    /// synchronization iff `P_A = x^(n-1) (x - alpha)`.
    pub fn check_corollary1(&self) -> Result<bool> {
        if self.m != 1 {
            return Err(Error::Precondition(
                "requires one-dimensional agents".into(),
            ));
        }
        if !self.sync_set_is_invariant() {
            return Err(Error::Precondition("row sums are not all equal".into()));
        }
        let f = self.field();
        let alpha = self.block_row_sums()[0][(0, 0)];
        let linear = Polynomial::from_raw(f, vec![f.neg_raw(alpha), 1]);
        Ok(self.a.char_poly()? == linear.shift(self.n - 1))
    }

    /// Conjugates `A` by a basis `T` whose first `d` columns are
    /// `1_n (x) a_k` for the canonical `W1` basis, and tests the trailing
    /// diagonal block for nilpotency.
    pub fn reduction_crosscheck(&self) -> Result<Reduction> {
        let w1 = self.compute_w1()?;
        self.reduce_with(w1.matrix())
    }

    fn reduce_with(&self, w1_basis: &Matrix) -> Result<Reduction> {
        let nm = self.dim();
        let d = w1_basis.cols();
        let lifted = Matrix::from_fn(self.field(), nm, d, |r, c| w1_basis[(r % self.m, c)] as u64);
        let t = extend_to_full_basis(&lifted)?;
        let conj = t.inverse()?.mul(&self.a)?.mul(&t)?;
        if !conj.submatrix(d, 0, nm - d, d).is_zero() {
            return Err(Error::Consistency(
                "lifted W1 is not A-invariant: lower-left block of the reduction is nonzero".into(),
            ));
        }
        let q = conj.submatrix(0, 0, d, d);
        let complement = conj.submatrix(d, d, nm - d, nm - d);
        let nilpotent = complement.is_nilpotent()?;
        Ok(Reduction {
            transform: t,
            q,
            complement,
            nilpotent,
        })
    }
}

/// Outcome of the block-triangular reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Columns: lifted `W1` basis, then the unit-vector completion.
    pub transform: Matrix,
    /// Leading `d x d` block; the matrix of `A` restricted to the lifted `W1`.
    pub q: Matrix,
    /// Trailing `(nm-d) x (nm-d)` block.
    pub complement: Matrix,
    pub nilpotent: bool,
}

/// Which basis of `W1` is used to express `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BasisChoice {
    /// The canonical basis of the computed kernel.
    #[default]
    Canonical,
    /// Caller-supplied `m x d` matrix; its columns must form a basis of `W1`.
    Explicit(Matrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisSource {
    Canonical,
    Explicit,
}

/// Shape of the minimal polynomial of `Q`, which decides where
/// synchronized trajectories end up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalForm {
    /// `x^s (x - 1)`: every trajectory ends at a fixed point.
    FixedPoint { s: usize },
    /// `x^s` (including `1` for `d = 0`): every trajectory ends at zero.
    Nilpotent { s: usize },
    /// Anything else: some trajectories end on a cycle of length > 1.
    Cycling,
}

impl TerminalForm {
    fn classify(min_poly: &Polynomial) -> Self {
        let f = min_poly.field();
        let (s, rest) = min_poly
            .split_nilpotent_part()
            .expect("minimal polynomial is nonzero");
        if rest == Polynomial::one(f) {
            TerminalForm::Nilpotent { s }
        } else if rest == Polynomial::from_raw(f, vec![f.neg_raw(1), 1]) {
            TerminalForm::FixedPoint { s }
        } else {
            TerminalForm::Cycling
        }
    }

    pub fn reaches_fixed_point(self) -> bool {
        !matches!(self, TerminalForm::Cycling)
    }
}

/// Everything derived from `W1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncStructure {
    pub block_row_sums: Vec<Matrix>,
    pub s_invariant: bool,
    /// Canonical basis of `W1`.
    pub w1: SubspaceBasis,
    pub d: usize,
    /// The basis `Q` is expressed in, as columns.
    pub q_basis: Matrix,
    pub q_basis_source: BasisSource,
    pub q: Matrix,
    pub char_poly_a: Polynomial,
    pub char_poly_a1: Polynomial,
    pub char_poly_q: Polynomial,
    pub min_poly_q: Polynomial,
}

impl SyncStructure {
    pub fn compute(sys: &NetworkSystem, choice: &BasisChoice) -> Result<Self> {
        let block_row_sums = sys.block_row_sums();
        let s_invariant = block_row_sums.windows(2).all(|w| w[0] == w[1]);
        let w1 = sys.compute_w1()?;
        let (q_basis, q_basis_source) = match choice {
            BasisChoice::Canonical => (w1.matrix().clone(), BasisSource::Canonical),
            BasisChoice::Explicit(b) => {
                validate_basis(&w1, b)?;
                (b.clone(), BasisSource::Explicit)
            }
        };
        let q = sys.compute_q(&q_basis)?;
        let a1 = &block_row_sums[0];
        if a1.mul(&q_basis)? != q_basis.mul(&q)? {
            return Err(Error::Consistency("A_1 B != B Q".into()));
        }
        let char_poly_a1 = a1.char_poly()?;
        Ok(Self {
            s_invariant,
            d: w1.dim(),
            w1,
            char_poly_a: sys.matrix().char_poly()?,
            char_poly_a1,
            char_poly_q: q.char_poly()?,
            min_poly_q: q.min_poly()?,
            q_basis,
            q_basis_source,
            q,
            block_row_sums,
        })
    }

    pub fn terminal_form(&self) -> TerminalForm {
        TerminalForm::classify(&self.min_poly_q)
    }
}

fn validate_basis(w1: &SubspaceBasis, b: &Matrix) -> Result<()> {
    if b.field() != w1.field() {
        return Err(Error::FieldMismatch {
            left: w1.field().modulus(),
            right: b.field().modulus(),
        });
    }
    if b.rows() != w1.ambient_dim() {
        return Err(Error::Precondition(format!(
            "supplied basis vectors have length {}, expected {}",
            b.rows(),
            w1.ambient_dim()
        )));
    }
    if b.rank() != b.cols() {
        return Err(Error::Precondition(
            "supplied basis vectors are dependent".into(),
        ));
    }
    if SubspaceBasis::span(b) != *w1 {
        return Err(Error::Precondition(format!(
            "supplied basis spans a {}-dimensional subspace different from W1 (dim {})",
            b.cols(),
            w1.dim()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremUsed {
    /// Invariant synchronized set: `P_A = x^(nm-m) P_{A_1}`.
    Invariant,
    /// General case: `P_A = x^(nm-d) P_Q`.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdicts {
    pub synchronizes: bool,
    pub consensus: bool,
    pub theorem_used: TheoremUsed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossChecks {
    /// Invariant-set criterion, when it applies.
    pub theorem1: Option<bool>,
    pub theorem2: bool,
    pub reduction_nilpotent: bool,
    /// Agreement with the cycle-set oracles in [`dynamics`].
    pub oracle_agrees: Option<bool>,
    pub lemma1_dim_ok: bool,
}

/// Long-run behavior of a synchronized network, read off the matrix that
/// drives the common agent state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalBehavior {
    /// `A_1` when the synchronized set is invariant, otherwise `Q`.
    pub governed_by: TheoremUsed,
    pub form: TerminalForm,
    /// Dimension of the cycle set of the governing matrix.
    pub cycle_dim: usize,
    /// Least `L >= 1` such that every terminal cycle has length dividing `L`.
    /// `None` if not found within [`PERIOD_SEARCH_LIMIT`] steps.
    pub period: Option<u64>,
}

pub const PERIOD_SEARCH_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    pub structure: SyncStructure,
    pub verdicts: Verdicts,
    pub cross_checks: CrossChecks,
    pub terminal: Option<TerminalBehavior>,
}

/// Runs every criterion and cross-check. Any disagreement between routes is
/// returned as [`Error::Consistency`].
pub fn analyze(sys: &NetworkSystem, choice: &BasisChoice) -> Result<AnalysisReport> {
    let s = SyncStructure::compute(sys, choice)?;
    let theorem2 = sys.theorem2_holds(&s)?;

    let theorem1 = if s.s_invariant {
        if s.d != sys.agent_dim() {
            return Err(Error::Consistency(format!(
                "invariant synchronized set but dim W1 = {} < m = {}",
                s.d,
                sys.agent_dim()
            )));
        }
        let t1 = sys.check_theorem1()?;
        if t1 != theorem2 {
            return Err(Error::Consistency(format!(
                "invariant-set criterion ({t1}) disagrees with general criterion ({theorem2})"
            )));
        }
        let nil = sys.difference_dynamics()?.is_nilpotent()?;
        if nil != t1 {
            return Err(Error::Consistency(format!(
                "difference dynamics nilpotent = {nil}, criterion = {t1}"
            )));
        }
        Some(t1)
    } else {
        None
    };

    let reduction = sys.reduce_with(&s.q_basis).map(|r| r.nilpotent)?;
    if reduction != theorem2 {
        return Err(Error::Consistency(format!(
            "reduction nilpotency ({reduction}) disagrees with the criterion ({theorem2})"
        )));
    }

    let consensus = theorem2 && s.terminal_form().reaches_fixed_point();

    let oracle_sync = dynamics::oracle_sync_algebraic(sys)?;
    let oracle_cons = dynamics::oracle_consensus_algebraic(sys)?;
    if oracle_sync != theorem2 || oracle_cons != consensus {
        return Err(Error::Consistency(format!(
            "cycle-set oracle (sync {oracle_sync}, consensus {oracle_cons}) disagrees \
             with the criteria (sync {theorem2}, consensus {consensus})"
        )));
    }

    let lemma1_dim_ok = dynamics::lemma1_dimension_holds(sys)?;
    if !lemma1_dim_ok {
        return Err(Error::Consistency(
            "cycle set dimension differs from the degree of the non-nilpotent factor".into(),
        ));
    }

    let theorem_used = if s.s_invariant {
        TheoremUsed::Invariant
    } else {
        TheoremUsed::General
    };
    let terminal = if theorem2 {
        let governing = if s.s_invariant {
            &s.block_row_sums[0]
        } else {
            &s.q
        };
        let (cycle_dim, period) = cycle_period(governing)?;
        Some(TerminalBehavior {
            governed_by: theorem_used,
            form: TerminalForm::classify(&governing.min_poly()?),
            cycle_dim,
            period,
        })
    } else {
        None
    };

    Ok(AnalysisReport {
        p: sys.field().modulus(),
        n: sys.agents(),
        m: sys.agent_dim(),
        verdicts: Verdicts {
            synchronizes: theorem2,
            consensus,
            theorem_used,
        },
        cross_checks: CrossChecks {
            theorem1,
            theorem2,
            reduction_nilpotent: reduction,
            oracle_agrees: Some(true),
            lemma1_dim_ok,
        },
        terminal,
        structure: s,
    })
}

/// Analyzes many systems, in parallel when `exec` permits.
pub fn analyze_batch(
    systems: &[NetworkSystem],
    choice: &BasisChoice,
    exec: Execution,
) -> Vec<Result<AnalysisReport>> {
    par::map_slice(exec, systems, |s| analyze(s, choice))
}

/// Dimension of the cycle set of `g` and the order of `g` restricted to it.
fn cycle_period(g: &Matrix) -> Result<(usize, Option<u64>)> {
    let r = g.rows();
    let cycle = g.pow(r as u64)?.image_basis();
    let c = cycle.dim();
    let basis = cycle.matrix();
    let restricted = solve_right(basis, &g.mul(basis)?)?;
    let id = Matrix::identity(g.field(), c);
    let mut acc = restricted.clone();
    for k in 1..=PERIOD_SEARCH_LIMIT {
        if acc == id {
            return Ok((c, Some(k)));
        }
        acc = acc.mul(&restricted)?;
    }
    Ok((c, None))
}
