//! Trajectories, the cycle set, and definitional oracles.
//!
//! Every trajectory of `x(t+1) = A x(t)` enters the cycle set `C_A` within
//! `nm` steps, and `C_A = Im(A^nm)`. The algebraic oracles test the
//! definitions through that subspace; the exhaustive ones enumerate the
//! whole state space and walk each trajectory into its cycle.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SubspaceBasis};
use crate::network::NetworkSystem;
use crate::par::{self, Execution};

pub const DEFAULT_STATE_LIMIT: u64 = 2_000_000;

/// Extra steps [`simulate`] may take past the requested horizon while
/// looking for the first repeated state.
pub const CYCLE_SEARCH_LIMIT: usize = 1 << 20;

/// First repeated state of a trajectory: `x(start + period) = x(start)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventualCycle {
    pub start: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    /// `x(0), ..., x(steps)`.
    pub states: Vec<Vec<u64>>,
    pub cycle: Option<EventualCycle>,
    /// Least `T` such that every state from `T` on is synchronized. `None`
    /// when the eventual cycle leaves the synchronized set, or when no cycle
    /// was found within the search limit.
    pub sync_time: Option<usize>,
}

fn agents_agree(x: &[u32], n: usize, m: usize) -> bool {
    let (first, rest) = x.split_at(m);
    (1..n).all(|i| &rest[(i - 1) * m..i * m] == first)
}

pub fn is_synchronized_state(sys: &NetworkSystem, x: &[u64]) -> bool {
    let raw: Vec<u32> = x.iter().map(|&v| v as u32).collect();
    agents_agree(&raw, sys.agents(), sys.agent_dim())
}

fn check_state(sys: &NetworkSystem, x: &[u64]) -> Result<Vec<u32>> {
    if x.len() != sys.dim() {
        return Err(Error::Dimension(format!(
            "initial state has {} entries, expected {}",
            x.len(),
            sys.dim()
        )));
    }
    let p = sys.field().modulus();
    if let Some((i, v)) = x.iter().enumerate().find(|(_, &v)| v >= p) {
        return Err(Error::Precondition(format!(
            "state entry {i} = {v} is not a residue mod {p}"
        )));
    }
    Ok(x.iter().map(|&v| v as u32).collect())
}

pub fn simulate(sys: &NetworkSystem, x0: &[u64], steps: usize) -> Result<Trajectory> {
    let x0 = check_state(sys, x0)?;
    let a = sys.matrix();
    let (n, m) = (sys.agents(), sys.agent_dim());

    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut history = vec![x0];
    let mut cycle = None;
    let horizon = steps + CYCLE_SEARCH_LIMIT;
    for t in 0.. {
        let cur = &history[t];
        if cycle.is_none() {
            if let Some(&start) = seen.get(cur) {
                cycle = Some(EventualCycle {
                    start,
                    period: t - start,
                });
            } else {
                seen.insert(cur.clone(), t);
            }
        }
        if t >= steps && (cycle.is_some() || t >= horizon) {
            break;
        }
        let mut next = vec![0; cur.len()];
        a.mul_vec_into(cur, &mut next);
        history.push(next);
    }

    let sync_time = cycle.and_then(|c| {
        let end = c.start + c.period;
        if !history[c.start..end].iter().all(|x| agents_agree(x, n, m)) {
            return None;
        }
        let mut t = c.start;
        while t > 0 && agents_agree(&history[t - 1], n, m) {
            t -= 1;
        }
        Some(t)
    });

    history.truncate(steps + 1);
    Ok(Trajectory {
        states: history
            .into_iter()
            .map(|x| x.into_iter().map(u64::from).collect())
            .collect(),
        cycle,
        sync_time,
    })
}

/// The cycle set `C_A` as `Im(A^nm)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSet {
    pub basis: SubspaceBasis,
    pub dim: usize,
}

fn cycle_subspace(sys: &NetworkSystem) -> Result<SubspaceBasis> {
    Ok(sys.matrix().pow(sys.dim() as u64)?.image_basis())
}

/// `dim C_A` equals the degree of `f` in `P_A = x^k f`, `f(0) != 0`.
pub fn lemma1_dimension_holds(sys: &NetworkSystem) -> Result<bool> {
    let (_, f) = sys.matrix().char_poly()?.split_nilpotent_part()?;
    Ok(cycle_subspace(sys)?.dim() == f.degree().expect("nonzero factor"))
}

pub fn cycle_set(sys: &NetworkSystem) -> Result<CycleSet> {
    let basis = cycle_subspace(sys)?;
    let (_, f) = sys.matrix().char_poly()?.split_nilpotent_part()?;
    let expected = f.degree().expect("nonzero factor");
    if basis.dim() != expected {
        return Err(Error::Consistency(format!(
            "cycle set has dimension {}, non-nilpotent factor has degree {expected}",
            basis.dim()
        )));
    }
    Ok(CycleSet {
        dim: basis.dim(),
        basis,
    })
}

/// `(n-1)m x nm` operator with rows `x_i - x_1`, `i = 2..n`.
fn difference_operator(sys: &NetworkSystem) -> Matrix {
    let (n, m) = (sys.agents(), sys.agent_dim());
    let minus_one = sys.field().modulus() - 1;
    Matrix::from_fn(sys.field(), (n - 1) * m, n * m, |r, c| {
        if c == r + m {
            1
        } else if c == r % m {
            minus_one
        } else {
            0
        }
    })
}

/// Synchronization iff the cycle set lies in the synchronized set.
pub fn oracle_sync_algebraic(sys: &NetworkSystem) -> Result<bool> {
    let a_pow = sys.matrix().pow(sys.dim() as u64)?;
    Ok(difference_operator(sys).mul(&a_pow)?.is_zero())
}

/// Consensus iff additionally the cycle set is exactly the fixed-point set.
pub fn oracle_consensus_algebraic(sys: &NetworkSystem) -> Result<bool> {
    if !oracle_sync_algebraic(sys)? {
        return Ok(false);
    }
    let a = sys.matrix();
    let fixed = a
        .sub(&Matrix::identity(sys.field(), sys.dim()))?
        .kernel_basis();
    Ok(cycle_subspace(sys)? == fixed)
}

fn state_count(sys: &NetworkSystem, limit: u64) -> Result<u64> {
    let p = sys.field().modulus() as u128;
    let mut states: u128 = 1;
    for _ in 0..sys.dim() {
        states = states.saturating_mul(p);
    }
    if states > limit as u128 {
        return Err(Error::StateLimit { states, limit });
    }
    Ok(states as u64)
}

/// Little-endian mixed-radix digits of `idx`.
fn decode_state(mut idx: u64, p: u64, out: &mut [u32]) {
    for d in out.iter_mut() {
        *d = (idx % p) as u32;
        idx /= p;
    }
}

struct Scratch {
    cur: Vec<u32>,
    next: Vec<u32>,
    anchor: Vec<u32>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Self {
            cur: vec![0; dim],
            next: vec![0; dim],
            anchor: vec![0; dim],
        }
    }

    fn step(&mut self, a: &Matrix) {
        a.mul_vec_into(&self.cur, &mut self.next);
        std::mem::swap(&mut self.cur, &mut self.next);
    }
}

#[derive(Clone, Copy)]
enum Goal {
    Sync,
    Consensus,
}

fn exhaustive(sys: &NetworkSystem, limit: u64, exec: Execution, goal: Goal) -> Result<bool> {
    let count = state_count(sys, limit)?;
    let (n, m, dim) = (sys.agents(), sys.agent_dim(), sys.dim());
    let p = sys.field().modulus();
    let a = sys.matrix();
    Ok(par::all_indices(
        exec,
        count,
        || Scratch::new(dim),
        |s, idx| {
            decode_state(idx, p, &mut s.cur);
            // nm steps always land in the cycle set.
            for _ in 0..dim {
                s.step(a);
            }
            s.anchor.copy_from_slice(&s.cur);
            match goal {
                Goal::Consensus => {
                    s.step(a);
                    s.cur == s.anchor && agents_agree(&s.anchor, n, m)
                }
                Goal::Sync => loop {
                    if !agents_agree(&s.cur, n, m) {
                        break false;
                    }
                    s.step(a);
                    if s.cur == s.anchor {
                        break true;
                    }
                },
            }
        },
    ))
}

/// Enumerates all `p^nm` initial states and checks that each trajectory's
/// eventual cycle stays synchronized.
pub fn oracle_sync_exhaustive(sys: &NetworkSystem, state_limit: u64) -> Result<bool> {
    oracle_sync_exhaustive_with(sys, state_limit, Execution::default())
}

pub fn oracle_sync_exhaustive_with(
    sys: &NetworkSystem,
    state_limit: u64,
    exec: Execution,
) -> Result<bool> {
    exhaustive(sys, state_limit, exec, Goal::Sync)
}

/// Enumerates all initial states and checks that each trajectory ends at a
/// synchronized fixed point.
pub fn oracle_consensus_exhaustive(sys: &NetworkSystem, state_limit: u64) -> Result<bool> {
    oracle_consensus_exhaustive_with(sys, state_limit, Execution::default())
}

pub fn oracle_consensus_exhaustive_with(
    sys: &NetworkSystem,
    state_limit: u64,
    exec: Execution,
) -> Result<bool> {
    exhaustive(sys, state_limit, exec, Goal::Consensus)
}
