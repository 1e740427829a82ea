//! Approximation within `3/2 + 9/(2n-10)` for complete instances on a red
//! path.
//!
//! A cheap window of 2 or 3 edges is cut out, leaving two even-length sides
//! `Q1 = u0..u2h` and `Q2 = v0..v2k`. Three priced solutions are built from
//! closed forms whose revenues add up to `2(c(Q1) + c(Q2))`; the best of them
//! earns at least two thirds of the cost outside the window.

use serde::Serialize;

use crate::follower::run_follower;
use crate::model::{EdgeKey, GameInstance, PricedSolution, Vertex};
use crate::oracle::{self, OracleError};
use crate::value::Value;

/// Paths with fewer vertices go to the oracle.
pub const MIN_VERTICES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathApproxError {
    #[error("red tree is not a path")]
    NotAPath,
    #[error("path approximation needs a complete blue catalog")]
    NotComplete,
    #[error("window decomposition needs at least 6 edges, got {0}")]
    TooShort(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowDecomposition {
    /// Path vertices from the endpoint with the smaller id.
    pub order: Vec<Vertex>,
    /// Edge costs along `order`.
    pub costs: Vec<Value>,
    /// Index of the window's first edge along the path (0-based).
    pub window_start: usize,
    /// 2 if the edge count is even, 3 otherwise.
    pub window_len: usize,
    /// `u0..u2h`; empty when the window starts the path.
    pub left: Vec<Vertex>,
    /// `v0..v2k`; empty when the window ends the path.
    pub right: Vec<Vertex>,
    /// Internal window vertex next to `Q1`.
    pub hub: Vertex,
    /// `x_i = c(u_{i-1}, u_i)`, stored from `x_1`.
    pub x: Vec<Value>,
    /// `y_j = c(v_{j-1}, v_j)`, stored from `y_1`.
    pub y: Vec<Value>,
}

impl WindowDecomposition {
    pub fn window_cost(&self) -> Value {
        self.costs[self.window_start..self.window_start + self.window_len].iter().copied().sum()
    }

    /// `c(Q1) + c(Q2)`.
    pub fn sides_cost(&self) -> Value {
        self.x.iter().chain(&self.y).copied().sum()
    }

    /// `c(P̄) ≤ c(P) / ⌊n/ℓ⌋`.
    pub fn window_bound_holds(&self) -> bool {
        let n = self.order.len();
        let total: Value = self.costs.iter().copied().sum();
        self.window_cost() * Value::from(n / self.window_len) <= total
    }
}

fn path_costs(instance: &GameInstance, order: &[Vertex]) -> Vec<Value> {
    order
        .windows(2)
        .map(|w| {
            let id = instance.red_id(EdgeKey::new(w[0], w[1])).expect("consecutive path vertices");
            instance.red_edges()[id].cost
        })
        .collect()
}

/// Cheapest window among those starting at even offsets; ties go to the
/// earliest.
pub fn decompose_window(instance: &GameInstance) -> Result<WindowDecomposition, PathApproxError> {
    let order = instance.path_order().ok_or(PathApproxError::NotAPath)?;
    let costs = path_costs(instance, &order);
    let m = costs.len();
    if m < 6 {
        return Err(PathApproxError::TooShort(m));
    }
    let len = if m.is_multiple_of(2) { 2 } else { 3 };
    let window = |s: usize| -> Value { costs[s..s + len].iter().copied().sum() };
    let mut start = 0;
    for s in (2..).step_by(2).take_while(|&s| s / 2 < m / 2) {
        if window(s) < window(start) {
            start = s;
        }
    }
    let left = if start == 0 { Vec::new() } else { order[..=start].to_vec() };
    let right = if start + len == m {
        Vec::new()
    } else {
        order[start + len..].to_vec()
    };
    Ok(WindowDecomposition {
        hub: order[start + 1],
        x: costs[..start].to_vec(),
        y: costs[start + len..].to_vec(),
        left,
        right,
        order,
        costs,
        window_start: start,
        window_len: len,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidates {
    /// `F1`, `F2`, `F3` with their closed-form prices.
    pub solutions: [PricedSolution; 3],
    /// `r1`, `r2`, `r3` from the closed forms.
    pub closed_forms: [Value; 3],
}

/// The three candidate solutions. Terms of an empty side are dropped.
pub fn build_candidates(d: &WindowDecomposition) -> Candidates {
    let (x, y) = (&d.x, &d.y);
    let (u, v, z) = (&d.left, &d.right, d.hub);
    let (h, k) = (x.len() / 2, y.len() / 2);
    // 1-based accessors, matching the indices in the formulas
    let xi = |i: usize| x[i - 1];
    let yi = |j: usize| y[j - 1];

    let mut f1 = Vec::new();
    for i in 1..=h {
        f1.push((EdgeKey::new(u[2 * i - 2], u[2 * i]), xi(2 * i - 1).max(xi(2 * i))));
    }
    for i in 1..=k {
        f1.push((EdgeKey::new(v[2 * i - 2], v[2 * i]), yi(2 * i - 1).max(yi(2 * i))));
    }
    let big_a: Value = f1.iter().map(|p| p.1).sum();
    let big_b: Value = (1..=h)
        .map(|i| xi(2 * i - 1).min(xi(2 * i)))
        .chain((1..=k).map(|i| yi(2 * i - 1).min(yi(2 * i))))
        .sum();

    let mut f2 = Vec::new();
    if h > 0 {
        f2.push((EdgeKey::new(z, u[0]), xi(1)));
        for (i, &w) in u.iter().enumerate().take(2 * h).skip(1) {
            f2.push((EdgeKey::new(z, w), xi(i).min(xi(i + 1))));
        }
    }
    if k > 0 {
        for (i, &w) in v.iter().enumerate().take(2 * k).skip(1) {
            f2.push((EdgeKey::new(z, w), yi(i).min(yi(i + 1))));
        }
        f2.push((EdgeKey::new(z, v[2 * k]), yi(2 * k)));
    }
    let mut r2 = big_b;
    if h > 0 {
        r2 += xi(1);
    }
    if k > 0 {
        r2 += yi(2 * k);
    }
    for i in 0..h.saturating_sub(1) {
        r2 += xi(2 * i + 2).min(xi(2 * i + 3));
    }
    for i in 0..k.saturating_sub(1) {
        r2 += yi(2 * i + 2).min(yi(2 * i + 3));
    }

    let mut f3 = Vec::new();
    let mut r3 = Value::ZERO;
    for i in 0..h.saturating_sub(1) {
        let p = xi(2 * i + 2).max(xi(2 * i + 3));
        f3.push((EdgeKey::new(u[2 * i + 1], u[2 * i + 3]), p));
        r3 += p;
    }
    for i in 0..k.saturating_sub(1) {
        let p = yi(2 * i + 2).max(yi(2 * i + 3));
        f3.push((EdgeKey::new(v[2 * i + 1], v[2 * i + 3]), p));
        r3 += p;
    }
    if h > 0 {
        f3.push((EdgeKey::new(u[2 * h - 1], z), xi(2 * h)));
        r3 += xi(2 * h);
    }
    if k > 0 {
        f3.push((EdgeKey::new(z, v[1]), yi(1)));
        r3 += yi(1);
    }

    Candidates {
        solutions: [
            PricedSolution::new(f1),
            PricedSolution::new(f2),
            PricedSolution::new(f3),
        ],
        closed_forms: [big_a, r2, r3],
    }
}

/// `3/2 + 9/(2n-10)`, for `n > 5`.
pub fn certified_ratio(n: usize) -> Value {
    Value::frac(3, 2) + Value::frac(9, 2 * n as i128 - 10)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathApproxReport {
    pub decomposition: WindowDecomposition,
    pub closed_forms: [Value; 3],
    /// Follower revenue of each candidate.
    pub simulated: [Value; 3],
    /// Index of the returned candidate.
    pub chosen: usize,
    pub certified_ratio: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathApproxOutcome {
    pub solution: PricedSolution,
    pub revenue: Value,
    /// `None` when the path was short enough for the oracle.
    pub report: Option<PathApproxReport>,
}

pub fn solve_path_approx(instance: &GameInstance) -> Result<PathApproxOutcome, PathApproxError> {
    if !instance.is_path() {
        return Err(PathApproxError::NotAPath);
    }
    if !instance.is_complete() {
        return Err(PathApproxError::NotComplete);
    }
    if instance.n() < MIN_VERTICES {
        let res = oracle::solve_exact(instance, oracle::DEFAULT_GUARD)?;
        let solution = res.best_prices.solution();
        let revenue = run_follower(instance, &solution).expect("oracle uses candidates").revenue;
        return Ok(PathApproxOutcome {
            solution,
            revenue,
            report: None,
        });
    }
    let decomposition = decompose_window(instance)?;
    let cands = build_candidates(&decomposition);
    let simulated = cands.solutions.clone().map(|s| {
        run_follower(instance, &s).expect("candidates are non-red pairs").revenue
    });
    let mut chosen = 0;
    for i in 1..3 {
        if simulated[i] > simulated[chosen] {
            chosen = i;
        }
    }
    Ok(PathApproxOutcome {
        solution: cands.solutions[chosen].clone(),
        revenue: simulated[chosen],
        report: Some(PathApproxReport {
            certified_ratio: certified_ratio(instance.n()),
            decomposition,
            closed_forms: cands.closed_forms,
            simulated,
            chosen,
        }),
    })
}
