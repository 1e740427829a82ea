//! Exhaustive solver for small instances.
//!
//! Candidates are visited in edge-id order by a depth-first search that only
//! extends acyclic, affordable partial sets, so every feasible blue set is
//! met exactly once, in lexicographic order of its sorted edge list; the
//! first optimum found is therefore the lexicographically smallest one.
//!
//! Subtrees that cannot beat the incumbent are skipped. Let `K(F)` be the
//! cost of the reds Kruskal adds to complete `F` to a spanning tree, and
//! `loss(F) = c(T) - K(F) - r(F)`, which is never negative. For `F ⊆ G`
//! there is a bijection from `G \ F` onto the reds dropped between the two
//! completions such that each blue edge's price is at most the cost of its
//! image, and prices of `F` only fall; so `loss(G) >= loss(F)`. Every set
//! below a node with partial set `F` and remaining candidates `U` thus earns
//! at most `c(T) - loss(F) - K(F ∪ U)`.

use serde::Serialize;

use crate::model::{Budget, EdgeKey, GameInstance};
use crate::pricing::{optimal_prices, Pricer, PricingResult};
use crate::union_find::{RollbackUnionFind, UnionFind};
use crate::value::Value;

pub const DEFAULT_GUARD: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{candidates} blue candidates exceed the oracle guard of {limit}")]
    GuardExceeded { candidates: usize, limit: usize },
    #[error("red costs have no common denominator below 2^60")]
    Unscalable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub best_set: Vec<EdgeKey>,
    pub best_prices: PricingResult,
    pub optimum: Value,
    /// Number of blue sets priced.
    pub explored: u64,
}

/// `c(T)`, an upper bound on any revenue.
pub fn upper_bound_total_cost(instance: &GameInstance) -> Value {
    instance.total_cost()
}

struct Search {
    cands: Vec<EdgeKey>,
    acts: Vec<Value>,
    budget: Budget,
    pricer: Pricer,
    /// Union-find over the graph of candidates `s..`, for each `s`.
    suffix: Vec<UnionFind>,
    uf: RollbackUnionFind,
    bound_uf: UnionFind,
    current: Vec<EdgeKey>,
    spend: Value,
    best: i128,
    best_set: Vec<EdgeKey>,
    explored: u64,
    use_bound: bool,
}

impl Search {
    /// `K(current ∪ candidates[from..])`, scaled.
    fn suffix_completion(&mut self, from: usize) -> i128 {
        self.bound_uf.copy_from(&self.suffix[from]);
        for &e in &self.current {
            self.bound_uf.union(e.u, e.v);
        }
        self.pricer.kept_cost_with(&mut self.bound_uf)
    }

    fn visit(&mut self, next: usize, inherited_loss: i128) {
        let total = self.pricer.total_scaled();
        let mut reach = 0;
        if self.use_bound {
            reach = self.suffix_completion(next);
            if total - inherited_loss - reach <= self.best {
                return;
            }
        }
        self.explored += 1;
        let (r, kept) = self
            .pricer
            .scaled_revenue_and_kept(&self.current)
            .expect("search keeps the blue set acyclic");
        if r > self.best {
            self.best = r;
            self.best_set = self.current.clone();
        }
        let loss = total - kept - r;
        debug_assert!(loss >= inherited_loss);
        if self.use_bound && total - loss - reach <= self.best {
            return;
        }
        for j in next..self.cands.len() {
            let e = self.cands[j];
            let spend = match self.budget {
                Budget::Unbounded => self.spend,
                Budget::Finite(cap) => {
                    let s = self.spend + self.acts[j];
                    if s > cap {
                        continue;
                    }
                    s
                }
            };
            if !self.uf.union(e.u, e.v) {
                continue;
            }
            let saved = self.spend;
            self.spend = spend;
            self.current.push(e);
            self.visit(j + 1, loss);
            self.current.pop();
            self.spend = saved;
            self.uf.rollback();
        }
    }
}

fn check_guard(instance: &GameInstance, limit: usize) -> Result<(), OracleError> {
    let candidates = instance.candidate_count();
    if candidates > limit {
        return Err(OracleError::GuardExceeded { candidates, limit });
    }
    Ok(())
}

fn finish(
    instance: &GameInstance,
    best_set: Vec<EdgeKey>,
    explored: u64,
) -> OracleResult {
    let best_prices = optimal_prices(instance, &best_set).expect("oracle sets are feasible");
    OracleResult {
        optimum: best_prices.revenue,
        best_set,
        best_prices,
        explored,
    }
}

/// Exact optimum over every acyclic blue set within budget.
pub fn solve_exact(instance: &GameInstance, limit: usize) -> Result<OracleResult, OracleError> {
    run(instance, limit, true)
}

/// Same enumeration without the revenue bound; only feasibility prunes.
pub fn solve_unbounded_search(
    instance: &GameInstance,
    limit: usize,
) -> Result<OracleResult, OracleError> {
    run(instance, limit, false)
}

fn run(instance: &GameInstance, limit: usize, use_bound: bool) -> Result<OracleResult, OracleError> {
    check_guard(instance, limit)?;
    let pricer = Pricer::new(instance);
    if !pricer.has_integer_scale() {
        return Err(OracleError::Unscalable);
    }
    let (cands, acts): (Vec<EdgeKey>, Vec<Value>) =
        instance.candidates().map(|b| (b.key, b.activation)).unzip();
    let n = instance.n();
    let mut suffix = vec![UnionFind::new(n); cands.len() + 1];
    for s in (0..cands.len()).rev() {
        let mut uf = suffix[s + 1].clone();
        uf.union(cands[s].u, cands[s].v);
        suffix[s] = uf;
    }
    let mut search = Search {
        cands,
        acts,
        budget: instance.budget(),
        pricer,
        suffix,
        uf: RollbackUnionFind::new(n),
        bound_uf: UnionFind::new(n),
        current: Vec::new(),
        spend: Value::ZERO,
        best: -1,
        best_set: Vec::new(),
        explored: 0,
        use_bound,
    };
    search.visit(0, 0);
    Ok(finish(instance, search.best_set, search.explored))
}

/// Plain subset enumeration: every subset of candidates is tested for
/// acyclicity and budget, then priced by threshold contraction.
pub fn solve_naive(instance: &GameInstance, limit: usize) -> Result<OracleResult, OracleError> {
    check_guard(instance, limit.min(24))?;
    let cands: Vec<(EdgeKey, Value)> = instance.candidates().map(|b| (b.key, b.activation)).collect();
    let m = cands.len();
    let mut uf = UnionFind::new(instance.n());
    let mut best: Option<(Value, Vec<EdgeKey>)> = None;
    let mut explored = 0;
    for mask in 0u64..(1u64 << m) {
        uf.reset();
        let mut set = Vec::new();
        let mut spend = Value::ZERO;
        let mut ok = true;
        for (i, &(e, a)) in cands.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if !uf.union(e.u, e.v) {
                    ok = false;
                    break;
                }
                spend += a;
                set.push(e);
            }
        }
        if !ok || !instance.budget().allows(spend) {
            continue;
        }
        explored += 1;
        let r = optimal_prices(instance, &set).expect("feasible").revenue;
        let better = match &best {
            None => true,
            Some((b, s)) => r > *b || (r == *b && set < *s),
        };
        if better {
            best = Some((r, set));
        }
    }
    let (_, set) = best.expect("the empty set is always feasible");
    Ok(finish(instance, set, explored))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BlueCatalog, RedTree};

    fn v(x: i64) -> Value {
        Value::from(x)
    }

    fn path(costs: &[i64]) -> GameInstance {
        let c: Vec<Value> = costs.iter().map(|&x| v(x)).collect();
        GameInstance::complete(RedTree::path(&c)).unwrap()
    }

    #[test]
    fn tight_path_optimum_is_two() {
        let inst = path(&[1, 2, 0, 0, 0]);
        let res = solve_exact(&inst, DEFAULT_GUARD).unwrap();
        assert_eq!(res.optimum, v(2));
        assert_eq!(upper_bound_total_cost(&inst), v(3));
    }

    #[test]
    fn single_edge_has_nothing_to_sell() {
        let res = solve_exact(&path(&[5]), DEFAULT_GUARD).unwrap();
        assert_eq!(res.optimum, Value::ZERO);
        assert!(res.best_set.is_empty());
    }

    #[test]
    fn crossing_pair_optimum() {
        let res = solve_exact(&path(&[3, 1, 3]), DEFAULT_GUARD).unwrap();
        assert_eq!(res.optimum, v(6));
        assert_eq!(res.best_prices.revenue, res.optimum);
    }

    #[test]
    fn guard_is_enforced() {
        let inst = path(&[1; 8]);
        assert_eq!(
            solve_exact(&inst, 10),
            Err(OracleError::GuardExceeded {
                candidates: 28,
                limit: 10
            })
        );
    }

    #[test]
    fn budget_limits_purchases() {
        let inst = GameInstance::new(
            RedTree::path(&[v(4), v(4), v(4)]),
            BlueCatalog::explicit([(0, 2, v(2)), (1, 3, v(2)), (0, 3, v(5))]),
            Budget::Finite(v(3)),
        )
        .unwrap();
        let res = solve_exact(&inst, DEFAULT_GUARD).unwrap();
        assert_eq!(res.optimum, v(4));
        assert_eq!(res.best_set, vec![EdgeKey::new(0, 2)]);
        assert_eq!(solve_naive(&inst, 12).unwrap().best_set, res.best_set);
    }

    #[test]
    fn star_costs_sum() {
        let inst = GameInstance::complete(RedTree::star(&[v(1), v(2), v(3)])).unwrap();
        assert_eq!(upper_bound_total_cost(&inst), v(6));
        assert_eq!(upper_bound_total_cost(&path(&[0, 0, 0])), Value::ZERO);
    }
}
