//! Revenue-optimal prices for a fixed set of activated blue edges.
//!
//! The price of a blue edge `e = (u, v)` in `F` is the smallest `t` such that
//! `u` and `v` are joined by the red edges of cost at most `t` together with
//! `F \ {e}`: the bottleneck red cost over all cycles through `e`.
//!
//! [`optimal_prices`] computes this by threshold contraction. [`Pricer`] gets
//! the same numbers a second way, for hot loops: build the spanning tree `M`
//! made of `F` plus the reds Kruskal keeps after `F`, then price each blue
//! tree edge by the cheapest red edge crossing its fundamental cut.

use std::collections::HashSet;

use serde::Serialize;

use crate::model::{EdgeKey, GameInstance, PricedSolution, Vertex};
use crate::union_find::UnionFind;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PricingError {
    #[error("{0} is not a blue candidate of this instance")]
    NotACandidate(EdgeKey),
    #[error("{0} appears twice in the blue set")]
    Duplicate(EdgeKey),
    #[error("blue edges close a cycle at {0}")]
    BlueCycle(EdgeKey),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PricingResult {
    pub prices: Vec<(EdgeKey, Value)>,
    pub revenue: Value,
}

impl PricingResult {
    pub fn solution(&self) -> PricedSolution {
        PricedSolution::new(self.prices.iter().copied())
    }

    pub fn price_of(&self, edge: EdgeKey) -> Option<Value> {
        self.prices.iter().find(|(e, _)| *e == edge).map(|p| p.1)
    }
}

fn check_blue_set(instance: &GameInstance, blues: &[EdgeKey]) -> Result<(), PricingError> {
    let mut seen = HashSet::with_capacity(blues.len());
    let mut uf = UnionFind::new(instance.n());
    for &e in blues {
        if !instance.is_candidate(e) {
            return Err(PricingError::NotACandidate(e));
        }
        if !seen.insert(e) {
            return Err(PricingError::Duplicate(e));
        }
        if !uf.union(e.u, e.v) {
            return Err(PricingError::BlueCycle(e));
        }
    }
    Ok(())
}

/// Threshold contraction: for each blue edge, sweep the distinct red costs
/// upward and report the first at which its endpoints merge.
pub fn optimal_prices(
    instance: &GameInstance,
    blues: &[EdgeKey],
) -> Result<PricingResult, PricingError> {
    check_blue_set(instance, blues)?;
    let mut reds: Vec<(Value, EdgeKey)> = instance.red_edges().iter().map(|e| (e.cost, e.key)).collect();
    reds.sort();
    let mut sorted: Vec<EdgeKey> = blues.to_vec();
    sorted.sort();
    let mut uf = UnionFind::new(instance.n());
    let mut prices = Vec::with_capacity(sorted.len());
    for &e in &sorted {
        uf.reset();
        for &f in &sorted {
            if f != e {
                uf.union(f.u, f.v);
            }
        }
        let mut price = None;
        let mut i = 0;
        while i < reds.len() {
            let t = reds[i].0;
            while i < reds.len() && reds[i].0 == t {
                uf.union(reds[i].1.u, reds[i].1.v);
                i += 1;
            }
            if uf.same(e.u, e.v) {
                price = Some(t);
                break;
            }
        }
        // The red tree spans, so the sweep always merges u and v.
        prices.push((e, price.expect("red tree spans every vertex")));
    }
    let revenue = prices.iter().map(|p| p.1).sum();
    Ok(PricingResult { prices, revenue })
}

pub fn revenue_of(instance: &GameInstance, blues: &[EdgeKey]) -> Result<Value, PricingError> {
    Ok(optimal_prices(instance, blues)?.revenue)
}

/// Max red cost on the tree path between `u` and `v`: the price of a lone
/// blue edge `(u, v)`.
pub fn tree_path_max(instance: &GameInstance, u: Vertex, v: Vertex) -> Value {
    let mut best = vec![None; instance.n()];
    let mut stack = vec![u];
    best[u] = Some(Value::ZERO);
    while let Some(x) = stack.pop() {
        let here = best[x].expect("visited");
        for &(y, id) in instance.neighbors(x) {
            if best[y].is_none() {
                let c = instance.red_edges()[id].cost;
                best[y] = Some(if c > here { c } else { here });
                stack.push(y);
            }
        }
    }
    best[v].expect("tree is connected")
}

const NONE: usize = usize::MAX;

/// Reusable scratch space for pricing many blue sets on one instance.
pub struct Pricer {
    n: usize,
    /// Red edges sorted by (cost, id), with the rank of their cost.
    reds: Vec<(EdgeKey, usize)>,
    costs: Vec<Value>,
    /// Costs scaled to integers by a common denominator, when it fits.
    scaled: Option<Vec<i128>>,
    scale: i128,
    total_scaled: i128,
    uf: UnionFind,
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    parent: Vec<usize>,
    parent_slot: Vec<usize>,
    depth: Vec<usize>,
    assigned: Vec<usize>,
    order: Vec<usize>,
    cross: Vec<(EdgeKey, usize)>,
    /// Tree slot -> blue index, or NONE for kept reds.
    slot_blue: Vec<usize>,
    slot_ends: Vec<(usize, usize)>,
    ranks: Vec<usize>,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

fn common_scale(costs: &[Value]) -> Option<(i128, Vec<i128>)> {
    let mut l: i128 = 1;
    for c in costs {
        let d = c.denom();
        l = l.checked_mul(d / gcd(l, d))?;
        if l > 1 << 60 {
            return None;
        }
    }
    let scaled = costs
        .iter()
        .map(|c| c.numer().checked_mul(l / c.denom()))
        .collect::<Option<Vec<i128>>>()?;
    if scaled.iter().any(|s| s.abs() > 1 << 90) {
        return None;
    }
    Some((l, scaled))
}

impl Pricer {
    pub fn new(instance: &GameInstance) -> Self {
        let n = instance.n();
        let costs = instance.tree().distinct_costs();
        let mut reds: Vec<(EdgeKey, usize)> = instance
            .red_edges()
            .iter()
            .map(|e| (e.key, costs.binary_search(&e.cost).expect("cost is listed")))
            .collect();
        reds.sort_by_key(|&(k, r)| (r, k));
        let (scale, scaled) = match common_scale(&costs) {
            Some((l, s)) => (l, Some(s)),
            None => (1, None),
        };
        let total_scaled = scaled
            .as_ref()
            .map(|s| reds.iter().map(|&(_, r)| s[r]).sum())
            .unwrap_or(0);
        Pricer {
            n,
            reds,
            costs,
            scaled,
            scale,
            total_scaled,
            uf: UnionFind::new(n),
            head: vec![NONE; n],
            next: Vec::with_capacity(2 * n),
            to: Vec::with_capacity(2 * n),
            parent: vec![NONE; n],
            parent_slot: vec![NONE; n],
            depth: vec![0; n],
            assigned: vec![NONE; n],
            order: Vec::with_capacity(n),
            cross: Vec::with_capacity(n),
            slot_blue: Vec::with_capacity(n),
            slot_ends: Vec::with_capacity(n),
            ranks: Vec::new(),
        }
    }

    pub fn distinct_costs(&self) -> &[Value] {
        &self.costs
    }

    /// Whether revenues can be compared as scaled integers.
    pub fn has_integer_scale(&self) -> bool {
        self.scaled.is_some()
    }

    pub fn scale(&self) -> i128 {
        self.scale
    }

    pub fn total_scaled(&self) -> i128 {
        self.total_scaled
    }

    pub fn scaled_cost(&self, rank: usize) -> i128 {
        self.scaled.as_ref().expect("integer scale available")[rank]
    }

    fn add_slot(&mut self, blue: usize, a: usize, b: usize) {
        let slot = self.slot_blue.len();
        self.slot_blue.push(blue);
        self.slot_ends.push((a, b));
        for x in [a, b] {
            self.to.push(slot);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    /// Unions `blues` (must be a forest of valid candidates) and runs the red
    /// completion. Returns the scaled cost of the kept reds if an integer
    /// scale exists, else zero.
    fn complete(&mut self, blues: &[EdgeKey]) -> Result<i128, PricingError> {
        self.uf.reset();
        for &e in blues {
            if !self.uf.union(e.u, e.v) {
                return Err(PricingError::BlueCycle(e));
            }
        }
        self.cross.clear();
        let mut kept = 0i128;
        self.head.fill(NONE);
        self.next.clear();
        self.to.clear();
        self.slot_blue.clear();
        self.slot_ends.clear();
        for (i, &e) in blues.iter().enumerate() {
            self.add_slot(i, e.u, e.v);
        }
        for idx in 0..self.reds.len() {
            let (k, r) = self.reds[idx];
            if self.uf.union(k.u, k.v) {
                if let Some(s) = &self.scaled {
                    kept += s[r];
                }
                self.add_slot(NONE, k.u, k.v);
            } else {
                self.cross.push((k, r));
            }
        }
        Ok(kept)
    }

    /// Scaled cost of the reds Kruskal adds on top of the partition already
    /// held by `uf`.
    pub fn kept_cost_with(&self, uf: &mut UnionFind) -> i128 {
        let s = self.scaled.as_ref().expect("integer scale available");
        let mut kept = 0;
        for &(k, r) in &self.reds {
            if uf.union(k.u, k.v) {
                kept += s[r];
            }
        }
        kept
    }

    /// Cost rank of each blue edge's optimal price, in input order. The blue
    /// set must consist of valid candidates; only acyclicity is checked.
    pub fn price_ranks(&mut self, blues: &[EdgeKey]) -> Result<&[usize], PricingError> {
        self.complete(blues)?;
        self.finish(blues);
        Ok(&self.ranks)
    }

    /// Scaled revenue and scaled kept-red cost of `blues`.
    pub fn scaled_revenue_and_kept(
        &mut self,
        blues: &[EdgeKey],
    ) -> Result<(i128, i128), PricingError> {
        let kept = self.complete(blues)?;
        self.finish(blues);
        let s = self.scaled.as_ref().expect("integer scale available");
        Ok((self.ranks.iter().map(|&r| s[r]).sum(), kept))
    }

    pub fn revenue(&mut self, blues: &[EdgeKey]) -> Result<Value, PricingError> {
        let costs = self.costs.clone();
        let ranks = self.price_ranks(blues)?;
        Ok(ranks.iter().map(|&r| costs[r]).sum())
    }

    pub fn prices(&mut self, blues: &[EdgeKey]) -> Result<Vec<Value>, PricingError> {
        let costs = self.costs.clone();
        let ranks = self.price_ranks(blues)?;
        Ok(ranks.iter().map(|&r| costs[r]).collect())
    }

    fn finish(&mut self, blues: &[EdgeKey]) {
        // Root the tree M at vertex 0 and record parent slots.
        self.parent.fill(NONE);
        self.parent_slot.fill(NONE);
        self.assigned.fill(NONE);
        self.order.clear();
        self.order.push(0);
        self.parent[0] = 0;
        self.depth[0] = 0;
        let mut qi = 0;
        while qi < self.order.len() {
            let x = self.order[qi];
            qi += 1;
            let mut arc = self.head[x];
            while arc != NONE {
                let slot = self.to[arc];
                let (a, b) = self.slot_ends[slot];
                let y = if a == x { b } else { a };
                if self.parent[y] == NONE {
                    self.parent[y] = x;
                    self.parent_slot[y] = slot;
                    self.depth[y] = self.depth[x] + 1;
                    self.order.push(y);
                }
                arc = self.next[arc];
            }
        }
        debug_assert_eq!(self.order.len(), self.n);
        for ci in 0..self.cross.len() {
            let (k, r) = self.cross[ci];
            let (mut a, mut b) = (k.u, k.v);
            while a != b {
                if self.depth[a] < self.depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                if self.assigned[a] == NONE {
                    self.assigned[a] = r;
                }
                a = self.parent[a];
            }
        }
        self.ranks.clear();
        self.ranks.resize(blues.len(), 0);
        for v in 0..self.n {
            let slot = self.parent_slot[v];
            if slot != NONE && self.slot_blue[slot] != NONE {
                self.ranks[self.slot_blue[slot]] = self.assigned[v];
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RedTree;

    fn v(x: i64) -> Value {
        Value::from(x)
    }

    fn k(a: usize, b: usize) -> EdgeKey {
        EdgeKey::new(a, b)
    }

    #[test]
    fn single_cycle_path() {
        let inst = GameInstance::complete(RedTree::path(&[v(1), v(2)])).unwrap();
        let res = optimal_prices(&inst, &[k(0, 2)]).unwrap();
        assert_eq!(res.prices, vec![(k(0, 2), v(2))]);
        assert_eq!(res.revenue, v(2));
    }

    #[test]
    fn star_fan_from_cheapest_leaf() {
        let inst = GameInstance::complete(RedTree::star(&[v(1), v(2), v(3)])).unwrap();
        let res = optimal_prices(&inst, &[k(1, 2), k(1, 3)]).unwrap();
        assert_eq!(res.price_of(k(1, 2)), Some(v(2)));
        assert_eq!(res.price_of(k(1, 3)), Some(v(3)));
        assert_eq!(res.revenue, v(5));
    }

    #[test]
    fn crossing_pair_on_path() {
        let inst = GameInstance::complete(RedTree::path(&[v(3), v(1), v(3)])).unwrap();
        let res = optimal_prices(&inst, &[k(0, 2), k(1, 3)]).unwrap();
        assert_eq!(res.price_of(k(0, 2)), Some(v(3)));
        assert_eq!(res.price_of(k(1, 3)), Some(v(3)));
        assert_eq!(res.revenue, v(6));
    }

    #[test]
    fn empty_set_and_lone_edges() {
        let inst = GameInstance::complete(RedTree::path(&[v(4), v(1), v(2), v(7)])).unwrap();
        assert_eq!(revenue_of(&inst, &[]).unwrap(), Value::ZERO);
        for (a, b) in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (0, 4)] {
            assert_eq!(
                revenue_of(&inst, &[k(a, b)]).unwrap(),
                tree_path_max(&inst, a, b)
            );
        }
    }

    #[test]
    fn rejects_cycles_and_strangers() {
        let inst = GameInstance::complete(RedTree::path(&[v(1), v(1), v(1), v(1)])).unwrap();
        assert_eq!(
            optimal_prices(&inst, &[k(0, 2), k(2, 4), k(0, 4)]),
            Err(PricingError::BlueCycle(k(0, 4)))
        );
        assert_eq!(
            optimal_prices(&inst, &[k(0, 1)]),
            Err(PricingError::NotACandidate(k(0, 1)))
        );
    }

    #[test]
    fn fast_pricer_agrees_on_examples() {
        let inst = GameInstance::complete(RedTree::path(&[v(3), v(1), v(3)])).unwrap();
        let mut p = Pricer::new(&inst);
        assert_eq!(p.prices(&[k(0, 2), k(1, 3)]).unwrap(), vec![v(3), v(3)]);
        assert_eq!(p.revenue(&[k(1, 3)]).unwrap(), v(3));
        assert_eq!(p.revenue(&[]).unwrap(), Value::ZERO);
    }
}
