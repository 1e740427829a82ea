//! Exact solver for complete instances whose red costs take two values
//! `a < b`.
//!
//! An a-block is a maximal connected set of cost-`a` red edges; it is bad
//! when it is a star. With `σ` bad blocks the optimum is
//! `c(T) - min(σa, ⌊σ/2⌋(b-a) + (σ mod 2)·min(a, b-a))`.
//!
//! If the blue edges plus any kept reds form a spanning tree, a blue edge is
//! worth the cheapest red edge crossing its fundamental cut: `a` when it lies
//! on the blue path between the ends of some `a` edge, `b` otherwise. Each
//! group of blocks therefore gets a blue tree on its core vertices (sold at
//! `a`), and every remaining vertex hangs off a core by a blue edge sold at
//! `b`. A star cannot be spanned by blue edges on its own vertex set, which is
//! where the losses come from:
//!
//! - a good block alone loses nothing;
//! - a bad block can keep one red edge and fan its other leaves (loses `a`);
//! - a bad block can share one blue tree with another bad block, a good block,
//!   or a vertex that no `a` edge touches; the shared tree sells one extra edge
//!   at `a` (loses `b - a`).

use std::collections::VecDeque;

use serde::Serialize;

use crate::follower::run_follower;
use crate::model::{EdgeKey, GameInstance, PricedSolution, Vertex};
use crate::oracle::{self, OracleError};
use crate::pricing::optimal_prices;
use crate::union_find::UnionFind;
use crate::value::Value;

/// Trees with at most this many edges are handed to the oracle.
pub const ORACLE_EDGES: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwoCostError {
    #[error("costs not in {{a,b}}: {0} distinct red costs")]
    TooManyCosts(usize),
    #[error("costs not in {{a,b}}: {0}")]
    ForeignCost(Value),
    #[error("need a < b, got a = {a}, b = {b}")]
    Order { a: Value, b: Value },
    #[error("red tree is not a path")]
    NotAPath,
    #[error("two-cost solver needs a complete blue catalog")]
    NotComplete,
    #[error("rule {rule} does not apply: {reason}")]
    Pattern { rule: u8, reason: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockClass {
    Good,
    Bad,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub edges: Vec<EdgeKey>,
    pub vertices: Vec<Vertex>,
    pub class: BlockClass,
}

impl Block {
    /// Vertices touching every edge of the block: the centre of a star with
    /// two or more edges, both ends of a single edge, nothing otherwise.
    pub fn universal(&self) -> Vec<Vertex> {
        self.vertices
            .iter()
            .copied()
            .filter(|&x| self.edges.iter().all(|e| e.touches(x)))
            .collect()
    }

    fn is_star(edges: &[EdgeKey]) -> bool {
        edges.len() <= 2 || {
            let e = edges[0];
            [e.u, e.v].iter().any(|&x| edges.iter().all(|f| f.touches(x)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockStructure {
    /// Ordered by smallest vertex.
    pub blocks: Vec<Block>,
    pub sigma: usize,
}

/// The a-blocks of `instance`. Fails if some red cost is neither `a` nor `b`.
pub fn find_blocks(
    instance: &GameInstance,
    a: Value,
    b: Value,
) -> Result<BlockStructure, TwoCostError> {
    if a >= b {
        return Err(TwoCostError::Order { a, b });
    }
    if let Some(e) = instance.red_edges().iter().find(|e| e.cost != a && e.cost != b) {
        return Err(TwoCostError::ForeignCost(e.cost));
    }
    Ok(blocks_of_cost(instance, a))
}

fn blocks_of_cost(instance: &GameInstance, a: Value) -> BlockStructure {
    let n = instance.n();
    let mut uf = UnionFind::new(n);
    for e in instance.red_edges().iter().filter(|e| e.cost == a) {
        uf.union(e.key.u, e.key.v);
    }
    let mut slot = vec![usize::MAX; n];
    let mut groups: Vec<Vec<EdgeKey>> = Vec::new();
    // Edges are sorted, so blocks come out ordered by their smallest vertex.
    for e in instance.red_edges().iter().filter(|e| e.cost == a) {
        let r = uf.find(e.key.u);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(e.key);
    }
    let blocks: Vec<Block> = groups
        .into_iter()
        .map(|edges| {
            let mut vertices: Vec<Vertex> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let class = if Block::is_star(&edges) {
                BlockClass::Bad
            } else {
                BlockClass::Good
            };
            Block {
                edges,
                vertices,
                class,
            }
        })
        .collect();
    let sigma = blocks.iter().filter(|b| b.class == BlockClass::Bad).count();
    BlockStructure { blocks, sigma }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCostProfile {
    pub a: Value,
    /// `None` when every red edge has the same cost.
    pub b: Option<Value>,
    pub blocks: BlockStructure,
    pub sigma: usize,
}

impl TwoCostProfile {
    pub fn of(instance: &GameInstance) -> Result<Self, TwoCostError> {
        let costs = instance.tree().distinct_costs();
        let (a, b) = match costs[..] {
            [] => (Value::ZERO, None),
            [a] => (a, None),
            [a, b] => (a, Some(b)),
            _ => return Err(TwoCostError::TooManyCosts(costs.len())),
        };
        let blocks = blocks_of_cost(instance, a);
        Ok(TwoCostProfile {
            a,
            b,
            sigma: blocks.sigma,
            blocks,
        })
    }

    /// `c(T)` minus the optimum.
    pub fn penalty(&self) -> Value {
        let sigma = Value::from(self.sigma);
        let all_kept = sigma * self.a;
        let Some(b) = self.b else {
            return all_kept;
        };
        let gap = b - self.a;
        let odd = self.sigma % 2 == 1;
        let paired = Value::from(self.sigma / 2) * gap + if odd { self.a.min(gap) } else { Value::ZERO };
        all_kept.min(paired)
    }
}

pub fn closed_form_optimum(instance: &GameInstance) -> Result<Value, TwoCostError> {
    let profile = TwoCostProfile::of(instance)?;
    Ok(instance.total_cost() - profile.penalty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    /// A good block on its own.
    Good,
    /// A bad block keeping one red edge.
    KeepRed,
    /// A bad block sharing a tree with a vertex no `a` edge touches.
    WithPartner,
    /// Two bad blocks.
    Pair,
    /// A bad block and a good block.
    WithGood,
    /// Three bad blocks.
    Triple,
}

impl GroupKind {
    /// Rule number, 1 to 4, of the case this group handles.
    pub fn rule(self) -> u8 {
        match self {
            GroupKind::Good => 1,
            GroupKind::KeepRed => 2,
            GroupKind::WithPartner | GroupKind::WithGood => 3,
            GroupKind::Pair | GroupKind::Triple => 4,
        }
    }

    pub fn penalty(self, a: Value, b: Option<Value>) -> Value {
        let gap = b.map_or(Value::ZERO, |b| b - a);
        match self {
            GroupKind::Good => Value::ZERO,
            GroupKind::KeepRed => a,
            GroupKind::WithPartner | GroupKind::WithGood | GroupKind::Pair => gap,
            GroupKind::Triple => gap + gap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    pub kind: GroupKind,
    /// Indices into the block list.
    pub blocks: Vec<usize>,
    pub partner: Option<Vertex>,
    /// Sorted vertices spanned by the group's own blue tree.
    pub core: Vec<Vertex>,
}

/// Smallest vertex free of `a` edges and not red-adjacent to the block's
/// universal vertices.
fn find_partner(instance: &GameInstance, block: &Block, in_block: &[bool]) -> Option<Vertex> {
    let universal = block.universal();
    (0..instance.n()).find(|&w| {
        !in_block[w] && universal.iter().all(|&x| !instance.is_red(EdgeKey::new(w, x)))
    })
}

/// Decides which blocks share blue trees.
pub fn plan_groups(instance: &GameInstance, profile: &TwoCostProfile) -> Vec<Group> {
    let blocks = &profile.blocks.blocks;
    let mut in_block = vec![false; instance.n()];
    for v in blocks.iter().flat_map(|b| &b.vertices) {
        in_block[*v] = true;
    }
    let bad: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].class == BlockClass::Bad).collect();
    let mut good: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i].class == BlockClass::Good).collect();
    let keep_all = match profile.b {
        None => true,
        Some(_) => Value::from(bad.len()) * profile.a <= profile.penalty(),
    };

    let mut groups = Vec::new();
    let single = |kind, ids: Vec<usize>, partner| Group {
        kind,
        blocks: ids,
        partner,
        core: Vec::new(),
    };
    if keep_all {
        groups.extend(bad.iter().map(|&i| single(GroupKind::KeepRed, vec![i], None)));
    } else {
        let gap = profile.b.expect("two costs") - profile.a;
        let mut rest = bad.clone();
        let mut leftover = Vec::new();
        if rest.len() % 2 == 1 {
            let share = gap < profile.a;
            // Prefer the last bad block that has a partner vertex.
            let with_partner = share
                .then(|| {
                    rest.iter().rposition(|&i| find_partner(instance, &blocks[i], &in_block).is_some())
                })
                .flatten();
            if let Some(pos) = with_partner {
                let i = rest.remove(pos);
                let w = find_partner(instance, &blocks[i], &in_block);
                leftover.push(single(GroupKind::WithPartner, vec![i], w));
            } else {
                let i = rest.pop().expect("odd count");
                if share && !good.is_empty() {
                    let g = good.remove(0);
                    leftover.push(single(GroupKind::WithGood, vec![i, g], None));
                } else if share && rest.len() >= 2 {
                    let y = rest.pop().expect("pair");
                    let x = rest.pop().expect("pair");
                    leftover.push(single(GroupKind::Triple, vec![x, y, i], None));
                } else {
                    leftover.push(single(GroupKind::KeepRed, vec![i], None));
                }
            }
        }
        for pair in rest.chunks(2) {
            groups.push(single(GroupKind::Pair, pair.to_vec(), None));
        }
        groups.extend(leftover);
    }
    groups.extend(good.iter().map(|&i| single(GroupKind::Good, vec![i], None)));
    groups.sort_by_key(|g| g.blocks.iter().min().copied());
    for g in &mut groups {
        let mut core: Vec<Vertex> = g.blocks.iter().flat_map(|&i| blocks[i].vertices.iter().copied()).collect();
        core.extend(g.partner);
        core.sort_unstable();
        g.core = core;
    }
    groups
}

/// Spanning tree of `core` using only non-red pairs: breadth-first from the
/// smallest vertex, neighbours in id order.
fn complement_tree(instance: &GameInstance, core: &[Vertex]) -> Option<Vec<EdgeKey>> {
    let mut seen = vec![false; core.len()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut tree = Vec::with_capacity(core.len().saturating_sub(1));
    while let Some(i) = queue.pop_front() {
        for j in 0..core.len() {
            let e = EdgeKey::new(core[i], core[j]);
            if !seen[j] && !instance.is_red(e) {
                seen[j] = true;
                tree.push(e);
                queue.push_back(j);
            }
        }
    }
    (tree.len() + 1 == core.len()).then_some(tree)
}

/// Blue edges and kept reds spanning a group's core.
fn core_edges(
    instance: &GameInstance,
    profile: &TwoCostProfile,
    group: &Group,
) -> (Vec<EdgeKey>, Vec<EdgeKey>) {
    if group.kind == GroupKind::KeepRed {
        let block = &profile.blocks.blocks[group.blocks[0]];
        let s = block.universal()[0];
        let leaves: Vec<Vertex> = block.vertices.iter().copied().filter(|&x| x != s).collect();
        let fan = leaves[1..].iter().map(|&l| EdgeKey::new(leaves[0], l)).collect();
        return (fan, vec![EdgeKey::new(s, leaves[0])]);
    }
    let tree = complement_tree(instance, &group.core)
        .expect("a non-star core always has a blue spanning tree");
    (tree, Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub group: usize,
    pub kind: GroupKind,
    /// Red edges assigned to this group.
    pub region: Vec<EdgeKey>,
    /// Blue tree (or fan) on the core.
    pub core_blues: Vec<EdgeKey>,
    /// Blue edges hanging region vertices off the core.
    pub attachments: Vec<EdgeKey>,
    /// Red edges the group relies on keeping.
    pub kept: Vec<EdgeKey>,
    /// Whether `region` is a connected subtree containing the core.
    pub connected: bool,
    /// `c(region)` minus the group's loss.
    pub contract: Value,
}

/// Splits the red edges among groups and builds each group's blue edges.
///
/// Vertices go to the nearest core by a multi-source breadth-first search
/// (sources in group order, then by id). An edge whose ends share an owner
/// goes to that group, any other to the lower-numbered group. Within its
/// region, each non-core vertex gets a blue edge to the smallest core vertex
/// it is not red-adjacent to.
pub fn fragments(
    instance: &GameInstance,
    profile: &TwoCostProfile,
    groups: &[Group],
) -> Vec<Fragment> {
    let n = instance.n();
    let mut owner = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (g, group) in groups.iter().enumerate() {
        for &v in &group.core {
            owner[v] = g;
            queue.push_back(v);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in instance.neighbors(x) {
            if owner[y] == usize::MAX {
                owner[y] = owner[x];
                queue.push_back(y);
            }
        }
    }
    let mut regions = vec![Vec::new(); groups.len()];
    for e in instance.red_edges() {
        let (p, q) = (owner[e.key.u], owner[e.key.v]);
        regions[p.min(q)].push(e.key);
    }

    let costs = |edges: &[EdgeKey]| -> Value {
        edges
            .iter()
            .map(|&e| instance.red_edges()[instance.red_id(e).expect("red")].cost)
            .sum()
    };
    groups
        .iter()
        .enumerate()
        .map(|(g, group)| {
            let (core_blues, kept) = core_edges(instance, profile, group);
            let mut attachments = Vec::new();
            let mut vertices: Vec<Vertex> = regions[g].iter().flat_map(|e| [e.u, e.v]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            for &x in vertices.iter().filter(|x| group.core.binary_search(x).is_err()) {
                let w = group
                    .core
                    .iter()
                    .copied()
                    .find(|&w| !instance.is_red(EdgeKey::new(x, w)))
                    .expect("no vertex is red-adjacent to a whole core");
                attachments.push(EdgeKey::new(x, w));
            }
            let mut uf = UnionFind::new(n);
            for e in &regions[g] {
                uf.union(e.u, e.v);
            }
            let root = group.core[0];
            let connected = vertices.iter().chain(&group.core).all(|&v| uf.same(v, root));
            let contract = costs(&regions[g]) - group.kind.penalty(profile.a, profile.b);
            Fragment {
                group: g,
                kind: group.kind,
                region: regions[g].clone(),
                core_blues,
                attachments,
                kept,
                connected,
                contract,
            }
        })
        .collect()
}

impl Fragment {
    pub fn blues(&self) -> Vec<EdgeKey> {
        let mut all: Vec<EdgeKey> = self.core_blues.iter().chain(&self.attachments).copied().collect();
        all.sort();
        all
    }
}

/// Joins fragments into one blue forest: every core tree first, then the
/// attachments. Attachments that would close a blue cycle (only possible when
/// some region is disconnected) are skipped, and any remaining components are
/// linked by non-red pairs in id order.
fn assemble(instance: &GameInstance, fragments: &[Fragment]) -> Vec<EdgeKey> {
    let n = instance.n();
    let mut uf = UnionFind::new(n);
    let mut out = Vec::with_capacity(n);
    for f in fragments {
        for &e in &f.kept {
            uf.union(e.u, e.v);
        }
    }
    let cores = fragments.iter().flat_map(|f| &f.core_blues);
    for e in cores.chain(fragments.iter().flat_map(|f| &f.attachments)) {
        if uf.union(e.u, e.v) {
            out.push(*e);
        }
    }
    if uf.components() > 1 {
        for c in instance.candidates() {
            if uf.union(c.key.u, c.key.v) {
                out.push(c.key);
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoCostOutcome {
    pub profile: TwoCostProfile,
    pub groups: Vec<Group>,
    pub solution: PricedSolution,
    /// Follower revenue of `solution`.
    pub revenue: Value,
    pub closed_form: Value,
    /// Solved by the oracle because the tree is small.
    pub delegated: bool,
}

fn check_complete(instance: &GameInstance) -> Result<(), TwoCostError> {
    if instance.is_complete() {
        Ok(())
    } else {
        Err(TwoCostError::NotComplete)
    }
}

/// Priced solution for `blues`, confirmed by the follower.
fn priced(instance: &GameInstance, blues: &[EdgeKey]) -> (PricedSolution, Value) {
    let prices = optimal_prices(instance, blues).expect("construction keeps the blue set a forest");
    let solution = prices.solution();
    let follower = run_follower(instance, &solution).expect("construction uses candidates only");
    debug_assert_eq!(follower.revenue, prices.revenue);
    (solution, follower.revenue)
}

pub fn solve_two_cost_tree(instance: &GameInstance) -> Result<TwoCostOutcome, TwoCostError> {
    check_complete(instance)?;
    let profile = TwoCostProfile::of(instance)?;
    let closed_form = instance.total_cost() - profile.penalty();
    let groups = plan_groups(instance, &profile);
    if instance.red_edges().len() <= ORACLE_EDGES {
        let res = oracle::solve_exact(instance, oracle::DEFAULT_GUARD)?;
        let solution = res.best_prices.solution();
        let revenue = run_follower(instance, &solution).expect("oracle uses candidates").revenue;
        return Ok(TwoCostOutcome {
            profile,
            groups,
            solution,
            revenue,
            closed_form,
            delegated: true,
        });
    }
    let (solution, revenue) = if groups.is_empty() {
        // No a-block at all can only mean a single-edge tree or no edges.
        (PricedSolution::empty(), Value::ZERO)
    } else {
        let frags = fragments(instance, &profile, &groups);
        priced(instance, &assemble(instance, &frags))
    };
    Ok(TwoCostOutcome {
        profile,
        groups,
        solution,
        revenue,
        closed_form,
        delegated: false,
    })
}

pub fn solve_two_cost_path(instance: &GameInstance) -> Result<TwoCostOutcome, TwoCostError> {
    if !instance.is_path() {
        return Err(TwoCostError::NotAPath);
    }
    solve_two_cost_tree(instance)
}

/// Applies one rule to an instance that is exactly the rule's subtree.
///
/// Rule 1 wants a single good block, Rule 2 a single bad one, Rule 3 a single
/// bad block plus a vertex untouched by `a` edges and not adjacent to the
/// block's centre, Rule 4 exactly two bad blocks.
pub fn rule_gadget(instance: &GameInstance, rule: u8) -> Result<PricedSolution, TwoCostError> {
    check_complete(instance)?;
    let profile = TwoCostProfile::of(instance)?;
    let blocks = &profile.blocks.blocks;
    let mismatch = |reason: &str| TwoCostError::Pattern {
        rule,
        reason: reason.to_string(),
    };
    let classes: Vec<BlockClass> = blocks.iter().map(|b| b.class).collect();
    let (kind, partner) = match (rule, &classes[..]) {
        (1, [BlockClass::Good]) => (GroupKind::Good, None),
        (2, [BlockClass::Bad]) => (GroupKind::KeepRed, None),
        (3, [BlockClass::Bad]) => {
            let mut in_block = vec![false; instance.n()];
            for &v in &blocks[0].vertices {
                in_block[v] = true;
            }
            if profile.b.is_none() {
                return Err(mismatch("needs an edge of cost b"));
            }
            let w = find_partner(instance, &blocks[0], &in_block)
                .ok_or_else(|| mismatch("no vertex can share the block's tree"))?;
            (GroupKind::WithPartner, Some(w))
        }
        (4, [BlockClass::Bad, BlockClass::Bad]) => (GroupKind::Pair, None),
        (1..=4, _) => return Err(mismatch("block pattern does not match")),
        _ => return Err(mismatch("rules are numbered 1 to 4")),
    };
    let mut core: Vec<Vertex> = blocks.iter().flat_map(|b| b.vertices.iter().copied()).collect();
    core.extend(partner);
    core.sort_unstable();
    let group = Group {
        kind,
        blocks: (0..blocks.len()).collect(),
        partner,
        core,
    };
    let frags = fragments(instance, &profile, std::slice::from_ref(&group));
    Ok(priced(instance, &assemble(instance, &frags)).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::RedTree;

    fn v(x: i64) -> Value {
        Value::from(x)
    }

    fn path(costs: &[i64]) -> GameInstance {
        let c: Vec<Value> = costs.iter().map(|&x| v(x)).collect();
        GameInstance::complete(RedTree::path(&c)).unwrap()
    }

    #[test]
    fn blocks_on_paths() {
        let s = find_blocks(&path(&[2, 1, 1, 1, 2]), v(1), v(2)).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].class, BlockClass::Good);
        assert_eq!(s.sigma, 0);
        let s = find_blocks(&path(&[1, 2, 1]), v(1), v(2)).unwrap();
        assert_eq!(s.sigma, 2);
        assert!(matches!(
            find_blocks(&path(&[1, 3, 2]), v(1), v(2)),
            Err(TwoCostError::ForeignCost(_))
        ));
    }

    #[test]
    fn spider_block_is_bad() {
        let tree = RedTree::new(7, [(0, 1, v(1)), (0, 2, v(1)), (0, 3, v(1)), (1, 4, v(2)), (2, 5, v(2)), (3, 6, v(2))]);
        let inst = GameInstance::complete(tree).unwrap();
        let s = find_blocks(&inst, v(1), v(2)).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].class, BlockClass::Bad);
        assert_eq!(s.blocks[0].universal(), vec![0]);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_optimum(&path(&[2, 1, 1, 1, 2])).unwrap(), v(7));
        assert_eq!(closed_form_optimum(&path(&[3, 1, 3])).unwrap(), v(6));
        assert_eq!(closed_form_optimum(&path(&[2, 3, 2, 3])).unwrap(), v(9));
        assert_eq!(
            closed_form_optimum(&path(&[1, 2, 3])),
            Err(TwoCostError::TooManyCosts(3))
        );
    }

    #[test]
    fn gadgets_meet_their_contracts() {
        let r1 = rule_gadget(&path(&[2, 1, 1, 1]), 1).unwrap();
        assert_eq!(r1.listed_revenue(), v(5));
        let r2 = rule_gadget(&path(&[3, 1]), 2).unwrap();
        assert_eq!(r2.listed_revenue(), v(3));
        let r4 = rule_gadget(&path(&[2, 3, 2]), 4).unwrap();
        assert_eq!(r4.listed_revenue(), v(6));
        // b, b, a: vertex 0 can share the block's tree
        let r3 = rule_gadget(&path(&[3, 3, 2]), 3).unwrap();
        assert_eq!(r3.listed_revenue(), v(8 - 1));
        assert!(matches!(rule_gadget(&path(&[3, 1]), 1), Err(TwoCostError::Pattern { .. })));
    }

    #[test]
    fn long_paths_reach_the_closed_form() {
        for costs in [[3, 1, 3, 3, 1, 3, 3], [1, 3, 1, 1, 3, 1, 3], [2, 3, 3, 2, 3, 3, 3]] {
            let inst = path(&costs);
            let out = solve_two_cost_path(&inst).unwrap();
            assert!(!out.delegated);
            assert_eq!(out.revenue, out.closed_form, "costs {costs:?}");
            let res = oracle::solve_exact(&inst, oracle::DEFAULT_GUARD).unwrap();
            assert_eq!(res.optimum, out.revenue, "costs {costs:?}");
        }
    }

    #[test]
    fn single_cost_star_keeps_one_edge() {
        let inst = GameInstance::complete(RedTree::star(&[v(2); 6])).unwrap();
        let out = solve_two_cost_tree(&inst).unwrap();
        assert_eq!(out.closed_form, v(10));
        assert_eq!(out.revenue, v(10));
    }

    #[test]
    fn rejects_non_paths_and_partial_catalogs() {
        let star = GameInstance::complete(RedTree::star(&[v(1); 3])).unwrap();
        assert_eq!(solve_two_cost_path(&star).unwrap_err(), TwoCostError::NotAPath);
        let explicit = GameInstance::new(
            RedTree::path(&[v(1), v(2)]),
            crate::model::BlueCatalog::explicit([(0, 2, v(0))]),
            crate::model::Budget::Unbounded,
        )
        .unwrap();
        assert_eq!(solve_two_cost_tree(&explicit).unwrap_err(), TwoCostError::NotComplete);
    }
}
