//! Solvers for instances with activation costs and a budget.
//!
//! [`single_price`] tries every red cost as a uniform blue price.
//! [`solve_level_star`] roots the tree at its center and, for each level,
//! contracts everything but that level's parent edges into a star, picks
//! blue edges with a knapsack over the star's leaves, splits them into two
//! star forests and maps the better one back. It is a `(2h+ε)`-approximation
//! for a tree of radius `h`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::follower::run_follower;
use crate::model::{BlueCatalog, Budget, EdgeKey, GameInstance, PricedSolution, RedTree, Vertex};
use crate::pricing::optimal_prices;
use crate::union_find::UnionFind;
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BudgetedError {
    #[error("level {level} outside 1..={radius}")]
    LevelOutOfRange { level: usize, radius: usize },
    #[error("epsilon must be positive")]
    Epsilon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SinglePriceOutcome {
    pub price: Option<Value>,
    /// Revenue for each distinct red cost, ascending.
    pub revenues: Vec<(Value, Value)>,
    pub solution: PricedSolution,
    pub revenue: Value,
}

/// Blues bought by Kruskal when every candidate costs `price`, blue before
/// red at ties and cheaper activation first; the first affordable-cycle-free
/// blue edge that would overflow the budget ends blue buying.
fn single_price_set(instance: &GameInstance, price: Value) -> Vec<EdgeKey> {
    let mut uf = UnionFind::new(instance.n());
    for e in instance.red_edges() {
        if e.cost < price {
            uf.union(e.key.u, e.key.v);
        }
    }
    let mut blues: Vec<(Value, EdgeKey)> = instance.candidates().map(|b| (b.activation, b.key)).collect();
    blues.sort();
    let mut spend = Value::ZERO;
    let mut chosen = Vec::new();
    for (act, key) in blues {
        if uf.find(key.u) == uf.find(key.v) {
            continue;
        }
        if !instance.budget().allows(spend + act) {
            break;
        }
        spend += act;
        uf.union(key.u, key.v);
        chosen.push(key);
    }
    chosen
}

pub fn single_price(instance: &GameInstance) -> SinglePriceOutcome {
    let mut revenues = Vec::new();
    let mut best: Option<(Value, Value, PricedSolution)> = None;
    for price in instance.tree().distinct_costs() {
        let set = single_price_set(instance, price);
        let sol = PricedSolution::new(set.iter().map(|&e| (e, price)));
        let revenue = run_follower(instance, &sol).expect("candidates only").revenue;
        debug_assert_eq!(revenue, price * Value::from(set.len()));
        revenues.push((price, revenue));
        if best.as_ref().is_none_or(|b| revenue > b.1) {
            best = Some((price, revenue, sol));
        }
    }
    match best {
        Some((price, revenue, solution)) => SinglePriceOutcome {
            price: Some(price),
            revenues,
            solution,
            revenue,
        },
        None => SinglePriceOutcome {
            price: None,
            revenues,
            solution: PricedSolution::empty(),
            revenue: Value::ZERO,
        },
    }
}

/// `min{k, 1 + ln β, 1 + ln ρ}`, where `k` counts distinct red costs, `β` the
/// blue edges of an optimal solution and `ρ` the largest red cost ratio. The
/// `ρ` term is skipped when the cheapest red cost is zero.
pub fn single_price_bound(instance: &GameInstance, beta: usize) -> f64 {
    let costs = instance.tree().distinct_costs();
    let mut bound = costs.len() as f64;
    if beta > 0 {
        bound = bound.min(1.0 + (beta as f64).ln());
    }
    if let (Some(lo), Some(hi)) = (costs.first(), costs.last()) {
        if !lo.is_zero() {
            bound = bound.min(1.0 + (*hi / *lo).to_f64().ln());
        }
    }
    bound
}

fn bfs_depths(instance: &GameInstance, root: Vertex) -> (Vec<usize>, Vec<Vertex>) {
    let n = instance.n();
    let mut depth = vec![usize::MAX; n];
    let mut parent = vec![root; n];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in instance.neighbors(x) {
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    (depth, parent)
}

/// Vertex of least eccentricity in edge counts, ties to the smallest id, and
/// that eccentricity.
pub fn tree_center(instance: &GameInstance) -> (Vertex, usize) {
    (0..instance.n())
        .map(|v| (bfs_depths(instance, v).0.into_iter().max().unwrap_or(0), v))
        .min()
        .map(|(h, v)| (v, h))
        .expect("at least one vertex")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCandidate {
    /// Pair of star vertices; 0 is the center.
    pub aux: EdgeKey,
    pub activation: Value,
    pub original: EdgeKey,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelStarInstance {
    pub level: usize,
    pub center: Vertex,
    /// Original vertices at this level, ascending; leaf `j` of the star is
    /// `leaves[j - 1]`.
    pub leaves: Vec<Vertex>,
    pub star_costs: Vec<Value>,
    /// Cheapest original candidate per pair of components.
    pub candidates: Vec<LevelCandidate>,
    /// Star vertex of each original vertex's component.
    pub component_of: Vec<usize>,
    #[serde(skip)]
    pub aux: GameInstance,
}

impl LevelStarInstance {
    /// `c_i(v0, x)`, zero for the center.
    pub fn star_cost(&self, x: usize) -> Value {
        if x == 0 {
            Value::ZERO
        } else {
            self.star_costs[x - 1]
        }
    }

    pub fn original(&self, aux: EdgeKey) -> Option<EdgeKey> {
        self.candidates.iter().find(|c| c.aux == aux).map(|c| c.original)
    }
}

pub fn build_level_star(
    instance: &GameInstance,
    level: usize,
    center: Vertex,
) -> Result<LevelStarInstance, BudgetedError> {
    let (depth, parent) = bfs_depths(instance, center);
    let radius = depth.iter().copied().max().unwrap_or(0);
    if level == 0 || level > radius {
        return Err(BudgetedError::LevelOutOfRange { level, radius });
    }
    let n = instance.n();
    let leaves: Vec<Vertex> = (0..n).filter(|&v| depth[v] == level).collect();
    let star_costs: Vec<Value> = leaves
        .iter()
        .map(|&v| {
            let id = instance.red_id(EdgeKey::new(v, parent[v])).expect("tree edge");
            instance.red_edges()[id].cost
        })
        .collect();

    // Vertices above the level stay with the center; every other vertex
    // belongs to its level-`level` ancestor.
    let mut component_of = vec![0; n];
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| depth[v]);
    for v in order {
        if depth[v] == level {
            component_of[v] = leaves.binary_search(&v).expect("level vertex") + 1;
        } else if depth[v] > level {
            component_of[v] = component_of[parent[v]];
        }
    }

    let mut best: BTreeMap<EdgeKey, (Value, EdgeKey)> = BTreeMap::new();
    for b in instance.candidates() {
        let (x, y) = (component_of[b.key.u], component_of[b.key.v]);
        if x == y {
            continue;
        }
        let slot = best.entry(EdgeKey::new(x, y)).or_insert((b.activation, b.key));
        if (b.activation, b.key) < *slot {
            *slot = (b.activation, b.key);
        }
    }
    let candidates: Vec<LevelCandidate> = best
        .into_iter()
        .map(|(aux, (activation, original))| LevelCandidate {
            aux,
            activation,
            original,
        })
        .collect();
    let tree = RedTree::star(&star_costs);
    let catalog = BlueCatalog::explicit(candidates.iter().map(|c| (c.aux.u, c.aux.v, c.activation)))
        .with_parallel(true);
    let aux = GameInstance::new(tree, catalog, Budget::Unbounded).expect("star with distinct pairs");
    Ok(LevelStarInstance {
        level,
        center,
        leaves,
        star_costs,
        candidates,
        component_of,
        aux,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnapsackItem {
    pub profit: Value,
    pub volume: Value,
    /// Star leaf the item stands for.
    pub tag: usize,
    /// Cheapest star candidate at that leaf.
    pub edge: EdgeKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KnapsackInstance {
    pub items: Vec<KnapsackItem>,
    pub capacity: Budget,
}

impl KnapsackInstance {
    pub fn of_level(star: &LevelStarInstance, capacity: Budget) -> Self {
        let mut items = Vec::new();
        for j in 1..=star.leaves.len() {
            let cheapest = star
                .candidates
                .iter()
                .filter(|c| c.aux.touches(j))
                .min_by_key(|c| (c.activation, c.aux));
            if let Some(c) = cheapest {
                items.push(KnapsackItem {
                    profit: star.star_cost(j),
                    volume: c.activation,
                    tag: j,
                    edge: c.aux,
                });
            }
        }
        KnapsackInstance { items, capacity }
    }

    pub fn profit(&self, chosen: &[usize]) -> Value {
        chosen.iter().map(|&i| self.items[i].profit).sum()
    }

    pub fn volume(&self, chosen: &[usize]) -> Value {
        chosen.iter().map(|&i| self.items[i].volume).sum()
    }
}

/// Indices of a set with profit at least `opt / (1 + eps_prime)`, by profit
/// scaling: with `ε = eps_prime / (1 + eps_prime)` and `S = n / (ε P)`, item
/// profits become `⌊p S⌋` and a dynamic program finds the least volume for
/// every scaled total.
pub fn fptas_knapsack(knapsack: &KnapsackInstance, eps_prime: f64) -> Vec<usize> {
    assert!(eps_prime > 0.0, "eps_prime must be positive");
    let fits: Vec<usize> = (0..knapsack.items.len())
        .filter(|&i| knapsack.capacity.allows(knapsack.items[i].volume))
        .collect();
    let Budget::Finite(capacity) = knapsack.capacity else {
        return fits;
    };
    let max_profit = fits.iter().map(|&i| knapsack.items[i].profit).max().unwrap_or(Value::ZERO);
    if max_profit.is_zero() {
        return Vec::new();
    }
    let eps = Value::from_f64(eps_prime / (1.0 + eps_prime));
    let scale = Value::from(fits.len()) / (eps * max_profit);
    let scaled: Vec<usize> = fits
        .iter()
        .map(|&i| (knapsack.items[i].profit * scale).floor() as usize)
        .collect();
    let top: usize = scaled.iter().sum();

    // best[k][p]: least volume over the first k items reaching scaled profit p.
    let mut best = vec![vec![None::<Value>; top + 1]; fits.len() + 1];
    best[0][0] = Some(Value::ZERO);
    for (k, &i) in fits.iter().enumerate() {
        let vol = knapsack.items[i].volume;
        for p in 0..=top {
            let skip = best[k][p];
            let take = (p >= scaled[k])
                .then(|| best[k][p - scaled[k]])
                .flatten()
                .map(|v| v + vol)
                .filter(|&v| v <= capacity);
            best[k + 1][p] = match (skip, take) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
    }
    let mut p = (0..=top).rev().find(|&p| best[fits.len()][p].is_some()).unwrap_or(0);
    let mut chosen = Vec::new();
    for k in (0..fits.len()).rev() {
        if best[k][p] == best[k + 1][p] {
            continue;
        }
        chosen.push(fits[k]);
        p -= scaled[k];
    }
    chosen.reverse();
    chosen
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarSplit {
    pub first: Vec<EdgeKey>,
    pub second: Vec<EdgeKey>,
}

/// Two star forests inside `edges` whose leaves together cover every
/// endpoint. Each component gets a BFS spanning tree from its smallest
/// vertex; vertices of the root's color class each keep one tree edge in
/// `first`, the others one in `second`, so `first` has its centers off the
/// root's class and `second` on it.
pub fn bipartite_star_split(edges: &[EdgeKey]) -> StarSplit {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    for list in adj.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut color: BTreeMap<Vertex, bool> = BTreeMap::new();
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut first_child: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let vertices: Vec<Vertex> = adj.keys().copied().collect();
    for &root in &vertices {
        if color.contains_key(&root) {
            continue;
        }
        color.insert(root, false);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if !color.contains_key(&y) {
                    color.insert(y, !color[&x]);
                    parent.insert(y, x);
                    first_child.entry(x).or_insert(y);
                    queue.push_back(y);
                }
            }
        }
    }
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for &x in &vertices {
        let Some(&y) = parent.get(&x).or_else(|| first_child.get(&x)) else {
            continue;
        };
        let e = EdgeKey::new(x, y);
        if color[&x] {
            second.push(e);
        } else {
            first.push(e);
        }
    }
    first.sort();
    first.dedup();
    second.sort();
    second.dedup();
    StarSplit { first, second }
}

/// Leaves of a star forest; a lone edge counts the endpoint with the larger
/// weight, the smaller id on ties.
pub fn star_forest_leaves(edges: &[EdgeKey], weight: impl Fn(Vertex) -> Value) -> Vec<Vertex> {
    let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
    for e in edges {
        *degree.entry(e.u).or_default() += 1;
        *degree.entry(e.v).or_default() += 1;
    }
    let mut leaves = Vec::new();
    for e in edges {
        match (degree[&e.u], degree[&e.v]) {
            (1, 1) => leaves.push(if weight(e.v) > weight(e.u) { e.v } else { e.u }),
            (1, _) => leaves.push(e.u),
            (_, 1) => leaves.push(e.v),
            _ => panic!("{e} joins two centers; not a star forest"),
        }
    }
    leaves.sort_unstable();
    leaves
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub knapsack: KnapsackInstance,
    pub chosen_items: Vec<usize>,
    /// Star candidates tied to the chosen items.
    pub selected: Vec<EdgeKey>,
    pub split: StarSplit,
    /// Star revenues of the two forests.
    pub split_revenues: [Value; 2],
    /// Sum of star costs over the endpoints of `selected`.
    pub endpoint_cost: Value,
    /// 1 or 2.
    pub kept: u8,
    pub leaf_cost: Value,
    pub star_revenue: Value,
    pub mapped: Vec<EdgeKey>,
    pub revenue: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelStarOutcome {
    pub center: Vertex,
    pub radius: usize,
    pub levels: Vec<LevelReport>,
    pub best_level: Option<usize>,
    pub solution: PricedSolution,
    pub revenue: Value,
    /// `2h + ε`.
    pub certified_factor: f64,
}

fn run_level(instance: &GameInstance, star: &LevelStarInstance, eps_prime: f64) -> LevelReport {
    let knapsack = KnapsackInstance::of_level(star, instance.budget());
    let chosen_items = fptas_knapsack(&knapsack, eps_prime);
    let mut selected: Vec<EdgeKey> = chosen_items.iter().map(|&i| knapsack.items[i].edge).collect();
    selected.sort();
    selected.dedup();
    let mut ends: Vec<usize> = selected.iter().flat_map(|e| [e.u, e.v]).collect();
    ends.sort_unstable();
    ends.dedup();
    let endpoint_cost: Value = ends.iter().map(|&x| star.star_cost(x)).sum();

    let split = bipartite_star_split(&selected);
    let star_rev = |set: &[EdgeKey]| optimal_prices(&star.aux, set).expect("star forest").revenue;
    let split_revenues = [star_rev(&split.first), star_rev(&split.second)];
    assert!(
        split_revenues[0] + split_revenues[1] >= endpoint_cost,
        "level {}: split revenues {:?} below endpoint cost {}",
        star.level,
        split_revenues,
        endpoint_cost
    );
    let (kept, forest) = if split_revenues[0] >= split_revenues[1] {
        (1, &split.first)
    } else {
        (2, &split.second)
    };
    let star_revenue = split_revenues[kept as usize - 1];
    let leaf_cost: Value = star_forest_leaves(forest, |x| star.star_cost(x))
        .into_iter()
        .map(|x| star.star_cost(x))
        .sum();
    assert!(
        star_revenue >= leaf_cost,
        "level {}: star revenue {} below leaf cost {}",
        star.level,
        star_revenue,
        leaf_cost
    );
    let mut mapped: Vec<EdgeKey> = forest.iter().map(|&e| star.original(e).expect("star candidate")).collect();
    mapped.sort();
    let revenue = optimal_prices(instance, &mapped).expect("mapped forest is acyclic").revenue;
    assert!(
        revenue >= star_revenue,
        "level {}: mapped revenue {} below star revenue {}",
        star.level,
        revenue,
        star_revenue
    );
    LevelReport {
        level: star.level,
        knapsack,
        chosen_items,
        selected,
        split,
        split_revenues,
        endpoint_cost,
        kept,
        leaf_cost,
        star_revenue,
        mapped,
        revenue,
    }
}

pub fn solve_level_star(instance: &GameInstance, epsilon: f64) -> Result<LevelStarOutcome, BudgetedError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(BudgetedError::Epsilon);
    }
    let (center, radius) = tree_center(instance);
    let mut levels = Vec::new();
    for level in 1..=radius {
        let star = build_level_star(instance, level, center)?;
        levels.push(run_level(instance, &star, epsilon / (2.0 * radius as f64)));
    }
    let mut best_level = None;
    let mut best_revenue = Value::ZERO;
    for r in &levels {
        if best_level.is_none() || r.revenue > best_revenue {
            best_level = Some(r.level);
            best_revenue = r.revenue;
        }
    }
    let solution = match best_level {
        Some(l) => optimal_prices(instance, &levels[l - 1].mapped).expect("acyclic").solution(),
        None => PricedSolution::empty(),
    };
    let revenue = run_follower(instance, &solution).expect("candidates only").revenue;
    debug_assert_eq!(revenue, best_revenue);
    debug_assert!(instance.budget().allows(solution.spend(instance).expect("candidates")));
    Ok(LevelStarOutcome {
        center,
        radius,
        levels,
        best_level,
        solution,
        revenue,
        certified_factor: 2.0 * radius as f64 + epsilon,
    })
}
