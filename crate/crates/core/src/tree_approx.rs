//! Approximation within `7/4 + 7/(2n-4)` for complete instances.
//!
//! The red tree, rooted at a vertex minimising `μ(v)` (its most expensive
//! incident edge), is cut into edge-disjoint stars with at least 3 edges,
//! paths of 3 or 4 edges, and a residual of at most 2 edges touching the
//! root. Each piece is solved on its own and the blue edges are pooled.
//! Stars earn `2/3` of their cost, short paths `4/7`, the residual everything
//! but its cheapest edge.

use std::collections::VecDeque;

use serde::Serialize;

use crate::follower::run_follower;
use crate::model::{EdgeKey, GameInstance, PricedSolution, RedTree, Vertex};
use crate::oracle::{self, OracleError};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeApproxError {
    #[error("tree approximation needs a complete blue catalog")]
    NotComplete,
    #[error("a star piece needs at least 3 edges, got {0}")]
    SmallStar(usize),
    #[error("a short path piece has 3 or 4 edges, got {0}")]
    PathLength(usize),
    #[error("epsilon must be positive")]
    Epsilon,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn cost(instance: &GameInstance, u: Vertex, v: Vertex) -> Value {
    let id = instance.red_id(EdgeKey::new(u, v)).expect("red edge");
    instance.red_edges()[id].cost
}

pub fn mu(instance: &GameInstance, v: Vertex) -> Value {
    instance
        .neighbors(v)
        .iter()
        .map(|&(_, id)| instance.red_edges()[id].cost)
        .max()
        .unwrap_or(Value::ZERO)
}

/// Vertex with the smallest `μ`, ties to the smallest id.
pub fn choose_root(instance: &GameInstance) -> Vertex {
    (0..instance.n())
        .min_by_key(|&v| (mu(instance, v), v))
        .expect("at least one vertex")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PartKind {
    Star { center: Vertex },
    /// Vertices in path order.
    Path { vertices: Vec<Vertex> },
    Residual,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Part {
    pub kind: PartKind,
    /// Decomposition rule that cut the piece; 0 for the residual.
    pub rule: u8,
    pub edges: Vec<EdgeKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreePartition {
    pub root: Vertex,
    /// Stars and paths in the order they were cut, then the residual.
    pub parts: Vec<Part>,
}

impl TreePartition {
    pub fn residual(&self) -> &Part {
        self.parts.last().expect("residual is always present")
    }
}

/// Current forest during decomposition; removed vertices have no edges left.
struct Remaining {
    adj: Vec<Vec<Vertex>>,
}

impl Remaining {
    fn remove(&mut self, u: Vertex, v: Vertex) {
        self.adj[u].retain(|&x| x != v);
        self.adj[v].retain(|&x| x != u);
    }

    /// Parent (root maps to itself) and depth of every vertex still attached.
    fn rooted(&self, root: Vertex) -> (Vec<usize>, Vec<usize>) {
        let n = self.adj.len();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        (parent, depth)
    }
}

/// Repeatedly cuts a piece by the first applicable rule, scanning the
/// deepest leaves in id order:
///
/// 1. a deepest leaf `v` at depth ≥ 2 with a sibling: the star at its parent,
///    including the edge to the grandparent;
/// 2. the parent of `v` has a leaf sibling `u`: the path `v, v̄, v̿, u`;
/// 3. that sibling `u` has one child `u'`: the path `v, v̄, v̿, u, u'`;
/// 4. `v` at depth ≥ 3: the path up to its great-grandparent;
/// 5. the whole tree is a star with at least 3 edges.
///
/// What is left has at most 2 edges, touching the root.
pub fn decompose(instance: &GameInstance, root: Vertex) -> TreePartition {
    let n = instance.n();
    let mut rem = Remaining { adj: vec![Vec::new(); n] };
    for e in instance.red_edges() {
        rem.adj[e.key.u].push(e.key.v);
        rem.adj[e.key.v].push(e.key.u);
    }
    for list in &mut rem.adj {
        list.sort_unstable();
    }
    let mut parts = Vec::new();
    loop {
        let (parent, depth) = rem.rooted(root);
        let attached = |x: usize| parent[x] != usize::MAX;
        let height = (0..n).filter(|&x| attached(x)).map(|x| depth[x]).max().unwrap_or(0);
        if height == 0 {
            break;
        }
        let children = |x: Vertex| -> Vec<Vertex> {
            rem.adj[x].iter().copied().filter(|&y| parent[y] == x && y != root).collect()
        };
        let deepest: Vec<Vertex> = (0..n).filter(|&x| attached(x) && depth[x] == height).collect();
        let mut cut: Option<(PartKind, u8, Vec<Vertex>)> = None;

        if height >= 2 {
            // Rule 1
            if let Some(&v) = deepest.iter().find(|&&v| children(parent[v]).len() >= 2) {
                let p = parent[v];
                let mut leaves = children(p);
                leaves.push(parent[p]);
                cut = Some((PartKind::Star { center: p }, 1, leaves));
            }
            // Rules 2 and 3
            if cut.is_none() {
                for &v in &deepest {
                    let (p, g) = (parent[v], parent[parent[v]]);
                    let siblings: Vec<Vertex> = children(g).into_iter().filter(|&u| u != p).collect();
                    if let Some(&u) = siblings.iter().find(|&&u| children(u).is_empty()) {
                        cut = Some((PartKind::Path { vertices: vec![v, p, g, u] }, 2, Vec::new()));
                        break;
                    }
                }
            }
            if cut.is_none() {
                for &v in &deepest {
                    let (p, g) = (parent[v], parent[parent[v]]);
                    if let Some(&u) = children(g).iter().find(|&&u| u != p) {
                        let below = children(u);
                        debug_assert_eq!(below.len(), 1, "otherwise rule 1 would fire");
                        cut = Some((PartKind::Path { vertices: vec![v, p, g, u, below[0]] }, 3, Vec::new()));
                        break;
                    }
                }
            }
        }
        // Rule 4
        if cut.is_none() && height >= 3 {
            let v = deepest[0];
            let p = parent[v];
            let g = parent[p];
            cut = Some((PartKind::Path { vertices: vec![v, p, g, parent[g]] }, 4, Vec::new()));
        }
        // Rule 5
        if cut.is_none() && height == 1 && rem.adj[root].len() >= 3 {
            cut = Some((PartKind::Star { center: root }, 5, rem.adj[root].clone()));
        }
        let Some((kind, rule, leaves)) = cut else {
            break;
        };
        let mut edges: Vec<EdgeKey> = match &kind {
            PartKind::Star { center } => leaves.iter().map(|&l| EdgeKey::new(*center, l)).collect(),
            PartKind::Path { vertices } => vertices.windows(2).map(|w| EdgeKey::new(w[0], w[1])).collect(),
            PartKind::Residual => unreachable!(),
        };
        edges.sort();
        for e in &edges {
            rem.remove(e.u, e.v);
        }
        parts.push(Part { kind, rule, edges });
    }
    let mut residual: Vec<EdgeKey> = (0..n)
        .flat_map(|x| rem.adj[x].iter().filter(move |&&y| x < y).map(move |&y| EdgeKey::new(x, y)))
        .collect();
    residual.sort();
    parts.push(Part {
        kind: PartKind::Residual,
        rule: 0,
        edges: residual,
    });
    TreePartition { root, parts }
}

/// Blue fan from the cheapest leaf: `(u1, uj)` priced `c(s, uj)`.
pub fn solve_star(
    instance: &GameInstance,
    center: Vertex,
    leaves: &[Vertex],
) -> Result<PricedSolution, TreeApproxError> {
    if leaves.len() < 3 {
        return Err(TreeApproxError::SmallStar(leaves.len()));
    }
    let mut sorted: Vec<(Value, Vertex)> = leaves.iter().map(|&l| (cost(instance, center, l), l)).collect();
    sorted.sort();
    let u1 = sorted[0].1;
    Ok(PricedSolution::new(
        sorted[1..].iter().map(|&(c, l)| (EdgeKey::new(u1, l), c)),
    ))
}

/// Revenues of the candidate solutions for a path of 3 or 4 edges with
/// costs in path order.
pub fn short_path_formulas(costs: &[Value]) -> Result<Vec<Value>, TreeApproxError> {
    match costs.len() {
        3 => {
            let mut s = costs.to_vec();
            s.sort();
            let (c1, c2, c3) = (s[0], s[1], s[2]);
            if costs[1] == c1 {
                Ok(vec![c2 + c3])
            } else {
                Ok(vec![c3, c2 + c2, c1 + c1 + c2])
            }
        }
        4 => {
            let (mut big1, mut small1) = (costs[0].max(costs[1]), costs[0].min(costs[1]));
            let (mut big2, mut small2) = (costs[2].max(costs[3]), costs[2].min(costs[3]));
            if small1 < small2 {
                std::mem::swap(&mut big1, &mut big2);
                std::mem::swap(&mut small1, &mut small2);
            }
            let three = Value::from(3);
            Ok(vec![big1 + big2, small1 + three * small2, small1 + small1 + small2])
        }
        m => Err(TreeApproxError::PathLength(m)),
    }
}

/// Best solution using blue pairs inside the path, found by the oracle on the
/// path alone.
pub fn solve_short_path(
    instance: &GameInstance,
    vertices: &[Vertex],
) -> Result<PricedSolution, TreeApproxError> {
    let costs: Vec<Value> = vertices.windows(2).map(|w| cost(instance, w[0], w[1])).collect();
    let formulas = short_path_formulas(&costs)?;
    let local = GameInstance::complete(RedTree::path(&costs)).expect("path is well-formed");
    let res = oracle::solve_exact(&local, oracle::DEFAULT_GUARD)?;
    assert!(
        formulas.iter().all(|&f| res.optimum >= f),
        "local optimum {} below a closed-form candidate {:?}",
        res.optimum,
        formulas
    );
    Ok(PricedSolution::new(
        res.best_prices
            .prices
            .iter()
            .map(|&(e, p)| (EdgeKey::new(vertices[e.u], vertices[e.v]), p)),
    ))
}

/// Keeps the cheaper edge; with two edges, a blue edge across both sells at
/// the dearer cost.
pub fn solve_residual(instance: &GameInstance, edges: &[EdgeKey]) -> PricedSolution {
    match edges {
        [e, f] => {
            let shared = if e.touches(f.u) { f.u } else { f.v };
            let ends = EdgeKey::new(e.other(shared), f.other(shared));
            let price = cost(instance, e.u, e.v).max(cost(instance, f.u, f.v));
            PricedSolution::new([(ends, price)])
        }
        _ => PricedSolution::empty(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceRevenue {
    pub part: usize,
    pub cost: Value,
    /// Sum of the piece's prices.
    pub revenue: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeApproxReport {
    pub partition: TreePartition,
    pub pieces: Vec<PieceRevenue>,
    pub mu_root: Value,
    /// `(4/7)(c(T) - μ(s))`.
    pub lower_bound: Value,
    /// `7/4 + 7/(2n-4)`; absent below 3 vertices.
    pub certified_ratio: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeApproxOutcome {
    pub solution: PricedSolution,
    pub revenue: Value,
    /// `None` when the oracle solved the instance.
    pub report: Option<TreeApproxReport>,
}

pub fn certified_ratio(n: usize) -> Option<Value> {
    (n >= 3).then(|| Value::frac(7, 4) + Value::frac(7, 2 * n as i128 - 4))
}

/// The decomposition algorithm itself, without the small-instance oracle.
pub fn tree_approx(instance: &GameInstance) -> Result<TreeApproxOutcome, TreeApproxError> {
    if !instance.is_complete() {
        return Err(TreeApproxError::NotComplete);
    }
    let root = choose_root(instance);
    let partition = decompose(instance, root);
    let mut entries = Vec::new();
    let mut pieces = Vec::new();
    for (i, part) in partition.parts.iter().enumerate() {
        let sol = match &part.kind {
            PartKind::Star { center } => {
                let leaves: Vec<Vertex> = part.edges.iter().map(|e| e.other(*center)).collect();
                solve_star(instance, *center, &leaves)?
            }
            PartKind::Path { vertices } => solve_short_path(instance, vertices)?,
            PartKind::Residual => solve_residual(instance, &part.edges),
        };
        pieces.push(PieceRevenue {
            part: i,
            cost: part.edges.iter().map(|e| cost(instance, e.u, e.v)).sum(),
            revenue: sol.listed_revenue(),
        });
        entries.extend(sol.entries.iter().map(|p| (p.edge, p.price)));
    }
    let solution = PricedSolution::new(entries);
    let revenue = run_follower(instance, &solution).expect("pieces use non-red pairs").revenue;
    let mu_root = mu(instance, root);
    Ok(TreeApproxOutcome {
        solution,
        revenue,
        report: Some(TreeApproxReport {
            partition,
            pieces,
            mu_root,
            lower_bound: Value::frac(4, 7) * (instance.total_cost() - mu_root),
            certified_ratio: certified_ratio(instance.n()),
        }),
    })
}

/// Exhaustive search when `n < 7/(2ε) + 1` and the candidate count is within
/// `guard`, the decomposition otherwise.
pub fn solve_tree_approx(
    instance: &GameInstance,
    epsilon: f64,
    guard: usize,
) -> Result<TreeApproxOutcome, TreeApproxError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(TreeApproxError::Epsilon);
    }
    if !instance.is_complete() {
        return Err(TreeApproxError::NotComplete);
    }
    let small = (instance.n() as f64) < 7.0 / (2.0 * epsilon) + 1.0;
    if small && instance.candidate_count() <= guard {
        let res = oracle::solve_exact(instance, guard)?;
        let solution = res.best_prices.solution();
        let revenue = run_follower(instance, &solution).expect("oracle uses candidates").revenue;
        return Ok(TreeApproxOutcome {
            solution,
            revenue,
            report: None,
        });
    }
    tree_approx(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64) -> Value {
        Value::from(x)
    }

    fn vals(xs: &[i64]) -> Vec<Value> {
        xs.iter().map(|&x| v(x)).collect()
    }

    #[test]
    fn root_choice() {
        let star = GameInstance::complete(RedTree::star(&vals(&[3, 1, 2]))).unwrap();
        assert_eq!(choose_root(&star), 2);
        let uniform = GameInstance::complete(RedTree::path(&vals(&[1, 1, 1]))).unwrap();
        assert_eq!(choose_root(&uniform), 0);
        let p = GameInstance::complete(RedTree::path(&vals(&[5, 1, 5]))).unwrap();
        assert_eq!(choose_root(&p), 0);
    }

    #[test]
    fn star_decomposes_in_one_piece() {
        let inst = GameInstance::complete(RedTree::star(&vals(&[1, 1, 1, 1]))).unwrap();
        let part = decompose(&inst, 0);
        assert_eq!(part.parts.len(), 2);
        assert_eq!(part.parts[0].rule, 5);
        assert!(part.residual().edges.is_empty());
    }

    #[test]
    fn five_edge_path_from_an_end() {
        let inst = GameInstance::complete(RedTree::path(&vals(&[1; 5]))).unwrap();
        let part = decompose(&inst, 0);
        assert_eq!(part.parts.len(), 2);
        assert_eq!(part.parts[0].rule, 4);
        assert_eq!(part.parts[0].edges.len(), 3);
        assert_eq!(part.residual().edges, vec![EdgeKey::new(0, 1), EdgeKey::new(1, 2)]);
    }

    #[test]
    fn binary_tree_gives_stars() {
        let tree = RedTree::new(7, [(0, 1, v(1)), (0, 2, v(1)), (1, 3, v(1)), (1, 4, v(1)), (2, 5, v(1)), (2, 6, v(1))]);
        let inst = GameInstance::complete(tree).unwrap();
        let part = decompose(&inst, 0);
        assert_eq!(part.parts[0].rule, 1);
        assert_eq!(part.parts[1].rule, 1);
        assert!(part.residual().edges.is_empty());
    }

    #[test]
    fn star_and_path_pieces() {
        let star = GameInstance::complete(RedTree::star(&vals(&[1, 2, 3]))).unwrap();
        assert_eq!(solve_star(&star, 0, &[1, 2, 3]).unwrap().listed_revenue(), v(5));
        let zero = GameInstance::complete(RedTree::star(&vals(&[0, 5, 5, 5]))).unwrap();
        assert_eq!(solve_star(&zero, 0, &[1, 2, 3, 4]).unwrap().listed_revenue(), v(15));

        let p = GameInstance::complete(RedTree::path(&vals(&[3, 1, 2]))).unwrap();
        assert_eq!(short_path_formulas(&vals(&[3, 1, 2])).unwrap(), vec![v(5)]);
        assert!(solve_short_path(&p, &[0, 1, 2, 3]).unwrap().listed_revenue() >= v(5));
        assert_eq!(short_path_formulas(&vals(&[2, 3, 2])).unwrap(), vec![v(3), v(4), v(6)]);
        assert_eq!(short_path_formulas(&vals(&[1, 1, 1, 1])).unwrap(), vec![v(2), v(4), v(3)]);
    }

    #[test]
    fn residual_pieces() {
        let inst = GameInstance::complete(RedTree::path(&vals(&[2, 5]))).unwrap();
        let sol = solve_residual(&inst, &[EdgeKey::new(0, 1), EdgeKey::new(1, 2)]);
        assert_eq!(sol.listed_revenue(), v(5));
        assert!(solve_residual(&inst, &[EdgeKey::new(0, 1)]).is_empty());
    }

    #[test]
    fn uniform_path_meets_the_bound() {
        let inst = GameInstance::complete(RedTree::path(&vals(&[1; 7]))).unwrap();
        let out = tree_approx(&inst).unwrap();
        assert!(out.revenue >= Value::frac(24, 7));
        let total: Value = out.report.unwrap().pieces.iter().map(|p| p.revenue).sum();
        assert_eq!(total, out.revenue);
    }
}
