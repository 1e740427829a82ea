//! Game data model: the red cost tree, the blue candidate catalog, the
//! activation budget, and the leader's priced purchase.

mod format;
pub mod generate;

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::union_find::UnionFind;
use crate::value::Value;

pub use format::{
    format_instance, format_solution, parse_instance, parse_solution, FormatError, FORMAT_HEADER,
};

pub type Vertex = usize;

/// Unordered vertex pair, stored with `u <= v`. The derived order is the
/// canonical edge order used for every deterministic tie-break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeKey {
    pub u: Vertex,
    pub v: Vertex,
}

impl EdgeKey {
    pub fn new(a: Vertex, b: Vertex) -> Self {
        if a <= b {
            EdgeKey { u: a, v: b }
        } else {
            EdgeKey { u: b, v: a }
        }
    }

    pub fn other(self, x: Vertex) -> Vertex {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RedEdge {
    pub key: EdgeKey,
    pub cost: Value,
}

/// The red spanning tree. Edges are kept sorted by [`EdgeKey`]; a red edge id
/// is its index in that order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedTree {
    n: usize,
    edges: Vec<RedEdge>,
}

impl RedTree {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex, Value)>) -> Self {
        let mut edges: Vec<RedEdge> = edges
            .into_iter()
            .map(|(a, b, cost)| RedEdge {
                key: EdgeKey::new(a, b),
                cost,
            })
            .collect();
        edges.sort_by_key(|e| e.key);
        RedTree { n, edges }
    }

    /// Path `0 - 1 - ... - m` with the given edge costs in order.
    pub fn path(costs: &[Value]) -> Self {
        RedTree::new(
            costs.len() + 1,
            costs.iter().enumerate().map(|(i, &c)| (i, i + 1, c)),
        )
    }

    /// Star with center 0 and leaf `i + 1` joined by `costs[i]`.
    pub fn star(costs: &[Value]) -> Self {
        RedTree::new(
            costs.len() + 1,
            costs.iter().enumerate().map(|(i, &c)| (0, i + 1, c)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[RedEdge] {
        &self.edges
    }

    pub fn total_cost(&self) -> Value {
        self.edges.iter().map(|e| e.cost).sum()
    }

    pub fn distinct_costs(&self) -> Vec<Value> {
        let mut costs: Vec<Value> = self.edges.iter().map(|e| e.cost).collect();
        costs.sort();
        costs.dedup();
        costs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlueEdge {
    pub key: EdgeKey,
    pub activation: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlueMode {
    /// Every vertex pair that is not a red edge, at activation cost zero.
    Complete,
    Explicit(Vec<BlueEdge>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlueCatalog {
    pub mode: BlueMode,
    /// Only auxiliary instances (level stars, set-cover paths) set this.
    pub allow_parallel_to_red: bool,
}

impl BlueCatalog {
    pub fn complete() -> Self {
        BlueCatalog {
            mode: BlueMode::Complete,
            allow_parallel_to_red: false,
        }
    }

    pub fn explicit(edges: impl IntoIterator<Item = (Vertex, Vertex, Value)>) -> Self {
        let mut edges: Vec<BlueEdge> = edges
            .into_iter()
            .map(|(a, b, activation)| BlueEdge {
                key: EdgeKey::new(a, b),
                activation,
            })
            .collect();
        edges.sort_by_key(|e| e.key);
        BlueCatalog {
            mode: BlueMode::Explicit(edges),
            allow_parallel_to_red: false,
        }
    }

    pub fn with_parallel(mut self, allow: bool) -> Self {
        self.allow_parallel_to_red = allow;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Budget {
    Unbounded,
    Finite(Value),
}

impl Budget {
    pub fn allows(self, spend: Value) -> bool {
        match self {
            Budget::Unbounded => true,
            Budget::Finite(cap) => spend <= cap,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Unbounded => write!(f, "unbounded"),
            Budget::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Unvalidated instance as read from a file or assembled by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawInstance {
    pub tree: RedTree,
    pub blues: BlueCatalog,
    pub budget: Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    NoVertices,
    WrongEdgeCount { expected: usize, found: usize },
    VertexOutOfRange { edge: EdgeKey },
    SelfLoop { vertex: Vertex },
    DuplicateRedEdge { edge: EdgeKey },
    CycleDetected { edge: EdgeKey },
    Disconnected,
    NegativeCost { edge: EdgeKey },
    DuplicateBlueEdge { edge: EdgeKey },
    ParallelBlueEdge { edge: EdgeKey },
    NegativeActivation { edge: EdgeKey },
    NegativeBudget,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::NoVertices => write!(f, "instance has no vertices"),
            Issue::WrongEdgeCount { expected, found } => {
                write!(f, "red tree needs {expected} edges, found {found}")
            }
            Issue::VertexOutOfRange { edge } => write!(f, "edge {edge} names a missing vertex"),
            Issue::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Issue::DuplicateRedEdge { edge } => write!(f, "duplicate red edge {edge}"),
            Issue::CycleDetected { edge } => write!(f, "cycle detected at red edge {edge}"),
            Issue::Disconnected => write!(f, "red edges do not connect all vertices"),
            Issue::NegativeCost { edge } => write!(f, "negative cost on red edge {edge}"),
            Issue::DuplicateBlueEdge { edge } => write!(f, "duplicate blue edge {edge}"),
            Issue::ParallelBlueEdge { edge } => write!(f, "parallel blue edge {edge}"),
            Issue::NegativeActivation { edge } => {
                write!(f, "negative activation cost on blue edge {edge}")
            }
            Issue::NegativeBudget => write!(f, "negative budget"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.issues.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Reports every violated well-formedness rule of `raw`.
pub fn validate(raw: &RawInstance) -> ValidationReport {
    let mut issues = Vec::new();
    let n = raw.tree.n;
    if n == 0 {
        issues.push(Issue::NoVertices);
    }
    let edges = &raw.tree.edges;
    if n > 0 && edges.len() != n - 1 {
        issues.push(Issue::WrongEdgeCount {
            expected: n - 1,
            found: edges.len(),
        });
    }
    let mut uf = UnionFind::new(n);
    let mut red_pairs = HashSet::new();
    for e in edges {
        if e.key.v >= n {
            issues.push(Issue::VertexOutOfRange { edge: e.key });
            continue;
        }
        if e.key.u == e.key.v {
            issues.push(Issue::SelfLoop { vertex: e.key.u });
            continue;
        }
        if !red_pairs.insert(e.key) {
            issues.push(Issue::DuplicateRedEdge { edge: e.key });
            continue;
        }
        if e.cost.is_negative() {
            issues.push(Issue::NegativeCost { edge: e.key });
        }
        if !uf.union(e.key.u, e.key.v) {
            issues.push(Issue::CycleDetected { edge: e.key });
        }
    }
    if n > 0 && uf.components() != 1 {
        issues.push(Issue::Disconnected);
    }
    if let BlueMode::Explicit(blues) = &raw.blues.mode {
        let mut seen = HashSet::new();
        for b in blues {
            if b.key.v >= n {
                issues.push(Issue::VertexOutOfRange { edge: b.key });
                continue;
            }
            if b.key.u == b.key.v {
                issues.push(Issue::SelfLoop { vertex: b.key.u });
                continue;
            }
            if !seen.insert(b.key) {
                issues.push(Issue::DuplicateBlueEdge { edge: b.key });
            }
            if !raw.blues.allow_parallel_to_red && red_pairs.contains(&b.key) {
                issues.push(Issue::ParallelBlueEdge { edge: b.key });
            }
            if b.activation.is_negative() {
                issues.push(Issue::NegativeActivation { edge: b.key });
            }
        }
    }
    if let Budget::Finite(cap) = raw.budget {
        if cap.is_negative() {
            issues.push(Issue::NegativeBudget);
        }
    }
    ValidationReport { issues }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid instance: {0}")]
    Invalid(ValidationReport),
}

/// A well-formed game: immutable once built, cheap to share across threads.
#[derive(Clone, Debug)]
pub struct GameInstance {
    raw: RawInstance,
    red_index: HashMap<EdgeKey, usize>,
    blue_index: HashMap<EdgeKey, usize>,
    adjacency: Vec<Vec<(Vertex, usize)>>,
}

impl TryFrom<RawInstance> for GameInstance {
    type Error = ModelError;

    fn try_from(raw: RawInstance) -> Result<Self, ModelError> {
        let report = validate(&raw);
        if !report.is_valid() {
            return Err(ModelError::Invalid(report));
        }
        let n = raw.tree.n;
        let mut adjacency = vec![Vec::new(); n];
        let mut red_index = HashMap::with_capacity(n);
        for (i, e) in raw.tree.edges.iter().enumerate() {
            adjacency[e.key.u].push((e.key.v, i));
            adjacency[e.key.v].push((e.key.u, i));
            red_index.insert(e.key, i);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let blue_index = match &raw.blues.mode {
            BlueMode::Complete => HashMap::new(),
            BlueMode::Explicit(list) => list.iter().enumerate().map(|(i, b)| (b.key, i)).collect(),
        };
        Ok(GameInstance {
            raw,
            red_index,
            blue_index,
            adjacency,
        })
    }
}

impl GameInstance {
    pub fn new(tree: RedTree, blues: BlueCatalog, budget: Budget) -> Result<Self, ModelError> {
        GameInstance::try_from(RawInstance {
            tree,
            blues,
            budget,
        })
    }

    /// StackMST(0,0): complete blue availability, nothing to pay.
    pub fn complete(tree: RedTree) -> Result<Self, ModelError> {
        GameInstance::new(tree, BlueCatalog::complete(), Budget::Unbounded)
    }

    pub fn raw(&self) -> &RawInstance {
        &self.raw
    }

    pub fn tree(&self) -> &RedTree {
        &self.raw.tree
    }

    pub fn n(&self) -> usize {
        self.raw.tree.n
    }

    pub fn red_edges(&self) -> &[RedEdge] {
        &self.raw.tree.edges
    }

    pub fn blues(&self) -> &BlueCatalog {
        &self.raw.blues
    }

    pub fn budget(&self) -> Budget {
        self.raw.budget
    }

    /// Red neighbours of `v` as `(neighbour, red edge id)`, sorted.
    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn red_id(&self, key: EdgeKey) -> Option<usize> {
        self.red_index.get(&key).copied()
    }

    pub fn is_red(&self, key: EdgeKey) -> bool {
        self.red_index.contains_key(&key)
    }

    pub fn is_complete(&self) -> bool {
        matches!(self.raw.blues.mode, BlueMode::Complete)
    }

    /// Activation cost of the candidate `key`, or `None` if it is not one.
    pub fn activation(&self, key: EdgeKey) -> Option<Value> {
        if key.u == key.v || key.v >= self.n() {
            return None;
        }
        match &self.raw.blues.mode {
            BlueMode::Complete => (!self.is_red(key)).then_some(Value::ZERO),
            BlueMode::Explicit(list) => self.blue_index.get(&key).map(|&i| list[i].activation),
        }
    }

    pub fn is_candidate(&self, key: EdgeKey) -> bool {
        self.activation(key).is_some()
    }

    pub fn candidate_count(&self) -> usize {
        match &self.raw.blues.mode {
            BlueMode::Complete => {
                let n = self.n();
                n * n.saturating_sub(1) / 2 - n.saturating_sub(1)
            }
            BlueMode::Explicit(list) => list.len(),
        }
    }

    /// All candidates in canonical order; complete catalogs are generated lazily.
    pub fn candidates(&self) -> Box<dyn Iterator<Item = BlueEdge> + '_> {
        match &self.raw.blues.mode {
            BlueMode::Complete => {
                let n = self.n();
                Box::new(
                    (0..n)
                        .flat_map(move |u| (u + 1..n).map(move |v| EdgeKey { u, v }))
                        .filter(move |k| !self.is_red(*k))
                        .map(|key| BlueEdge {
                            key,
                            activation: Value::ZERO,
                        }),
                )
            }
            BlueMode::Explicit(list) => Box::new(list.iter().copied()),
        }
    }

    pub fn total_cost(&self) -> Value {
        self.raw.tree.total_cost()
    }

    pub fn is_path(&self) -> bool {
        let n = self.n();
        n <= 2 || (0..n).all(|v| self.degree(v) <= 2)
    }

    /// Path vertices from the lowest-numbered endpoint, or `None` if not a path.
    pub fn path_order(&self) -> Option<Vec<Vertex>> {
        if !self.is_path() {
            return None;
        }
        let n = self.n();
        if n == 1 {
            return Some(vec![0]);
        }
        let start = (0..n).find(|&v| self.degree(v) == 1)?;
        let mut order = Vec::with_capacity(n);
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            order.push(cur);
            match self.neighbors(cur).iter().find(|&&(w, _)| w != prev) {
                Some(&(w, _)) => {
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        Some(order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Purchase {
    pub edge: EdgeKey,
    pub price: Value,
}

/// The leader's move: activated blue edges and their prices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PricedSolution {
    pub entries: Vec<Purchase>,
}

impl PricedSolution {
    pub fn new(entries: impl IntoIterator<Item = (EdgeKey, Value)>) -> Self {
        let mut entries: Vec<Purchase> = entries
            .into_iter()
            .map(|(edge, price)| Purchase { edge, price })
            .collect();
        entries.sort_by_key(|p| p.edge);
        PricedSolution { entries }
    }

    pub fn empty() -> Self {
        PricedSolution::default()
    }

    pub fn keys(&self) -> Vec<EdgeKey> {
        self.entries.iter().map(|p| p.edge).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn listed_revenue(&self) -> Value {
        self.entries.iter().map(|p| p.price).sum()
    }

    /// Total activation spend; `None` if some entry is not a candidate.
    pub fn spend(&self, instance: &GameInstance) -> Option<Value> {
        self.entries
            .iter()
            .map(|p| instance.activation(p.edge))
            .sum::<Option<Value>>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionIssue {
    NotACandidate(EdgeKey),
    Duplicate(EdgeKey),
    NegativePrice(EdgeKey),
    BlueCycle(EdgeKey),
    OverBudget { spend: Value, budget: Value },
}

impl fmt::Display for SolutionIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionIssue::NotACandidate(e) => write!(f, "{e} is not a blue candidate"),
            SolutionIssue::Duplicate(e) => write!(f, "{e} purchased twice"),
            SolutionIssue::NegativePrice(e) => write!(f, "negative price on {e}"),
            SolutionIssue::BlueCycle(e) => write!(f, "blue cycle closed by {e}"),
            SolutionIssue::OverBudget { spend, budget } => {
                write!(f, "activation spend {spend} exceeds budget {budget}")
            }
        }
    }
}

/// Feasibility of a leader move: candidates only, no repeats, a blue forest,
/// and activation spend within budget.
pub fn check_solution(instance: &GameInstance, solution: &PricedSolution) -> Vec<SolutionIssue> {
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    let mut uf = UnionFind::new(instance.n());
    let mut spend = Value::ZERO;
    for p in &solution.entries {
        let Some(act) = instance.activation(p.edge) else {
            issues.push(SolutionIssue::NotACandidate(p.edge));
            continue;
        };
        if !seen.insert(p.edge) {
            issues.push(SolutionIssue::Duplicate(p.edge));
            continue;
        }
        if p.price.is_negative() {
            issues.push(SolutionIssue::NegativePrice(p.edge));
        }
        if !uf.union(p.edge.u, p.edge.v) {
            issues.push(SolutionIssue::BlueCycle(p.edge));
        }
        spend += act;
    }
    if let Budget::Finite(cap) = instance.budget() {
        if spend > cap {
            issues.push(SolutionIssue::OverBudget { spend, budget: cap });
        }
    }
    issues
}
