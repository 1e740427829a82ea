//! Instance generators: seeded random families and the set-cover gadgets
//! used in the hardness reduction for budgeted games.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BlueCatalog, Budget, EdgeKey, GameInstance, ModelError, RedTree, Vertex};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CostModel {
    /// Uniform on `[lo, hi]`, rounded to a multiple of 1/1000.
    UniformReal { lo: f64, hi: f64 },
    /// Each edge independently costs `a` with probability `a_share`, else `b`.
    TwoCost { a: Value, b: Value, a_share: f64 },
    /// Uniform integer in `lo..=hi`.
    IntRange { lo: i64, hi: i64 },
}

impl CostModel {
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Value {
        match *self {
            CostModel::UniformReal { lo, hi } => {
                let x = if hi > lo { rng.gen_range(lo..=hi) } else { lo };
                Value::frac((x * 1000.0).round() as i128, 1000)
            }
            CostModel::TwoCost { a, b, a_share } => {
                if rng.gen_bool(a_share.clamp(0.0, 1.0)) {
                    a
                } else {
                    b
                }
            }
            CostModel::IntRange { lo, hi } => Value::from(rng.gen_range(lo..=hi.max(lo))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("need at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("set system has no subsets")]
    NoSubsets,
    #[error("universe is empty")]
    EmptyUniverse,
    #[error("subset {set} names element {element} outside the universe")]
    ElementOutOfRange { set: usize, element: usize },
    #[error("subset {0} does not contain the last universe element")]
    MissingLastElement(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Decodes a Prüfer sequence into the edge list of a labeled tree.
pub fn prufer_decode(n: usize, seq: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    assert!(n >= 2 && seq.len() == n - 2, "sequence length must be n - 2");
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<Vertex>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push((leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().expect("two leaves remain");
    let Reverse(b) = leaves.pop().expect("two leaves remain");
    edges.push((a, b));
    edges
}

/// Uniform random labeled tree on `n` vertices with complete free blues.
pub fn random_tree(n: usize, costs: CostModel, seed: u64) -> Result<GameInstance, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let edges = prufer_decode(n, &seq);
    let tree = RedTree::new(
        n,
        edges.into_iter().map(|(u, v)| (u, v, costs.sample(&mut rng))),
    );
    Ok(GameInstance::complete(tree)?)
}

/// Random path `0 - 1 - ... - (n-1)` with complete free blues.
pub fn random_path(n: usize, costs: CostModel, seed: u64) -> Result<GameInstance, GenerateError> {
    if n < 2 {
        return Err(GenerateError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<Value> = (0..n - 1).map(|_| costs.sample(&mut rng)).collect();
    Ok(GameInstance::complete(RedTree::path(&c))?)
}

/// Random tree with `blue_count` explicit candidates (fewer if the tree has
/// fewer free pairs), integer activations in `0..=max_activation`, and a
/// budget drawn uniformly from zero to the total activation cost.
pub fn random_budgeted(
    n: usize,
    costs: CostModel,
    blue_count: usize,
    max_activation: i64,
    seed: u64,
) -> Result<GameInstance, GenerateError> {
    let base = random_tree(n, costs, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut pairs: Vec<EdgeKey> = base.candidates().map(|b| b.key).collect();
    pairs.shuffle(&mut rng);
    pairs.truncate(blue_count);
    let blues: Vec<(Vertex, Vertex, Value)> = pairs
        .iter()
        .map(|k| (k.u, k.v, Value::from(rng.gen_range(0..=max_activation.max(0)))))
        .collect();
    let total: i64 = blues.iter().map(|b| b.2.floor() as i64).sum();
    let budget = Value::from(rng.gen_range(0..=total));
    Ok(GameInstance::new(
        base.tree().clone(),
        BlueCatalog::explicit(blues),
        Budget::Finite(budget),
    )?)
}

/// A set system over `{0, .., universe - 1}`; element `universe - 1` plays
/// the role of the element every subset must contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetSystem {
    fn check(&self) -> Result<(), GenerateError> {
        if self.universe == 0 {
            return Err(GenerateError::EmptyUniverse);
        }
        if self.sets.is_empty() {
            return Err(GenerateError::NoSubsets);
        }
        for (j, s) in self.sets.iter().enumerate() {
            if let Some(&e) = s.iter().find(|&&e| e >= self.universe) {
                return Err(GenerateError::ElementOutOfRange { set: j, element: e });
            }
            if !s.contains(&(self.universe - 1)) {
                return Err(GenerateError::MissingLastElement(j));
            }
        }
        Ok(())
    }

    /// Vertex of element `i` is `i`; vertex of subset `j` is `universe + j`.
    pub fn set_vertex(&self, j: usize) -> Vertex {
        self.universe + j
    }

    fn membership_blues(&self) -> Vec<(Vertex, Vertex, Value)> {
        let mut out = Vec::new();
        for (j, s) in self.sets.iter().enumerate() {
            let mut elems = s.clone();
            elems.sort_unstable();
            elems.dedup();
            for e in elems {
                out.push((e, self.set_vertex(j), Value::ZERO));
            }
        }
        out
    }
}

/// Path `u_1 .. u_l, S_1 .. S_t`: cost 1 between elements, cost 2 on
/// `(u_l, S_1)` and between consecutive subsets. Blue edges join each element
/// to the subsets containing it. The blue `(u_l, S_1)` repeats a red pair.
pub fn setcover_path(system: &SetSystem) -> Result<GameInstance, GenerateError> {
    system.check()?;
    let l = system.universe;
    let t = system.sets.len();
    let n = l + t;
    let reds = (0..n - 1).map(|i| {
        let cost = if i + 1 < l { 1 } else { 2 };
        (i, i + 1, Value::from(cost))
    });
    let tree = RedTree::new(n, reds);
    let blues = BlueCatalog::explicit(system.membership_blues()).with_parallel(true);
    Ok(GameInstance::new(tree, blues, Budget::Unbounded)?)
}

/// Star centered at `v_0 = l + t`: cost 2 to subset leaves, 1 to element
/// leaves, with the same blue catalog as [`setcover_path`].
pub fn setcover_star(system: &SetSystem) -> Result<GameInstance, GenerateError> {
    system.check()?;
    let l = system.universe;
    let t = system.sets.len();
    let center = l + t;
    let reds = (0..l + t).map(|x| (center, x, Value::from(if x < l { 1 } else { 2 })));
    let tree = RedTree::new(l + t + 1, reds);
    let blues = BlueCatalog::explicit(system.membership_blues());
    Ok(GameInstance::new(tree, blues, Budget::Unbounded)?)
}
