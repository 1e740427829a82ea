//! The follower's response: a minimum spanning tree over red edges and the
//! leader's priced blue edges.
//!
//! Kruskal order is ascending weight; at equal weight every blue edge comes
//! before every red edge, blue edges by ascending activation cost and then
//! edge id, red edges by edge id. Among all minimum spanning trees this picks
//! one with maximum revenue.

use std::cmp::Ordering;

use serde::Serialize;

use crate::model::{EdgeKey, GameInstance, PricedSolution};
use crate::union_find::UnionFind;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChosenEdge {
    Red { edge: EdgeKey, cost: Value },
    Blue { edge: EdgeKey, price: Value },
}

impl ChosenEdge {
    pub fn key(self) -> EdgeKey {
        match self {
            ChosenEdge::Red { edge, .. } | ChosenEdge::Blue { edge, .. } => edge,
        }
    }

    pub fn weight(self) -> Value {
        match self {
            ChosenEdge::Red { cost, .. } => cost,
            ChosenEdge::Blue { price, .. } => price,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FollowerResult {
    pub chosen_edges: Vec<ChosenEdge>,
    pub total_weight: Value,
    pub revenue: Value,
}

impl FollowerResult {
    /// Blue edges in the follower's tree, in canonical order.
    pub fn purchased(&self) -> Vec<EdgeKey> {
        let mut out: Vec<EdgeKey> = self
            .chosen_edges
            .iter()
            .filter_map(|c| match c {
                ChosenEdge::Blue { edge, .. } => Some(*edge),
                ChosenEdge::Red { .. } => None,
            })
            .collect();
        out.sort();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FollowerError {
    #[error("{0} is not a blue candidate of this instance")]
    Dangling(EdgeKey),
}

struct Item {
    weight: Value,
    blue: bool,
    activation: Value,
    edge: EdgeKey,
}

fn kruskal_order(x: &Item, y: &Item) -> Ordering {
    x.weight
        .cmp(&y.weight)
        .then_with(|| y.blue.cmp(&x.blue))
        .then_with(|| x.activation.cmp(&y.activation))
        .then_with(|| x.edge.cmp(&y.edge))
}

pub fn run_follower(
    instance: &GameInstance,
    solution: &PricedSolution,
) -> Result<FollowerResult, FollowerError> {
    let mut items: Vec<Item> = Vec::with_capacity(instance.n() + solution.len());
    for p in &solution.entries {
        let activation = instance
            .activation(p.edge)
            .ok_or(FollowerError::Dangling(p.edge))?;
        items.push(Item {
            weight: p.price,
            blue: true,
            activation,
            edge: p.edge,
        });
    }
    for e in instance.red_edges() {
        items.push(Item {
            weight: e.cost,
            blue: false,
            activation: Value::ZERO,
            edge: e.key,
        });
    }
    items.sort_by(kruskal_order);

    let mut uf = UnionFind::new(instance.n());
    let mut chosen = Vec::with_capacity(instance.n().saturating_sub(1));
    let (mut total, mut revenue) = (Value::ZERO, Value::ZERO);
    for it in &items {
        if !uf.union(it.edge.u, it.edge.v) {
            continue;
        }
        total += it.weight;
        if it.blue {
            revenue += it.weight;
            chosen.push(ChosenEdge::Blue {
                edge: it.edge,
                price: it.weight,
            });
        } else {
            chosen.push(ChosenEdge::Red {
                edge: it.edge,
                cost: it.weight,
            });
        }
        if uf.components() == 1 {
            break;
        }
    }
    Ok(FollowerResult {
        chosen_edges: chosen,
        total_weight: total,
        revenue,
    })
}
