//! Brute-force oracles shared by the integration tests and the acceptance
//! harness. They use none of the recursions under test.

#![allow(dead_code)]

use std::collections::HashMap;

use gwgames::fixedpoint::{FirstMover, GameKind};
use gwgames::simulate::{solve_game_on_tree, GameLabel, SampledTree};
use gwgames::{ModelSpec, OffspringLaw, TableEntry};

/// `[win, lose, draw]` probabilities for the player about to move.
pub type LabelLaw = [f64; 3];

fn rows(spec: &ModelSpec, color: usize) -> &[TableEntry] {
    match spec.offspring(color) {
        OffspringLaw::Table(rows) => rows,
        OffspringLaw::Poisson { .. } => panic!("enumeration needs table laws"),
    }
}

fn stuck_label(kind: GameKind, who: FirstMover) -> GameLabel {
    match (kind, who) {
        (GameKind::Normal, _) => GameLabel::Lose,
        (GameKind::Misere, _) => GameLabel::Win,
        (GameKind::Escape, FirstMover::PlayerOne) => GameLabel::Win,
        (GameKind::Escape, FirstMover::PlayerTwo) => GameLabel::Lose,
    }
}

fn slot(label: GameLabel) -> usize {
    match label {
        GameLabel::Win => 0,
        GameLabel::Lose => 1,
        GameLabel::Draw => 2,
    }
}

/// Label law at a vertex of `color` with `rounds` rounds left, summing over
/// every offspring row and every joint labeling of the mover's children.
pub struct ConfigurationOracle<'a> {
    spec: &'a ModelSpec,
    kind: GameKind,
    memo: HashMap<(usize, usize, FirstMover), LabelLaw>,
}

impl<'a> ConfigurationOracle<'a> {
    pub fn new(spec: &'a ModelSpec, kind: GameKind) -> Self {
        ConfigurationOracle { spec, kind, memo: HashMap::new() }
    }

    pub fn law(&mut self, color: usize, rounds: usize, who: FirstMover) -> LabelLaw {
        if rounds == 0 {
            return [0.0, 0.0, 1.0];
        }
        if let Some(&v) = self.memo.get(&(color, rounds, who)) {
            return v;
        }
        let moves = who.moves(self.spec, color);
        let mut out = [0.0; 3];
        for row in rows(self.spec, color).to_vec() {
            let children: Vec<LabelLaw> = moves
                .iter()
                .flat_map(|k| std::iter::repeat(k).take(row.counts[k] as usize))
                .map(|k| self.law(k, rounds - 1, who.other()))
                .collect();
            if children.is_empty() {
                out[slot(stuck_label(self.kind, who))] += row.prob;
                continue;
            }
            // Every assignment of W, L, D to the children, as base-3 digits.
            let mut assignment = vec![0usize; children.len()];
            loop {
                let p: f64 = children.iter().zip(&assignment).map(|(c, &a)| c[a]).product();
                let label = if assignment.contains(&1) {
                    GameLabel::Win
                } else if assignment.iter().all(|&a| a == 0) {
                    GameLabel::Lose
                } else {
                    GameLabel::Draw
                };
                out[slot(label)] += row.prob * p;
                let mut i = 0;
                while i < assignment.len() && assignment[i] == 2 {
                    assignment[i] = 0;
                    i += 1;
                }
                if i == assignment.len() {
                    break;
                }
                assignment[i] += 1;
            }
        }
        self.memo.insert((color, rounds, who), out);
        out
    }
}

/// A fully realized tree of bounded depth.
#[derive(Clone, Debug)]
pub struct Node {
    pub color: usize,
    pub children: Vec<Node>,
}

impl Node {
    /// Breadth-first flattening for [`SampledTree::from_parents`].
    pub fn to_tree(&self, depth: usize) -> SampledTree {
        let mut colors = vec![self.color];
        let mut parents = vec![None];
        let mut queue = std::collections::VecDeque::from([(self, 0usize)]);
        while let Some((node, index)) = queue.pop_front() {
            for child in &node.children {
                queue.push_back((child, colors.len()));
                colors.push(child.color);
                parents.push(Some(index));
            }
        }
        SampledTree::from_parents(colors, parents, depth).expect("well-formed tree")
    }
}

/// Number of distinct trees of height at most `depth` per root color.
pub fn tree_counts(spec: &ModelSpec, depth: usize) -> Vec<f64> {
    let m = spec.num_colors();
    let mut counts = vec![1.0f64; m];
    for _ in 0..depth {
        counts = (0..m)
            .map(|j| {
                rows(spec, j)
                    .iter()
                    .map(|r| r.counts.iter().zip(&counts).map(|(&n, c)| c.powi(n as i32)).product::<f64>())
                    .sum()
            })
            .collect();
    }
    counts
}

/// Every tree of height at most `depth` below a root of `color`, with its
/// probability.
pub fn all_trees(spec: &ModelSpec, color: usize, depth: usize) -> Vec<(Node, f64)> {
    if depth == 0 {
        return vec![(Node { color, children: vec![] }, 1.0)];
    }
    let m = spec.num_colors();
    let subtrees: Vec<Vec<(Node, f64)>> = (0..m).map(|k| all_trees(spec, k, depth - 1)).collect();
    let mut out = Vec::new();
    for row in rows(spec, color) {
        let slots: Vec<usize> =
            (0..m).flat_map(|k| std::iter::repeat(k).take(row.counts[k] as usize)).collect();
        let mut choice = vec![0usize; slots.len()];
        loop {
            let mut p = row.prob;
            let children = slots
                .iter()
                .zip(&choice)
                .map(|(&k, &c)| {
                    p *= subtrees[k][c].1;
                    subtrees[k][c].0.clone()
                })
                .collect();
            out.push((Node { color, children }, p));
            let mut i = 0;
            while i < choice.len() && choice[i] + 1 == subtrees[slots[i]].len() {
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
            choice[i] += 1;
        }
    }
    out
}

/// Root label law obtained by realizing every tree and solving the game on
/// it.
pub fn tree_enumeration(spec: &ModelSpec, kind: GameKind, mover: FirstMover, color: usize, depth: usize) -> LabelLaw {
    let mut out = [0.0; 3];
    for (node, p) in all_trees(spec, color, depth) {
        let label = solve_game_on_tree(&node.to_tree(depth), kind, mover, spec.permissible());
        out[slot(label)] += p;
    }
    out
}

/// Deepest depth `<= max_depth` whose total tree count stays within `cap`.
pub fn enumerable_depth(spec: &ModelSpec, max_depth: usize, cap: f64) -> usize {
    (0..=max_depth)
        .take_while(|&d| tree_counts(spec, d).iter().sum::<f64>() <= cap)
        .last()
        .unwrap_or(0)
}
