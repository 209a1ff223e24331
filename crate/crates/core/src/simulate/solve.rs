use crate::fixedpoint::{FirstMover, GameKind};
use crate::model::PermissibleSets;
use crate::simulate::tree::SampledTree;

/// Outcome at a vertex for the player about to move there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameLabel {
    Win,
    Lose,
    /// Not decided within the sampled depth.
    Draw,
}

impl GameLabel {
    pub fn symbol(self) -> char {
        match self {
            GameLabel::Win => 'W',
            GameLabel::Lose => 'L',
            GameLabel::Draw => 'D',
        }
    }
}

/// Label of the root, with `mover` playing the first round there.
pub fn solve_game_on_tree(
    tree: &SampledTree,
    kind: GameKind,
    mover: FirstMover,
    permissible: &PermissibleSets,
) -> GameLabel {
    label_vertices(tree, kind, mover, permissible)[0]
}

/// Labels every vertex by backward induction. The player to move at a
/// vertex is `mover` at even depths and the other player at odd depths.
///
/// Vertices at the truncation depth are draws; a vertex whose mover has no
/// permissible child is decided by the stuck rule of the game.
pub fn label_vertices(
    tree: &SampledTree,
    kind: GameKind,
    mover: FirstMover,
    permissible: &PermissibleSets,
) -> Vec<GameLabel> {
    let n = tree.len();
    let mut labels = vec![GameLabel::Draw; n];
    for v in (0..n).rev() {
        labels[v] = vertex_label(tree, &labels, v, kind, mover, permissible);
    }
    labels
}

fn vertex_label(
    tree: &SampledTree,
    labels: &[GameLabel],
    v: usize,
    kind: GameKind,
    mover: FirstMover,
    permissible: &PermissibleSets,
) -> GameLabel {
    let depth = tree.depth(v);
    if depth >= tree.truncation_depth() {
        return GameLabel::Draw;
    }
    let to_move = if depth % 2 == 0 { mover } else { mover.other() };
    let allowed = match to_move {
        FirstMover::PlayerOne => permissible.player_one(tree.color(v)),
        FirstMover::PlayerTwo => permissible.player_two(tree.color(v)),
    };
    let mut any_move = false;
    let mut all_win = true;
    for c in tree.children(v) {
        if !allowed.contains(tree.color(c)) {
            continue;
        }
        any_move = true;
        match labels[c] {
            GameLabel::Lose => return GameLabel::Win,
            GameLabel::Draw => all_win = false,
            GameLabel::Win => {}
        }
    }
    if !any_move {
        return stuck_label(kind, to_move);
    }
    if all_win {
        GameLabel::Lose
    } else {
        GameLabel::Draw
    }
}

fn stuck_label(kind: GameKind, to_move: FirstMover) -> GameLabel {
    match (kind, to_move) {
        (GameKind::Normal, _) => GameLabel::Lose,
        (GameKind::Misere, _) => GameLabel::Win,
        (GameKind::Escape, FirstMover::PlayerOne) => GameLabel::Win,
        (GameKind::Escape, FirstMover::PlayerTwo) => GameLabel::Lose,
    }
}
