use crate::model::{ColorSet, ModelSpec, ProbVector};

/// Which of the three games is played.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    /// A player who cannot move loses.
    Normal,
    /// A player who cannot move wins.
    Misere,
    /// Stopper wins iff the game ever halts.
    Escape,
}

impl GameKind {
    pub const ALL: [GameKind; 3] = [GameKind::Normal, GameKind::Misere, GameKind::Escape];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::Normal => "normal",
            GameKind::Misere => "misere",
            GameKind::Escape => "escape",
        }
    }
}

/// Who plays the first round. In the escape game player one is Stopper and
/// player two is Escaper.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FirstMover {
    PlayerOne,
    PlayerTwo,
}

impl FirstMover {
    pub const ALL: [FirstMover; 2] = [FirstMover::PlayerOne, FirstMover::PlayerTwo];

    pub fn other(self) -> Self {
        match self {
            FirstMover::PlayerOne => FirstMover::PlayerTwo,
            FirstMover::PlayerTwo => FirstMover::PlayerOne,
        }
    }

    /// 1 or 2.
    pub fn number(self) -> usize {
        match self {
            FirstMover::PlayerOne => 1,
            FirstMover::PlayerTwo => 2,
        }
    }

    /// Colors this player may move to from a color-`j` vertex.
    pub fn moves(self, spec: &ModelSpec, j: usize) -> ColorSet {
        match self {
            FirstMover::PlayerOne => spec.permissible().player_one(j),
            FirstMover::PlayerTwo => spec.permissible().player_two(j),
        }
    }
}

/// A monotone self-map of `[0,1]^m`.
pub trait MonotoneMap {
    fn dim(&self) -> usize;

    /// Writes `F(x)` into `out`.
    fn apply_into(&self, x: &[f64], out: &mut [f64]);

    fn apply(&self, x: &ProbVector) -> ProbVector {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(x.as_slice(), &mut out);
        ProbVector::from_clamped(out)
    }
}

/// The game map of one (game, first mover) pair.
///
/// With `A` the moves of the first mover and `B` those of the other player,
/// and `a`, `b` the chances of having no such move, the maps are
///
/// ```text
/// normal: F_j(x) = 1 - G_{j,A_j}(1 - G_{k,B_k}(x) : k in A_j)
/// misère: F_j(x) = a_j + 1 - G_{j,A_j}(1 - G_{k,B_k}(x) + b_k : k in A_j)
/// escape, Stopper first: F_j(x) = a_j + 1 - G_{j,A_j}(1 - G_{k,B_k}(x) : k in A_j)
/// escape, Escaper first: F_j(x) = 1 - G_{j,A_j}(b_k + 1 - G_{k,B_k}(x) : k in A_j)
/// ```
///
/// where for Escaper first `A` is Escaper's set and `b` is Stopper's `alpha`.
#[derive(Clone, Debug)]
pub struct GameMap {
    spec: ModelSpec,
    kind: GameKind,
    mover: FirstMover,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl GameMap {
    pub fn new(spec: &ModelSpec, kind: GameKind, mover: FirstMover) -> Self {
        let (alpha, beta) = spec.alpha_beta();
        GameMap {
            spec: spec.clone(),
            kind,
            mover,
            alpha: alpha.into_vec(),
            beta: beta.into_vec(),
        }
    }

    pub fn kind(&self) -> GameKind {
        self.kind
    }

    pub fn mover(&self) -> FirstMover {
        self.mover
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Chance that the first (resp. second) mover has no move from each
    /// color.
    fn stuck(&self) -> (&[f64], &[f64]) {
        match self.mover {
            FirstMover::PlayerOne => (&self.alpha, &self.beta),
            FirstMover::PlayerTwo => (&self.beta, &self.alpha),
        }
    }
}

impl MonotoneMap for GameMap {
    fn dim(&self) -> usize {
        self.spec.num_colors()
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        let m = self.dim();
        let first = self.mover;
        let second = first.other();
        let (stuck_first, stuck_second) = self.stuck();
        let mut inner = vec![0.0; m];
        for k in 0..m {
            let g = self.spec.offspring(k).pgf_unchecked(second.moves(&self.spec, k), x);
            inner[k] = match (self.kind, first) {
                (GameKind::Normal, _) | (GameKind::Escape, FirstMover::PlayerOne) => 1.0 - g,
                (GameKind::Misere, _) => 1.0 - g + stuck_second[k],
                (GameKind::Escape, FirstMover::PlayerTwo) => stuck_second[k] + 1.0 - g,
            }
            .clamp(0.0, 1.0);
        }
        for j in 0..m {
            let g = self.spec.offspring(j).pgf_unchecked(first.moves(&self.spec, j), &inner);
            let v = match (self.kind, first) {
                (GameKind::Normal, _) | (GameKind::Escape, FirstMover::PlayerTwo) => 1.0 - g,
                (GameKind::Misere, _) | (GameKind::Escape, FirstMover::PlayerOne) => {
                    stuck_first[j] + 1.0 - g
                }
            };
            out[j] = v.clamp(0.0, 1.0);
        }
    }
}
