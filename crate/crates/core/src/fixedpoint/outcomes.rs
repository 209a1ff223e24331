use crate::error::{Error, Result};
use crate::fixedpoint::maps::{FirstMover, GameKind, GameMap};
use crate::fixedpoint::solver::{greatest_fixed_point, least_fixed_point, FixedPointResult, IterOptions};
use crate::model::{ModelSpec, ProbVector};

/// Draws more negative than this are reported as inconsistencies instead of
/// being clamped to zero.
pub const DRAW_CLAMP_TOL: f64 = 1e-9;

/// Outcome probabilities of one game with one first mover, seen from the
/// first mover, indexed by root color.
///
/// Escape with Stopper first: `win = esw`, `lose = esl`. With Escaper first:
/// `win = eew`, `lose = eel`. Escape rows never draw.
#[derive(Clone, Debug, PartialEq)]
pub struct GameOutcome {
    pub kind: GameKind,
    pub mover: FirstMover,
    pub win: ProbVector,
    pub lose: ProbVector,
    pub draw: ProbVector,
    /// Iteration from `0`, when this game's answer uses it.
    pub lower: Option<FixedPointResult>,
    /// Iteration from `1`, when this game's answer uses it.
    pub upper: Option<FixedPointResult>,
}

impl GameOutcome {
    pub fn converged(&self) -> bool {
        self.lower.as_ref().map_or(true, |r| r.converged)
            && self.upper.as_ref().map_or(true, |r| r.converged)
    }

    pub fn iterations(&self) -> usize {
        self.lower.as_ref().map_or(0, |r| r.iterations) + self.upper.as_ref().map_or(0, |r| r.iterations)
    }

    pub fn last_delta(&self) -> f64 {
        let lo = self.lower.as_ref().map_or(0.0, |r| r.last_delta);
        let hi = self.upper.as_ref().map_or(0.0, |r| r.last_delta);
        lo.max(hi)
    }
}

/// Every game and first mover solved for one model.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeTable {
    games: Vec<GameOutcome>,
    options: IterOptions,
}

impl OutcomeTable {
    pub fn get(&self, kind: GameKind, mover: FirstMover) -> &GameOutcome {
        self.games
            .iter()
            .find(|g| g.kind == kind && g.mover == mover)
            .expect("every game and mover is solved")
    }

    pub fn games(&self) -> &[GameOutcome] {
        &self.games
    }

    pub fn options(&self) -> IterOptions {
        self.options
    }

    pub fn converged(&self) -> bool {
        self.games.iter().all(GameOutcome::converged)
    }

    /// `nw_i`, `nl_i`, `nd_i` for first mover `i`.
    pub fn normal(&self, mover: FirstMover) -> &GameOutcome {
        self.get(GameKind::Normal, mover)
    }

    pub fn misere(&self, mover: FirstMover) -> &GameOutcome {
        self.get(GameKind::Misere, mover)
    }

    /// `esw`: Stopper plays first and wins.
    pub fn esw(&self) -> &ProbVector {
        &self.get(GameKind::Escape, FirstMover::PlayerOne).win
    }

    /// `esl = 1 - esw`.
    pub fn esl(&self) -> &ProbVector {
        &self.get(GameKind::Escape, FirstMover::PlayerOne).lose
    }

    /// `eew`: Escaper plays first and wins.
    pub fn eew(&self) -> &ProbVector {
        &self.get(GameKind::Escape, FirstMover::PlayerTwo).win
    }

    /// `eel = 1 - eew`.
    pub fn eel(&self) -> &ProbVector {
        &self.get(GameKind::Escape, FirstMover::PlayerTwo).lose
    }
}

/// Solves all six games by iterating each map from `0` and from `1`.
pub fn solve_outcomes(spec: &ModelSpec, opts: IterOptions) -> Result<OutcomeTable> {
    let mut games = Vec::with_capacity(6);
    for kind in GameKind::ALL {
        for mover in FirstMover::ALL {
            games.push(solve_game(spec, kind, mover, opts)?);
        }
    }
    Ok(OutcomeTable { games, options: opts })
}

/// Solves one game with one first mover.
pub fn solve_game(spec: &ModelSpec, kind: GameKind, mover: FirstMover, opts: IterOptions) -> Result<GameOutcome> {
    let map = GameMap::new(spec, kind, mover);
    let m = spec.num_colors();
    let outcome = match (kind, mover) {
        (GameKind::Normal | GameKind::Misere, _) => {
            let lower = least_fixed_point(&map, opts);
            let upper = greatest_fixed_point(&map, opts);
            let win = lower.point.clone();
            let lose = upper.point.complement();
            let draw = draws(&win, &lose, kind, mover)?;
            GameOutcome { kind, mover, win, lose, draw, lower: Some(lower), upper: Some(upper) }
        }
        (GameKind::Escape, FirstMover::PlayerOne) => {
            let lower = least_fixed_point(&map, opts);
            let win = lower.point.clone();
            let lose = win.complement();
            GameOutcome { kind, mover, win, lose, draw: ProbVector::zeros(m), lower: Some(lower), upper: None }
        }
        (GameKind::Escape, FirstMover::PlayerTwo) => {
            let upper = greatest_fixed_point(&map, opts);
            let lose = upper.point.complement();
            let win = upper.point.clone();
            GameOutcome { kind, mover, win, lose, draw: ProbVector::zeros(m), lower: None, upper: Some(upper) }
        }
    };
    Ok(outcome)
}

fn draws(win: &ProbVector, lose: &ProbVector, kind: GameKind, mover: FirstMover) -> Result<ProbVector> {
    let mut out = Vec::with_capacity(win.len());
    for j in 0..win.len() {
        let d = 1.0 - win[j] - lose[j];
        if d < -DRAW_CLAMP_TOL {
            return Err(Error::Consistency(format!(
                "{} game, player {} first, color {}: least fixed point exceeds greatest by {:e}",
                kind.name(),
                mover.number(),
                j + 1,
                -d
            )));
        }
        out.push(d.max(0.0));
    }
    Ok(ProbVector::from_clamped(out))
}
