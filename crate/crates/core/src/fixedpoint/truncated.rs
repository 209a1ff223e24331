use crate::fixedpoint::maps::{FirstMover, GameKind};
use crate::model::{ModelSpec, ProbVector};

/// Probabilities that each game is decided within `depth` rounds, by root
/// color. Index `0` of the pairs is player one moving first, index `1`
/// player two.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedValues {
    pub depth: usize,
    pub nw: [ProbVector; 2],
    pub nl: [ProbVector; 2],
    pub mw: [ProbVector; 2],
    pub ml: [ProbVector; 2],
    /// Stopper plays first and wins.
    pub esw: ProbVector,
    /// Escaper plays first and loses.
    pub eel: ProbVector,
}

impl TruncatedValues {
    /// Win and lose probabilities of the first mover. Escape losses of
    /// Stopper and escape wins of Escaper are never decided in finitely
    /// many rounds, so those vectors are zero.
    pub fn win_lose(&self, kind: GameKind, mover: FirstMover) -> (ProbVector, ProbVector) {
        let i = mover.number() - 1;
        let m = self.esw.len();
        match kind {
            GameKind::Normal => (self.nw[i].clone(), self.nl[i].clone()),
            GameKind::Misere => (self.mw[i].clone(), self.ml[i].clone()),
            GameKind::Escape => match mover {
                FirstMover::PlayerOne => (self.esw.clone(), ProbVector::zeros(m)),
                FirstMover::PlayerTwo => (ProbVector::zeros(m), self.eel.clone()),
            },
        }
    }
}

/// Runs the finite-depth recursions `depth` times from the all-zero base.
pub fn truncated_values(spec: &ModelSpec, depth: usize) -> TruncatedValues {
    let mut state = State::zero(spec.num_colors());
    for _ in 0..depth {
        state = state.step(spec);
    }
    state.into_values(depth)
}

/// Every depth from `0` to `depth`.
pub fn truncated_sequence(spec: &ModelSpec, depth: usize) -> Vec<TruncatedValues> {
    let mut state = State::zero(spec.num_colors());
    let mut out = vec![state.clone().into_values(0)];
    for n in 1..=depth {
        state = state.step(spec);
        out.push(state.clone().into_values(n));
    }
    out
}

#[derive(Clone)]
struct State {
    nw: [Vec<f64>; 2],
    nl: [Vec<f64>; 2],
    mw: [Vec<f64>; 2],
    ml: [Vec<f64>; 2],
    esw: Vec<f64>,
    eel: Vec<f64>,
}

impl State {
    fn zero(m: usize) -> Self {
        let z = vec![0.0; m];
        State {
            nw: [z.clone(), z.clone()],
            nl: [z.clone(), z.clone()],
            mw: [z.clone(), z.clone()],
            ml: [z.clone(), z.clone()],
            esw: z.clone(),
            eel: z,
        }
    }

    fn step(&self, spec: &ModelSpec) -> Self {
        let m = spec.num_colors();
        let (alpha, beta) = spec.alpha_beta();
        let stuck = [alpha.as_slice(), beta.as_slice()];
        let mut next = State::zero(m);
        let complement = |v: &[f64]| v.iter().map(|x| 1.0 - x).collect::<Vec<_>>();
        for (i, mover) in FirstMover::ALL.into_iter().enumerate() {
            let o = 1 - i;
            let one_minus_nl = complement(&self.nl[o]);
            let one_minus_ml = complement(&self.ml[o]);
            for j in 0..m {
                let law = spec.offspring(j);
                let set = mover.moves(spec, j);
                let a = stuck[i][j];
                next.nw[i][j] = 1.0 - law.pgf_unchecked(set, &one_minus_nl);
                next.nl[i][j] = law.pgf_unchecked(set, &self.nw[o]);
                next.mw[i][j] = a + 1.0 - law.pgf_unchecked(set, &one_minus_ml);
                next.ml[i][j] = law.pgf_unchecked(set, &self.mw[o]) - a;
            }
        }
        let one_minus_eel = complement(&self.eel);
        for j in 0..m {
            let law = spec.offspring(j);
            let p = spec.permissible();
            next.esw[j] = alpha[j] + 1.0 - law.pgf_unchecked(p.player_one(j), &one_minus_eel);
            next.eel[j] = law.pgf_unchecked(p.player_two(j), &self.esw);
        }
        next
    }

    fn into_values(self, depth: usize) -> TruncatedValues {
        let wrap = |[a, b]: [Vec<f64>; 2]| [ProbVector::from_clamped(a), ProbVector::from_clamped(b)];
        TruncatedValues {
            depth,
            nw: wrap(self.nw),
            nl: wrap(self.nl),
            mw: wrap(self.mw),
            ml: wrap(self.ml),
            esw: ProbVector::from_clamped(self.esw),
            eel: ProbVector::from_clamped(self.eel),
        }
    }
}
