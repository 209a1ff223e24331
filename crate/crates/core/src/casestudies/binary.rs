use crate::error::{Error, Result};
use crate::fixedpoint::{solve_outcomes, FirstMover, IterOptions, OutcomeTable};
use crate::model::{monochromatic_two_color, ModelSpec, OffspringLaw, TableEntry, NORMALIZATION_TOL};

/// Agreement required between the closed-form verdict and the solver.
pub const BINARY_CROSS_CHECK_TOL: f64 = 1e-6;

/// Two colors, blue (color 1) and red (color 2), each vertex having no
/// child, two blue, two red, or one of each. `p*` is the law of a blue
/// parent and `q*` of a red one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryParams {
    pub p0: f64,
    pub pbb: f64,
    pub prr: f64,
    pub pbr: f64,
    pub q0: f64,
    pub qbb: f64,
    pub qrr: f64,
    pub qbr: f64,
}

impl BinaryParams {
    pub fn new(blue: [f64; 4], red: [f64; 4]) -> Result<Self> {
        for (what, row) in [("blue", blue), ("red", red)] {
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(Error::InvalidArgument(format!("{what} probabilities must be non-negative")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::InvalidArgument(format!("{what} probabilities sum to {total}, not 1")));
            }
        }
        Ok(BinaryParams {
            p0: blue[0],
            pbb: blue[1],
            prr: blue[2],
            pbr: blue[3],
            q0: red[0],
            qbb: red[1],
            qrr: red[2],
            qbr: red[3],
        })
    }

    /// Whether every vertex surely has one blue and one red child.
    pub fn is_mixed_pair(&self) -> bool {
        (self.pbr - 1.0).abs() <= NORMALIZATION_TOL && (self.qbr - 1.0).abs() <= NORMALIZATION_TOL
    }
}

/// The two-color table model with `S_b = {b}` and `S_r = {r}` and a uniform
/// root color.
pub fn binary_to_spec(params: &BinaryParams) -> Result<ModelSpec> {
    let law = |p0: f64, bb: f64, rr: f64, br: f64| {
        OffspringLaw::table(
            2,
            vec![
                TableEntry { counts: vec![0, 0], prob: p0 },
                TableEntry { counts: vec![2, 0], prob: bb },
                TableEntry { counts: vec![0, 2], prob: rr },
                TableEntry { counts: vec![1, 1], prob: br },
            ],
        )
    };
    monochromatic_two_color(
        law(params.p0, params.pbb, params.prr, params.pbr)?,
        law(params.q0, params.qbb, params.qrr, params.qbr)?,
    )
}

/// Closed-form answer for the binary model and the solver values it was
/// checked against.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryVerdict {
    /// 1 when every game draws (normal, misère) or escapes (escape) from
    /// both colors with both first movers; 0 otherwise.
    pub draw: u8,
    pub outcomes: OutcomeTable,
    /// Largest gap between the verdict and a solved draw or escape value.
    pub max_deviation: f64,
}

/// The normal and misère games draw surely and Escaper surely survives when
/// every vertex has one blue and one red child; otherwise none of these
/// happen with positive probability.
pub fn binary_verdict(params: &BinaryParams) -> Result<BinaryVerdict> {
    let spec = binary_to_spec(params)?;
    let outcomes = solve_outcomes(&spec, IterOptions::default())?;
    let draw = u8::from(params.is_mixed_pair());
    let expected = f64::from(draw);
    let mut max_deviation: f64 = 0.0;
    for mover in FirstMover::ALL {
        for v in [&outcomes.normal(mover).draw, &outcomes.misere(mover).draw] {
            for j in 0..2 {
                max_deviation = max_deviation.max((v[j] - expected).abs());
            }
        }
    }
    for j in 0..2 {
        max_deviation = max_deviation.max((outcomes.esl()[j] - expected).abs());
    }
    if max_deviation > BINARY_CROSS_CHECK_TOL {
        return Err(Error::Consistency(format!(
            "binary verdict draw={draw} differs from the solver by {max_deviation:e}"
        )));
    }
    Ok(BinaryVerdict {
        draw,
        outcomes,
        max_deviation,
    })
}
