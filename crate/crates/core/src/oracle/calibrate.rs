use super::{compare, riemann_frame};
use crate::curvature::{closed_form_table, SignConvention};
use crate::metric::DiagonalMetric;
use crate::par::Execution;

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub selected: SignConvention,
    /// Every candidate with whether it reproduced the oracle on all fixtures.
    pub candidates: Vec<(SignConvention, bool)>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CalibrationError {
    #[error("no sign convention reproduces the Christoffel computation")]
    NoMatch,
    #[error("{0} sign conventions reproduce the Christoffel computation; fixtures do not discriminate")]
    Ambiguous(usize),
}

/// Pick the unique sign convention under which the closed-form table matches
/// the Christoffel oracle on every fixture.
pub fn calibrate(
    fixtures: &[DiagonalMetric],
    tol: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Calibration, CalibrationError> {
    let oracles: Vec<_> = fixtures.iter().map(|m| riemann_frame(m, exec)).collect();
    let candidates: Vec<(SignConvention, bool)> = SignConvention::all()
        .into_iter()
        .map(|conv| {
            let ok = fixtures.iter().zip(&oracles).all(|(m, oracle)| {
                let closed = closed_form_table(m, conv, exec);
                compare(&closed, oracle, m, tol, samples, seed, exec).agrees()
            });
            (conv, ok)
        })
        .collect();
    let matches: Vec<SignConvention> = candidates.iter().filter(|c| c.1).map(|c| c.0).collect();
    match matches.as_slice() {
        [] => Err(CalibrationError::NoMatch),
        [one] => Ok(Calibration { selected: *one, candidates }),
        many => Err(CalibrationError::Ambiguous(many.len())),
    }
}

/// Calibrate on the bundled Schwarzschild and anisotropic fixtures.
pub fn calibrate_default(seed: u64) -> Result<Calibration, CalibrationError> {
    let fixtures = [crate::fixtures::load("schwarzschild"), crate::fixtures::load("anisotropic4")];
    calibrate(&fixtures, 1e-9, 32, seed, Execution::default())
}
