use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar argument fell outside the domain of the formula.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Analytic forms that only exist in one phase of the model.
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(&'static str),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("coupling {target} rad/us is unreachable with this circuit (arccos argument {argument})")]
    UnreachableCoupling { target: f64, argument: f64 },

    /// Several junction phases solve the flux relation.
    #[error("ambiguous flux inversion, roots in (0, pi): {roots:?}")]
    AmbiguousFlux { roots: Vec<f64> },

    #[error("mode {index} is resonant with the cavity (detuning {detuning:e})")]
    ResonantMode { index: usize, detuning: f64 },

    #[error("degenerate pole pair (exceptional point) at {pole_re} + {pole_im}i")]
    DegeneratePoles { pole_re: f64, pole_im: f64 },

    #[error("transmission vanishes, susceptibility has a pole")]
    TransmissionPole,

    #[error("no revival above 0.5 population on site {site}")]
    NoOscillation { site: usize },

    #[error("photon cutoff not converged: result moved by {shift:e} on doubling")]
    CutoffNotConverged { shift: f64 },

    #[error("integrator failed at t = {time}: step size {step:e} underflowed")]
    Integrator { time: f64, step: f64 },
}
