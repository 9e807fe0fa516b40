use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid/potential mismatch: {0}")]
    GridMismatch(String),

    #[error("packet centre {x0} lies within {margin} of the grid edge (need > 5 gamma)")]
    PacketTooCloseToEdge { x0: f64, margin: f64 },

    #[error("packet momentum {p0} aliases on a grid with p_max = {p_max} (need |p0| < 0.8 p_max)")]
    MomentumAliasing { p0: f64, p_max: f64 },

    #[error(
        "energy {energy} too small for packet width {gamma}: centre momentum would be imaginary"
    )]
    ImaginaryMomentum { energy: f64, gamma: f64 },

    #[error(
        "absorbing mask overlaps the initial packet (probability {overlap:.3e} inside mask zones)"
    )]
    MaskOverlapsPacket { overlap: f64 },

    #[error("dividing line y = {y} lies outside the grid [{y_min}, {y_max}]")]
    FluxLineOutsideGrid { y: f64, y_min: f64, y_max: f64 },

    #[error("stochastic step unstable at t = {time}: norm changed by {change:.3e}; reduce dt")]
    StepInstability { time: f64, change: f64 },

    #[error("realization {index}: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(
        "closed-form transmission requires c^2 = 8 m V0 / (hbar alpha)^2 > 1, got {c_squared}"
    )]
    TransmissionBranch { c_squared: f64 },

    #[error("energy {energy} outside the bound range (0, {depth})")]
    EnergyOutOfRange { energy: f64, depth: f64 },

    #[error("window [{lo}, {hi}] not covered by the sweep")]
    WindowOutsideSweep { lo: f64, hi: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn in_realization(self, index: usize) -> Self {
        Error::Realization {
            index,
            source: Box::new(self),
        }
    }
}
