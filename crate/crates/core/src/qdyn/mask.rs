//! Sine-ramp absorbing masks at grid edges.

use super::grid::Grid;
use super::state::WavefunctionState;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

/// Which bookkeeping counter absorbed probability goes to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Reactant,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskEdge {
    pub axis: usize,
    pub side: Side,
    /// Zone width in coordinate units. Zero disables the edge.
    pub width: f64,
    pub channel: Channel,
}

impl MaskEdge {
    /// Edge zone covering `fraction` of the axis extent.
    pub fn fractional(
        grid: &Grid,
        axis: usize,
        side: Side,
        fraction: f64,
        channel: Channel,
    ) -> Self {
        Self {
            axis,
            side,
            width: fraction * grid.axis(axis).length(),
            channel,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaskSpec {
    pub edges: Vec<MaskEdge>,
}

impl MaskSpec {
    pub fn none() -> Self {
        Self::default()
    }

    /// Absorbs at both ends of a 1D grid: reactant on the low side, product on the high side.
    pub fn both_ends_1d(grid: &Grid, fraction: f64) -> Self {
        Self {
            edges: vec![
                MaskEdge::fractional(grid, 0, Side::Low, fraction, Channel::Reactant),
                MaskEdge::fractional(grid, 0, Side::High, fraction, Channel::Product),
            ],
        }
    }
}

/// Per-point factors `f = sin(pi d / 2w)^2`, where `d` is the distance into the
/// zone measured from the outer grid edge.
#[derive(Debug, Clone)]
pub struct AbsorbingMask {
    factors: Vec<(usize, f64, Channel)>,
    cell_volume: f64,
}

impl AbsorbingMask {
    pub fn new(grid: &Grid, spec: &MaskSpec) -> Result<Self> {
        for e in &spec.edges {
            if e.axis >= grid.dims() {
                return Err(Error::InvalidParameter(format!(
                    "mask axis {} on a {}D grid",
                    e.axis,
                    grid.dims()
                )));
            }
            if !(e.width >= 0.0) || e.width > 0.5 * grid.axis(e.axis).length() {
                return Err(Error::InvalidParameter(format!(
                    "mask width {} must lie in [0, half the axis length]",
                    e.width
                )));
            }
        }
        let mut factors = Vec::new();
        for i in 0..grid.len() {
            let idx = grid.unravel(i);
            let mut f = 1.0;
            let mut chan = None;
            let mut worst = 1.0;
            for e in spec.edges.iter().filter(|e| e.width > 0.0) {
                let ax = grid.axis(e.axis);
                let x = ax.position(idx[e.axis]);
                // distance measured from one cell beyond the last grid point so no
                // point is zeroed outright
                let d = match e.side {
                    Side::Low => x - (ax.x_min - ax.dx),
                    Side::High => ax.x_max() + ax.dx - x,
                };
                if d < e.width {
                    let s = (std::f64::consts::FRAC_PI_2 * d / e.width).sin();
                    let fe = s * s;
                    f *= fe;
                    if fe < worst {
                        worst = fe;
                        chan = Some(e.channel);
                    }
                }
            }
            if let Some(c) = chan {
                factors.push((i, f, c));
            }
        }
        Ok(Self {
            factors,
            cell_volume: grid.cell_volume(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Probability currently inside any mask zone.
    pub fn probability_inside(&self, state: &WavefunctionState) -> f64 {
        self.factors
            .iter()
            .map(|&(i, _, _)| state.amplitudes[i].norm_sqr())
            .sum::<f64>()
            * self.cell_volume
    }

    /// Rejects initial states with more than `tol` probability inside the zones.
    pub fn check_clear_of(&self, state: &WavefunctionState, tol: f64) -> Result<()> {
        let overlap = self.probability_inside(state);
        if overlap > tol {
            return Err(Error::MaskOverlapsPacket { overlap });
        }
        Ok(())
    }

    /// Multiplies by the mask and books the removed probability per channel.
    pub fn apply(&self, state: &mut WavefunctionState) {
        let mut removed = [0.0f64; 2];
        for &(i, f, c) in &self.factors {
            let a = &mut state.amplitudes[i];
            let before = a.norm_sqr();
            *a *= f;
            removed[c as usize] += before - a.norm_sqr();
        }
        state.absorbed_reactant += removed[Channel::Reactant as usize] * self.cell_volume;
        state.absorbed_product += removed[Channel::Product as usize] * self.cell_volume;
    }
}

/// One-off application.
pub fn apply_absorbing_mask(state: &mut WavefunctionState, spec: &MaskSpec) -> Result<()> {
    AbsorbingMask::new(&state.grid, spec)?.apply(state);
    Ok(())
}
