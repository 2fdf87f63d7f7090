//! The saturation map and the feedback laws built on it.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::state::State;

/// Clipping levels: the saturated signal lives in `[-u_min, u_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationLevels<T> {
    u_min: T,
    u_max: T,
}

impl<T: Real> SaturationLevels<T> {
    pub fn new(u_min: T, u_max: T) -> Result<Self> {
        if !(u_min > T::zero() && u_max > T::zero()) || !u_min.is_finite() || !u_max.is_finite() {
            return Err(Error::InvalidLevels {
                u_min: u_min.to_f64_lossy(),
                u_max: u_max.to_f64_lossy(),
            });
        }
        Ok(Self { u_min, u_max })
    }

    /// Same level `u0` on both sides.
    pub fn symmetric(u0: T) -> Result<Self> {
        Self::new(u0, u0)
    }

    #[inline]
    pub fn u_min(&self) -> T {
        self.u_min
    }

    #[inline]
    pub fn u_max(&self) -> T {
        self.u_max
    }

    pub fn is_symmetric(&self) -> bool {
        self.u_min == self.u_max
    }

    /// Largest magnitude the saturated signal can reach.
    pub fn bound(&self) -> T {
        self.u_min.max(self.u_max)
    }
}

#[inline]
pub fn sat<T: Real>(s: T, levels: &SaturationLevels<T>) -> T {
    if s < -levels.u_min {
        -levels.u_min
    } else if s > levels.u_max {
        levels.u_max
    } else {
        s
    }
}

/// Applies [`sat`] at every node; the time stamp is kept.
pub fn sat_state<T: Real>(state: &State<T>, levels: &SaturationLevels<T>) -> State<T> {
    state.map(|v| sat(v, levels))
}

/// Distributed control `f(t, x)` acting on the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedbackLaw<T> {
    OpenLoop,
    /// `f = a y`
    Linear {
        gain: T,
    },
    /// `f = a sat(y)`
    Saturated {
        gain: T,
        levels: SaturationLevels<T>,
    },
}

impl<T: Real> FeedbackLaw<T> {
    pub fn linear(gain: T) -> Result<Self> {
        check_gain(gain)?;
        Ok(Self::Linear { gain })
    }

    pub fn saturated(gain: T, levels: SaturationLevels<T>) -> Result<Self> {
        check_gain(gain)?;
        Ok(Self::Saturated { gain, levels })
    }

    /// Feedback gain, zero for the open loop.
    pub fn gain(&self) -> T {
        match *self {
            Self::OpenLoop => T::zero(),
            Self::Linear { gain } | Self::Saturated { gain, .. } => gain,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::OpenLoop => Ok(()),
            Self::Linear { gain } | Self::Saturated { gain, .. } => check_gain(gain),
        }
    }

    /// Pointwise control value for a nodal value `y`.
    pub fn control(&self, y: T) -> T {
        match self {
            Self::OpenLoop => T::zero(),
            Self::Linear { gain } => *gain * y,
            Self::Saturated { gain, levels } => *gain * sat(y, levels),
        }
    }
}

fn check_gain<T: Real>(gain: T) -> Result<()> {
    if gain > T::zero() && gain.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGain(gain.to_f64_lossy()))
    }
}
