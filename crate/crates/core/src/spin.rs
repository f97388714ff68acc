use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// Spin magnitude stored as `two_s = 2S` so half-integer spins stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinMagnitude {
    two_s: u32,
}

impl SpinMagnitude {
    pub fn new(two_s: u32) -> Result<Self> {
        if two_s == 0 {
            return domain("two_s must be at least 1");
        }
        if two_s > 64 {
            return domain("two_s above 64 is not supported");
        }
        Ok(Self { two_s })
    }

    pub fn half() -> Self {
        Self { two_s: 1 }
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    pub fn s(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    /// Dimension 2S+1 of the single-site space.
    pub fn local_dim(&self) -> usize {
        self.two_s as usize + 1
    }
}

impl std::fmt::Display for SpinMagnitude {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.two_s % 2 == 0 {
            write!(f, "{}", self.two_s / 2)
        } else {
            write!(f, "{}/2", self.two_s)
        }
    }
}
