//! Resource caps threaded through the long-running operations.

use crate::error::{Error, Result};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct Limits {
    /// Cap on the product of integer domain sizes a single enumeration may
    /// visit.
    pub max_int_enum: u64,
    /// Wall-clock deadline, checked inside enumeration and set-algebra loops.
    pub deadline: Option<Instant>,
    /// Player cap for bargaining-set non-emptiness.
    pub bargaining_player_cap: usize,
    /// Player cap for partition enumeration (cohesiveness).
    pub cohesive_player_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_int_enum: 1_000_000,
            deadline: None,
            bargaining_player_cap: 8,
            cohesive_player_cap: 12,
        }
    }
}

impl Limits {
    pub fn check_deadline(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(Error::TimeLimitExceeded);
            }
        }
        Ok(())
    }
}
