use std::fmt;

/// Default number of search steps granted to exponential searches.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Step counter shared by the exhaustive searches in this crate.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    used: u64,
}

/// Returned when a search runs past its [`Budget`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exhausted;

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("search budget exhausted")
    }
}

impl std::error::Error for Exhausted {}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    /// Reads `ANONCOVER_BUDGET`, falling back to [`DEFAULT_BUDGET`].
    pub fn from_env() -> Self {
        let limit = std::env::var("ANONCOVER_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Budget::new(limit)
    }

    #[inline]
    pub fn tick(&mut self) -> Result<(), Exhausted> {
        self.charge(1)
    }

    pub fn charge(&mut self, steps: u64) -> Result<(), Exhausted> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
