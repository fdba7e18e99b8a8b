use crate::error::{Error, Result};
use crate::poset::Poset;

/// Element-count cap for operations that enumerate chains or subsets.
///
/// The cap can be lowered from [`SizeLimit::MAX`] but never raised above it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeLimit(usize);

impl SizeLimit {
    pub const MAX: usize = 20;

    pub fn new(limit: usize) -> Result<Self> {
        if limit > Self::MAX {
            Err(Error::Usage(format!(
                "exhaustive size limit {limit} exceeds the maximum of {}",
                Self::MAX
            )))
        } else {
            Ok(SizeLimit(limit))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, p: &Poset) -> Result<()> {
        if p.len() > self.0 {
            Err(Error::SizeLimitExceeded {
                n: p.len(),
                limit: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeLimit {
    fn default() -> Self {
        SizeLimit(Self::MAX)
    }
}
