//! Size caps for dense computations. `NCDIFF_MAX_SPACE_DIM` overrides the default.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_SPACE_DIM: usize = 4096;

pub fn max_space_dim() -> usize {
    std::env::var("NCDIFF_MAX_SPACE_DIM").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_SPACE_DIM)
}

pub fn check(what: &'static str, value: usize) -> Result<()> {
    let cap = max_space_dim();
    if value > cap {
        return Err(Error::SizeCap { what, value, cap });
    }
    Ok(())
}

/// Dense rational eliminations are allowed `64 · cap` matrix entries.
pub fn check_dense(what: &'static str, rows: usize, cols: usize) -> Result<()> {
    let cap = max_space_dim().saturating_mul(64);
    let value = rows.saturating_mul(cols);
    if value > cap {
        return Err(Error::SizeCap { what, value, cap });
    }
    Ok(())
}
