//! Exact-arithmetic guard shared by every module.
//!
//! All scores, prices and costs are nonnegative integers that must stay at or
//! below `2^63 - 1`. Exceeding that bound is an error, never a wraparound.

/// Largest magnitude any score, price or cost may take.
pub const MAX_EXACT: u64 = i64::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("arithmetic overflow: value exceeds 2^63-1")]
pub struct Overflow;

pub fn checked_add(a: u64, b: u64) -> Result<u64, Overflow> {
    a.checked_add(b).filter(|&v| v <= MAX_EXACT).ok_or(Overflow)
}

pub fn checked_mul(a: u64, b: u64) -> Result<u64, Overflow> {
    a.checked_mul(b).filter(|&v| v <= MAX_EXACT).ok_or(Overflow)
}

pub fn checked_sum<I: IntoIterator<Item = u64>>(values: I) -> Result<u64, Overflow> {
    values.into_iter().try_fold(0, checked_add)
}

/// Narrows a wide intermediate back into the exact range.
pub fn narrow(v: u128) -> Result<u64, Overflow> {
    if v <= u128::from(MAX_EXACT) {
        Ok(v as u64)
    } else {
        Err(Overflow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_inclusive() {
        assert_eq!(checked_add(MAX_EXACT - 1, 1), Ok(MAX_EXACT));
        assert_eq!(checked_add(MAX_EXACT, 1), Err(Overflow));
        assert_eq!(checked_mul(1 << 32, 1 << 31), Err(Overflow));
        assert_eq!(narrow(u128::from(MAX_EXACT) + 1), Err(Overflow));
    }
}
