use crate::error::{Error, Result};

/// `(2k − 1)!!`, with `(−1)!! = 1`.
pub fn double_factorial(k: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    for m in 1..=k {
        acc = acc.checked_mul(2 * m as u64 - 1).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// Exact binomial coefficient `C(n, j)`.
pub fn binomial(n: u64, j: u64) -> Result<u64> {
    if j > n {
        return Err(Error::OutOfRange("binomial needs j <= n"));
    }
    let j = j.min(n - j);
    let mut acc: u128 = 1;
    for i in 1..=j as u128 {
        // acc * (n - j + i) is divisible by i: it equals i * C(n - j + i, i)
        acc = acc.checked_mul(n as u128 - j as u128 + i).ok_or(Error::Overflow)? / i;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow)
}
