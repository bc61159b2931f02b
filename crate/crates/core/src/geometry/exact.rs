use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::Scalar;

/// Exact square root of a non-negative rational, if it is rational.
pub fn isqrt_exact(value: &Scalar) -> Option<Scalar> {
    if value.is_negative() {
        return None;
    }
    let num = value.numer();
    let den = value.denom();
    let rn = num.sqrt();
    let rd = den.sqrt();
    (&rn * &rn == *num && &rd * &rd == *den).then(|| Scalar::new(rn, rd))
}

/// Rational upper bound on `sqrt(value)` with absolute error below
/// `2^-bits`, and whether it is exact.
pub fn sqrt_upper(value: &Scalar, bits: u32) -> (Scalar, bool) {
    assert!(!value.is_negative(), "sqrt of negative value");
    if let Some(root) = isqrt_exact(value) {
        return (root, true);
    }
    let scale = BigInt::one() << (2 * bits as usize);
    // floor(value * 4^bits)
    let scaled = (value.numer() * &scale) / value.denom();
    let root = scaled.sqrt();
    let upper = Scalar::new(root + BigInt::one(), BigInt::one() << bits as usize);
    debug_assert!(&upper * &upper >= *value);
    (upper, false)
}
