//! Exact rational scalars. `Rat` is an arbitrary-precision rational held in
//! canonical form (reduced, positive denominator) by `num-rational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as a canonical rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Parses `p` or `p/q` with optional leading sign. Decimal literals are
/// rejected: exactness is the product.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    if s.contains('.') {
        return Err(format!("decimal literal `{s}` rejected; write an exact fraction p/q"));
    }
    let (num_s, den_s) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| format!("invalid integer `{num_s}`"))?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| format!("invalid integer `{d}`"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(num, den))
}

/// Renders `p/q`, or just `p` when the value is an integer.
pub fn fmt_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer not above `r`.
pub fn floor_int(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Smallest integer not below `r`.
pub fn ceil_int(r: &Rat) -> BigInt {
    r.ceil().to_integer()
}

pub fn big_to_rat(b: &BigInt) -> Rat {
    BigRational::from_integer(b.clone())
}

/// Canonical-form check used by the arithmetic property tests.
pub fn is_canonical(r: &Rat) -> bool {
    use num_integer::Integer;
    if r.denom().is_negative() || r.denom().is_zero() {
        return false;
    }
    if r.numer().is_zero() {
        return r.denom().is_one();
    }
    r.numer().gcd(r.denom()).is_one()
}
