use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Renders `p` for integers and `p/q` otherwise.
pub fn render_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q`; returns `None` on malformed text or a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_and_parse() {
        let half = Rational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(render_rational(&half), "-1/2");
        assert_eq!(render_rational(&Rational::from_integer(BigInt::from(7))), "7");
        assert_eq!(parse_rational("2/-4"), Some(half));
        assert_eq!(parse_rational(" 0 "), Some(Rational::zero()));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn reduced_with_positive_denominator() {
        let x = Rational::new(BigInt::from(6), BigInt::from(-4));
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }
}
