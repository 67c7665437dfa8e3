//! Exact rational helpers shared by the stability and geometry code.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// Exact rational number used for phases, stability vectors and path parameters.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// Parse `p/q` or an integer, with optional sign.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        s.parse::<i64>().ok().map(Q::from_integer)
    }
}

/// Parse a comma-separated list of rationals.
pub fn parse_q_list(s: &str) -> Option<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

/// `p/q` for proper fractions, plain integer otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Euclidean pairing of a rational vector with a dimension vector.
pub fn pair(theta: &[Q], dims: &[usize]) -> Q {
    assert_eq!(theta.len(), dims.len(), "pairing of vectors of different length");
    theta.iter().zip(dims).fold(Q::zero(), |acc, (t, &d)| acc + *t * Q::from_integer(d as i64))
}

/// Pairing of two rational vectors.
pub fn dot(a: &[Q], b: &[Q]) -> Q {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + *x * *y)
}

/// Scale a nonzero rational vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Q]) -> Vec<i64> {
    let lcm = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * Q::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Decimal rendering with a fixed number of places, used only for drawing.
pub fn to_decimal(x: &Q, places: u32) -> String {
    let scale = 10i128.pow(places);
    let n = *x.numer() as i128 * scale;
    let d = *x.denom() as i128;
    // round half away from zero
    let mut r = (2 * n.abs() + d) / (2 * d);
    if n < 0 {
        r = -r;
    }
    let neg = r < 0;
    let r = r.abs();
    let int = r / scale;
    let frac = r % scale;
    format!("{}{}.{:0width$}", if neg { "-" } else { "" }, int, frac, width = places as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3/4"), Some(q(3, 4)));
        assert_eq!(parse_q("-2"), Some(qi(-2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&q(6, 8)), "3/4");
        assert_eq!(fmt_q(&qi(-1)), "-1");
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[q(1, 2), q(-1, 3)]), vec![3, -2]);
        assert_eq!(primitive(&[qi(0), qi(4)]), vec![0, 1]);
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&q(1, 3), 6), "0.333333");
        assert_eq!(to_decimal(&q(-2, 3), 6), "-0.666667");
        assert_eq!(to_decimal(&qi(2), 2), "2.00");
    }
}
