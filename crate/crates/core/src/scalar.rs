//! Scalar abstraction shared by every valuation, sample and learner.
//!
//! Game values are generic over [`Scalar`] so the same code runs on `f64`
//! for fast sweeps and on [`BigRational`] where comparisons must be exact
//! (fractional valuations, linear-system learning, probability checks).

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Numeric type usable as a coalition value.
pub trait Scalar:
    Num + Signed + Clone + Debug + Display + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic and comparisons are exact.
    const EXACT: bool;

    /// Parses a decimal literal (`-1`, `2.5`, `1e-3`) or, for exact types, a
    /// ratio `p/q`.
    fn parse_literal(text: &str) -> Option<Self>;

    /// Equality used by consistency checks: exact for rationals, a tight
    /// relative tolerance for floats.
    fn same_value(&self, other: &Self) -> bool;

    /// Text form that [`Scalar::parse_literal`] reads back to the same value.
    fn literal(&self) -> String;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer is representable")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn parse_literal(text: &str) -> Option<Self> {
                let text = text.trim();
                if let Some((p, q)) = text.split_once('/') {
                    let p: $t = p.trim().parse().ok()?;
                    let q: $t = q.trim().parse().ok()?;
                    return (q != 0.0).then(|| p / q);
                }
                text.parse().ok().filter(|v: &$t| v.is_finite())
            }

            fn same_value(&self, other: &Self) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                (self - other).abs() <= $tol * scale
            }

            fn literal(&self) -> String {
                if self.fract() == 0.0 && self.abs() < 1e15 {
                    format!("{:.1}", self)
                } else {
                    format!("{:?}", self)
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

fn parse_decimal(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn parse_literal(text: &str) -> Option<Self> {
        match text.split_once('/') {
            Some((p, q)) => {
                let p = parse_decimal(p)?;
                let q = parse_decimal(q)?;
                (!q.is_zero()).then(|| p / q)
            }
            None => parse_decimal(text),
        }
    }

    fn same_value(&self, other: &Self) -> bool {
        self == other
    }

    fn literal(&self) -> String {
        if self.is_integer() {
            format!("{}.0", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for Ratio<i64> {
    const EXACT: bool = true;

    fn parse_literal(text: &str) -> Option<Self> {
        let big = BigRational::parse_literal(text)?;
        Some(Ratio::new(big.numer().to_i64()?, big.denom().to_i64()?))
    }

    fn same_value(&self, other: &Self) -> bool {
        self == other
    }

    fn literal(&self) -> String {
        if self.is_integer() {
            format!("{}.0", self.numer())
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Converts between scalar types through the exact rational route when the
/// target is exact, otherwise through `f64`.
pub fn convert<A: Scalar, B: Scalar>(value: &A) -> B {
    if B::EXACT {
        let exact = to_exact(value);
        let text = exact.literal();
        B::parse_literal(&text).expect("exact value converts")
    } else {
        B::from_f64(value.to_f64().expect("finite value")).expect("finite value")
    }
}

/// Exact rational view of a scalar. Floats convert to their exact binary value.
pub fn to_exact<A: Scalar>(value: &A) -> BigRational {
    if A::EXACT {
        BigRational::parse_literal(&value.literal()).expect("exact literal")
    } else {
        BigRational::from_float(value.to_f64().expect("finite value")).expect("finite value")
    }
}

/// Largest `f` with `2^f <= 1/eps`, i.e. `floor(log2(1/eps))`, computed
/// without logarithms so exact inputs stay exact.
pub fn floor_log2_recip<T: Scalar>(eps: &T) -> usize {
    assert!(eps > &T::zero(), "eps must be positive");
    let mut f = 0usize;
    let mut scaled = eps.clone() * T::two();
    while scaled <= T::one() {
        f += 1;
        scaled = scaled * T::two();
    }
    f
}

/// A value extended with a bottom element, used by learners for
/// never-observed configurations. No arithmetic is defined on it.
#[derive(Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Extended<T> {
    NegInf,
    Finite(T),
}

impl<T> Extended<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::NegInf => None,
            Extended::Finite(v) => Some(v),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }
}

impl<T: PartialOrd> PartialOrd for Extended<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Extended::NegInf, Extended::NegInf) => Some(Ordering::Equal),
            (Extended::NegInf, Extended::Finite(_)) => Some(Ordering::Less),
            (Extended::Finite(_), Extended::NegInf) => Some(Ordering::Greater),
            (Extended::Finite(a), Extended::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: Debug> Debug for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(v) => write!(f, "{v:?}"),
        }
    }
}

impl<T: Display> Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(v) => write!(f, "{v}"),
        }
    }
}
