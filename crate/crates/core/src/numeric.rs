//! Extended-real arithmetic shared by every solver.
//!
//! Two arithmetic modes exist and are never mixed within a run: exact
//! integers ([`Int`], a wide saturating integer) and `f64`. Both reserve
//! sentinels for `+inf` and `-inf`; charges use `-inf` for "unreachable" and
//! costs use `+inf` for "infeasible".

use std::fmt::{Debug, Display};

/// Integer mode scalar. Wide enough that `price * charge` products of
/// accepted input magnitudes never saturate.
pub type Int = i128;

/// Largest magnitude accepted for an integer-mode input token.
pub const INT_TOKEN_LIMIT: Int = 1_000_000_000_000_000;

/// Comparison tolerance used for floating point results.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Copy + PartialOrd + PartialEq + Debug + Display + Send + Sync + 'static
{
    /// True for the exact integer mode.
    const INTEGRAL: bool;
    const ZERO: Self;
    const INFINITY: Self;
    const NEG_INFINITY: Self;

    fn from_i64(v: i64) -> Self;

    /// Parses a finite numeric token. `None` if the token is not a number
    /// representable in this mode.
    fn parse_finite(token: &str) -> Option<Self>;

    /// Extended addition: `+inf` absorbs everything, then `-inf`.
    fn plus(self, rhs: Self) -> Self;

    /// Subtraction of finite values.
    fn minus(self, rhs: Self) -> Self;

    /// Product of finite values.
    fn times(self, rhs: Self) -> Self;

    fn to_f64(self) -> f64;

    /// Equality up to the mode's tolerance (exact for integers).
    fn close_to(self, other: Self) -> bool;

    #[inline]
    fn is_pos_inf(self) -> bool {
        self == Self::INFINITY
    }

    #[inline]
    fn is_neg_inf(self) -> bool {
        self == Self::NEG_INFINITY
    }

    #[inline]
    fn is_finite(self) -> bool {
        !self.is_pos_inf() && !self.is_neg_inf()
    }

    #[inline]
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    #[inline]
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `max(0, self)`; infinities pass through.
    #[inline]
    fn positive_part(self) -> Self {
        self.max_of(Self::ZERO)
    }
}

impl Scalar for Int {
    const INTEGRAL: bool = true;
    const ZERO: Self = 0;
    const INFINITY: Self = Int::MAX;
    const NEG_INFINITY: Self = Int::MIN;

    fn from_i64(v: i64) -> Self {
        v as Int
    }

    fn parse_finite(token: &str) -> Option<Self> {
        let v: Int = token.parse().ok()?;
        (v.abs() <= INT_TOKEN_LIMIT).then_some(v)
    }

    #[inline]
    fn plus(self, rhs: Self) -> Self {
        if self == Int::MAX || rhs == Int::MAX {
            Int::MAX
        } else if self == Int::MIN || rhs == Int::MIN {
            Int::MIN
        } else {
            // keep the sentinels reserved
            self.saturating_add(rhs).clamp(Int::MIN + 1, Int::MAX - 1)
        }
    }

    #[inline]
    fn minus(self, rhs: Self) -> Self {
        self.saturating_sub(rhs).clamp(Int::MIN + 1, Int::MAX - 1)
    }

    #[inline]
    fn times(self, rhs: Self) -> Self {
        self.saturating_mul(rhs).clamp(Int::MIN + 1, Int::MAX - 1)
    }

    fn to_f64(self) -> f64 {
        match self {
            Int::MAX => f64::INFINITY,
            Int::MIN => f64::NEG_INFINITY,
            v => v as f64,
        }
    }

    fn close_to(self, other: Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const INTEGRAL: bool = false;
    const ZERO: Self = 0.0;
    const INFINITY: Self = f64::INFINITY;
    const NEG_INFINITY: Self = f64::NEG_INFINITY;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn parse_finite(token: &str) -> Option<Self> {
        let v: f64 = token.parse().ok()?;
        v.is_finite().then_some(v)
    }

    #[inline]
    fn plus(self, rhs: Self) -> Self {
        if self == f64::INFINITY || rhs == f64::INFINITY {
            f64::INFINITY
        } else {
            self + rhs
        }
    }

    #[inline]
    fn minus(self, rhs: Self) -> Self {
        self - rhs
    }

    #[inline]
    fn times(self, rhs: Self) -> Self {
        self * rhs
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn close_to(self, other: Self) -> bool {
        if self == other {
            return true;
        }
        if !self.is_finite() || !other.is_finite() {
            return false;
        }
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= FLOAT_TOLERANCE * scale
    }
}

/// Renders a value with the `inf` / `-inf` tokens used by every text format.
pub fn format_value<T: Scalar>(v: T) -> String {
    if v.is_pos_inf() {
        "inf".to_string()
    } else if v.is_neg_inf() {
        "-inf".to_string()
    } else {
        v.to_string()
    }
}

/// Inverse of [`format_value`].
pub fn parse_value<T: Scalar>(token: &str) -> Option<T> {
    match token {
        "inf" | "+inf" => Some(T::INFINITY),
        "-inf" => Some(T::NEG_INFINITY),
        t => T::parse_finite(t),
    }
}

/// Which arithmetic a text input calls for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    Integer,
    Float,
}

impl NumericMode {
    /// Integer mode when every numeric token of `text` is integral.
    pub fn detect(text: &str) -> Self {
        let integral = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .filter(|t| !matches!(*t, "inf" | "+inf" | "-inf"))
            .all(|t| Int::parse_finite(t).is_some() || t.parse::<f64>().is_err());
        if integral {
            NumericMode::Integer
        } else {
            NumericMode::Float
        }
    }
}
