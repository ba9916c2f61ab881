//! Exact energies.
//!
//! Every energy in a model is an exact rational number. Equality of ground
//! energies (degeneracy counts, the EDC property) is therefore decided
//! without rounding. Solvers rescale all tables of a model to a common
//! denominator and work on plain integers internally.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Energy(Ratio<i64>);

impl Energy {
    pub const ZERO: Energy = Energy(Ratio::new_raw(0, 1));
    pub const ONE: Energy = Energy(Ratio::new_raw(1, 1));

    pub fn int(value: i64) -> Self {
        Energy(Ratio::from_integer(value))
    }

    /// Panics if `denom` is zero.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Energy(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> Self {
        if self.numer() < 0 {
            -*self
        } else {
            *self
        }
    }

    /// Numerator after rescaling to denominator `denom`, which must be a
    /// multiple of this energy's own denominator.
    pub(crate) fn scaled_to(&self, denom: i64) -> Option<i64> {
        let factor = denom / self.denom();
        self.numer().checked_mul(factor)
    }

    pub(crate) fn from_scaled(value: i64, denom: i64) -> Self {
        Energy(Ratio::new(value, denom))
    }
}

impl From<i64> for Energy {
    fn from(v: i64) -> Self {
        Energy::int(v)
    }
}

impl Add for Energy {
    type Output = Energy;
    fn add(self, rhs: Energy) -> Energy {
        Energy(self.0 + rhs.0)
    }
}

impl AddAssign for Energy {
    fn add_assign(&mut self, rhs: Energy) {
        self.0 = self.0 + rhs.0;
    }
}

impl Sub for Energy {
    type Output = Energy;
    fn sub(self, rhs: Energy) -> Energy {
        Energy(self.0 - rhs.0)
    }
}

impl Neg for Energy {
    type Output = Energy;
    fn neg(self) -> Energy {
        Energy(-self.0)
    }
}

impl Mul<i64> for Energy {
    type Output = Energy;
    fn mul(self, rhs: i64) -> Energy {
        Energy(self.0 * rhs)
    }
}

/// Panics on division by zero.
impl Div<i64> for Energy {
    type Output = Energy;
    fn div(self, rhs: i64) -> Energy {
        Energy(self.0 / rhs)
    }
}

impl Sum for Energy {
    fn sum<I: Iterator<Item = Energy>>(iter: I) -> Energy {
        iter.fold(Energy::ZERO, |acc, e| acc + e)
    }
}

impl fmt::Display for Energy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Energy {
    type Err = String;

    /// Accepts integers (`-3`) and fractions (`1/2`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r: Ratio<i64> = s
            .parse()
            .map_err(|_| format!("invalid energy value `{s}`"))?;
        Ok(Energy(r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("3".parse::<Energy>().unwrap(), Energy::int(3));
        assert_eq!("-1/2".parse::<Energy>().unwrap(), Energy::ratio(-1, 2));
        assert_eq!("2/4".parse::<Energy>().unwrap().to_string(), "1/2");
        assert_eq!(Energy::int(-7).to_string(), "-7");
        assert!("x".parse::<Energy>().is_err());
        assert!("1/0".parse::<Energy>().is_err());
    }

    #[test]
    fn exact_arithmetic() {
        let third = Energy::ratio(1, 3);
        assert_eq!(third + third + third, Energy::ONE);
        assert_eq!(Energy::ratio(1, 2).scaled_to(6), Some(3));
        assert_eq!(Energy::from_scaled(3, 6), Energy::ratio(1, 2));
    }
}
