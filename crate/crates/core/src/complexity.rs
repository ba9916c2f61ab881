use std::fmt;
use std::ops::{Add, AddAssign, Mul};

/// Counts of basic static logic elements.
///
/// `other` counts gates synthesized directly from a truth table that is
/// not one of the basic kinds (e.g. a single XOR term).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ComplexityReport {
    pub registers: usize,
    pub inverters: usize,
    pub ands: usize,
    pub ors: usize,
    pub other: usize,
}

impl ComplexityReport {
    pub fn total(&self) -> usize {
        self.registers + self.inverters + self.ands + self.ors + self.other
    }
}

impl Add for ComplexityReport {
    type Output = ComplexityReport;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ComplexityReport {
    fn add_assign(&mut self, rhs: Self) {
        self.registers += rhs.registers;
        self.inverters += rhs.inverters;
        self.ands += rhs.ands;
        self.ors += rhs.ors;
        self.other += rhs.other;
    }
}

impl Mul<usize> for ComplexityReport {
    type Output = ComplexityReport;
    fn mul(self, k: usize) -> Self {
        ComplexityReport {
            registers: self.registers * k,
            inverters: self.inverters * k,
            ands: self.ands * k,
            ors: self.ors * k,
            other: self.other * k,
        }
    }
}

impl fmt::Display for ComplexityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "element counts:")?;
        writeln!(f, "  register {}", self.registers)?;
        writeln!(f, "  inverter {}", self.inverters)?;
        writeln!(f, "  and {}", self.ands)?;
        writeln!(f, "  or {}", self.ors)?;
        writeln!(f, "  other {}", self.other)?;
        write!(f, "  total {}", self.total())
    }
}
