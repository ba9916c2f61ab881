use crate::error::{Error, Result};

/// A single-output boolean function. Row `x` of `outputs` holds the value
/// for the input pattern whose bit `i` is input `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthFunction {
    arity: usize,
    outputs: Vec<bool>,
}

impl TruthFunction {
    pub fn new(arity: usize, outputs: Vec<bool>) -> Result<Self> {
        if arity > 20 || outputs.len() != 1 << arity {
            return Err(Error::Invalid(format!(
                "truth table of arity {arity} needs {} rows, got {}",
                1usize << arity.min(20),
                outputs.len()
            )));
        }
        Ok(TruthFunction { arity, outputs })
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Self {
        TruthFunction {
            arity,
            outputs: (0..1 << arity).map(f).collect(),
        }
    }

    /// Two-input function whose row `x` is bit `x` of `code` (0..16).
    pub fn two_input(code: u8) -> Self {
        Self::from_fn(2, |x| code >> x & 1 == 1)
    }

    pub fn not() -> Self {
        Self::from_fn(1, |x| x == 0)
    }

    pub fn identity() -> Self {
        Self::from_fn(1, |x| x == 1)
    }

    pub fn and() -> Self {
        Self::from_fn(2, |x| x == 3)
    }

    pub fn or() -> Self {
        Self::from_fn(2, |x| x != 0)
    }

    pub fn xor() -> Self {
        Self::from_fn(2, |x| x == 1 || x == 2)
    }

    pub fn constant(arity: usize, bit: bool) -> Self {
        Self::from_fn(arity, |_| bit)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn outputs(&self) -> &[bool] {
        &self.outputs
    }

    pub fn eval(&self, x: usize) -> bool {
        self.outputs[x]
    }

    pub fn eval_bits(&self, bits: &[bool]) -> bool {
        self.outputs[pattern(bits)]
    }

    pub fn constant_value(&self) -> Option<bool> {
        let first = self.outputs[0];
        self.outputs.iter().all(|b| *b == first).then_some(first)
    }
}

/// Little-endian pattern index of a bit slice.
pub fn pattern(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, b)| acc | (usize::from(*b) << i))
}

pub fn bits_of(x: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> i & 1 == 1).collect()
}
