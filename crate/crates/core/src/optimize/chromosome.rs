use super::VarBounds;
use crate::error::{Error, Result};

/// Fixed-width unsigned binary encoding, `bits` per variable, most
/// significant bit first. Gene value `k` decodes to `lo + (hi - lo) k / (2^bits - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    bounds: Vec<VarBounds>,
    bits: u32,
}

impl Encoding {
    pub fn new(bounds: &[VarBounds], bits: u32) -> Result<Self> {
        if !(1..=32).contains(&bits) {
            return Err(Error::InvalidOptimizer(format!("bits per variable must be in 1..=32, got {bits}")));
        }
        if bounds.is_empty() {
            return Err(Error::InvalidOptimizer("no design variables".into()));
        }
        Ok(Self {
            bounds: bounds.to_vec(),
            bits,
        })
    }

    pub fn len(&self) -> usize {
        self.bounds.len() * self.bits as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    fn levels(&self) -> f64 {
        ((1u64 << self.bits) - 1) as f64
    }

    /// Quantization step of variable `i`.
    pub fn step(&self, i: usize) -> f64 {
        self.bounds[i].width() / self.levels()
    }

    pub fn decode(&self, genes: &[bool]) -> Vec<f64> {
        let w = self.bits as usize;
        self.bounds
            .iter()
            .zip(genes.chunks(w))
            .map(|(b, chunk)| {
                let k = chunk.iter().fold(0u64, |acc, &g| (acc << 1) | u64::from(g));
                b.lo + b.width() * k as f64 / self.levels()
            })
            .collect()
    }

    /// Nearest grid point; values outside the bounds are clamped first.
    pub fn encode(&self, x: &[f64]) -> Vec<bool> {
        let w = self.bits as usize;
        let mut genes = Vec::with_capacity(self.len());
        for (b, &v) in self.bounds.iter().zip(x) {
            let k = ((b.clamp(v) - b.lo) / b.width() * self.levels()).round() as u64;
            genes.extend((0..w).rev().map(|bit| (k >> bit) & 1 == 1));
        }
        genes
    }
}
