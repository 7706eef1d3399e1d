use crate::model::{ObjectiveVector, ViolationMeasure};

/// Box constraints of a decision space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "bound vectors differ in length");
        Self { lower, upper }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, &lo), &hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(lo, hi);
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.len()
            && x
                .iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((&v, &lo), &hi)| v >= lo && v <= hi)
    }
}

/// A box-bounded, constrained three-objective minimization problem.
///
/// Solvers only talk to this trait, which keeps the evolutionary machinery
/// testable on synthetic problems.
pub trait Problem: Sync {
    fn bounds(&self) -> &Bounds;

    fn dimension(&self) -> usize {
        self.bounds().len()
    }

    /// Maps an arbitrary vector into the admissible decision set. The default
    /// clamps to the box.
    fn repair(&self, x: &mut [f64]) {
        self.bounds().clamp(x);
    }

    fn evaluate(&self, x: &[f64]) -> (ObjectiveVector, ViolationMeasure);
}
