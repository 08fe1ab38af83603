//! Affine stencils and their decomposition into chains of weighted binary
//! averages.
//!
//! A stencil `q = sum a_i p_i` with `sum a_i = 1` is rewritten as
//! `q = (..((p_0 #_{w_1} p_1) #_{w_2} p_2) .. #_{w_{k-1}} p_{k-1})` where
//! `w_j = a_j / (a_0 + .. + a_j)`. Ordering the positive weights first keeps
//! every partial sum positive.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::geom::Vec3;

/// Weights must sum to one within this tolerance.
pub const AFFINE_TOLERANCE: f64 = 1e-12;

/// Merged weights with magnitude below this are dropped by [`StencilBuilder`].
const ZERO_WEIGHT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("stencil has no terms")]
    Empty,
    #[error("stencil weights sum to {sum}, not 1")]
    WeightsNotAffine { sum: f64 },
    #[error("stencil term for element {index} has zero weight")]
    ZeroWeight { index: usize },
    #[error("element {index} appears more than once in the stencil")]
    DuplicateIndex { index: usize },
    #[error("partial weight sum {sum} is not positive")]
    NonPositivePartialSum { sum: f64 },
    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
}

/// An affine combination of indexed elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    terms: Vec<(usize, f64)>,
}

impl Stencil {
    pub fn new(terms: Vec<(usize, f64)>) -> Result<Stencil, PlanError> {
        if terms.is_empty() {
            return Err(PlanError::Empty);
        }
        let mut seen = HashMap::with_capacity(terms.len());
        for &(index, w) in &terms {
            if w == 0.0 || !w.is_finite() {
                return Err(PlanError::ZeroWeight { index });
            }
            if seen.insert(index, ()).is_some() {
                return Err(PlanError::DuplicateIndex { index });
            }
        }
        let sum: f64 = terms.iter().map(|t| t.1).sum();
        if (sum - 1.0).abs() > AFFINE_TOLERANCE {
            return Err(PlanError::WeightsNotAffine { sum });
        }
        Ok(Stencil { terms })
    }

    pub fn identity(index: usize) -> Stencil {
        Stencil {
            terms: vec![(index, 1.0)],
        }
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
    }

    /// Direct weighted sum of points.
    pub fn apply(&self, points: &[Vec3]) -> Result<Vec3, PlanError> {
        self.terms.iter().try_fold(Vec3::ZERO, |acc, &(i, w)| {
            points.get(i).map(|p| acc + *p * w).ok_or(PlanError::IndexOutOfRange {
                index: i,
                len: points.len(),
            })
        })
    }
}

/// Accumulates weights per element, merging repeats.
///
/// Stencil catalogs are written against topological neighbours; on small or
/// irregular meshes the same vertex can fill several slots.
#[derive(Debug, Default, Clone)]
pub struct StencilBuilder {
    terms: Vec<(usize, f64)>,
}

impl StencilBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: usize, weight: f64) -> &mut Self {
        match self.terms.iter_mut().find(|t| t.0 == index) {
            Some(t) => t.1 += weight,
            None => self.terms.push((index, weight)),
        }
        self
    }

    pub fn build(&self) -> Result<Stencil, PlanError> {
        let terms = self.terms.iter().copied().filter(|t| t.1.abs() > ZERO_WEIGHT).collect();
        Stencil::new(terms)
    }
}

/// One binary average: accumulator `#_weight` element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanStep {
    pub element: usize,
    pub weight: f64,
}

/// A stencil compiled into `k - 1` binary averages. The first step's left
/// operand is `seed`; later steps take the previous result.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgPlan {
    pub seed: usize,
    pub steps: Vec<PlanStep>,
}

/// A plan evaluation failed at `step`, whose left operand was the element
/// `left` (first step only) and right operand `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFailure<E> {
    pub step: usize,
    pub left: Option<usize>,
    pub right: usize,
    pub error: E,
}

impl AvgPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Folds the steps left to right with `binop(acc, element, w)`.
    pub fn evaluate<T, E, F>(&self, elements: &[T], mut binop: F) -> Result<T, StepFailure<E>>
    where
        T: Clone,
        E: From<PlanError>,
        F: FnMut(&T, &T, f64) -> Result<T, E>,
    {
        let fetch = |index: usize, step: usize| {
            elements.get(index).ok_or_else(|| StepFailure {
                step,
                left: None,
                right: index,
                error: E::from(PlanError::IndexOutOfRange {
                    index,
                    len: elements.len(),
                }),
            })
        };
        let mut acc = fetch(self.seed, 0)?.clone();
        for (j, s) in self.steps.iter().enumerate() {
            let rhs = fetch(s.element, j)?;
            acc = binop(&acc, rhs, s.weight).map_err(|error| StepFailure {
                step: j,
                left: (j == 0).then_some(self.seed),
                right: s.element,
                error,
            })?;
        }
        Ok(acc)
    }
}

/// Positive weights first; within each sign descending magnitude, then
/// ascending element index.
fn canonical_order(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    let pa = a.1 > 0.0;
    let pb = b.1 > 0.0;
    pb.cmp(&pa).then(b.1.abs().total_cmp(&a.1.abs())).then(a.0.cmp(&b.0))
}

pub fn compile(stencil: &Stencil) -> Result<AvgPlan, PlanError> {
    let mut terms = stencil.terms.clone();
    terms.sort_by(canonical_order);
    compile_ordered(&terms)
}

/// Compiles terms in the given order. Fails if a partial sum is not positive.
pub fn compile_ordered(terms: &[(usize, f64)]) -> Result<AvgPlan, PlanError> {
    let (&(seed, first), rest) = terms.split_first().ok_or(PlanError::Empty)?;
    if first <= 0.0 {
        return Err(PlanError::NonPositivePartialSum { sum: first });
    }
    let mut sigma = first;
    let mut steps = Vec::with_capacity(rest.len());
    for &(element, alpha) in rest {
        let next = sigma + alpha;
        if next <= 0.0 {
            return Err(PlanError::NonPositivePartialSum { sum: next });
        }
        steps.push(PlanStep {
            element,
            weight: alpha / next,
        });
        sigma = next;
    }
    Ok(AvgPlan { seed, steps })
}

/// Partial weight sums of the compiled order, for inspection.
pub fn partial_sums(stencil: &Stencil) -> Vec<f64> {
    let mut terms = stencil.terms.clone();
    terms.sort_by(canonical_order);
    terms
        .iter()
        .scan(0.0, |s, t| {
            *s += t.1;
            Some(*s)
        })
        .collect()
}

/// The affine binary operator on points.
pub fn affine_op(a: &Vec3, b: &Vec3, w: f64) -> Result<Vec3, PlanError> {
    Ok(a.lerp(*b, w))
}
