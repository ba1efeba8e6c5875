//! Preference relations over coordinate vectors.
//!
//! A relation `R` is described by a [`RelationSpec`] value rather than a
//! closure, so it can be written to and read from configuration text (see
//! [`RelationSpec::parse`]) and enumerated by the exhaustive oracles. `x R y`
//! reads "x is at least as preferable as y"; the strict part `x R* y` is
//! `x R y and not y R x`.

mod text;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Direction of preference along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Min,
    Max,
}

impl Orientation {
    #[inline]
    pub fn prefers_or_equal(self, x: f64, y: f64) -> bool {
        match self {
            Orientation::Min => x <= y,
            Orientation::Max => x >= y,
        }
    }

    /// Maps a value so that smaller is always better.
    #[inline]
    pub fn to_min(self, v: f64) -> f64 {
        match self {
            Orientation::Min => v,
            Orientation::Max => -v,
        }
    }
}

/// Axes covered by a componentwise relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Axes {
    /// One orientation per axis, starting at the relation's offset.
    Each(Vec<Orientation>),
    /// The same orientation on every axis from the offset to the end of the vector.
    All(Orientation),
}

/// Declarative preference relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RelationSpec {
    /// `x R y` iff `x` is at least as good as `y` on every covered axis.
    Componentwise { offset: usize, axes: Axes },
    /// Trade-off cone on the plane: `y R x` iff `y2 <= x2` and `x2 - y2 >= a (y1 - x1)`.
    Cone { a: f64 },
    /// `x R y` iff `x` is no further from `[lo, hi]` than `y` on `axis`.
    IntervalQuery { axis: usize, lo: f64, hi: f64 },
    /// `x R y` iff `x[axis] == value`.
    EqualityQuery { axis: usize, value: f64 },
    /// Inequality constraint `g <= 0` stored on `axis`: `x R y` iff `g(x) <= 0` or `g(x) <= g(y)`.
    Inequality { axis: usize },
    /// Equality constraint with tolerance band `[lo, hi]` stored on `axis`.
    Band { axis: usize, lo: f64, hi: f64 },
    Conjunction(Vec<RelationSpec>),
    Inverse(Box<RelationSpec>),
    /// Constraint satisfaction first, then objectives:
    /// `x R y` iff `x Rc* y` or (`x Rc= y` and `x Rf y`).
    Lexicographic {
        constraints: Box<RelationSpec>,
        objectives: Box<RelationSpec>,
    },
}

/// Outcome of comparing an ordered pair `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComparisonOutcome {
    /// `x R* y`
    StrictlyBetter,
    /// `y R* x`
    StrictlyWorse,
    /// `x R y` and `y R x`
    Equivalent,
    /// neither `x R y` nor `y R x`
    Incomparable,
}

impl ComparisonOutcome {
    fn from_pair(xy: bool, yx: bool) -> Self {
        match (xy, yx) {
            (true, false) => ComparisonOutcome::StrictlyBetter,
            (false, true) => ComparisonOutcome::StrictlyWorse,
            (true, true) => ComparisonOutcome::Equivalent,
            (false, false) => ComparisonOutcome::Incomparable,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            ComparisonOutcome::StrictlyBetter => ComparisonOutcome::StrictlyWorse,
            ComparisonOutcome::StrictlyWorse => ComparisonOutcome::StrictlyBetter,
            other => other,
        }
    }

    /// True when the pair offers choice (no strict verdict).
    pub fn offers_choice(self) -> bool {
        matches!(
            self,
            ComparisonOutcome::Equivalent | ComparisonOutcome::Incomparable
        )
    }
}

fn distance_to_interval(v: f64, lo: f64, hi: f64) -> f64 {
    if v < lo {
        lo - v
    } else if v > hi {
        v - hi
    } else {
        0.0
    }
}

impl RelationSpec {
    /// Componentwise relation with one orientation per axis.
    pub fn componentwise(orientations: &[Orientation]) -> Self {
        RelationSpec::Componentwise {
            offset: 0,
            axes: Axes::Each(orientations.to_vec()),
        }
    }

    /// Componentwise minimisation on every axis.
    pub fn all_min() -> Self {
        RelationSpec::Componentwise {
            offset: 0,
            axes: Axes::All(Orientation::Min),
        }
    }

    /// Componentwise maximisation on every axis.
    pub fn all_max() -> Self {
        RelationSpec::Componentwise {
            offset: 0,
            axes: Axes::All(Orientation::Max),
        }
    }

    pub fn cone(a: f64) -> Result<Self> {
        let r = RelationSpec::Cone { a };
        r.validate()?;
        Ok(r)
    }

    pub fn interval(axis: usize, lo: f64, hi: f64) -> Result<Self> {
        let r = RelationSpec::IntervalQuery { axis, lo, hi };
        r.validate()?;
        Ok(r)
    }

    pub fn conjunction(parts: Vec<RelationSpec>) -> Result<Self> {
        let r = RelationSpec::Conjunction(parts);
        r.validate()?;
        Ok(r)
    }

    pub fn inverse(self) -> Self {
        RelationSpec::Inverse(Box::new(self))
    }

    /// Checks the structural invariants (non-empty conjunctions, `a > 0`, `lo <= hi`).
    pub fn validate(&self) -> Result<()> {
        match self {
            RelationSpec::Componentwise { axes, .. } => match axes {
                Axes::Each(v) if v.is_empty() => Err(Error::InvalidRelation(
                    "componentwise relation needs at least one axis".into(),
                )),
                _ => Ok(()),
            },
            RelationSpec::Cone { a } => {
                if *a > 0.0 && a.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidRelation(format!(
                        "cone parameter must be positive, got {a}"
                    )))
                }
            }
            RelationSpec::IntervalQuery { lo, hi, .. } | RelationSpec::Band { lo, hi, .. } => {
                if lo <= hi {
                    Ok(())
                } else {
                    Err(Error::InvalidInterval { lo: *lo, hi: *hi })
                }
            }
            RelationSpec::EqualityQuery { .. } | RelationSpec::Inequality { .. } => Ok(()),
            RelationSpec::Conjunction(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidRelation("empty conjunction".into()));
                }
                parts.iter().try_for_each(RelationSpec::validate)
            }
            RelationSpec::Inverse(inner) => inner.validate(),
            RelationSpec::Lexicographic {
                constraints,
                objectives,
            } => {
                constraints.validate()?;
                objectives.validate()
            }
        }
    }

    /// Checks that vectors of dimension `dim` can be compared.
    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            RelationSpec::Componentwise { offset, axes } => match axes {
                Axes::Each(v) => {
                    let expected = offset + v.len();
                    if dim == expected {
                        Ok(())
                    } else {
                        Err(Error::DimensionMismatch { expected, got: dim })
                    }
                }
                Axes::All(_) => {
                    if dim > *offset {
                        Ok(())
                    } else if *offset > 0 && dim == *offset {
                        Err(Error::EmptyObjectiveBlock)
                    } else {
                        Err(Error::DimensionMismatch {
                            expected: offset + 1,
                            got: dim,
                        })
                    }
                }
            },
            RelationSpec::Cone { .. } => {
                if dim == 2 {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: 2,
                        got: dim,
                    })
                }
            }
            RelationSpec::IntervalQuery { axis, .. }
            | RelationSpec::EqualityQuery { axis, .. }
            | RelationSpec::Inequality { axis }
            | RelationSpec::Band { axis, .. } => {
                if dim > *axis {
                    Ok(())
                } else {
                    Err(Error::DimensionMismatch {
                        expected: axis + 1,
                        got: dim,
                    })
                }
            }
            RelationSpec::Conjunction(parts) => parts.iter().try_for_each(|p| p.check_dim(dim)),
            RelationSpec::Inverse(inner) => inner.check_dim(dim),
            RelationSpec::Lexicographic {
                constraints,
                objectives,
            } => {
                constraints.check_dim(dim)?;
                objectives.check_dim(dim)
            }
        }
    }

    fn check_pair(&self, x: &[f64], y: &[f64]) -> Result<()> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        self.check_dim(x.len())
    }

    /// Truth of `x R y`.
    pub fn holds(&self, x: &[f64], y: &[f64]) -> Result<bool> {
        self.check_pair(x, y)?;
        Ok(self.holds_unchecked(x, y))
    }

    /// Classifies the ordered pair `(x, y)`.
    pub fn compare(&self, x: &[f64], y: &[f64]) -> Result<ComparisonOutcome> {
        self.check_pair(x, y)?;
        Ok(self.compare_unchecked(x, y))
    }

    /// `x R* y`.
    pub fn strictly_prefers(&self, x: &[f64], y: &[f64]) -> Result<bool> {
        Ok(self.compare(x, y)? == ComparisonOutcome::StrictlyBetter)
    }

    /// `x R y` without dimension checks. Callers must have run [`check_dim`](Self::check_dim).
    pub fn holds_unchecked(&self, x: &[f64], y: &[f64]) -> bool {
        match self {
            RelationSpec::Componentwise { offset, axes } => {
                let (x, y) = (&x[*offset..], &y[*offset..]);
                match axes {
                    Axes::Each(o) => o
                        .iter()
                        .zip(x.iter().zip(y))
                        .all(|(o, (a, b))| o.prefers_or_equal(*a, *b)),
                    Axes::All(o) => x.iter().zip(y).all(|(a, b)| o.prefers_or_equal(*a, *b)),
                }
            }
            RelationSpec::Cone { a } => {
                // x R_a y iff x2 <= y2 and y2 - x2 >= a (x1 - y1)
                x[1] <= y[1] && y[1] - x[1] >= a * (x[0] - y[0])
            }
            RelationSpec::IntervalQuery { axis, lo, hi } => {
                distance_to_interval(x[*axis], *lo, *hi) <= distance_to_interval(y[*axis], *lo, *hi)
            }
            RelationSpec::EqualityQuery { axis, value } => x[*axis] == *value,
            RelationSpec::Inequality { axis } => x[*axis] <= 0.0 || x[*axis] <= y[*axis],
            RelationSpec::Band { axis, lo, hi } => {
                let (hx, hy) = (x[*axis], y[*axis]);
                (*lo <= hx && hx <= *hi) || (hy <= hx && hx <= *lo) || (*hi <= hx && hx <= hy)
            }
            RelationSpec::Conjunction(parts) => parts.iter().all(|p| p.holds_unchecked(x, y)),
            RelationSpec::Inverse(inner) => inner.holds_unchecked(y, x),
            RelationSpec::Lexicographic {
                constraints,
                objectives,
            } => match constraints.compare_unchecked(x, y) {
                ComparisonOutcome::StrictlyBetter => true,
                ComparisonOutcome::Equivalent => objectives.holds_unchecked(x, y),
                _ => false,
            },
        }
    }

    /// Pair classification without dimension checks.
    pub fn compare_unchecked(&self, x: &[f64], y: &[f64]) -> ComparisonOutcome {
        match self {
            // single pass over the axes
            RelationSpec::Componentwise { offset, axes } => {
                let (x, y) = (&x[*offset..], &y[*offset..]);
                let (mut xy, mut yx) = (true, true);
                let mut step = |o: Orientation, a: f64, b: f64| {
                    xy &= o.prefers_or_equal(a, b);
                    yx &= o.prefers_or_equal(b, a);
                    xy || yx
                };
                match axes {
                    Axes::Each(os) => {
                        for (o, (a, b)) in os.iter().zip(x.iter().zip(y)) {
                            if !step(*o, *a, *b) {
                                break;
                            }
                        }
                    }
                    Axes::All(o) => {
                        for (a, b) in x.iter().zip(y) {
                            if !step(*o, *a, *b) {
                                break;
                            }
                        }
                    }
                }
                ComparisonOutcome::from_pair(xy, yx)
            }
            RelationSpec::Inverse(inner) => inner.compare_unchecked(x, y).reversed(),
            _ => ComparisonOutcome::from_pair(self.holds_unchecked(x, y), self.holds_unchecked(y, x)),
        }
    }
}

/// Constrained multi-objective relation over evaluation vectors laid out as
/// `(g_1..g_ng, h_1..h_nh, f_1..f_M)`.
///
/// The constraint part is the conjunction of one [`RelationSpec::Inequality`]
/// per `g` and one [`RelationSpec::Band`] per `h`; the objective part is
/// componentwise minimisation over the trailing `f` block.
pub fn cmop_relation(ng: usize, nh: usize, eq_bounds: &[[f64; 2]]) -> Result<RelationSpec> {
    if eq_bounds.len() != nh {
        return Err(Error::InvalidParameter(format!(
            "expected {nh} equality bounds, got {}",
            eq_bounds.len()
        )));
    }
    let mut parts: Vec<RelationSpec> = (0..ng).map(|axis| RelationSpec::Inequality { axis }).collect();
    for (j, [lo, hi]) in eq_bounds.iter().enumerate() {
        if lo > hi {
            return Err(Error::InvalidInterval { lo: *lo, hi: *hi });
        }
        parts.push(RelationSpec::Band {
            axis: ng + j,
            lo: *lo,
            hi: *hi,
        });
    }
    let objectives = RelationSpec::Componentwise {
        offset: ng + nh,
        axes: Axes::All(Orientation::Min),
    };
    if parts.is_empty() {
        // every pair is constraint-equivalent, so only the objectives decide
        return Ok(objectives);
    }
    Ok(RelationSpec::Lexicographic {
        constraints: Box::new(RelationSpec::Conjunction(parts)),
        objectives: Box::new(objectives),
    })
}
