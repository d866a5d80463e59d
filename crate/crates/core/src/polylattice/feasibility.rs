//! Exact feasibility of small linear systems by Fourier–Motzkin elimination.
//!
//! Equalities are removed first by substitution; the remaining variables are
//! eliminated one at a time, keeping the tightest of any parallel rows. A
//! satisfying point is rebuilt by back-substitution, choosing `0` for a
//! variable whenever its admissible interval allows it.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Limits, PolyError};

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Lt,
}

/// `coeffs . x  (relation)  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, relation: Relation, rhs: Q) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn from_ints(coeffs: &[i64], relation: Relation, rhs: Q) -> Self {
        Constraint::new(
            coeffs.iter().map(|&c| Q::from_integer(c.into())).collect(),
            relation,
            rhs,
        )
    }

    /// `coeffs . x >= rhs`, stored as `-coeffs . x <= -rhs`.
    pub fn ge(coeffs: &[i64], rhs: Q) -> Self {
        Constraint::new(
            coeffs.iter().map(|&c| Q::from_integer((-c).into())).collect(),
            Relation::Le,
            -rhs,
        )
    }

    /// `coeffs . x > rhs`, stored as `-coeffs . x < -rhs`.
    pub fn gt(coeffs: &[i64], rhs: Q) -> Self {
        Constraint::new(
            coeffs.iter().map(|&c| Q::from_integer((-c).into())).collect(),
            Relation::Lt,
            -rhs,
        )
    }

    pub fn is_satisfied(&self, x: &[Q]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }

    /// Extends the constraint with zero coefficients up to `dim` variables.
    pub fn padded(mut self, dim: usize) -> Self {
        self.coeffs.resize(dim, Q::zero());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    /// A point satisfying every constraint exactly, when feasible.
    pub witness: Option<Vec<Q>>,
}

fn dot(a: &[Q], x: &[Q]) -> Q {
    a.iter().zip(x).fold(Q::zero(), |acc, (u, v)| acc + u * v)
}

#[derive(Clone, Debug)]
struct Row {
    a: Vec<Q>,
    strict: bool,
    b: Q,
}

enum Step {
    /// `x_var = (rhs - sum_{j != var} a_j x_j) / a_var`
    Substitute { var: usize, a: Vec<Q>, rhs: Q },
    Bounds { var: usize, rows: Vec<Row> },
}

struct Elimination {
    steps: Vec<Step>,
    /// Constant rows that survive once every variable is gone.
    feasible: bool,
}

fn check_scale(dim: usize, count: usize, limits: &Limits) -> Result<(), PolyError> {
    if dim > limits.max_dim {
        return Err(PolyError::ScaleLimitExceeded {
            what: "dimension",
            found: dim,
            limit: limits.max_dim,
        });
    }
    if count > limits.max_constraints {
        return Err(PolyError::ScaleLimitExceeded {
            what: "constraint count",
            found: count,
            limit: limits.max_constraints,
        });
    }
    Ok(())
}

/// Decides whether the system has a solution in `Q^dim` and returns one.
pub fn feasible(
    dim: usize,
    constraints: &[Constraint],
    limits: &Limits,
) -> Result<Feasibility, PolyError> {
    check_scale(dim, constraints.len(), limits)?;
    let elim = eliminate(dim, constraints, None, limits)?;
    if !elim.feasible {
        return Ok(Feasibility {
            feasible: false,
            witness: None,
        });
    }
    let x = back_substitute(dim, &elim.steps, None).expect("no objective");
    debug_assert!(constraints.iter().all(|c| c.is_satisfied(&x)));
    Ok(Feasibility {
        feasible: true,
        witness: Some(x),
    })
}

/// Maximizes variable `objective` over the system. Returns `None` when the
/// system is infeasible and [`PolyError::Unbounded`] when the supremum is
/// infinite or not attained.
pub fn maximize(
    dim: usize,
    constraints: &[Constraint],
    objective: usize,
    limits: &Limits,
) -> Result<Option<(Q, Vec<Q>)>, PolyError> {
    check_scale(dim, constraints.len(), limits)?;
    let elim = eliminate(dim, constraints, Some(objective), limits)?;
    if !elim.feasible {
        return Ok(None);
    }
    let x = back_substitute(dim, &elim.steps, Some(objective)).ok_or(PolyError::Unbounded)?;
    debug_assert!(constraints.iter().all(|c| c.is_satisfied(&x)));
    Ok(Some((x[objective].clone(), x)))
}

fn eliminate(
    dim: usize,
    constraints: &[Constraint],
    keep_last: Option<usize>,
    limits: &Limits,
) -> Result<Elimination, PolyError> {
    let mut eqs: Vec<(Vec<Q>, Q)> = Vec::new();
    let mut rows: Vec<Row> = Vec::new();
    for c in constraints {
        let mut a = c.coeffs.clone();
        a.resize(dim, Q::zero());
        match c.relation {
            Relation::Eq => eqs.push((a, c.rhs.clone())),
            Relation::Le | Relation::Lt => rows.push(Row {
                a,
                strict: c.relation == Relation::Lt,
                b: c.rhs.clone(),
            }),
        }
    }

    let mut steps = Vec::new();
    let mut eliminated = vec![false; dim];

    while let Some((a, rhs)) = eqs.pop() {
        let pick = (0..dim)
            .filter(|&j| !a[j].is_zero())
            .min_by_key(|&j| Some(j) == keep_last);
        let Some(var) = pick else {
            if !rhs.is_zero() {
                return Ok(Elimination {
                    steps,
                    feasible: false,
                });
            }
            continue;
        };
        let pivot = a[var].clone();
        for (ea, eb) in eqs.iter_mut() {
            substitute(ea, eb, var, &a, &rhs, &pivot);
        }
        for r in rows.iter_mut() {
            substitute(&mut r.a, &mut r.b, var, &a, &rhs, &pivot);
        }
        eliminated[var] = true;
        steps.push(Step::Substitute { var, a, rhs });
    }

    rows = match tidy(rows) {
        Some(r) => r,
        None => {
            return Ok(Elimination {
                steps,
                feasible: false,
            })
        }
    };

    loop {
        let remaining: Vec<usize> = (0..dim).filter(|&j| !eliminated[j]).collect();
        if remaining.is_empty() {
            break;
        }
        // cheapest product of bound counts; the kept variable goes last
        let var = *remaining
            .iter()
            .min_by_key(|&&j| {
                let pos = rows.iter().filter(|r| r.a[j].is_positive()).count();
                let neg = rows.iter().filter(|r| r.a[j].is_negative()).count();
                (Some(j) == keep_last, pos * neg, j)
            })
            .expect("nonempty");
        let (involved, mut rest): (Vec<Row>, Vec<Row>) =
            rows.into_iter().partition(|r| !r.a[var].is_zero());
        let (upper, lower): (Vec<&Row>, Vec<&Row>) =
            involved.iter().partition(|r| r.a[var].is_positive());
        if upper.len() * lower.len() + rest.len() > limits.max_intermediate_rows {
            return Err(PolyError::ScaleLimitExceeded {
                what: "intermediate rows",
                found: upper.len() * lower.len() + rest.len(),
                limit: limits.max_intermediate_rows,
            });
        }
        for p in &upper {
            for q in &lower {
                let alpha = p.a[var].clone();
                let beta = -q.a[var].clone();
                let a: Vec<Q> = p
                    .a
                    .iter()
                    .zip(&q.a)
                    .map(|(u, v)| &beta * u + &alpha * v)
                    .collect();
                rest.push(Row {
                    a,
                    strict: p.strict || q.strict,
                    b: &beta * &p.b + &alpha * &q.b,
                });
            }
        }
        eliminated[var] = true;
        steps.push(Step::Bounds {
            var,
            rows: involved,
        });
        rows = match tidy(rest) {
            Some(r) => r,
            None => {
                return Ok(Elimination {
                    steps,
                    feasible: false,
                })
            }
        };
    }

    Ok(Elimination {
        steps,
        feasible: true,
    })
}

fn substitute(a: &mut [Q], b: &mut Q, var: usize, eq: &[Q], rhs: &Q, pivot: &Q) {
    if a[var].is_zero() {
        return;
    }
    let f = &a[var] / pivot;
    for (ai, ei) in a.iter_mut().zip(eq) {
        *ai -= &f * ei;
    }
    *b -= &f * rhs;
    a[var] = Q::zero();
}

/// Drops satisfied constant rows and keeps the tightest row of each
/// direction. Returns `None` when a constant row is violated.
fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: BTreeMap<Vec<Q>, (Q, bool)> = BTreeMap::new();
    for r in rows {
        let Some(lead) = r.a.iter().find(|v| !v.is_zero()).map(|v| v.abs()) else {
            let ok = if r.strict {
                r.b.is_positive()
            } else {
                !r.b.is_negative()
            };
            if !ok {
                return None;
            }
            continue;
        };
        let a: Vec<Q> = r.a.iter().map(|v| v / &lead).collect();
        let b = &r.b / &lead;
        match best.get_mut(&a) {
            Some((bb, strict)) => {
                if b < *bb || (b == *bb && r.strict) {
                    *bb = b;
                    *strict = r.strict;
                }
            }
            None => {
                best.insert(a, (b, r.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(a, (b, strict))| Row { a, strict, b })
            .collect(),
    )
}

/// Returns `None` only when the maximized variable has no attained upper
/// bound.
fn back_substitute(dim: usize, steps: &[Step], maximize: Option<usize>) -> Option<Vec<Q>> {
    let mut x = vec![Q::zero(); dim];
    for step in steps.iter().rev() {
        match step {
            Step::Substitute { var, a, rhs } => {
                let others = a
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != *var)
                    .fold(Q::zero(), |acc, (j, v)| acc + v * &x[j]);
                x[*var] = (rhs - others) / &a[*var];
            }
            Step::Bounds { var, rows } => {
                let mut lower: Option<(Q, bool)> = None;
                let mut upper: Option<(Q, bool)> = None;
                for r in rows {
                    let others = r
                        .a
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != *var)
                        .fold(Q::zero(), |acc, (j, v)| acc + v * &x[j]);
                    let bound = (&r.b - others) / &r.a[*var];
                    if r.a[*var].is_positive() {
                        tighten(&mut upper, bound, r.strict, |new, old| new < old);
                    } else {
                        tighten(&mut lower, bound, r.strict, |new, old| new > old);
                    }
                }
                x[*var] = if Some(*var) == maximize {
                    match upper {
                        Some((u, false)) => u,
                        _ => return None,
                    }
                } else {
                    choose(lower, upper)
                };
            }
        }
    }
    Some(x)
}

fn tighten(slot: &mut Option<(Q, bool)>, value: Q, strict: bool, better: impl Fn(&Q, &Q) -> bool) {
    match slot {
        Some((v, s)) => {
            if better(&value, v) {
                *v = value;
                *s = strict;
            } else if value == *v && strict {
                *s = true;
            }
        }
        None => *slot = Some((value, strict)),
    }
}

fn choose(lower: Option<(Q, bool)>, upper: Option<(Q, bool)>) -> Q {
    let zero = Q::zero();
    let zero_ok = lower
        .as_ref()
        .is_none_or(|(l, s)| if *s { *l < zero } else { *l <= zero })
        && upper
            .as_ref()
            .is_none_or(|(u, s)| if *s { *u > zero } else { *u >= zero });
    if zero_ok {
        return zero;
    }
    match (lower, upper) {
        (None, None) => zero,
        (Some((l, false)), _) => l,
        (Some((l, true)), None) => l + Q::one(),
        (None, Some((u, false))) => u,
        (None, Some((u, true))) => u - Q::one(),
        (Some((_, true)), Some((u, false))) => u,
        (Some((l, true)), Some((u, true))) => (l + u) / Q::from_integer(2.into()),
    }
}
