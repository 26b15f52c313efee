use std::fmt;

use thiserror::Error;

use crate::gf::prime_power;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("planning needs t >= 3, got t = {0}")]
    DegreeTooSmall(usize),
    #[error("exponent m = {m} is below the degree t = {t}")]
    ExponentTooSmall { m: usize, t: usize },
    #[error("order q^{m} is infeasible: {violation}")]
    Infeasible { m: usize, violation: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMethod {
    /// `MS(q^f, f)` directly from a grid; needs `q >= 2f - 1`.
    Qt,
    /// `MS(q^(2t-1), t)` by block composition; needs `q >= 2t - 1`.
    Q2t1,
}

impl fmt::Display for FactorMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorMethod::Qt => "qt",
            FactorMethod::Q2t1 => "q2t1",
        })
    }
}

/// One factor `MS(q^exponent, t)` of a product plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanFactor {
    pub exponent: usize,
    pub method: FactorMethod,
    pub min_q: usize,
    pub satisfied: bool,
}

/// Decomposition of `MS(q^m, t)` into a product of factors with exponents
/// in `[t, 2t - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPlan {
    pub q: u32,
    pub t: usize,
    pub m: usize,
    pub factors: Vec<PlanFactor>,
}

impl OrderPlan {
    pub fn exponents(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.exponent).collect()
    }

    pub fn feasible(&self) -> bool {
        self.factors.iter().all(|f| f.satisfied)
    }

    /// `2t - 1 <= q < 4t - 3`: orders the grid construction alone does not reach.
    pub fn in_novelty_window(&self) -> bool {
        let q = self.q as usize;
        2 * self.t - 1 <= q && q < 4 * self.t - 3
    }

    /// `q >= 4t - 5`, under which every `m >= t` is feasible.
    pub fn meets_general_bound(&self) -> bool {
        self.q as usize + 5 >= 4 * self.t
    }

    /// The plan, or the first violated factor requirement.
    pub fn require_feasible(self) -> Result<OrderPlan, PlanError> {
        match self.factors.iter().find(|f| !f.satisfied) {
            None => Ok(self),
            Some(f) => Err(PlanError::Infeasible {
                m: self.m,
                violation: format!(
                    "factor q^{} via {} needs q >= {}, got q = {}",
                    f.exponent, f.method, f.min_q, self.q
                ),
            }),
        }
    }
}

impl fmt::Display for OrderPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MS({}^{}, {}): {}", self.q, self.m, self.t, if self.feasible() { "feasible" } else { "infeasible" })?;
        for factor in &self.factors {
            writeln!(
                f,
                "  factor {}^{} via {} (q >= {}): {}",
                self.q,
                factor.exponent,
                factor.method,
                factor.min_q,
                if factor.satisfied { "ok" } else { "violated" }
            )?;
        }
        writeln!(f, "  novelty window 2t-1 <= q < 4t-3: {}", self.in_novelty_window())?;
        write!(f, "  general bound q >= 4t-5: {}", self.meets_general_bound())
    }
}

/// Splits `m` into `floor(m/t) - 1` copies of `t` plus one `t + (m mod t)`,
/// or the single factor `m` when `m < 2t`.
///
/// An infeasible plan is returned with its violated factors marked; use
/// [`OrderPlan::require_feasible`] to turn that into an error.
pub fn plan_order(q: u32, t: usize, m: usize) -> Result<OrderPlan, PlanError> {
    if prime_power(q).is_none() {
        return Err(PlanError::NotPrimePower(q));
    }
    if t < 3 {
        return Err(PlanError::DegreeTooSmall(t));
    }
    if m < t {
        return Err(PlanError::ExponentTooSmall { m, t });
    }
    let exponents: Vec<usize> = if m < 2 * t {
        vec![m]
    } else {
        let mut v = vec![t; m / t - 1];
        v.push(t + m % t);
        v
    };
    let factors = exponents
        .into_iter()
        .map(|exponent| {
            let (method, min_q) = if exponent == 2 * t - 1 {
                (FactorMethod::Q2t1, 2 * t - 1)
            } else {
                (FactorMethod::Qt, 2 * exponent - 1)
            };
            PlanFactor { exponent, method, min_q, satisfied: q as usize >= min_q }
        })
        .collect();
    Ok(OrderPlan { q, t, m, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_plans() {
        let p = plan_order(7, 3, 8).unwrap();
        assert_eq!(p.exponents(), vec![3, 5]);
        assert!(p.feasible());
        let p = plan_order(5, 3, 5).unwrap();
        assert_eq!(p.factors[0].method, FactorMethod::Q2t1);
        assert!(p.feasible());
        let p = plan_order(5, 3, 4).unwrap();
        assert!(!p.feasible());
        assert!(matches!(p.require_feasible(), Err(PlanError::Infeasible { .. })));
    }

    #[test]
    fn rejected_parameters() {
        assert_eq!(plan_order(6, 3, 4), Err(PlanError::NotPrimePower(6)));
        assert_eq!(plan_order(5, 2, 4), Err(PlanError::DegreeTooSmall(2)));
        assert_eq!(plan_order(5, 3, 2), Err(PlanError::ExponentTooSmall { m: 2, t: 3 }));
    }

    #[test]
    fn factors_sum_to_m_within_range() {
        for t in 3..7 {
            for m in t..5 * t {
                let p = plan_order(13, t, m).unwrap();
                assert_eq!(p.exponents().iter().sum::<usize>(), m);
                assert!(p.exponents().iter().all(|&f| t <= f && f < 2 * t));
            }
        }
    }
}
