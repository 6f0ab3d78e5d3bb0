//! Closure and exactness analysis.
//!
//! A form is closed when its exterior derivative vanishes identically, which
//! the exact coefficient arithmetic decides outright. For closed forms with
//! polynomial coefficients an explicit witness `θ` with `dθ = w` is built by
//! the radial homotopy
//!
//! ```text
//! (Kw) = Σ_I Σ_r (-1)^{r-1} x^{i_r} (∫_0^1 t^{p-1} a_I(tx) dt) dx^{I \ i_r}
//! ```
//!
//! which satisfies `d(Kw) + K(dw) = w` for every polynomial form of degree
//! at least one, so `K` of a closed form is a witness. Rational-function
//! coefficients fall outside the construction (the integral leaves the
//! field) and are reported as undecided rather than guessed at.

use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, ParamMap};
use crate::metric::{dual_closure_check, DiagonalMetric};

/// Exactness as far as the engine can decide it.
#[derive(Clone, Debug, PartialEq)]
pub enum Exactness {
    /// A verified witness with `d(witness) = w`.
    Exact(DifferentialForm),
    No,
    /// Closed, but outside the polynomial witness construction.
    Undecided,
}

/// Coarse classification used in reports and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Exact,
    Closed,
    Unclosed,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Exact => "exact",
            Classification::Closed => "closed",
            Classification::Unclosed => "unclosed",
        }
    }
}

/// Everything [`classify_form`] finds out about one form.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub closed: bool,
    /// The exterior derivative, zero iff `closed`.
    pub differential: DifferentialForm,
    pub exactness: Exactness,
    pub classification: Classification,
    /// Closure of the Hodge dual, when a metric was supplied.
    pub dual_closed: Option<bool>,
    pub dual_residual: Option<DifferentialForm>,
}

/// Computes `dw` and tests it for zero.
pub fn is_closed(w: &DifferentialForm) -> (bool, DifferentialForm) {
    let d = w.exterior_derivative();
    (d.is_zero(), d)
}

/// The radial homotopy `K` applied to a polynomial form of degree >= 1.
pub fn homotopy_operator(w: &DifferentialForm) -> Result<DifferentialForm> {
    let p = w.degree();
    if p == 0 {
        return Err(Error::Degree(
            "homotopy operator needs degree at least 1".to_string(),
        ));
    }
    let vars = w.variables().clone();
    let mut out = DifferentialForm::zero(vars.clone(), p - 1);
    for (idx, c) in w.terms() {
        let poly = c.as_polynomial().ok_or_else(|| {
            Error::WitnessUndecided(format!(
                "coefficient {c} is not polynomial; the radial homotopy does not apply"
            ))
        })?;
        let integrated = poly.radial_scale_integral((p - 1) as u32);
        for (r, i) in idx.iter().enumerate() {
            let scaled = &integrated * &crate::algebra::Polynomial::variable(vars.name(i));
            let mut remaining: Vec<usize> = idx.iter().collect();
            remaining.remove(r);
            let coeff: crate::algebra::RationalFunction = if r % 2 == 0 {
                scaled.into()
            } else {
                (-&scaled).into()
            };
            out = out.add(&DifferentialForm::from_terms(
                vars.clone(),
                p - 1,
                vec![(remaining, coeff)],
            )?)?;
        }
    }
    Ok(out)
}

/// A witness `θ` with `dθ = w` for a closed polynomial form of degree >= 1.
///
/// Fails with [`Error::NotClosed`] when `dw != 0` and with
/// [`Error::WitnessUndecided`] when a coefficient is not polynomial.
pub fn exactness_witness(w: &DifferentialForm) -> Result<DifferentialForm> {
    if w.degree() == 0 {
        return Err(Error::Degree(
            "exactness needs degree at least 1; a 0-form is never a differential".to_string(),
        ));
    }
    let (closed, _residual) = is_closed(w);
    if !closed {
        return Err(Error::NotClosed);
    }
    let witness = homotopy_operator(w)?;
    debug_assert_eq!(witness.exterior_derivative(), *w);
    Ok(witness)
}

/// Full closure analysis of one form, with the dual condition included when
/// a metric is given.
pub fn classify_form(
    w: &DifferentialForm,
    metric: Option<&DiagonalMetric>,
) -> Result<ClosureReport> {
    let (closed, differential) = is_closed(w);
    let exactness = if !closed || w.degree() == 0 {
        Exactness::No
    } else {
        match exactness_witness(w) {
            Ok(witness) => Exactness::Exact(witness),
            Err(Error::WitnessUndecided(_)) => Exactness::Undecided,
            Err(e) => return Err(e),
        }
    };
    let classification = match (&exactness, closed) {
        (Exactness::Exact(_), _) => Classification::Exact,
        (_, true) => Classification::Closed,
        (_, false) => Classification::Unclosed,
    };
    let (dual_closed, dual_residual) = match metric {
        Some(g) => {
            let dual = dual_closure_check(w, g)?;
            (Some(dual.closed), Some(dual.residual))
        }
        None => (None, None),
    };
    Ok(ClosureReport {
        closed,
        differential,
        exactness,
        classification,
        dual_closed,
        dual_residual,
    })
}

/// A closure report for the restriction of a form to a pseudostructure cut
/// out by a parameterized map.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionReport {
    /// Dimension of the pseudostructure, the arity of the map.
    pub pseudostructure_dim: usize,
    /// The pulled back form over the source variables.
    pub pulled: DifferentialForm,
    pub report: ClosureReport,
}

/// Pulls `w` back along `map` and classifies the restriction. A form that is
/// not closed in the ambient space may well close on the pseudostructure;
/// this is the degenerate-transformation test.
pub fn restrict_and_test(w: &DifferentialForm, map: &ParamMap) -> Result<RestrictionReport> {
    let pulled = w.pullback(map)?;
    let report = classify_form(&pulled, None)?;
    Ok(RestrictionReport {
        pseudostructure_dim: map.arity(),
        pulled,
        report,
    })
}
