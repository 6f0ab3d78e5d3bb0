//! Hodge duality for constant diagonal metrics with entries `±1`, and the
//! operators built from it: the codifferential and the Laplace-de Rham
//! operator.
//!
//! Sign conventions are pinned once and asserted in tests: on a p-form over
//! n variables the codifferential is `δ = (-1)^{n(p+1)+1} sgn(g) * d *` and
//! the Laplacian is `Δ = dδ + δd`. With these choices `** = (-1)^{p(n-p)}
//! sgn(g)`, `δ∘δ = 0`, and on 0-forms `Δf = -Σ g^{ii} ∂²f/∂x_i²`, the
//! negative signature-weighted sum of second partials (the d'Alembertian up
//! to overall sign for the `(+,-,-,-)` metric). The commutator variant
//! `dδ - δd` that some treatments use for the interior transformation is
//! available as [`laplace_alternate`].

use crate::error::{Error, Result};
use crate::forms::{DifferentialForm, MultiIndex, Variables};

/// A constant diagonal metric, one sign per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalMetric {
    signature: Vec<i8>,
}

impl DiagonalMetric {
    /// Builds a metric from `±1` entries.
    pub fn new(signature: Vec<i8>) -> Result<Self> {
        if let Some(bad) = signature.iter().find(|s| **s != 1 && **s != -1) {
            return Err(Error::Parameter(format!(
                "metric entries must be +1 or -1, found {bad}"
            )));
        }
        Ok(DiagonalMetric { signature })
    }

    pub fn euclidean(n: usize) -> Self {
        DiagonalMetric { signature: vec![1; n] }
    }

    /// The four dimensional `(+,-,-,-)` metric.
    pub fn minkowski() -> Self {
        DiagonalMetric { signature: vec![1, -1, -1, -1] }
    }

    pub fn dimension(&self) -> usize {
        self.signature.len()
    }

    pub fn entry(&self, i: usize) -> i8 {
        self.signature[i]
    }

    pub fn entries(&self) -> &[i8] {
        &self.signature
    }

    /// The product of the signature entries, `sgn(g)`.
    pub fn sign_product(&self) -> i8 {
        self.signature.iter().product()
    }

    fn check_dimension(&self, vars: &Variables) -> Result<()> {
        if self.dimension() != vars.len() {
            return Err(Error::VariableMismatch(format!(
                "metric of dimension {} over variables ({})",
                self.dimension(),
                vars
            )));
        }
        Ok(())
    }
}

/// Hodge star: each basis monomial maps to its complement, with the sign of
/// the permutation that sorts `(indices, complement)` ascending times the
/// product of the metric entries over the original indices.
pub fn hodge_star(w: &DifferentialForm, g: &DiagonalMetric) -> Result<DifferentialForm> {
    g.check_dimension(w.variables())?;
    let n = w.variables().len();
    if w.degree() > n {
        // Structurally zero; the dual of nothing is the zero form of
        // complementary degree, clamped at 0.
        debug_assert!(w.is_zero());
        return Ok(DifferentialForm::zero(w.variables().clone(), 0));
    }
    let mut out = DifferentialForm::zero(w.variables().clone(), n - w.degree());
    for (idx, c) in w.terms() {
        let complement = idx.complement(n);
        // Inversions between the block `idx` and the block `complement` in
        // the concatenation (idx, complement).
        let mut inversions = 0usize;
        for j in complement.iter() {
            inversions += idx.iter().filter(|&i| i > j).count();
        }
        let mut sign = if inversions % 2 == 0 { 1i8 } else { -1i8 };
        for i in idx.iter() {
            sign *= g.entry(i);
        }
        let coeff = if sign < 0 { -c } else { c.clone() };
        out = out.add(&DifferentialForm::from_terms(
            w.variables().clone(),
            n - w.degree(),
            vec![(complement.as_slice().to_vec(), coeff)],
        )?)?;
    }
    Ok(out)
}

/// Codifferential `δ = (-1)^{n(p+1)+1} sgn(g) * d *`, lowering the degree by
/// one. Degree zero forms are rejected.
pub fn codifferential(w: &DifferentialForm, g: &DiagonalMetric) -> Result<DifferentialForm> {
    g.check_dimension(w.variables())?;
    if w.degree() == 0 {
        return Err(Error::Degree(
            "codifferential needs degree at least 1".to_string(),
        ));
    }
    if w.is_zero() {
        return Ok(DifferentialForm::zero(w.variables().clone(), w.degree() - 1));
    }
    let n = w.variables().len();
    let p = w.degree();
    let star_d_star = hodge_star(&hodge_star(w, g)?.exterior_derivative(), g)?;
    let mut sign = if (n * (p + 1) + 1) % 2 == 0 { 1i8 } else { -1i8 };
    sign *= g.sign_product();
    Ok(if sign < 0 { star_d_star.negate() } else { star_d_star })
}

/// Laplace-de Rham operator `Δ = dδ + δd`. The `dδ` half is taken as zero
/// on 0-forms, so `Δf = δ df` there.
pub fn laplace_de_rham(w: &DifferentialForm, g: &DiagonalMetric) -> Result<DifferentialForm> {
    g.check_dimension(w.variables())?;
    let delta_d = codifferential(&w.exterior_derivative(), g)?;
    if w.degree() == 0 {
        return Ok(delta_d);
    }
    let d_delta = codifferential(w, g)?.exterior_derivative();
    d_delta.add(&delta_d)
}

/// The commutator variant `dδ - δd`, reported alongside the Laplacian where
/// the interior transformation convention matters. Equals `-δ df` on
/// 0-forms.
pub fn laplace_alternate(w: &DifferentialForm, g: &DiagonalMetric) -> Result<DifferentialForm> {
    g.check_dimension(w.variables())?;
    let delta_d = codifferential(&w.exterior_derivative(), g)?;
    if w.degree() == 0 {
        return Ok(delta_d.negate());
    }
    let d_delta = codifferential(w, g)?.exterior_derivative();
    d_delta.sub(&delta_d)
}

/// Result of testing the dual form condition `d(*w) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualClosure {
    /// The dual form `*w`.
    pub dual: DifferentialForm,
    /// `d(*w)`; empty exactly when the condition holds.
    pub residual: DifferentialForm,
    pub closed: bool,
}

/// Tests whether the Hodge dual of `w` is closed.
pub fn dual_closure_check(w: &DifferentialForm, g: &DiagonalMetric) -> Result<DualClosure> {
    let dual = hodge_star(w, g)?;
    let residual = dual.exterior_derivative();
    let closed = residual.is_zero();
    Ok(DualClosure { dual, residual, closed })
}

/// `(-1)^{p(n-p)} sgn(g)`, the scalar with `**w = that * w`.
pub fn double_star_sign(p: usize, n: usize, g: &DiagonalMetric) -> i8 {
    let base = if (p * (n - p)) % 2 == 0 { 1i8 } else { -1i8 };
    base * g.sign_product()
}

// Re-exported for the closure report: a multi-index helper used when
// enumerating basis monomials in tests and the CLI.
pub fn basis_monomials(n: usize, p: usize) -> Vec<MultiIndex> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if left == 0 {
            out.push(MultiIndex::new(cur.clone()).expect("built increasing"));
            return;
        }
        for i in start..n {
            if n - i < left {
                break;
            }
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RationalFunction;
    use crate::forms::Variables;

    fn xy() -> Variables {
        Variables::from_names(&["x", "y"]).unwrap()
    }

    fn minkowski_vars() -> Variables {
        Variables::from_names(&["x0", "x1", "x2", "x3"]).unwrap()
    }

    fn rf(name: &str) -> RationalFunction {
        RationalFunction::variable(name)
    }

    #[test]
    fn euclidean_plane_star() {
        let g = DiagonalMetric::euclidean(2);
        let dx = DifferentialForm::basis(xy(), &[0]).unwrap();
        let dy = DifferentialForm::basis(xy(), &[1]).unwrap();
        assert_eq!(hodge_star(&dx, &g).unwrap(), dy);
        assert_eq!(hodge_star(&dy, &g).unwrap(), dx.negate());
        // *1 = volume form.
        let one = DifferentialForm::scalar(xy(), RationalFunction::one());
        assert_eq!(
            hodge_star(&one, &g).unwrap(),
            DifferentialForm::basis(xy(), &[0, 1]).unwrap()
        );
    }

    #[test]
    fn double_star_on_minkowski_two_form() {
        let g = DiagonalMetric::minkowski();
        let w = DifferentialForm::basis(minkowski_vars(), &[0, 1]).unwrap();
        let ss = hodge_star(&hodge_star(&w, &g).unwrap(), &g).unwrap();
        assert_eq!(ss, w.negate());
        assert_eq!(double_star_sign(2, 4, &g), -1);
    }

    #[test]
    fn double_star_sign_law_exhaustive_small() {
        for n in 0..=5usize {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let vars = Variables::new(names).unwrap();
            let metrics = if n == 4 {
                vec![DiagonalMetric::euclidean(n), DiagonalMetric::minkowski()]
            } else {
                vec![DiagonalMetric::euclidean(n)]
            };
            for g in metrics {
                for p in 0..=n {
                    for idx in basis_monomials(n, p) {
                        let w =
                            DifferentialForm::basis(vars.clone(), idx.as_slice()).unwrap();
                        let ss = hodge_star(&hodge_star(&w, &g).unwrap(), &g).unwrap();
                        let expected = if double_star_sign(p, n, &g) < 0 {
                            w.negate()
                        } else {
                            w.clone()
                        };
                        assert_eq!(ss, expected, "n={n} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn codifferential_examples() {
        let g = DiagonalMetric::euclidean(2);
        // Constant coefficients: δ kills the form.
        let dx = DifferentialForm::basis(xy(), &[0]).unwrap();
        assert!(codifferential(&dx, &g).unwrap().is_zero());
        // δ(x dx) = -1 under this convention (δ = -div on 1-forms).
        let w = DifferentialForm::from_terms(xy(), 1, vec![(vec![0], rf("x"))]).unwrap();
        let got = codifferential(&w, &g).unwrap();
        assert_eq!(
            got,
            DifferentialForm::scalar(xy(), RationalFunction::from_integer(-1))
        );
        // Degree 0 is rejected.
        let f = DifferentialForm::scalar(xy(), rf("x"));
        assert!(matches!(codifferential(&f, &g), Err(Error::Degree(_))));
    }

    #[test]
    fn codifferential_squares_to_zero_by_hand() {
        let g = DiagonalMetric::euclidean(3);
        let xyz = Variables::from_names(&["x", "y", "z"]).unwrap();
        let w = DifferentialForm::from_terms(
            xyz,
            2,
            vec![
                (vec![0, 1], &rf("x") * &rf("z")),
                (vec![1, 2], &rf("y") + &rf("x")),
            ],
        )
        .unwrap();
        let dd = codifferential(&codifferential(&w, &g).unwrap(), &g).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn laplacian_on_scalars_is_negative_sum_of_second_partials() {
        let g = DiagonalMetric::euclidean(2);
        // Δ(x² + y²) = -4.
        let f = DifferentialForm::scalar(
            xy(),
            &(&rf("x") * &rf("x")) + &(&rf("y") * &rf("y")),
        );
        assert_eq!(
            laplace_de_rham(&f, &g).unwrap(),
            DifferentialForm::scalar(xy(), RationalFunction::from_integer(-4))
        );
        // The harmonic polynomial x² - y² maps to zero.
        let h = DifferentialForm::scalar(
            xy(),
            &(&rf("x") * &rf("x")) - &(&rf("y") * &rf("y")),
        );
        assert!(laplace_de_rham(&h, &g).unwrap().is_zero());
        // Constants are annihilated.
        let c = DifferentialForm::scalar(xy(), RationalFunction::from_integer(7));
        assert!(laplace_de_rham(&c, &g).unwrap().is_zero());
    }

    #[test]
    fn laplacian_reproduces_wave_operator_signs() {
        // On (+,-,-,-), Δf = -(f_tt - f_xx - ...); check on f = x0² + x1².
        let g = DiagonalMetric::minkowski();
        let v = minkowski_vars();
        let f = DifferentialForm::scalar(
            v.clone(),
            &(&rf("x0") * &rf("x0")) + &(&rf("x1") * &rf("x1")),
        );
        // -(2 - 2) = 0.
        assert!(laplace_de_rham(&f, &g).unwrap().is_zero());
        let h = DifferentialForm::scalar(v.clone(), &rf("x0") * &rf("x0"));
        assert_eq!(
            laplace_de_rham(&h, &g).unwrap(),
            DifferentialForm::scalar(v, RationalFunction::from_integer(-2))
        );
    }

    #[test]
    fn alternate_laplacian_differs_by_the_commutator() {
        // On 0-forms dδ vanishes, so dδ - δd = -(δd) = -Δ there.
        let g = DiagonalMetric::euclidean(2);
        let f = DifferentialForm::scalar(xy(), &(&rf("x") * &rf("x")) * &rf("y"));
        let plus = laplace_de_rham(&f, &g).unwrap();
        let minus = laplace_alternate(&f, &g).unwrap();
        assert_eq!(minus, plus.negate());
    }

    #[test]
    fn dual_closure_residual() {
        // w = x1 dx0^dx1 on Minkowski: *w = -x1 dx2^dx3, d*w = -dx1^dx2^dx3.
        let g = DiagonalMetric::minkowski();
        let v = minkowski_vars();
        let w =
            DifferentialForm::from_terms(v.clone(), 2, vec![(vec![0, 1], rf("x1"))]).unwrap();
        let report = dual_closure_check(&w, &g).unwrap();
        assert!(!report.closed);
        let want_dual =
            DifferentialForm::from_terms(v.clone(), 2, vec![(vec![2, 3], -&rf("x1"))])
                .unwrap();
        assert_eq!(report.dual, want_dual);
        let want_residual = DifferentialForm::from_terms(
            v,
            3,
            vec![(vec![1, 2, 3], RationalFunction::from_integer(-1))],
        )
        .unwrap();
        assert_eq!(report.residual, want_residual);
    }

    #[test]
    fn constant_two_form_has_closed_dual() {
        let g = DiagonalMetric::minkowski();
        let w = DifferentialForm::basis(minkowski_vars(), &[0, 1]).unwrap();
        assert!(dual_closure_check(&w, &g).unwrap().closed);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = DiagonalMetric::euclidean(3);
        let dx = DifferentialForm::basis(xy(), &[0]).unwrap();
        assert!(matches!(hodge_star(&dx, &g), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn signature_entries_validated() {
        assert!(matches!(DiagonalMetric::new(vec![1, 0]), Err(Error::Parameter(_))));
    }
}
