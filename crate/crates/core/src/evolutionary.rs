//! Evolutionary forms and relations.
//!
//! Balance conservation laws produce relations `dψ = ω^p` between a state
//! functional and a form built from the balance coefficients. The relation
//! is an identity only when `ω` is closed; otherwise `dω` measures the
//! internal force that obstructs integrability. On deforming manifolds the
//! ordinary differential is replaced by the evolutionary one, which adds the
//! torsion contribution `d(dx^α) = T^α` of the structure coefficients.
//!
//! The module also hosts the machinery for extracting something integrable
//! out of a nonidentical relation: the Frobenius test and bounded
//! integrating-factor search, Jacobian degeneracy analysis, canonical
//! Poisson brackets, and the degree descent that restricts a relation to a
//! pseudostructure and integrates it one degree down.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{Monomial, Polynomial, RationalFunction};
use crate::closure::{exactness_witness, is_closed};
use crate::error::{Error, Result};
use crate::forms::{Commutator, DifferentialForm, ParamMap, Variables};

/// Default exponent bound for the integrating-factor ansatz.
pub const DEFAULT_EXPONENT_BOUND: u32 = 3;

/// Torsion 2-forms `T^α = d(dx^α)`, one per ambient variable. Unset entries
/// are zero, so the empty set describes an ordinary (closed) metric and the
/// evolutionary differential degenerates to `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureCoefficients {
    vars: Variables,
    torsion: BTreeMap<String, DifferentialForm>,
}

impl StructureCoefficients {
    pub fn new(vars: Variables) -> Self {
        StructureCoefficients { vars, torsion: BTreeMap::new() }
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    /// Sets `T^var`. The form must be a 2-form over the same variables.
    pub fn set(&mut self, var: &str, form: DifferentialForm) -> Result<()> {
        if !self.vars.contains(var) {
            return Err(Error::UnknownVariable(var.to_string()));
        }
        if form.variables() != &self.vars {
            return Err(Error::VariableMismatch(format!(
                "torsion form over ({}) in a structure over ({})",
                form.variables(),
                self.vars
            )));
        }
        if form.degree() != 2 {
            return Err(Error::Degree(format!(
                "torsion coefficients are 2-forms, found degree {}",
                form.degree()
            )));
        }
        self.torsion.insert(var.to_string(), form);
        Ok(())
    }

    /// `T^var`, zero when unset.
    pub fn torsion(&self, var: &str) -> DifferentialForm {
        self.torsion
            .get(var)
            .cloned()
            .unwrap_or_else(|| DifferentialForm::zero(self.vars.clone(), 2))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &DifferentialForm)> {
        self.torsion.iter().map(|(v, f)| (v.as_str(), f))
    }

    /// True when every torsion coefficient vanishes.
    pub fn is_flat(&self) -> bool {
        self.torsion.values().all(DifferentialForm::is_zero)
    }
}

/// The evolutionary differential: `d w` plus, for every stored term
/// `a dx^{α_1}^...^dx^{α_p}`, the torsion contribution
/// `a Σ_r (-1)^{r-1} dx^{α_1}^...^T^{α_r}^...^dx^{α_p}`.
pub fn evolutionary_differential(
    w: &DifferentialForm,
    t: &StructureCoefficients,
) -> Result<DifferentialForm> {
    if w.variables() != t.variables() {
        return Err(Error::VariableMismatch(format!(
            "form over ({}) with structure coefficients over ({})",
            w.variables(),
            t.variables()
        )));
    }
    let vars = w.variables().clone();
    let mut out = w.exterior_derivative();
    for (idx, a) in w.terms() {
        let slots: Vec<usize> = idx.iter().collect();
        for (r, &i) in slots.iter().enumerate() {
            let torsion = t.torsion(vars.name(i));
            if torsion.is_zero() {
                continue;
            }
            let prefix = DifferentialForm::basis(vars.clone(), &slots[..r])?;
            let suffix = DifferentialForm::basis(vars.clone(), &slots[r + 1..])?;
            let mut piece = prefix.wedge(&torsion)?.wedge(&suffix)?.scale(a);
            if r % 2 == 1 {
                piece = piece.negate();
            }
            out = out.add(&piece)?;
        }
    }
    Ok(out)
}

/// An evolutionary relation `dψ = ω^p`, `p <= 3`: the state functional is
/// named symbolically, the right hand side is an explicit form.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionaryRelation {
    psi: String,
    omega: DifferentialForm,
}

impl EvolutionaryRelation {
    pub fn new(psi: impl Into<String>, omega: DifferentialForm) -> Result<Self> {
        if omega.degree() > 3 {
            return Err(Error::Degree(format!(
                "evolutionary relations carry forms of degree at most 3, found {}",
                omega.degree()
            )));
        }
        Ok(EvolutionaryRelation { psi: psi.into(), omega })
    }

    /// Builds the first-degree relation `dψ = Σ A_μ dξ^μ` from balance
    /// coefficients listed in coordinate order.
    pub fn from_coefficients(
        psi: impl Into<String>,
        coords: Variables,
        coefficients: Vec<RationalFunction>,
    ) -> Result<Self> {
        if coefficients.len() != coords.len() {
            return Err(Error::VariableMismatch(format!(
                "{} balance coefficients over {} coordinates",
                coefficients.len(),
                coords.len()
            )));
        }
        let terms = coefficients
            .into_iter()
            .enumerate()
            .map(|(i, a)| (vec![i], a))
            .collect();
        let omega = DifferentialForm::from_terms(coords, 1, terms)?;
        EvolutionaryRelation::new(psi, omega)
    }

    /// The degree-zero relation `dψ = A`, a scalar right hand side.
    pub fn from_scalar(
        psi: impl Into<String>,
        coords: Variables,
        value: RationalFunction,
    ) -> Result<Self> {
        EvolutionaryRelation::new(psi, DifferentialForm::scalar(coords, value))
    }

    pub fn psi(&self) -> &str {
        &self.psi
    }

    pub fn omega(&self) -> &DifferentialForm {
        &self.omega
    }

    pub fn degree(&self) -> usize {
        self.omega.degree()
    }
}

/// Whether a relation is identical or nonidentical, with the witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct NonidentityReport {
    /// True when the (evolutionary) differential of `ω` vanishes.
    pub identical: bool,
    /// `d_ev ω`, the internal force measure; zero iff `identical`.
    pub internal_force: DifferentialForm,
    /// The commutator matrix, emitted for first-degree relations.
    pub commutator: Option<Commutator>,
}

/// Tests Eq-style nonidentity: the relation `dψ = ω` is an identity exactly
/// when `ω` is closed under the relevant differential. Structure
/// coefficients, when given, switch the test to the evolutionary
/// differential.
pub fn nonidentity_report(
    relation: &EvolutionaryRelation,
    structure: Option<&StructureCoefficients>,
) -> Result<NonidentityReport> {
    let internal_force = match structure {
        Some(t) => evolutionary_differential(&relation.omega, t)?,
        None => relation.omega.exterior_derivative(),
    };
    let commutator = if relation.omega.degree() == 1 {
        Some(relation.omega.commutator()?)
    } else {
        None
    };
    Ok(NonidentityReport {
        identical: internal_force.is_zero(),
        internal_force,
        commutator,
    })
}

/// The Frobenius integrability test `w ∧ dw = 0` for 1-forms. Necessary for
/// an integrating factor to exist; automatic in two variables.
pub fn frobenius_test(w: &DifferentialForm) -> Result<bool> {
    if w.degree() != 1 {
        return Err(Error::Degree(format!(
            "Frobenius test applies to 1-forms, found degree {}",
            w.degree()
        )));
    }
    Ok(w.wedge(&w.exterior_derivative())?.is_zero())
}

/// Outcome of the bounded integrating-factor search.
#[derive(Clone, Debug, PartialEq)]
pub enum FactorSearch {
    /// A verified factor: `d(μ w) = 0` exactly.
    Found(RationalFunction),
    /// The ansatz was exhausted without a factor; larger exponent bounds may
    /// still succeed, as may factors outside the Laurent family.
    NotFoundWithinAnsatz,
    /// `w ∧ dw != 0`, so no factor exists at all.
    FrobeniusFails,
}

/// Searches for an integrating factor of a 1-form among Laurent monomials
/// `∏ x_i^{e_i}` with `|e_i| <= bound`, then among rational linear
/// combinations of such monomials, solving `d(μ w) = 0` exactly.
///
/// Monomials are tried in graded lexicographic order (total absolute degree
/// first), so the simplest factor wins deterministically. A closed input
/// short-circuits to `μ = 1`. When the full exponent box would make the
/// linear stage too large, that stage restricts to the graded ball
/// `Σ|e_i| <= bound`; the bound is configurable precisely so the trade-off
/// stays in the caller's hands.
pub fn integrating_factor_search(w: &DifferentialForm, bound: u32) -> Result<FactorSearch> {
    if w.degree() != 1 {
        return Err(Error::Degree(format!(
            "integrating factors apply to 1-forms, found degree {}",
            w.degree()
        )));
    }
    if bound == 0 {
        return Err(Error::Parameter(
            "exponent bound must be at least 1".to_string(),
        ));
    }
    if is_closed(w).0 {
        return Ok(FactorSearch::Found(RationalFunction::one()));
    }
    if !frobenius_test(w)? {
        return Ok(FactorSearch::FrobeniusFails);
    }

    let vars = w.variables().clone();
    let exponents = exponent_vectors(vars.len(), bound as i64);
    for e in &exponents {
        if e.iter().all(|x| *x == 0) {
            continue; // mu = 1 is the closed case, already handled
        }
        let mu = laurent_monomial(&vars, e);
        if is_closed(&w.scale(&mu)).0 {
            return Ok(FactorSearch::Found(mu));
        }
    }

    // Linear stage: unknown rational coefficients over the monomial family.
    // Cap the family at the graded ball when the box is large.
    let family: Vec<Vec<i64>> = if exponents.len() <= 200 {
        exponents
    } else {
        let b = bound as i64;
        exponents
            .into_iter()
            .filter(|e| e.iter().map(|x| x.abs()).sum::<i64>() <= b)
            .collect()
    };
    let candidates: Vec<RationalFunction> =
        family.iter().map(|e| laurent_monomial(&vars, e)).collect();
    let differentials: Vec<DifferentialForm> = candidates
        .iter()
        .map(|mu| w.scale(mu).exterior_derivative())
        .collect();

    let mut indices = BTreeSet::new();
    for d in &differentials {
        for (idx, _) in d.terms() {
            indices.insert(idx.clone());
        }
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for idx in &indices {
        let coeffs: Vec<RationalFunction> =
            differentials.iter().map(|d| d.coefficient(idx)).collect();
        append_cleared_rows(&coeffs, &mut rows);
    }
    if let Some(solution) = kernel_vector(rows, candidates.len()) {
        let mut mu = RationalFunction::zero();
        for (c, candidate) in solution.iter().zip(&candidates) {
            if !c.is_zero() {
                mu = &mu + &(&RationalFunction::constant(c.clone()) * candidate);
            }
        }
        debug_assert!(!mu.is_zero());
        if is_closed(&w.scale(&mu)).0 {
            return Ok(FactorSearch::Found(mu));
        }
    }
    Ok(FactorSearch::NotFoundWithinAnsatz)
}

/// All exponent vectors in `[-bound, bound]^n`, graded lexicographically:
/// sorted by total absolute degree, then componentwise.
fn exponent_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for stem in &out {
            for e in -bound..=bound {
                let mut v = stem.clone();
                v.push(e);
                next.push(v);
            }
        }
        out = next;
    }
    out.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    out
}

/// `∏ x_i^{e_i}` as a rational function; negative exponents go to the
/// denominator.
fn laurent_monomial(vars: &Variables, exponents: &[i64]) -> RationalFunction {
    let mut num = Monomial::one();
    let mut den = Monomial::one();
    for (i, &e) in exponents.iter().enumerate() {
        if e > 0 {
            num = num.mul(&Monomial::from_exponents([(
                vars.name(i).to_string(),
                e as u32,
            )]));
        } else if e < 0 {
            den = den.mul(&Monomial::from_exponents([(
                vars.name(i).to_string(),
                (-e) as u32,
            )]));
        }
    }
    let num = Polynomial::from_terms([(num, BigRational::one())]);
    let den = Polynomial::from_terms([(den, BigRational::one())]);
    RationalFunction::new(num, den).expect("monomial denominator is nonzero")
}

/// Turns one linear equation `Σ c_k f_k = 0` over rational functions into
/// polynomial rows by clearing denominators, one row per monomial of the
/// cleared numerators.
fn append_cleared_rows(coeffs: &[RationalFunction], rows: &mut Vec<Vec<BigRational>>) {
    let mut dens: Vec<Polynomial> = Vec::new();
    for c in coeffs {
        if !dens.iter().any(|d| d == c.denominator()) {
            dens.push(c.denominator().clone());
        }
    }
    let cleared: Vec<Polynomial> = coeffs
        .iter()
        .map(|c| {
            let mut p = c.numerator().clone();
            for d in &dens {
                if d != c.denominator() {
                    p = &p * d;
                }
            }
            p
        })
        .collect();
    let mut monomials = BTreeSet::new();
    for p in &cleared {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    for m in monomials {
        rows.push(cleared.iter().map(|p| p.coefficient(&m)).collect());
    }
}

/// A nonzero kernel vector of the homogeneous system given by `rows`, or
/// `None` when the kernel is trivial. Gauss-Jordan over exact rationals;
/// the first free column is set to one, so the result is deterministic.
fn kernel_vector(mut rows: Vec<Vec<BigRational>>, cols: usize) -> Option<Vec<BigRational>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0usize;
    for c in 0..cols {
        let pivot = (rank..rows.len()).find(|&r| !rows[r][c].is_zero());
        let Some(pr) = pivot else { continue };
        rows.swap(rank, pr);
        let inv = rows[rank][c].clone().recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let factor = rows[r][c].clone();
                for j in 0..cols {
                    let delta = &factor * &rows[rank][j];
                    rows[r][j] -= delta;
                }
            }
        }
        pivot_of_col[c] = Some(rank);
        rank += 1;
    }
    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut solution = vec![BigRational::zero(); cols];
    solution[free] = BigRational::one();
    for c in 0..cols {
        if let Some(r) = pivot_of_col[c] {
            solution[c] = -rows[r][free].clone();
        }
    }
    Some(solution)
}

/// Jacobian analysis of a square parameterized map.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobianReport {
    pub determinant: RationalFunction,
    pub identically_zero: bool,
    /// Grid points (in source-variable order) where the determinant
    /// evaluates to zero, capped at twenty samples.
    pub vanishing_samples: Vec<Vec<BigRational>>,
}

/// Computes the exact Jacobian determinant of a map with as many components
/// as source variables and samples its vanishing locus on a small rational
/// grid (degenerate transformations live where it vanishes).
pub fn jacobian_determinant(map: &ParamMap) -> Result<JacobianReport> {
    let m = map.arity();
    if map.components().len() != m {
        return Err(Error::Arity { expected: m, found: map.components().len() });
    }
    let source = map.source();
    let matrix: Vec<Vec<RationalFunction>> = map
        .components()
        .iter()
        .map(|c| (0..m).map(|j| c.partial(source.name(j))).collect())
        .collect();
    let determinant = determinant(&matrix);
    let identically_zero = determinant.is_zero();

    let mut vanishing_samples = Vec::new();
    if !identically_zero && m > 0 {
        let values: Vec<i64> = if m <= 3 {
            vec![-2, -1, 0, 1, 2]
        } else {
            vec![-1, 0, 1]
        };
        let mut point = vec![0usize; m];
        'grid: loop {
            let assignment: BTreeMap<String, BigRational> = (0..m)
                .map(|j| {
                    (
                        source.name(j).to_string(),
                        BigRational::from_integer(values[point[j]].into()),
                    )
                })
                .collect();
            if let Ok(v) = determinant.eval(&assignment) {
                if v.is_zero() {
                    vanishing_samples
                        .push((0..m).map(|j| assignment[source.name(j)].clone()).collect());
                    if vanishing_samples.len() >= 20 {
                        break 'grid;
                    }
                }
            }
            // Odometer increment over the grid.
            let mut j = 0;
            loop {
                point[j] += 1;
                if point[j] < values.len() {
                    break;
                }
                point[j] = 0;
                j += 1;
                if j == m {
                    break 'grid;
                }
            }
        }
    }
    Ok(JacobianReport { determinant, identically_zero, vanishing_samples })
}

/// Cofactor expansion along the first row. Exact, and fine at the small
/// dimensions maps have here.
fn determinant(matrix: &[Vec<RationalFunction>]) -> RationalFunction {
    let n = matrix.len();
    match n {
        0 => RationalFunction::one(),
        1 => matrix[0][0].clone(),
        _ => {
            let mut acc = RationalFunction::zero();
            for j in 0..n {
                if matrix[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<RationalFunction>> = matrix[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &matrix[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Canonical Poisson bracket `Σ ∂f/∂q_i ∂g/∂p_i - ∂f/∂p_i ∂g/∂q_i` over the
/// given `(q, p)` pairs. Every name must be distinct.
pub fn poisson_bracket(
    f: &RationalFunction,
    g: &RationalFunction,
    pairs: &[(String, String)],
) -> Result<RationalFunction> {
    let mut seen = BTreeSet::new();
    for (q, p) in pairs {
        if !seen.insert(q.clone()) {
            return Err(Error::VariableMismatch(format!(
                "variable `{q}` repeats among the canonical pairs"
            )));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::VariableMismatch(format!(
                "variable `{p}` repeats among the canonical pairs"
            )));
        }
    }
    let mut acc = RationalFunction::zero();
    for (q, p) in pairs {
        let term = &(&f.partial(q) * &g.partial(p)) - &(&f.partial(p) * &g.partial(q));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// The identical relation `d_π ψ = d_π θ` produced on a pseudostructure.
#[derive(Clone, Debug, PartialEq)]
pub struct IdenticalRelation {
    pub psi: String,
    /// The restriction `ω_π` of the relation's form.
    pub pulled: DifferentialForm,
    /// The state form `θ` with `dθ = ω_π` on the pseudostructure.
    pub witness: DifferentialForm,
}

/// Outcome of one degree-descent step.
#[derive(Clone, Debug, PartialEq)]
pub enum Descent {
    /// The restriction closed; the identical relation holds and the next,
    /// lower-degree relation is ready.
    Identical {
        relation: IdenticalRelation,
        next: EvolutionaryRelation,
    },
    /// The restriction still fails to close on this pseudostructure.
    NotClosed { residual: DifferentialForm },
    /// Closed, but outside the polynomial witness construction.
    Undecided { pulled: DifferentialForm },
}

/// Restricts a relation to the pseudostructure cut out by `map` and, when
/// the restriction closes, integrates it: the witness `θ` yields the
/// identical relation `d_π ψ = d_π θ` and a new relation of one degree
/// lower. Applied repeatedly this is the degree ladder from field-forming
/// down to exact forms.
pub fn degree_descent(relation: &EvolutionaryRelation, map: &ParamMap) -> Result<Descent> {
    if relation.degree() == 0 {
        return Err(Error::Degree(
            "degree descent needs a relation of degree at least 1".to_string(),
        ));
    }
    let pulled = relation.omega().pullback(map)?;
    let (closed, residual) = is_closed(&pulled);
    if !closed {
        return Ok(Descent::NotClosed { residual });
    }
    match exactness_witness(&pulled) {
        Ok(witness) => {
            let next = EvolutionaryRelation::new(relation.psi().to_string(), witness.clone())?;
            Ok(Descent::Identical {
                relation: IdenticalRelation {
                    psi: relation.psi().to_string(),
                    pulled,
                    witness,
                },
                next,
            })
        }
        Err(Error::WitnessUndecided(_)) => Ok(Descent::Undecided { pulled }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn xy() -> Variables {
        Variables::from_names(&["x", "y"]).unwrap()
    }

    fn xyz() -> Variables {
        Variables::from_names(&["x", "y", "z"]).unwrap()
    }

    fn rf(name: &str) -> RationalFunction {
        RationalFunction::variable(name)
    }

    fn int(n: i64) -> RationalFunction {
        RationalFunction::from_integer(n)
    }

    #[test]
    fn flat_structure_reduces_to_d() {
        let t = StructureCoefficients::new(xy());
        assert!(t.is_flat());
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], &rf("x") * &rf("y")), (vec![1], rf("x"))],
        )
        .unwrap();
        assert_eq!(
            evolutionary_differential(&w, &t).unwrap(),
            w.exterior_derivative()
        );
    }

    #[test]
    fn torsion_contribution_on_a_basis_form() {
        // w = dx with T^x = dy^dz: d_ev w = dy^dz exactly.
        let mut t = StructureCoefficients::new(xyz());
        t.set("x", DifferentialForm::basis(xyz(), &[1, 2]).unwrap()).unwrap();
        let w = DifferentialForm::basis(xyz(), &[0]).unwrap();
        assert_eq!(
            evolutionary_differential(&w, &t).unwrap(),
            DifferentialForm::basis(xyz(), &[1, 2]).unwrap()
        );
    }

    #[test]
    fn torsion_signs_alternate_inside_a_wedge_monomial() {
        // The torsion of the second slot enters with a minus sign.
        let mut t = StructureCoefficients::new(xyz());
        t.set("z", DifferentialForm::basis(xyz(), &[0, 1]).unwrap()).unwrap();
        let w = DifferentialForm::basis(xyz(), &[1, 2]).unwrap();
        // d_ev(dy^dz) = (-1)^1 dy ^ T^z = -(dy ^ dx ^ dy) = 0.
        assert!(evolutionary_differential(&w, &t).unwrap().is_zero());

        // With T^z = dx^dz instead: -(dy^dx^dz) = +dx^dy^dz.
        let mut t = StructureCoefficients::new(xyz());
        t.set("z", DifferentialForm::basis(xyz(), &[0, 2]).unwrap()).unwrap();
        assert_eq!(
            evolutionary_differential(&w, &t).unwrap(),
            DifferentialForm::basis(xyz(), &[0, 1, 2]).unwrap()
        );
    }

    #[test]
    fn structure_validation() {
        let mut t = StructureCoefficients::new(xy());
        assert!(matches!(
            t.set("q", DifferentialForm::basis(xy(), &[0, 1]).unwrap()),
            Err(Error::UnknownVariable(_))
        ));
        assert!(matches!(
            t.set("x", DifferentialForm::basis(xy(), &[0]).unwrap()),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn relation_constructors() {
        let coords = Variables::from_names(&["xi1"]).unwrap();
        // The ideal-gas energy balance alone: A_1 = 0, an identically zero
        // right hand side.
        let rel = EvolutionaryRelation::from_coefficients(
            "psi",
            coords.clone(),
            vec![RationalFunction::zero()],
        )
        .unwrap();
        assert!(rel.omega().is_zero());
        assert_eq!(rel.degree(), 1);

        assert!(matches!(
            EvolutionaryRelation::from_coefficients("psi", coords, vec![int(1), int(2)]),
            Err(Error::VariableMismatch(_))
        ));

        let four = Variables::from_names(&["a", "b", "c", "d"]).unwrap();
        let top = DifferentialForm::basis(four.clone(), &[0, 1, 2, 3]).unwrap();
        assert!(matches!(
            EvolutionaryRelation::new("psi", top),
            Err(Error::Degree(_))
        ));
    }

    #[test]
    fn gradient_relations_are_identical() {
        let f = DifferentialForm::scalar(xy(), &rf("x") * &rf("y"));
        let rel = EvolutionaryRelation::new("psi", f.exterior_derivative()).unwrap();
        let report = nonidentity_report(&rel, None).unwrap();
        assert!(report.identical);
        assert!(report.internal_force.is_zero());
        assert!(report.commutator.unwrap().is_zero());
    }

    #[test]
    fn heat_relation_is_nonidentical() {
        // omega = c_v dT + (R T / V) dV with c_v = 3/2, R = 1.
        let tv = Variables::from_names(&["T", "V"]).unwrap();
        let c_v = RationalFunction::constant(BigRational::new(BigInt::from(3), BigInt::from(2)));
        let rtv = rf("T").divide(&rf("V")).unwrap();
        let omega = DifferentialForm::from_terms(
            tv.clone(),
            1,
            vec![(vec![0], c_v), (vec![1], rtv)],
        )
        .unwrap();
        let rel = EvolutionaryRelation::new("psi", omega).unwrap();
        let report = nonidentity_report(&rel, None).unwrap();
        assert!(!report.identical);
        // K_TV = d(RT/V)/dT - d(c_v)/dV = 1/V.
        let k = report.commutator.unwrap();
        assert_eq!(k.entry(0, 1), &RationalFunction::one().divide(&rf("V")).unwrap());
    }

    #[test]
    fn torsion_breaks_an_identical_relation() {
        // A gradient form with nonvanishing torsion stops being identical.
        let mut t = StructureCoefficients::new(xyz());
        t.set("x", DifferentialForm::basis(xyz(), &[1, 2]).unwrap()).unwrap();
        let f = DifferentialForm::scalar(xyz(), rf("x"));
        let rel = EvolutionaryRelation::new("psi", f.exterior_derivative()).unwrap();
        assert!(nonidentity_report(&rel, None).unwrap().identical);
        let report = nonidentity_report(&rel, Some(&t)).unwrap();
        assert!(!report.identical);
        assert_eq!(
            report.internal_force,
            DifferentialForm::basis(xyz(), &[1, 2]).unwrap()
        );
    }

    #[test]
    fn frobenius_in_two_variables_is_automatic() {
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], &rf("x") * &rf("x")), (vec![1], rf("y"))],
        )
        .unwrap();
        assert!(frobenius_test(&w).unwrap());
    }

    #[test]
    fn contact_form_fails_frobenius() {
        // w = dz - y dx: w ^ dw = dx^dy^dz != 0.
        let w = DifferentialForm::from_terms(
            xyz(),
            1,
            vec![(vec![2], int(1)), (vec![0], -&rf("y"))],
        )
        .unwrap();
        assert!(!frobenius_test(&w).unwrap());
        let wdw = w.wedge(&w.exterior_derivative()).unwrap();
        assert_eq!(wdw, DifferentialForm::basis(xyz(), &[0, 1, 2]).unwrap());
        assert_eq!(
            integrating_factor_search(&w, 2).unwrap(),
            FactorSearch::FrobeniusFails
        );
    }

    #[test]
    fn heat_form_factor_is_inverse_temperature() {
        let tv = Variables::from_names(&["T", "V"]).unwrap();
        let c_v = RationalFunction::constant(BigRational::new(BigInt::from(3), BigInt::from(2)));
        let rtv = rf("T").divide(&rf("V")).unwrap();
        let omega = DifferentialForm::from_terms(
            tv.clone(),
            1,
            vec![(vec![0], c_v), (vec![1], rtv)],
        )
        .unwrap();
        let got = integrating_factor_search(&omega, DEFAULT_EXPONENT_BOUND).unwrap();
        let inv_t = RationalFunction::one().divide(&rf("T")).unwrap();
        assert_eq!(got, FactorSearch::Found(inv_t.clone()));
        assert!(is_closed(&omega.scale(&inv_t)).0);
    }

    #[test]
    fn closed_forms_get_the_trivial_factor() {
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], rf("y")), (vec![1], rf("x"))],
        )
        .unwrap();
        assert_eq!(
            integrating_factor_search(&w, 3).unwrap(),
            FactorSearch::Found(RationalFunction::one())
        );
    }

    #[test]
    fn exponential_factors_are_out_of_reach() {
        // (x + y) dx + dy integrates only against e^x: the top y-degree
        // part of any Laurent solution of the factor equation would have to
        // satisfy f' = (k + 1) f, which no Laurent polynomial does.
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], &rf("x") + &rf("y")), (vec![1], int(1))],
        )
        .unwrap();
        assert_eq!(
            integrating_factor_search(&w, 2).unwrap(),
            FactorSearch::NotFoundWithinAnsatz
        );
    }

    #[test]
    fn monomial_factor_of_an_unbalanced_form() {
        // w = y dx + 2x dy: d(x^a y^b w) = (2a - b + 1) x^a y^b dx^dy, so
        // the graded search finds mu = y before 1/(x y) and the rest.
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], rf("y")), (vec![1], &int(2) * &rf("x"))],
        )
        .unwrap();
        match integrating_factor_search(&w, 3).unwrap() {
            FactorSearch::Found(mu) => {
                assert_eq!(mu, rf("y"));
                assert!(is_closed(&w.scale(&mu)).0);
            }
            other => panic!("expected a factor, got {other:?}"),
        }
    }

    #[test]
    fn combination_stage_handles_binomial_factors() {
        // w = (y dx + x dy)/(1 + x): every integrating factor has the shape
        // (1 + x) f(x y), never a single Laurent monomial, so only the
        // linear stage can succeed. Whatever kernel vector it picks must
        // verify and must genuinely mix monomials.
        let one_plus_x = &int(1) + &rf("x");
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![
                (vec![0], rf("y").divide(&one_plus_x).unwrap()),
                (vec![1], rf("x").divide(&one_plus_x).unwrap()),
            ],
        )
        .unwrap();
        match integrating_factor_search(&w, 2).unwrap() {
            FactorSearch::Found(mu) => {
                assert!(is_closed(&w.scale(&mu)).0);
                assert!(mu.numerator().term_count() >= 2);
            }
            other => panic!("expected a factor, got {other:?}"),
        }
    }

    #[test]
    fn degree_error_and_bound_validation() {
        let f = DifferentialForm::scalar(xy(), rf("x"));
        assert!(matches!(integrating_factor_search(&f, 3), Err(Error::Degree(_))));
        let dx = DifferentialForm::basis(xy(), &[0]).unwrap();
        assert!(matches!(
            integrating_factor_search(&dx, 0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn jacobian_of_identity_and_fold() {
        let id = ParamMap::identity(xy());
        let report = jacobian_determinant(&id).unwrap();
        assert_eq!(report.determinant, RationalFunction::one());
        assert!(report.vanishing_samples.is_empty());

        // (x, y) -> (x^2, y): determinant 2x vanishes on the x = 0 line.
        let fold = ParamMap::new(xy(), vec![&rf("x") * &rf("x"), rf("y")]).unwrap();
        let report = jacobian_determinant(&fold).unwrap();
        assert_eq!(report.determinant, &int(2) * &rf("x"));
        assert!(!report.identically_zero);
        assert!(report
            .vanishing_samples
            .iter()
            .all(|p| p[0] == BigRational::zero()));
        assert_eq!(report.vanishing_samples.len(), 5);

        // (x, y) -> (x + y, x + y): identically degenerate.
        let collapse =
            ParamMap::new(xy(), vec![&rf("x") + &rf("y"), &rf("x") + &rf("y")]).unwrap();
        let report = jacobian_determinant(&collapse).unwrap();
        assert!(report.identically_zero);

        // Non-square maps are an arity error.
        let curve = ParamMap::new(
            Variables::from_names(&["t"]).unwrap(),
            vec![rf("t"), &rf("t") * &rf("t")],
        )
        .unwrap();
        assert!(matches!(jacobian_determinant(&curve), Err(Error::Arity { .. })));
    }

    #[test]
    fn poisson_bracket_canonical_pairs() {
        let pairs = vec![("q".to_string(), "p".to_string())];
        // {q, p} = 1.
        assert_eq!(
            poisson_bracket(&rf("q"), &rf("p"), &pairs).unwrap(),
            RationalFunction::one()
        );
        // {H, H} = 0.
        let h = &(&rf("p") * &rf("p")) + &(&rf("q") * &rf("q"));
        assert!(poisson_bracket(&h, &h, &pairs).unwrap().is_zero());
        // {p^2, q} = -2p.
        let p2 = &rf("p") * &rf("p");
        assert_eq!(
            poisson_bracket(&p2, &rf("q"), &pairs).unwrap(),
            &int(-2) * &rf("p")
        );
        // Repeated names are rejected.
        let bad = vec![
            ("q".to_string(), "p".to_string()),
            ("q".to_string(), "r".to_string()),
        ];
        assert!(matches!(
            poisson_bracket(&rf("q"), &rf("p"), &bad),
            Err(Error::VariableMismatch(_))
        ));
    }

    #[test]
    fn descent_to_a_constant_slice() {
        // x dy restricted to phi(t) = (t, 2) pulls back to zero; the
        // identical relation holds with theta = 0.
        let t = Variables::from_names(&["t"]).unwrap();
        let phi = ParamMap::new(t.clone(), vec![rf("t"), int(2)]).unwrap();
        let w = DifferentialForm::from_terms(xy(), 1, vec![(vec![1], rf("x"))]).unwrap();
        let rel = EvolutionaryRelation::new("psi", w).unwrap();
        match degree_descent(&rel, &phi).unwrap() {
            Descent::Identical { relation, next } => {
                assert!(relation.witness.is_zero());
                assert!(relation.pulled.is_zero());
                assert_eq!(next.degree(), 0);
                assert_eq!(next.psi(), "psi");
            }
            other => panic!("expected identical descent, got {other:?}"),
        }
    }

    #[test]
    fn descent_along_identity_of_a_closed_form() {
        let w = DifferentialForm::from_terms(
            xy(),
            1,
            vec![(vec![0], rf("y")), (vec![1], rf("x"))],
        )
        .unwrap();
        let rel = EvolutionaryRelation::new("psi", w).unwrap();
        match degree_descent(&rel, &ParamMap::identity(xy())).unwrap() {
            Descent::Identical { relation, next } => {
                assert_eq!(
                    relation.witness,
                    DifferentialForm::scalar(xy(), &rf("x") * &rf("y"))
                );
                assert_eq!(next.degree(), 0);
            }
            other => panic!("expected identical descent, got {other:?}"),
        }
    }

    #[test]
    fn descent_reports_what_fails_to_close() {
        let w = DifferentialForm::from_terms(xy(), 1, vec![(vec![1], rf("x"))]).unwrap();
        let rel = EvolutionaryRelation::new("psi", w).unwrap();
        match degree_descent(&rel, &ParamMap::identity(xy())).unwrap() {
            Descent::NotClosed { residual } => {
                assert_eq!(residual, DifferentialForm::basis(xy(), &[0, 1]).unwrap());
            }
            other => panic!("expected NotClosed, got {other:?}"),
        }
        let f = DifferentialForm::scalar(xy(), rf("x"));
        let rel0 = EvolutionaryRelation::new("psi", f).unwrap();
        assert!(matches!(
            degree_descent(&rel0, &ParamMap::identity(xy())),
            Err(Error::Degree(_))
        ));
    }
}
