//! Skew-symmetric differential forms with rational-function coefficients,
//! together with the exterior operations: wedge product, exterior
//! derivative, interior product, pullback along parameterized maps, and the
//! commutator matrix of a 1-form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::RationalFunction;
use crate::error::{Error, Result};

/// An ordered ambient variable list, e.g. `(x, y, z)`.
///
/// Declaration order is significant: it fixes basis positions, the ordering
/// of multi-indices, and the pairing with metric signatures. Cloning is
/// cheap; the list is shared behind an `Arc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variables(Arc<Vec<String>>);

impl Variables {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::DuplicateVariable(n.clone()));
            }
        }
        Ok(Variables(Arc::new(names)))
    }

    /// Convenience constructor for static name lists in tests and demos.
    pub fn from_names(names: &[&str]) -> Result<Self> {
        Variables::new(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }
}

impl fmt::Display for Variables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.join(", "))
    }
}

/// A strictly increasing list of basis positions naming one wedge monomial
/// `dx^{i_1} ^ ... ^ dx^{i_p}`. The empty index denotes the 0-form basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Accepts an already strictly increasing index list.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(
                "multi-index must be strictly increasing".to_string(),
            ));
        }
        Ok(MultiIndex(indices))
    }

    /// Sorts an arbitrary index list into increasing order, returning the
    /// sign of the permutation, or `None` when an index repeats (the wedge
    /// monomial is then zero).
    pub fn sort_with_sign(mut indices: Vec<usize>) -> Option<(Self, i8)> {
        let mut sign = 1i8;
        // Insertion sort, counting transpositions exactly.
        for i in 1..indices.len() {
            let mut j = i;
            while j > 0 && indices[j - 1] > indices[j] {
                indices.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((MultiIndex(indices), sign))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Inserts `i`, returning the new index and the sign `(-1)^k` where `k`
    /// counts existing entries smaller than `i`. `None` if already present.
    fn insert_with_sign(&self, i: usize) -> Option<(Self, i8)> {
        match self.0.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, i);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((MultiIndex(v), sign))
            }
        }
    }

    /// Removes the entry at slot `r` (0-based).
    fn remove_slot(&self, r: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(r);
        MultiIndex(v)
    }

    /// Merges two disjoint increasing indices, with the sign of the sorting
    /// permutation of their concatenation. `None` when they intersect.
    fn merge_with_sign(&self, other: &MultiIndex) -> Option<(Self, i8)> {
        let mut inversions = 0usize;
        for &j in &other.0 {
            if self.contains(j) {
                return None;
            }
            inversions += self.0.iter().filter(|&&i| i > j).count();
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(v), sign))
    }

    /// The complementary increasing index inside dimension `n`.
    pub fn complement(&self, n: usize) -> Self {
        MultiIndex((0..n).filter(|i| !self.contains(*i)).collect())
    }
}

/// An exterior form of fixed degree over an ambient variable list.
///
/// Coefficients are stored per strictly increasing multi-index with no zero
/// entries, so representation is canonical up to rational-function equality
/// and iteration order is deterministic. A degree above the dimension is
/// structurally forced to be the zero form.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialForm {
    vars: Variables,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, RationalFunction>,
}

impl DifferentialForm {
    pub fn zero(vars: Variables, degree: usize) -> Self {
        DifferentialForm { vars, degree, coeffs: BTreeMap::new() }
    }

    /// A 0-form holding one scalar.
    pub fn scalar(vars: Variables, value: RationalFunction) -> Self {
        let mut form = DifferentialForm::zero(vars, 0);
        form.add_term(MultiIndex::empty(), value);
        form
    }

    /// A unit basis monomial `dx^{i_1} ^ ... ^ dx^{i_p}` given in any index
    /// order (the sign of sorting is absorbed into the coefficient).
    pub fn basis(vars: Variables, indices: &[usize]) -> Result<Self> {
        DifferentialForm::from_terms(
            vars,
            indices.len(),
            vec![(indices.to_vec(), RationalFunction::one())],
        )
    }

    /// Builds a form of the stated degree from `(indices, coefficient)`
    /// terms. Indices may arrive unsorted; repeated indices annihilate the
    /// term. Out-of-range indices and length mismatches are errors.
    pub fn from_terms(
        vars: Variables,
        degree: usize,
        terms: Vec<(Vec<usize>, RationalFunction)>,
    ) -> Result<Self> {
        let mut form = DifferentialForm::zero(vars, degree);
        for (indices, coeff) in terms {
            if indices.len() != degree {
                return Err(Error::Degree(format!(
                    "term with {} differentials in a form of degree {}",
                    indices.len(),
                    degree
                )));
            }
            if let Some(&bad) = indices.iter().find(|&&i| i >= form.vars.len()) {
                return Err(Error::UnknownVariable(format!("basis index {bad}")));
            }
            if let Some((idx, sign)) = MultiIndex::sort_with_sign(indices) {
                form.add_term(idx, apply_sign(coeff, sign));
            }
        }
        Ok(form)
    }

    fn add_term(&mut self, idx: MultiIndex, coeff: RationalFunction) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RationalFunction)> {
        self.coeffs.iter()
    }

    /// Coefficient at a multi-index, zero when absent.
    pub fn coefficient(&self, idx: &MultiIndex) -> RationalFunction {
        self.coeffs.get(idx).cloned().unwrap_or_else(RationalFunction::zero)
    }

    /// The unique scalar of a 0-form.
    pub fn scalar_value(&self) -> Result<RationalFunction> {
        if self.degree != 0 {
            return Err(Error::Degree(format!(
                "expected a 0-form, found degree {}",
                self.degree
            )));
        }
        Ok(self.coefficient(&MultiIndex::empty()))
    }

    /// True when every coefficient is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.values().all(RationalFunction::is_polynomial)
    }

    fn same_space(&self, other: &DifferentialForm) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::VariableMismatch(format!(
                "forms over ({}) and ({})",
                self.vars, other.vars
            )));
        }
        Ok(())
    }

    /// Sum of two forms of equal degree over the same variables.
    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.same_space(other)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> DifferentialForm {
        self.map_coefficients(|c| -c)
    }

    /// Multiplies every coefficient by a scalar function.
    pub fn scale(&self, factor: &RationalFunction) -> DifferentialForm {
        if factor.is_zero() {
            return DifferentialForm::zero(self.vars.clone(), self.degree);
        }
        self.map_coefficients(|c| c * factor)
    }

    fn map_coefficients<F>(&self, f: F) -> DifferentialForm
    where
        F: Fn(&RationalFunction) -> RationalFunction,
    {
        let mut out = DifferentialForm::zero(self.vars.clone(), self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), f(c));
        }
        out
    }

    /// Exterior product. Degrees add; the result is zero whenever the
    /// combined degree exceeds the dimension.
    pub fn wedge(&self, other: &DifferentialForm) -> Result<DifferentialForm> {
        self.same_space(other)?;
        let mut out = DifferentialForm::zero(self.vars.clone(), self.degree + other.degree);
        for (ia, ca) in &self.coeffs {
            for (ib, cb) in &other.coeffs {
                if let Some((idx, sign)) = ia.merge_with_sign(ib) {
                    out.add_term(idx, apply_sign(ca * cb, sign));
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative `d`, raising the degree by one. Always defined;
    /// `d` of an n-form over n variables is the zero (n+1)-form.
    pub fn exterior_derivative(&self) -> DifferentialForm {
        let mut out = DifferentialForm::zero(self.vars.clone(), self.degree + 1);
        for (idx, c) in &self.coeffs {
            for j in 0..self.vars.len() {
                let dc = c.partial(self.vars.name(j));
                if dc.is_zero() {
                    continue;
                }
                if let Some((bigger, sign)) = idx.insert_with_sign(j) {
                    out.add_term(bigger, apply_sign(dc, sign));
                }
            }
        }
        out
    }

    /// The commutator matrix `K_ij = ∂a_j/∂x_i − ∂a_i/∂x_j` of a 1-form
    /// `Σ a_i dx^i`. It vanishes identically exactly when the form is
    /// closed.
    pub fn commutator(&self) -> Result<Commutator> {
        if self.degree != 1 {
            return Err(Error::Degree(format!(
                "commutator is defined for 1-forms, found degree {}",
                self.degree
            )));
        }
        let n = self.vars.len();
        let component = |i: usize| self.coefficient(&MultiIndex(vec![i]));
        let mut entries = vec![vec![RationalFunction::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let k = &component(j).partial(self.vars.name(i))
                    - &component(i).partial(self.vars.name(j));
                entries[j][i] = -&k;
                entries[i][j] = k;
            }
        }
        Ok(Commutator { vars: self.vars.clone(), entries })
    }

    /// Interior product (contraction) with a vector field, lowering the
    /// degree by one.
    pub fn interior_product(&self, field: &VectorField) -> Result<DifferentialForm> {
        if self.vars != field.vars {
            return Err(Error::VariableMismatch(format!(
                "form over ({}) contracted with field over ({})",
                self.vars, field.vars
            )));
        }
        if self.degree == 0 {
            return Err(Error::Degree(
                "interior product needs degree at least 1".to_string(),
            ));
        }
        let mut out = DifferentialForm::zero(self.vars.clone(), self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (r, i) in idx.iter().enumerate() {
                let comp = field.component(self.vars.name(i));
                if comp.is_zero() {
                    continue;
                }
                let sign = if r % 2 == 0 { 1 } else { -1 };
                out.add_term(idx.remove_slot(r), apply_sign(c * &comp, sign));
            }
        }
        Ok(out)
    }

    /// Pullback along a parameterized map into this form's space. The result
    /// lives over the map's source variables.
    pub fn pullback(&self, map: &ParamMap) -> Result<DifferentialForm> {
        if map.components.len() != self.vars.len() {
            return Err(Error::VariableMismatch(format!(
                "map with {} components into a space of dimension {}",
                map.components.len(),
                self.vars.len()
            )));
        }
        let subs: BTreeMap<String, RationalFunction> = self
            .vars
            .iter()
            .zip(map.components.iter())
            .map(|(name, c)| (name.to_string(), c.clone()))
            .collect();
        // d(phi^i) as 1-forms over the source space, computed once per
        // target variable actually used.
        let mut dphi: BTreeMap<usize, DifferentialForm> = BTreeMap::new();
        let mut out = DifferentialForm::zero(map.source.clone(), self.degree);
        for (idx, c) in &self.coeffs {
            let mut piece = DifferentialForm::scalar(map.source.clone(), c.compose(&subs)?);
            for i in idx.iter() {
                let di = dphi.entry(i).or_insert_with(|| {
                    differential_of(&map.source, &map.components[i])
                });
                piece = piece.wedge(di)?;
            }
            out = out.add(&piece)?;
        }
        Ok(out)
    }
}

/// `df` of a scalar over `vars`, as a 1-form.
fn differential_of(vars: &Variables, f: &RationalFunction) -> DifferentialForm {
    let mut out = DifferentialForm::zero(vars.clone(), 1);
    for j in 0..vars.len() {
        out.add_term(MultiIndex(vec![j]), f.partial(vars.name(j)));
    }
    out
}

fn apply_sign(c: RationalFunction, sign: i8) -> RationalFunction {
    if sign < 0 {
        -&c
    } else {
        c
    }
}

/// The antisymmetric commutator matrix of a 1-form.
#[derive(Clone, Debug, PartialEq)]
pub struct Commutator {
    vars: Variables,
    entries: Vec<Vec<RationalFunction>>,
}

impl Commutator {
    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(RationalFunction::is_zero)
    }

    /// Upper-triangle entries `(i, j, K_ij)` with `i < j`, including zeros.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &RationalFunction)> {
        let n = self.vars.len();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j, self.entry(i, j))))
    }
}

/// A vector field `Σ X^i ∂/∂x^i` with rational-function components.
/// Components default to zero, so sparse fields stay sparse.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    vars: Variables,
    components: BTreeMap<String, RationalFunction>,
}

impl VectorField {
    pub fn new(
        vars: Variables,
        components: BTreeMap<String, RationalFunction>,
    ) -> Result<Self> {
        for name in components.keys() {
            if !vars.contains(name) {
                return Err(Error::UnknownVariable(name.clone()));
            }
        }
        let components = components.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(VectorField { vars, components })
    }

    /// The coordinate field `∂/∂name`.
    pub fn coordinate(vars: Variables, name: &str) -> Result<Self> {
        let mut components = BTreeMap::new();
        components.insert(name.to_string(), RationalFunction::one());
        VectorField::new(vars, components)
    }

    pub fn variables(&self) -> &Variables {
        &self.vars
    }

    pub fn component(&self, name: &str) -> RationalFunction {
        self.components.get(name).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn components(&self) -> impl Iterator<Item = (&str, &RationalFunction)> {
        self.components.iter().map(|(n, c)| (n.as_str(), c))
    }
}

/// A polynomial or rational map `(s_1, ..., s_m) -> (phi^1, ..., phi^k)`
/// written in its source variables, used for pullbacks, restrictions to
/// pseudostructures, and Jacobian analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamMap {
    source: Variables,
    components: Vec<RationalFunction>,
}

impl ParamMap {
    pub fn new(source: Variables, components: Vec<RationalFunction>) -> Result<Self> {
        for c in &components {
            for v in c.variables() {
                if !source.contains(&v) {
                    return Err(Error::UnknownVariable(v));
                }
            }
        }
        Ok(ParamMap { source, components })
    }

    /// The identity map of a variable list.
    pub fn identity(vars: Variables) -> Self {
        let components = vars.iter().map(RationalFunction::variable).collect();
        ParamMap { source: vars, components }
    }

    pub fn source(&self) -> &Variables {
        &self.source
    }

    pub fn arity(&self) -> usize {
        self.source.len()
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }
}
