//! Worked physical applications of the closure machinery.
//!
//! Each entry point packages a standard field-theoretic check as an exact
//! computation: the Maxwell pair `dF = 0`, `d*F = 0`, the Poincare-Cartan
//! invariant of a Hamiltonian system, the heat 1-form of an ideal gas with
//! its integrating factor, and the classification table that organizes
//! closed forms of degree `k` arising from `p` interacting balance laws.

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::RationalFunction;
use crate::closure::{classify_form, Exactness};
use crate::error::{Error, Result};
use crate::evolutionary::{integrating_factor_search, FactorSearch, DEFAULT_EXPONENT_BOUND};
use crate::forms::{DifferentialForm, Variables, VectorField};
use crate::metric::{hodge_star, DiagonalMetric};

/// Both halves of the vacuum Maxwell system for a field-strength 2-form.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxwellReport {
    /// `dF`, zero exactly when the homogeneous half holds.
    pub faraday_residual: DifferentialForm,
    /// The dual field strength `*F`.
    pub dual: DifferentialForm,
    /// `d*F`, zero exactly when the source-free half holds.
    pub source_residual: DifferentialForm,
    pub homogeneous: bool,
    pub source_free: bool,
    pub satisfied: bool,
}

/// Checks `dF = 0` and `d*F = 0` for a 2-form over a four-dimensional
/// space. Both residuals are returned exactly, so a failure names the
/// offending 3-form rather than just a flag.
pub fn maxwell_check(f: &DifferentialForm, metric: &DiagonalMetric) -> Result<MaxwellReport> {
    if f.degree() != 2 {
        return Err(Error::Degree(format!(
            "a field strength is a 2-form, found degree {}",
            f.degree()
        )));
    }
    if f.dimension() != 4 {
        return Err(Error::VariableMismatch(format!(
            "the Maxwell system lives in four dimensions, found {}",
            f.dimension()
        )));
    }
    let faraday_residual = f.exterior_derivative();
    let dual = hodge_star(f, metric)?;
    let source_residual = dual.exterior_derivative();
    let homogeneous = faraday_residual.is_zero();
    let source_free = source_residual.is_zero();
    Ok(MaxwellReport {
        faraday_residual,
        dual,
        source_residual,
        homogeneous,
        source_free,
        satisfied: homogeneous && source_free,
    })
}

/// The Poincare-Cartan data of a Hamiltonian system.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareCartanReport {
    /// The action 1-form `Σ p_i dq_i - H dt`.
    pub action_form: DifferentialForm,
    /// Its differential `Σ dp_i ^ dq_i - dH ^ dt`.
    pub differential: DifferentialForm,
    /// The characteristic field `∂_t + Σ H_{p_i} ∂_{q_i} - Σ H_{q_i} ∂_{p_i}`.
    pub field: VectorField,
    /// The contraction of the differential with the field.
    pub residual: DifferentialForm,
    /// True when the residual vanishes identically.
    pub invariant: bool,
}

/// Builds the action form of `hamiltonian` over phase-time variables
/// `(t, q_1, ..., q_n, p_1, ..., p_n)` (positional: first time, then the
/// coordinates, then the momenta) and contracts its differential with the
/// characteristic field of the canonical equations. The contraction
/// vanishes identically, for time-dependent Hamiltonians too; the report
/// carries the residual so the identity is checked rather than assumed.
pub fn poincare_cartan_check(
    vars: Variables,
    hamiltonian: &RationalFunction,
) -> Result<PoincareCartanReport> {
    if vars.len() < 3 || vars.len() % 2 == 0 {
        return Err(Error::VariableMismatch(format!(
            "phase-time variables come as (t, q_1..q_n, p_1..p_n), found {} names",
            vars.len()
        )));
    }
    for name in hamiltonian.variables() {
        if !vars.contains(&name) {
            return Err(Error::UnknownVariable(name));
        }
    }
    let n = (vars.len() - 1) / 2;
    let mut terms = vec![(vec![0], -hamiltonian)];
    for i in 0..n {
        let momentum = RationalFunction::variable(vars.name(1 + n + i));
        terms.push((vec![1 + i], momentum));
    }
    let action_form = DifferentialForm::from_terms(vars.clone(), 1, terms)?;
    let differential = action_form.exterior_derivative();

    let mut components = std::collections::BTreeMap::new();
    components.insert(vars.name(0).to_string(), RationalFunction::one());
    for i in 0..n {
        let q = vars.name(1 + i);
        let p = vars.name(1 + n + i);
        components.insert(q.to_string(), hamiltonian.partial(p));
        components.insert(p.to_string(), -&hamiltonian.partial(q));
    }
    let field = VectorField::new(vars, components)?;
    let residual = differential.interior_product(&field)?;
    let invariant = residual.is_zero();
    Ok(PoincareCartanReport {
        action_form,
        differential,
        field,
        residual,
        invariant,
    })
}

/// The ideal-gas heat form and what became of it.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermoReport {
    /// `ω_Q = c_v dT + (R T / V) dV` over `(T, V)`.
    pub heat_form: DifferentialForm,
    /// Whether the heat form is already closed (only for `R = 0`).
    pub closed: bool,
    /// The integrating-factor search outcome; `1/T` for a real gas constant.
    pub factor: FactorSearch,
    /// `μ ω_Q` when a factor was found: the entropy differential.
    pub entropy_form: Option<DifferentialForm>,
    /// Exactness of the entropy differential. The witness integral of
    /// `c_v/T` is not polynomial, so with `R > 0` this stays undecided even
    /// though the scaled form is closed.
    pub entropy: Option<Exactness>,
}

/// Runs the first-law demonstration for an ideal gas with heat capacity
/// `c_v` and gas constant `r`, over state variables `(T, V)`. The heat form
/// is not closed (heat is not a state function), but `1/T` turns it into
/// the entropy differential. `r = 0` models a medium with no work term, in
/// which case the heat form is already exact with witness `c_v T`.
pub fn thermo_demo(c_v: &BigRational, r: &BigRational, bound: u32) -> Result<ThermoReport> {
    if c_v <= &BigRational::zero() {
        return Err(Error::Parameter(format!(
            "heat capacity must be positive, got {c_v}"
        )));
    }
    if r < &BigRational::zero() {
        return Err(Error::Parameter(format!(
            "gas constant must be nonnegative, got {r}"
        )));
    }
    let vars = Variables::from_names(&["T", "V"])?;
    let t = RationalFunction::variable("T");
    let v = RationalFunction::variable("V");
    let pressure_coeff = (&RationalFunction::constant(r.clone()) * &t).divide(&v)?;
    let heat_form = DifferentialForm::from_terms(
        vars,
        1,
        vec![
            (vec![0], RationalFunction::constant(c_v.clone())),
            (vec![1], pressure_coeff),
        ],
    )?;
    let closed = heat_form.exterior_derivative().is_zero();
    let factor = integrating_factor_search(&heat_form, bound)?;
    let (entropy_form, entropy) = match &factor {
        FactorSearch::Found(mu) => {
            let scaled = heat_form.scale(mu);
            let exactness = classify_form(&scaled, None)?.exactness;
            (Some(scaled), Some(exactness))
        }
        _ => (None, None),
    };
    Ok(ThermoReport {
        heat_form,
        closed,
        factor,
        entropy_form,
        entropy,
    })
}

/// Runs [`thermo_demo`] with the default exponent bound.
pub fn thermo_demo_default(c_v: &BigRational, r: &BigRational) -> Result<ThermoReport> {
    thermo_demo(c_v, r, DEFAULT_EXPONENT_BOUND)
}

/// Interaction type named by the degree of the closed form realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interaction {
    Strong,
    Weak,
    Electromagnetic,
    Gravitational,
}

impl Interaction {
    pub fn from_closure_degree(k: usize) -> Result<Self> {
        match k {
            0 => Ok(Interaction::Strong),
            1 => Ok(Interaction::Weak),
            2 => Ok(Interaction::Electromagnetic),
            3 => Ok(Interaction::Gravitational),
            _ => Err(Error::Degree(format!(
                "closed forms of degree at most 3 classify interactions, got {k}"
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Interaction::Strong => "strong",
            Interaction::Weak => "weak",
            Interaction::Electromagnetic => "electromagnetic",
            Interaction::Gravitational => "gravitational",
        }
    }
}

/// How the ambient space dimension relates to the number of interacting
/// balance laws when tabulating structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionPolicy {
    /// One full cycle: `p` balance laws act in a space of dimension `n = p`.
    MatchDegree,
    /// Every column keeps the same ambient dimension.
    Fixed(u32),
}

/// One cell of the classification table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationRow {
    /// `p`, the degree of the evolutionary form (number of interacting
    /// balance laws beyond energy).
    pub evolutionary_degree: usize,
    /// `k`, the degree of the closed form realized.
    pub closure_degree: usize,
    pub interaction: Interaction,
    /// `n`, the ambient space dimension for this column.
    pub space_dimension: usize,
    /// `n + 1 - k`, the dimension of the carrying pseudostructure.
    pub pseudostructure_dimension: usize,
    /// `N = n + 1`, the dimension of the metric structure created.
    pub parameter_count: usize,
    /// The structure formed in this cell, where one is named.
    pub structure_label: Option<String>,
}

/// The table of physical structures, one row per realizable `(p, k)` cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTable {
    pub rows: Vec<ClassificationRow>,
    /// Elements formed from exact 0-forms, one per column `p = 0..3`.
    pub material_elements: [&'static str; 4],
    /// The metric-structure dimension `N` per column `p = 0..3`.
    pub metric_dimensions: [usize; 4],
}

impl ClassificationTable {
    /// The row at `(p, k)`, when that cell is realizable.
    pub fn cell(&self, p: usize, k: usize) -> Option<&ClassificationRow> {
        self.rows
            .iter()
            .find(|r| r.evolutionary_degree == p && r.closure_degree == k)
    }
}

fn structure_label(k: usize, p: usize) -> Option<String> {
    match k {
        0 => Some(format!("quanta{p}")),
        1 => Some(format!("neutrino{p}")),
        2 => Some(format!("photon{p}")),
        3 => Some("graviton".to_string()),
        _ => None,
    }
}

/// Tabulates every realizable `(p, k)` cell for `p = 0..3`, `k <= p`. Under
/// the cycle policy the ambient dimension follows the column, giving metric
/// structures of dimension 1 through 4; a fixed policy keeps `n` constant
/// and drops cells whose pseudostructure dimension would go negative.
pub fn classification_table(policy: DimensionPolicy) -> ClassificationTable {
    let mut rows = Vec::new();
    let mut metric_dimensions = [0usize; 4];
    for p in 0..=3usize {
        let n = match policy {
            DimensionPolicy::MatchDegree => p,
            DimensionPolicy::Fixed(d) => d as usize,
        };
        metric_dimensions[p] = n + 1;
        for k in 0..=p {
            if k > n + 1 {
                continue;
            }
            rows.push(ClassificationRow {
                evolutionary_degree: p,
                closure_degree: k,
                interaction: Interaction::from_closure_degree(k)
                    .expect("k <= p <= 3 is always classifiable"),
                space_dimension: n,
                pseudostructure_dimension: n + 1 - k,
                parameter_count: n + 1,
                structure_label: structure_label(k, p),
            });
        }
    }
    ClassificationTable {
        rows,
        material_elements: ["electron", "proton", "neutron", "deuteron?"],
        metric_dimensions,
    }
}
