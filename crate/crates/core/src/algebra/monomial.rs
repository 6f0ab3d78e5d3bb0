use std::collections::BTreeMap;
use std::fmt;

/// A power product of named variables, e.g. `x**2*y`.
///
/// Exponents are strictly positive; a variable with exponent zero is simply
/// absent, so the representation of any product is unique and the derived
/// ordering is a total order usable as a map key. The constant monomial `1`
/// is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exponents: BTreeMap<String, u32>,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Self {
        Monomial::default()
    }

    /// A single variable to the first power.
    pub fn var(name: &str) -> Self {
        Monomial::from_exponents([(name.to_string(), 1)])
    }

    /// Builds a monomial from `(variable, exponent)` pairs. Zero exponents
    /// are dropped; repeated variables accumulate.
    pub fn from_exponents<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (String, u32)>,
    {
        let mut exponents = BTreeMap::new();
        for (name, e) in pairs {
            if e > 0 {
                *exponents.entry(name).or_insert(0) += e;
            }
        }
        Monomial { exponents }
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.exponents.get(var).copied().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.exponents.keys().map(String::as_str)
    }

    /// Number of distinct variables with nonzero exponent.
    pub fn variable_count(&self) -> usize {
        self.exponents.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.exponents.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exponents = self.exponents.clone();
        for (name, e) in &other.exponents {
            *exponents.entry(name.clone()).or_insert(0) += e;
        }
        Monomial { exponents }
    }

    /// Componentwise minimum, the monomial gcd.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exponents = BTreeMap::new();
        for (name, e) in &self.exponents {
            let f = other.exponent(name);
            let m = (*e).min(f);
            if m > 0 {
                exponents.insert(name.clone(), m);
            }
        }
        Monomial { exponents }
    }

    /// Divides by `other`, returning `None` unless `other` divides `self`
    /// exactly.
    pub fn div_exact(&self, other: &Monomial) -> Option<Monomial> {
        let mut exponents = self.exponents.clone();
        for (name, e) in &other.exponents {
            match exponents.get_mut(name) {
                Some(have) if *have >= *e => {
                    *have -= e;
                    if *have == 0 {
                        exponents.remove(name);
                    }
                }
                _ => return None,
            }
        }
        Some(Monomial { exponents })
    }

    /// Multiplies `self` by `var`, raising its exponent by one.
    pub fn push_var(&self, var: &str) -> Monomial {
        let mut exponents = self.exponents.clone();
        *exponents.entry(var.to_string()).or_insert(0) += 1;
        Monomial { exponents }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (name, e) in &self.exponents {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}**{e}")?;
            }
        }
        Ok(())
    }
}
