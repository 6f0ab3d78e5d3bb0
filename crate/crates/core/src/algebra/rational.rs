use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};
use crate::forms::Variables;

/// A quotient of two [`Polynomial`]s with a nonzero denominator.
///
/// The pair is kept in a light canonical shape rather than fully reduced:
/// the common monomial content of numerator and denominator is cancelled and
/// both are scaled so the denominator's leading coefficient is `1`. Full
/// multivariate gcd reduction is deliberately avoided; equality is decided
/// by cross multiplication, which is exact and cheap at the sizes this
/// engine works with.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Builds `num / den`, normalizing. Fails if `den` is the zero
    /// polynomial.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: Polynomial, mut den: Polynomial) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFunction { num, den: Polynomial::one() };
        }
        let content = num.monomial_content().gcd(&den.monomial_content());
        if !content.is_one() {
            num = num.div_monomial(&content);
            den = den.div_monomial(&content);
        }
        let lead = den.leading_coefficient().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn zero() -> Self {
        Polynomial::zero().into()
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn from_integer(n: i64) -> Self {
        Polynomial::from_integer(n).into()
    }

    pub fn variable(name: &str) -> Self {
        Polynomial::variable(name).into()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is `1` after normalization.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    /// Union of the variables of numerator and denominator.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    pub fn recip(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn divide(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Integer power; negative exponents invert, so the base must be nonzero
    /// for them.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut out = RationalFunction::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Partial derivative by the quotient rule. Total in `var`: names that
    /// occur nowhere differentiate to zero.
    pub fn partial(&self, var: &str) -> Self {
        if self.den.is_one() {
            return self.num.partial(var).into();
        }
        let n = &(&self.num.partial(var) * &self.den) - &(&self.num * &self.den.partial(var));
        Self::normalized(n, &self.den * &self.den)
    }

    /// [`partial`](Self::partial) restricted to an ambient variable list.
    pub fn partial_in(&self, vars: &Variables, var: &str) -> Result<Self> {
        if vars.position(var).is_none() {
            return Err(Error::UnknownVariable(var.to_string()));
        }
        Ok(self.partial(var))
    }

    /// Evaluates numerator and denominator separately at a rational point.
    /// A vanishing denominator is reported as a pole even when the reduced
    /// function would extend continuously.
    pub fn eval(&self, point: &BTreeMap<String, BigRational>) -> Result<BigRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint(format!(
                "denominator {} vanishes at the evaluation point",
                self.den
            )));
        }
        Ok(self.num.eval(point)? / d)
    }

    /// Substitutes rational functions for every variable. Fails if the
    /// substituted denominator collapses to the zero function.
    pub fn compose(&self, subs: &BTreeMap<String, RationalFunction>) -> Result<Self> {
        let num = compose_polynomial(&self.num, subs)?;
        let den = compose_polynomial(&self.den, subs)?;
        if den.is_zero() {
            return Err(Error::PoleAtPoint(format!(
                "denominator {} vanishes identically under the substitution",
                self.den
            )));
        }
        num.divide(&den)
    }
}

/// Polynomial composition with rational-function values.
fn compose_polynomial(
    p: &Polynomial,
    subs: &BTreeMap<String, RationalFunction>,
) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero();
    for (m, c) in p.terms() {
        let mut term = RationalFunction::constant(c.clone());
        for (name, e) in m.iter() {
            let v = subs
                .get(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            term = &term * &v.pow(e as i64)?;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

impl From<Polynomial> for RationalFunction {
    fn from(num: Polynomial) -> Self {
        RationalFunction { num, den: Polynomial::one() }
    }
}

impl PartialEq for RationalFunction {
    /// Cross multiplication: `a/b == c/d` iff `a*d == c*b`.
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl Add for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &-rhs
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.term_count() > 1 || denominator_needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

/// A one-term denominator still needs parentheses when it is a product of
/// several variables, since `1/x*y` parses as `(1/x)*y`.
fn denominator_needs_parens(den: &Polynomial) -> bool {
    match den.terms().next() {
        Some((m, c)) => !c.is_one() || m.variable_count() > 1,
        None => false,
    }
}

/// Convenience sign inspection used by the renderers: `Some(true)` when the
/// numerator is a single term with a negative coefficient.
pub(crate) fn leading_is_negative(rf: &RationalFunction) -> bool {
    rf.numerator().term_count() == 1
        && rf
            .numerator()
            .terms()
            .next()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
}
