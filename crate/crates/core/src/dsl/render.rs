//! Canonical rendering of documents and forms.
//!
//! Output is deterministic: terms in multi-index order, coefficients
//! normalized, fixed spacing. Unit coefficients are omitted (`dx`, `-dx`),
//! and a coefficient whose numerator has several terms is parenthesized so
//! the result reparses term by term. Parsing a rendered document yields the
//! original values.

use std::fmt;

use crate::algebra::{leading_is_negative, RationalFunction};
use crate::forms::{Commutator, DifferentialForm, MultiIndex, Variables};

use super::{Declaration, Document};

/// Renders a whole document, one declaration per line.
pub fn render_document(doc: &Document) -> String {
    let mut out = String::new();
    for decl in doc.declarations() {
        out.push_str(&render_declaration(decl));
        out.push('\n');
    }
    out
}

fn render_declaration(decl: &Declaration) -> String {
    match decl {
        Declaration::Variables(vars) => format!("vars({vars});"),
        Declaration::Form { name, form } => render_form(name, form),
        Declaration::Map { name, map } => {
            let comps: Vec<String> =
                map.components().iter().map(|c| c.to_string()).collect();
            format!(
                "map {name} : ({}) -> ({});",
                map.source(),
                comps.join(", ")
            )
        }
        Declaration::Metric { name, metric, .. } => {
            let signs: Vec<&str> = metric
                .entries()
                .iter()
                .map(|s| if *s > 0 { "+1" } else { "-1" })
                .collect();
            format!("metric {name} = {};", signs.join(", "))
        }
        Declaration::Torsion { name, var, form } => {
            format!("torsion {name}[{var}] = {};", sum_string(form))
        }
    }
}

/// `form name : degree = ...;` in canonical syntax.
pub fn render_form(name: &str, form: &DifferentialForm) -> String {
    format!("form {} : {} = {};", name, form.degree(), sum_string(form))
}

/// The right-hand side of a form declaration.
fn sum_string(form: &DifferentialForm) -> String {
    if form.is_zero() {
        return "0".to_string();
    }
    if form.degree() == 0 {
        // A scalar renders as plain arithmetic; the expression grammar
        // accepts sums directly.
        return form
            .scalar_value()
            .expect("degree checked above")
            .to_string();
    }
    let vars = form.variables();
    let mut out = String::new();
    for (i, (idx, coeff)) in form.terms().enumerate() {
        let negative = leading_is_negative(coeff);
        let magnitude = if negative { -coeff } else { coeff.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if !magnitude.is_one() {
            out.push_str(&coefficient_string(&magnitude));
            out.push(' ');
        }
        out.push_str(&basis_string(idx, vars));
    }
    out
}

/// A coefficient in term position: parenthesized exactly when its display
/// form is a top-level sum.
fn coefficient_string(coeff: &RationalFunction) -> String {
    if coeff.denominator().is_one() && coeff.numerator().term_count() > 1 {
        format!("({coeff})")
    } else {
        coeff.to_string()
    }
}

fn basis_string(idx: &MultiIndex, vars: &Variables) -> String {
    let parts: Vec<String> = idx.iter().map(|i| format!("d{}", vars.name(i))).collect();
    parts.join("^")
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&sum_string(self))
    }
}

impl fmt::Display for Commutator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let vars = self.variables();
        let mut first = true;
        for (i, j, entry) in self.upper_entries() {
            if entry.is_zero() {
                continue;
            }
            if !first {
                f.write_str("; ")?;
            }
            write!(f, "K[{}, {}] = {}", vars.name(i), vars.name(j), entry)?;
            first = false;
        }
        Ok(())
    }
}
