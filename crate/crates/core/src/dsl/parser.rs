//! Recursive-descent parser for `.form` documents.
//!
//! Declarations are parsed in order against the innermost `vars(...)`
//! scope. Coefficient arithmetic uses precedence climbing; the sum level of
//! a form is handled separately from coefficient sums so that adjacency
//! (`x dy`) binds a coefficient to its basis without an implicit `*`. A
//! multi-term coefficient therefore needs parentheses, which is also how
//! the canonical renderer emits one.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::ToPrimitive;

use super::lexer::{lex, Tok, Token};
use super::{Declaration, Document, ParseError, Parsed, Warning};
use crate::algebra::RationalFunction;
use crate::error::Error;
use crate::forms::{DifferentialForm, ParamMap, Variables};
use crate::metric::DiagonalMetric;

/// Largest accepted `**` exponent magnitude; keeps a typo from allocating
/// an enormous polynomial.
const MAX_EXPONENT: i64 = 1000;

/// Parses a `.form` document. Errors carry the line and column where the
/// parse stopped; warnings (for terms that collapse to zero) accumulate.
pub fn parse(input: &str) -> Result<Parsed, ParseError> {
    let tokens = lex(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        active: None,
        names: BTreeSet::new(),
        torsion_families: BTreeMap::new(),
        warnings: Vec::new(),
    };
    let document = parser.document()?;
    Ok(Parsed { document, warnings: parser.warnings })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    active: Option<Variables>,
    /// Declaration names already taken (forms, maps, metrics, torsion
    /// families share one namespace).
    names: BTreeSet<String>,
    /// For each torsion family: its variable space and the entries seen.
    torsion_families: BTreeMap<String, (Variables, BTreeSet<String>)>,
    warnings: Vec<Warning>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, context: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.advance())
        } else {
            let t = self.peek();
            Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected {} {}, found {}", tok.describe(), context, t.tok.describe()),
            ))
        }
    }

    fn expect_ident(&mut self, context: &str) -> Result<(String, u32, u32), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.advance();
                Ok((name, t.line, t.col))
            }
            other => Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected a name {}, found {}", context, other.describe()),
            )),
        }
    }

    fn active_vars(&self, line: u32, col: u32, what: &str) -> Result<Variables, ParseError> {
        self.active.clone().ok_or_else(|| {
            ParseError::semantic(
                line,
                col,
                Error::Parameter(format!(
                    "a {what} declaration needs a preceding vars(...) list"
                )),
            )
        })
    }

    fn claim_name(&mut self, name: &str, line: u32, col: u32) -> Result<(), ParseError> {
        if !self.names.insert(name.to_string()) {
            return Err(ParseError::semantic(
                line,
                col,
                Error::DuplicateVariable(name.to_string()),
            ));
        }
        Ok(())
    }

    fn document(&mut self) -> Result<Document, ParseError> {
        let mut doc = Document::default();
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(doc),
                Tok::Ident(kw) => match kw.as_str() {
                    "vars" => doc.push(self.vars_decl()?),
                    "form" => doc.push(self.form_decl()?),
                    "map" => doc.push(self.map_decl()?),
                    "metric" => doc.push(self.metric_decl()?),
                    "torsion" => doc.push(self.torsion_decl()?),
                    other => {
                        return Err(ParseError::syntax(
                            t.line,
                            t.col,
                            format!(
                                "expected a declaration (vars, form, map, metric, torsion), \
                                 found `{other}`"
                            ),
                        ))
                    }
                },
                other => {
                    return Err(ParseError::syntax(
                        t.line,
                        t.col,
                        format!("expected a declaration, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    /// `vars ( x , y , ... ) ;`
    fn vars_decl(&mut self) -> Result<Declaration, ParseError> {
        self.advance(); // vars
        self.expect(Tok::LParen, "after `vars`")?;
        let names = self.ident_list("inside `vars(...)`")?;
        self.expect(Tok::RParen, "to close the variable list")?;
        self.expect(Tok::Semi, "after the variable list")?;
        let vars = validate_variable_names(&names)?;
        self.active = Some(vars.clone());
        Ok(Declaration::Variables(vars))
    }

    /// Comma-separated identifiers with positions; at least one.
    fn ident_list(&mut self, context: &str) -> Result<Vec<(String, u32, u32)>, ParseError> {
        let mut names = vec![self.expect_ident(context)?];
        while self.eat(&Tok::Comma) {
            names.push(self.expect_ident(context)?);
        }
        Ok(names)
    }

    /// `form name : degree = sum ;`
    fn form_decl(&mut self) -> Result<Declaration, ParseError> {
        let kw = self.advance(); // form
        let (name, nline, ncol) = self.expect_ident("after `form`")?;
        let vars = self.active_vars(kw.line, kw.col, "form")?;
        self.claim_name(&name, nline, ncol)?;
        self.expect(Tok::Colon, "after the form name")?;
        let degree = self.degree_literal()?;
        self.expect(Tok::Equals, "before the form expression")?;
        let form = self.sum(&vars, degree)?;
        self.expect(Tok::Semi, "to end the form declaration")?;
        Ok(Declaration::Form { name, form })
    }

    fn degree_literal(&mut self) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(ref n) => {
                self.advance();
                match n.to_usize() {
                    Some(d) if d <= 64 => Ok(d),
                    _ => Err(ParseError::semantic(
                        t.line,
                        t.col,
                        Error::Degree(format!("unsupported form degree {n}")),
                    )),
                }
            }
            other => Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected a degree literal, found {}", other.describe()),
            )),
        }
    }

    /// A sum of terms over `vars` whose basis lengths must equal `degree`.
    fn sum(&mut self, vars: &Variables, degree: usize) -> Result<DifferentialForm, ParseError> {
        let mut terms: Vec<(Vec<usize>, RationalFunction)> = Vec::new();
        let mut negate = match self.peek().tok {
            Tok::Minus => {
                self.advance();
                true
            }
            Tok::Plus => {
                self.advance();
                false
            }
            _ => false,
        };
        loop {
            if let Some((indices, coeff)) = self.term(vars, degree, negate)? {
                terms.push((indices, coeff));
            }
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    negate = false;
                }
                Tok::Minus => {
                    self.advance();
                    negate = true;
                }
                _ => break,
            }
        }
        DifferentialForm::from_terms(vars.clone(), degree, terms).map_err(|e| {
            let t = self.peek();
            ParseError::semantic(t.line, t.col, e)
        })
    }

    /// One term: optional coefficient followed by an optional basis chain,
    /// at least one of the two. Returns `None` for terms that vanish.
    #[allow(clippy::type_complexity)]
    fn term(
        &mut self,
        vars: &Variables,
        degree: usize,
        negate: bool,
    ) -> Result<Option<(Vec<usize>, RationalFunction)>, ParseError> {
        let start = self.peek().clone();
        let coeff = if self.starts_coefficient(vars) {
            Some(self.product(vars)?)
        } else {
            None
        };

        let basis = if self.peek_differential(vars).is_some() {
            Some(self.basis_chain(vars)?)
        } else {
            if coeff.is_some() {
                // Nothing multiplies by adjacency: a factor-like token
                // right after a coefficient is a missing `*` (or a typo in
                // a differential name).
                let next = self.peek();
                if matches!(next.tok, Tok::Int(_) | Tok::LParen | Tok::Ident(_)) {
                    return Err(ParseError::syntax(
                        next.line,
                        next.col,
                        format!(
                            "expected `*` before {}, or a differential to end the term",
                            next.tok.describe()
                        ),
                    ));
                }
            }
            None
        };

        let mut coeff = match (coeff, &basis) {
            (Some(c), _) => c,
            (None, Some(_)) => RationalFunction::one(),
            (None, None) => {
                return Err(ParseError::syntax(
                    start.line,
                    start.col,
                    format!(
                        "expected a term (coefficient or differential), found {}",
                        start.tok.describe()
                    ),
                ))
            }
        };
        if negate {
            coeff = -&coeff;
        }

        match basis {
            Some((raw_indices, bline, bcol)) => {
                if raw_indices.len() != degree {
                    return Err(ParseError::semantic(
                        bline,
                        bcol,
                        Error::Degree(format!(
                            "term of degree {} in a form declared with degree {}",
                            raw_indices.len(),
                            degree
                        )),
                    ));
                }
                let mut seen = BTreeSet::new();
                if raw_indices.iter().any(|i| !seen.insert(*i)) {
                    self.warnings.push(Warning {
                        line: bline,
                        col: bcol,
                        message: "repeated differential annihilates the term".to_string(),
                    });
                    return Ok(None);
                }
                Ok(Some((raw_indices, coeff)))
            }
            None => {
                if coeff.is_zero() {
                    return Ok(None);
                }
                if degree != 0 {
                    return Err(ParseError::semantic(
                        start.line,
                        start.col,
                        Error::Degree(format!(
                            "scalar term in a form declared with degree {degree}"
                        )),
                    ));
                }
                Ok(Some((Vec::new(), coeff)))
            }
        }
    }

    /// Whether the next token can begin a coefficient in term context.
    fn starts_coefficient(&self, vars: &Variables) -> bool {
        match &self.peek().tok {
            Tok::Int(_) | Tok::LParen | Tok::Minus => true,
            Tok::Ident(_) => self.peek_differential(vars).is_none(),
            _ => false,
        }
    }

    /// When the next token is a differential of a declared variable,
    /// returns that variable's index. Declared variables win over the
    /// differential reading; the declaration rules make both impossible.
    fn peek_differential(&self, vars: &Variables) -> Option<usize> {
        match &self.peek().tok {
            Tok::Ident(name) => differential_index(name, vars),
            _ => None,
        }
    }

    /// `d<x> ( ^ d<y> )*`, returning raw indices in written order.
    #[allow(clippy::type_complexity)]
    fn basis_chain(
        &mut self,
        vars: &Variables,
    ) -> Result<(Vec<usize>, u32, u32), ParseError> {
        let first = self.peek().clone();
        let mut indices = vec![self.differential(vars)?];
        while self.eat(&Tok::Caret) {
            indices.push(self.differential(vars)?);
        }
        Ok((indices, first.line, first.col))
    }

    fn differential(&mut self, vars: &Variables) -> Result<usize, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(name) => match differential_index(name, vars) {
                Some(i) => {
                    self.advance();
                    Ok(i)
                }
                None => Err(ParseError::syntax(
                    t.line,
                    t.col,
                    format!("expected a differential of a declared variable, found `{name}`"),
                )),
            },
            other => Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected a differential, found {}", other.describe()),
            )),
        }
    }

    /// Coefficient arithmetic at term level: `* / **` bind, but `+`/`-`
    /// belong to the enclosing sum. Parenthesized subexpressions get the
    /// full grammar.
    fn product(&mut self, scope: &Variables) -> Result<RationalFunction, ParseError> {
        let mut acc = self.power(scope)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.advance();
                    let rhs = self.power(scope)?;
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    let op = self.advance();
                    let rhs = self.power(scope)?;
                    acc = acc
                        .divide(&rhs)
                        .map_err(|e| ParseError::semantic(op.line, op.col, e))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self, scope: &Variables) -> Result<RationalFunction, ParseError> {
        let base = self.primary(scope)?;
        if self.peek().tok != Tok::StarStar {
            return Ok(base);
        }
        let op = self.advance();
        let negative = self.eat(&Tok::Minus);
        let t = self.peek().clone();
        let Tok::Int(ref magnitude) = t.tok else {
            return Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected an integer exponent, found {}", t.tok.describe()),
            ));
        };
        self.advance();
        let Some(mut e) = magnitude.to_i64().filter(|e| *e <= MAX_EXPONENT) else {
            return Err(ParseError::semantic(
                t.line,
                t.col,
                Error::Parameter(format!(
                    "exponent {magnitude} exceeds the supported bound {MAX_EXPONENT}"
                )),
            ));
        };
        if negative {
            e = -e;
        }
        base.pow(e)
            .map_err(|err| ParseError::semantic(op.line, op.col, err))
    }

    fn primary(&mut self, scope: &Variables) -> Result<RationalFunction, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.advance();
                Ok(RationalFunction::constant(num_rational::BigRational::from_integer(
                    n.clone(),
                )))
            }
            Tok::Ident(name) => {
                if scope.contains(name) {
                    self.advance();
                    Ok(RationalFunction::variable(name))
                } else if differential_index(name, scope).is_some() {
                    Err(ParseError::syntax(
                        t.line,
                        t.col,
                        format!(
                            "differential `{name}` cannot appear inside a coefficient; \
                             write the coefficient before the differential"
                        ),
                    ))
                } else {
                    Err(ParseError::semantic(
                        t.line,
                        t.col,
                        Error::UnknownVariable(name.clone()),
                    ))
                }
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr(scope)?;
                self.expect(Tok::RParen, "to close the parenthesized expression")?;
                Ok(inner)
            }
            Tok::Minus => {
                self.advance();
                let inner = self.power(scope)?;
                Ok(-&inner)
            }
            other => Err(ParseError::syntax(
                t.line,
                t.col,
                format!("expected a coefficient, found {}", other.describe()),
            )),
        }
    }

    /// Full expression grammar, used inside parentheses and in map
    /// components: sums of products.
    fn expr(&mut self, scope: &Variables) -> Result<RationalFunction, ParseError> {
        let mut acc = match self.peek().tok {
            Tok::Minus => {
                self.advance();
                -&self.product(scope)?
            }
            Tok::Plus => {
                self.advance();
                self.product(scope)?
            }
            _ => self.product(scope)?,
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.advance();
                    let rhs = self.product(scope)?;
                    acc = &acc + &rhs;
                }
                Tok::Minus => {
                    self.advance();
                    let rhs = self.product(scope)?;
                    acc = &acc - &rhs;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// `map name : ( s , ... ) -> ( expr , ... ) ;`
    fn map_decl(&mut self) -> Result<Declaration, ParseError> {
        let kw = self.advance(); // map
        let (name, nline, ncol) = self.expect_ident("after `map`")?;
        let target = self.active_vars(kw.line, kw.col, "map")?;
        self.claim_name(&name, nline, ncol)?;
        self.expect(Tok::Colon, "after the map name")?;
        self.expect(Tok::LParen, "to open the source variables")?;
        let source_names = self.ident_list("among the source variables")?;
        self.expect(Tok::RParen, "to close the source variables")?;
        let source = validate_variable_names(&source_names)?;
        self.expect(Tok::Arrow, "between source and components")?;
        let open = self.expect(Tok::LParen, "to open the components")?;
        let mut components = vec![self.expr(&source)?];
        while self.eat(&Tok::Comma) {
            components.push(self.expr(&source)?);
        }
        self.expect(Tok::RParen, "to close the components")?;
        self.expect(Tok::Semi, "to end the map declaration")?;
        if components.len() != target.len() {
            return Err(ParseError::semantic(
                open.line,
                open.col,
                Error::Arity { expected: target.len(), found: components.len() },
            ));
        }
        let map = ParamMap::new(source, components)
            .map_err(|e| ParseError::semantic(open.line, open.col, e))?;
        Ok(Declaration::Map { name, map })
    }

    /// `metric name = +1 , -1 , ... ;`
    fn metric_decl(&mut self) -> Result<Declaration, ParseError> {
        let kw = self.advance(); // metric
        let (name, nline, ncol) = self.expect_ident("after `metric`")?;
        let vars = self.active_vars(kw.line, kw.col, "metric")?;
        self.claim_name(&name, nline, ncol)?;
        let eq = self.expect(Tok::Equals, "after the metric name")?;
        let mut signs = vec![self.metric_entry()?];
        while self.eat(&Tok::Comma) {
            signs.push(self.metric_entry()?);
        }
        self.expect(Tok::Semi, "to end the metric declaration")?;
        if signs.len() != vars.len() {
            return Err(ParseError::semantic(
                eq.line,
                eq.col,
                Error::VariableMismatch(format!(
                    "{} metric entries over {} variables ({})",
                    signs.len(),
                    vars.len(),
                    vars
                )),
            ));
        }
        let metric = DiagonalMetric::new(signs)
            .map_err(|e| ParseError::semantic(eq.line, eq.col, e))?;
        Ok(Declaration::Metric { name, metric, variables: vars })
    }

    /// One `+1` or `-1`.
    fn metric_entry(&mut self) -> Result<i8, ParseError> {
        let t = self.peek().clone();
        let sign = match t.tok {
            Tok::Plus => 1,
            Tok::Minus => -1,
            ref other => {
                return Err(ParseError::syntax(
                    t.line,
                    t.col,
                    format!("expected a signed metric entry, found {}", other.describe()),
                ))
            }
        };
        self.advance();
        let u = self.peek().clone();
        match u.tok {
            Tok::Int(ref n) if *n == 1u32.into() => {
                self.advance();
                Ok(sign)
            }
            ref other => Err(ParseError::syntax(
                u.line,
                u.col,
                format!("metric entries are +1 or -1, found {}", other.describe()),
            )),
        }
    }

    /// `torsion family [ var ] = sum ;` where the sum is a 2-form.
    fn torsion_decl(&mut self) -> Result<Declaration, ParseError> {
        let kw = self.advance(); // torsion
        let (name, nline, ncol) = self.expect_ident("after `torsion`")?;
        let vars = self.active_vars(kw.line, kw.col, "torsion")?;
        self.expect(Tok::LBracket, "after the torsion name")?;
        let (var, vline, vcol) = self.expect_ident("inside the torsion brackets")?;
        self.expect(Tok::RBracket, "after the torsion variable")?;
        if !vars.contains(&var) {
            return Err(ParseError::semantic(
                vline,
                vcol,
                Error::UnknownVariable(var.clone()),
            ));
        }
        match self.torsion_families.get_mut(&name) {
            None => {
                // First entry claims the family name in the namespace.
                if !self.names.insert(name.clone()) {
                    return Err(ParseError::semantic(
                        nline,
                        ncol,
                        Error::DuplicateVariable(name.clone()),
                    ));
                }
                self.torsion_families
                    .insert(name.clone(), (vars.clone(), BTreeSet::from([var.clone()])));
            }
            Some((family_vars, entries)) => {
                if family_vars != &vars {
                    return Err(ParseError::semantic(
                        nline,
                        ncol,
                        Error::VariableMismatch(format!(
                            "torsion family `{name}` spans ({family_vars}), \
                             not the active variables ({vars})"
                        )),
                    ));
                }
                if !entries.insert(var.clone()) {
                    return Err(ParseError::semantic(
                        vline,
                        vcol,
                        Error::DuplicateVariable(format!("{name}[{var}]")),
                    ));
                }
            }
        }
        self.expect(Tok::Equals, "before the torsion expression")?;
        let form = self.sum(&vars, 2)?;
        self.expect(Tok::Semi, "to end the torsion declaration")?;
        Ok(Declaration::Torsion { name, var, form })
    }
}

/// `dX` reads as the differential of declared variable `X` unless `dX` is
/// itself declared.
fn differential_index(ident: &str, vars: &Variables) -> Option<usize> {
    if vars.contains(ident) {
        return None;
    }
    let suffix = ident.strip_prefix('d')?;
    vars.position(suffix)
}

/// Builds a variable list, rejecting duplicates and names that collide
/// with differentials of their siblings (`vars(y, dy)` would make `dy`
/// unreadable).
fn validate_variable_names(
    names: &[(String, u32, u32)],
) -> Result<Variables, ParseError> {
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for (name, line, col) in names {
        if !seen.insert(name) {
            return Err(ParseError::semantic(
                *line,
                *col,
                Error::DuplicateVariable(name.clone()),
            ));
        }
    }
    for (name, line, col) in names {
        if let Some(suffix) = name.strip_prefix('d') {
            if seen.contains(suffix) {
                return Err(ParseError::semantic(
                    *line,
                    *col,
                    Error::Parameter(format!(
                        "variable `{name}` is ambiguous with the differential of `{suffix}`"
                    )),
                ));
            }
        }
    }
    Variables::new(names.iter().map(|(n, _, _)| n.clone()).collect())
        .map_err(|e| ParseError::semantic(names[0].1, names[0].2, e))
}
