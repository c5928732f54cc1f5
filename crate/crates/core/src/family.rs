//! Rule-based infinite path graphs over `X = {1, 2, ...}` and their finite
//! truncations.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Boundary condition applied where a truncation cuts the infinite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TruncationFlavor {
    /// Crossing edges are folded into the potential (killing at removed vertices).
    Dirichlet,
    /// Crossing edges are dropped.
    Neumann,
}

impl TruncationFlavor {
    pub const BOTH: [TruncationFlavor; 2] = [TruncationFlavor::Dirichlet, TruncationFlavor::Neumann];

    pub fn name(self) -> &'static str {
        match self {
            TruncationFlavor::Dirichlet => "dirichlet",
            TruncationFlavor::Neumann => "neumann",
        }
    }
}

impl fmt::Display for TruncationFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TruncationFlavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(TruncationFlavor::Dirichlet),
            "neumann" | "n" => Ok(TruncationFlavor::Neumann),
            other => Err(format!("unknown flavor '{other}' (expected dirichlet or neumann)")),
        }
    }
}

/// One term `coeff * n^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub exponent: f64,
}

impl Monomial {
    pub fn eval(&self, n: usize) -> f64 {
        let x = n as f64;
        let e = self.exponent;
        if e == 0.0 {
            self.coeff
        } else if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
            self.coeff * x.powi(e as i32)
        } else {
            self.coeff * x.powf(e)
        }
    }
}

/// Closed-form rule `n ↦ Σ a_i n^{k_i}` over the positive integers.
///
/// Parsed from the grammar `term (('+' | '-') term)*` where a term is a
/// number, `n`, `n^k`, or `a*n^k`. Exponents may be negative or fractional.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    terms: Vec<Monomial>,
}

impl ClosedForm {
    pub fn new(terms: Vec<Monomial>) -> Self {
        Self { terms }
    }

    pub fn constant(value: f64) -> Self {
        Self::monomial(value, 0.0)
    }

    pub fn monomial(coeff: f64, exponent: f64) -> Self {
        Self {
            terms: vec![Monomial { coeff, exponent }],
        }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval(&self, n: usize) -> f64 {
        match self.terms.as_slice() {
            [] => 0.0,
            [t] => t.eval(n),
            ts => ts.iter().map(|t| t.eval(n)).sum(),
        }
    }

    /// Values at `n = 1..=len`.
    pub fn sample(&self, len: usize) -> Vec<f64> {
        (1..=len).map(|n| self.eval(n)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    /// `Some(term)` if the rule is a single monomial.
    pub fn as_monomial(&self) -> Option<Monomial> {
        let nonzero: Vec<_> = self.terms.iter().filter(|t| t.coeff != 0.0).collect();
        match nonzero.as_slice() {
            [t] => Some(**t),
            _ => None,
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        Parser::new(src).parse()
    }
}

impl std::str::FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let coeff = if i == 0 {
                t.coeff
            } else if t.coeff < 0.0 {
                f.write_str(" - ")?;
                -t.coeff
            } else {
                f.write_str(" + ")?;
                t.coeff
            };
            if t.exponent == 0.0 {
                write!(f, "{coeff}")?;
            } else {
                write!(f, "{coeff}*n^{}", t.exponent)?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Expression {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn parse(mut self) -> Result<ClosedForm> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') {
            -1.0
        } else {
            self.eat(b'+');
            1.0
        };
        loop {
            let mut term = self.term()?;
            term.coeff *= sign;
            terms.push(term);
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1.0;
                }
                Some(c) => return self.err(format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(ClosedForm { terms })
    }

    fn term(&mut self) -> Result<Monomial> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(Monomial {
                    coeff: 1.0,
                    exponent: self.exponent()?,
                })
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let coeff = self.number()?;
                if self.eat(b'*') {
                    if !self.eat(b'n') {
                        return self.err("expected 'n' after '*'");
                    }
                    Ok(Monomial {
                        coeff,
                        exponent: self.exponent()?,
                    })
                } else {
                    Ok(Monomial {
                        coeff,
                        exponent: 0.0,
                    })
                }
            }
            Some(c) => self.err(format!("expected a number or 'n', found '{}'", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }

    fn exponent(&mut self) -> Result<f64> {
        if !self.eat(b'^') {
            return Ok(1.0);
        }
        let paren = self.eat(b'(');
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let k = self.number()?;
        if paren && !self.eat(b')') {
            return self.err("expected ')'");
        }
        Ok(if negative { -k } else { k })
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                i = j;
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
            }
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = i;
                Ok(v)
            }
            Err(_) => self.err("expected a number"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `m(n) = n^-4`, `b(n, n+1) = n^2`, `c = 0`.
    PaperPath,
    Custom,
}

/// Infinite path graph on `{1, 2, ...}` given by closed-form rules.
/// `edge_rule(n)` is the weight `b(n, n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFamily {
    pub kind: FamilyKind,
    pub measure_rule: ClosedForm,
    pub edge_rule: ClosedForm,
    pub potential_rule: ClosedForm,
}

/// Bounds on the remainder `Σ_{n>N} c(n)/m(n)` of a closed-form series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TailEstimate {
    /// The remainder lies in `[lower, upper]`.
    Bounded { lower: f64, upper: f64 },
    /// The series diverges; its value is `+∞`.
    Divergent,
}

impl GraphFamily {
    pub fn paper_path() -> Self {
        Self {
            kind: FamilyKind::PaperPath,
            measure_rule: ClosedForm::monomial(1.0, -4.0),
            edge_rule: ClosedForm::monomial(1.0, 2.0),
            potential_rule: ClosedForm::constant(0.0),
        }
    }

    pub fn custom(measure_rule: ClosedForm, edge_rule: ClosedForm, potential_rule: ClosedForm) -> Self {
        Self {
            kind: FamilyKind::Custom,
            measure_rule,
            edge_rule,
            potential_rule,
        }
    }

    /// Finite section on vertices `1..=size` (labels are 1-based).
    pub fn truncate(&self, size: usize, flavor: TruncationFlavor) -> Result<Graph> {
        if size == 0 {
            return Err(Error::EmptySize);
        }
        let labels = (1..=size).map(|n| n.to_string()).collect();
        let mut graph = Graph::with_labels(labels, self.measure_rule.sample(size));
        for n in 1..size {
            graph.set_edge(n - 1, n, self.edge_rule.eval(n))?;
        }
        let mut potential = self.potential_rule.sample(size);
        if flavor == TruncationFlavor::Dirichlet {
            potential[size - 1] += self.edge_rule.eval(size);
        }
        graph.set_potential(potential)?;
        graph.ensure_valid()?;
        Ok(graph)
    }

    /// Remainder of `Σ_n c(n)/m(n)` past `size`, by integral comparison.
    /// Available when `m` is a monomial, so that `c/m` is a sum of monomials.
    pub fn tail_estimate(&self, potential: &ClosedForm, size: usize) -> Option<TailEstimate> {
        let m = self.measure_rule.as_monomial()?;
        let mut lower = 0.0;
        let mut upper = 0.0;
        for t in potential.terms().iter().filter(|t| t.coeff != 0.0) {
            let coeff = t.coeff / m.coeff;
            let p = t.exponent - m.exponent;
            if p >= -1.0 {
                return Some(TailEstimate::Divergent);
            }
            // Σ_{n>N} n^p lies in (∫_{N+1}^∞ x^p dx, ∫_N^∞ x^p dx) for p < -1
            let q = -(p + 1.0);
            let lo = ((size + 1) as f64).powf(-q) / q;
            let hi = (size as f64).powf(-q) / q;
            if coeff > 0.0 {
                lower += coeff * lo;
                upper += coeff * hi;
            } else {
                lower += coeff * hi;
                upper += coeff * lo;
            }
        }
        Some(TailEstimate::Bounded { lower, upper })
    }
}

/// Neumann truncation of [`GraphFamily::paper_path`]: vertices `1..=size`,
/// `m(n) = n^-4`, `b(n, n+1) = n^2`, `c = 0`.
pub fn generate_paper_path(size: usize) -> Result<Graph> {
    GraphFamily::paper_path().truncate(size, TruncationFlavor::Neumann)
}
