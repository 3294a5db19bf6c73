//! Cyclic-quotient germs and their text format.
//!
//! ```text
//! quotient 1/2(1,1,1,0);
//! eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;
//! ```

use std::fmt;

use num_traits::One;

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::poly::{format_monomial, Polynomial};

/// A hypersurface in `C^4/μ_n` or a complete intersection of two equations in `C^5/μ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGerm {
    pub n: i64,
    pub action: Vec<i64>,
    pub equations: Vec<Polynomial>,
}

impl QuotientGerm {
    pub fn new(n: i64, action: Vec<i64>, equations: Vec<Polynomial>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidGerm(format!("group order must be positive, got {n}")));
        }
        let dim = action.len();
        if dim != 4 && dim != 5 {
            return Err(Error::InvalidGerm(format!("ambient dimension must be 4 or 5, got {dim}")));
        }
        if equations.len() + 3 != dim {
            return Err(Error::InvalidGerm(format!(
                "{dim} coordinates need {} equations, got {}",
                dim - 3,
                equations.len()
            )));
        }
        let action: Vec<i64> = action.iter().map(|w| w.rem_euclid(n)).collect();
        let germ = QuotientGerm { n, action, equations };
        for (k, eq) in germ.equations.iter().enumerate() {
            if eq.nvars() != dim {
                return Err(Error::InvalidGerm(format!("equation {} uses {} variables", k + 1, eq.nvars())));
            }
            if eq.is_zero() {
                return Err(Error::InvalidGerm(format!("equation {} is zero", k + 1)));
            }
            let mut terms = eq.terms().rev();
            let (first, _) = terms.next().expect("nonzero");
            let expected = germ.character(first);
            for (e, _) in terms {
                let found = germ.character(e);
                if found != expected {
                    return Err(Error::SemiInvariance {
                        equation: k + 1,
                        monomial: format_monomial(e),
                        found,
                        expected,
                        n,
                    });
                }
            }
        }
        Ok(germ)
    }

    pub fn dim(&self) -> usize {
        self.action.len()
    }

    /// Weight of a monomial under the group action, in `[0, n)`.
    pub fn character(&self, exponents: &[u32]) -> i64 {
        exponents
            .iter()
            .zip(&self.action)
            .map(|(&k, &w)| k as i64 * w)
            .sum::<i64>()
            .rem_euclid(self.n)
    }

    pub fn equation_character(&self, k: usize) -> i64 {
        let (e, _) = self.equations[k].terms().next().expect("nonzero equation");
        self.character(e)
    }
}

impl fmt::Display for QuotientGerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let action: Vec<String> = self.action.iter().map(|w| w.to_string()).collect();
        writeln!(f, "quotient 1/{}({});", self.n, action.join(","))?;
        for eq in &self.equations {
            writeln!(f, "eq {eq};")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = if c.is_ascii_alphabetic() {
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            } else if c.is_ascii_digit() {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                Tok::Num(chars[start..i].iter().collect())
            } else if "+-*/^(),;".contains(c) {
                i += 1;
                Tok::Sym(c)
            } else {
                return Err(syntax(ln + 1, column, format!("unexpected character {c:?}")));
            };
            out.push(Token { tok, line: ln + 1, column });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let lines: Vec<&str> = text.lines().collect();
        let end = (lines.len().max(1), lines.last().map_or(0, |l| l.chars().count()) + 1);
        Ok(Parser { tokens, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens.get(self.pos).map_or(self.end, |t| (t.line, t.column))
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.here();
        syntax(line, column, message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        let negative = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                let value: i64 = s.parse().map_err(|_| self.error("integer too large"))?;
                self.pos += 1;
                Ok(if negative { -value } else { value })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn quotient(&mut self) -> Result<(i64, Vec<i64>)> {
        let one = self.integer()?;
        if one != 1 {
            return Err(self.error("group must be written as 1/n(...)"));
        }
        self.expect('/')?;
        let n = self.integer()?;
        if n < 1 {
            return Err(self.error("group order must be positive"));
        }
        self.expect('(')?;
        let mut action = vec![self.integer()?];
        while self.eat(',') {
            action.push(self.integer()?);
        }
        self.expect(')')?;
        Ok((n, action))
    }

    fn polynomial(&mut self, nvars: usize) -> Result<Polynomial> {
        let mut poly = Polynomial::zero(nvars);
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let (exps, mut coef) = self.term(nvars)?;
            if negative {
                coef = -coef;
            }
            poly.add_term(exps, coef);
            match self.peek() {
                Some(Tok::Sym('+')) | Some(Tok::Sym('-')) => continue,
                _ => break,
            }
        }
        Ok(poly)
    }

    fn term(&mut self, nvars: usize) -> Result<(Vec<u32>, Rational)> {
        let mut exps = vec![0u32; nvars];
        let mut coef = Rational::one();
        loop {
            let (line, column) = self.here();
            match self.next() {
                Some(Tok::Num(s)) => {
                    let mut text = s;
                    if self.eat('/') {
                        match self.next() {
                            Some(Tok::Num(d)) => text = format!("{text}/{d}"),
                            _ => return Err(syntax(line, column, "expected a denominator")),
                        }
                    }
                    let q = parse_rational(&text).map_err(|_| syntax(line, column, "bad coefficient"))?;
                    coef *= q;
                }
                Some(Tok::Ident(name)) => {
                    let index = name
                        .strip_prefix('x')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| syntax(line, column, format!("unknown variable {name:?}")))?;
                    if index > nvars {
                        return Err(syntax(
                            line,
                            column,
                            format!("variable x{index} exceeds the {nvars} ambient coordinates"),
                        ));
                    }
                    let mut power = 1u32;
                    if self.eat('^') {
                        let (l, c) = self.here();
                        match self.next() {
                            Some(Tok::Num(k)) => {
                                power = k.parse().map_err(|_| syntax(l, c, "exponent too large"))?;
                            }
                            _ => return Err(syntax(l, c, "expected an exponent")),
                        }
                    }
                    exps[index - 1] += power;
                }
                _ => return Err(syntax(line, column, "expected a coefficient or a variable")),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((exps, coef))
    }
}

pub fn parse_germ(text: &str) -> Result<QuotientGerm> {
    let mut p = Parser::new(text)?;
    let mut header: Option<(i64, Vec<i64>)> = None;
    let mut equations = Vec::new();
    while p.peek().is_some() {
        if p.eat(';') {
            continue;
        }
        match p.next() {
            Some(Tok::Ident(kw)) if kw == "quotient" => {
                if header.is_some() {
                    p.pos -= 1;
                    return Err(p.error("duplicate `quotient` statement"));
                }
                header = Some(p.quotient()?);
            }
            Some(Tok::Ident(kw)) if kw == "eq" => {
                let nvars = match &header {
                    Some((_, action)) => action.len(),
                    None => {
                        p.pos -= 1;
                        return Err(p.error("`quotient` must precede `eq`"));
                    }
                };
                equations.push(p.polynomial(nvars)?);
            }
            _ => {
                p.pos -= 1;
                return Err(p.error("expected `quotient` or `eq`"));
            }
        }
        if p.peek().is_some() {
            p.expect(';')?;
        }
    }
    let (n, action) = header.ok_or_else(|| p.error("missing `quotient` statement"))?;
    QuotientGerm::new(n, action, equations)
}

pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial> {
    let mut p = Parser::new(text)?;
    let poly = p.polynomial(nvars)?;
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

/// Comma-separated rationals such as `7/2,5/2,3/2,1`.
pub fn parse_weights(text: &str) -> Result<Vec<Rational>> {
    let weights: Result<Vec<Rational>> = text.split(',').map(parse_rational).collect();
    let weights = weights?;
    if weights.is_empty() {
        return Err(Error::Domain("empty weight vector".into()));
    }
    Ok(weights)
}

/// Integer exponent vector of a monomial such as `x2*x3^3`.
pub fn parse_monomial(text: &str, nvars: usize) -> Result<Vec<u32>> {
    let poly = parse_polynomial(text, nvars)?;
    let mut terms = poly.terms();
    match (terms.next(), terms.next()) {
        (Some((e, c)), None) if c.is_one() => Ok(e.clone()),
        _ => Err(Error::Domain(format!("{text:?} is not a single monomial"))),
    }
}
