//! Text forms.
//!
//! Canonical monomials (used by the CLI and the cache):
//!
//! ```text
//! monomial := coeff " | " xis " | " taus
//! coeff    := "1" | cfactor ("*" cfactor)*      cfactor := cname "^" N, cname ∈ eps < rho < tau < theta
//! xis      := "1" | "xi" J "^" N (" " "xi" J "^" N)*   J increasing
//! taus     := "tau{" [J ("," J)*] "}"          J increasing
//! ```
//!
//! Expressions (used for input and for displaying elements):
//!
//! ```text
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ["^" N]
//! atom   := N | "tau" | "rho" | "eps" | "theta" | "xi" J | "tau" J | "(" expr ")"
//! ```
//!
//! Whitespace between tokens is ignored. `tau` alone is the coefficient
//! class; `tau0`, `tau1`, ... are the Milnor generators.

use std::fmt;
use std::str::FromStr;

use crate::element::{Algebra, Element};
use crate::error::{AlgebraError, Result};
use crate::monomial::{CoeffGen, CoeffMonomial, Monomial, SteenrodMonomial, TauSet};

const CANONICAL_ORDER: [CoeffGen; 4] = [CoeffGen::Eps, CoeffGen::Rho, CoeffGen::Tau, CoeffGen::Theta];

impl fmt::Display for CoeffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = CANONICAL_ORDER
            .iter()
            .filter(|g| self.exponent(**g) > 0)
            .map(|g| format!("{}^{}", g.name(), self.exponent(*g)))
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Display for SteenrodMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .xi
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| format!("xi{}^{}", i + 1, e))
            .collect();
        if parts.is_empty() {
            write!(f, "1 | tau{}", self.tau)
        } else {
            write!(f, "{} | tau{}", parts.join(" "), self.tau)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.coeff, self.steen)
    }
}

fn perr(pos: usize, msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse { pos, msg: msg.into() }
}

fn parse_num(s: &str, pos: usize) -> Result<u32> {
    s.trim().parse().map_err(|_| perr(pos, format!("expected a number, found `{s}`")))
}

impl FromStr for CoeffMonomial {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = CoeffMonomial::ONE;
        if s == "1" {
            return Ok(out);
        }
        let mut last: Option<usize> = None;
        for part in s.split('*') {
            let (name, e) = part.trim().split_once('^').ok_or_else(|| perr(0, format!("bad factor `{part}`")))?;
            let idx = CANONICAL_ORDER
                .iter()
                .position(|g| g.name() == name.trim())
                .ok_or_else(|| perr(0, format!("unknown coefficient `{name}`")))?;
            if last.is_some_and(|l| l >= idx) {
                return Err(perr(0, "coefficient factors out of order"));
            }
            let e = parse_num(e, 0)?;
            if e == 0 {
                return Err(perr(0, "zero exponent"));
            }
            last = Some(idx);
            out = out.with(CANONICAL_ORDER[idx], e);
        }
        Ok(out)
    }
}

impl FromStr for Monomial {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        let [c, x, t] = parts.as_slice() else {
            return Err(perr(0, "expected three `|`-separated parts"));
        };
        let coeff: CoeffMonomial = c.parse()?;
        let mut xi = Vec::new();
        let x = x.trim();
        if x != "1" {
            let mut last = 0;
            for f in x.split_whitespace() {
                let body = f.strip_prefix("xi").ok_or_else(|| perr(0, format!("bad xi factor `{f}`")))?;
                let (j, e) = body.split_once('^').ok_or_else(|| perr(0, format!("bad xi factor `{f}`")))?;
                let (j, e) = (parse_num(j, 0)?, parse_num(e, 0)?);
                if j <= last || e == 0 {
                    return Err(perr(0, "xi factors must have increasing indices and positive exponents"));
                }
                last = j;
                xi.resize(j as usize, 0);
                xi[j as usize - 1] = e;
            }
        }
        let t = t.trim();
        let inner = t
            .strip_prefix("tau{")
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| perr(0, format!("bad tau set `{t}`")))?;
        let mut tau = TauSet::EMPTY;
        let mut last: Option<u32> = None;
        if !inner.trim().is_empty() {
            for j in inner.split(',') {
                let j = parse_num(j, 0)?;
                if last.is_some_and(|l| l >= j) || j > crate::monomial::MAX_INDEX {
                    return Err(perr(0, "tau indices must be increasing and in range"));
                }
                last = Some(j);
                tau.insert(j);
            }
        }
        Ok(Monomial::new(coeff, SteenrodMonomial::new(xi, tau)))
    }
}

/// Expression form of a single monomial without scalar, e.g.
/// `rho*tau^2*xi1^3*tau0*tau2`; `1` for the unit.
pub fn monomial_expr(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for g in CoeffGen::ALL {
        match m.coeff.exponent(g) {
            0 => {}
            1 => parts.push(g.name().to_string()),
            e => parts.push(format!("{}^{}", g.name(), e)),
        }
    }
    for (i, e) in m.steen.xi.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("xi{}", i + 1)),
            e => parts.push(format!("xi{}^{}", i + 1, e)),
        }
    }
    for j in m.steen.tau.iter() {
        parts.push(format!("tau{j}"));
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = monomial_expr(m);
            match (c, body.as_str()) {
                (1, _) => f.write_str(&body)?,
                (c, "1") => write!(f, "{c}")?,
                (c, _) => write!(f, "{c}*{body}")?,
            }
        }
        Ok(())
    }
}

/// Parses an expression in the given algebra.
pub fn parse_element(alg: &Algebra, input: &str) -> Result<Element> {
    let mut p = Parser { alg, s: input.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(perr(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    alg: &'a Algebra,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| perr(start, "number too large"))
    }

    fn expr(&mut self) -> Result<Element> {
        let mut acc = self.alg.zero();
        let mut negative = self.eat(b'-');
        loop {
            let t = self.term()?;
            acc.add_scaled(&t, if negative { self.alg.p().get() - 1 } else { 1 });
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let f = self.factor()?;
            acc = self.alg.mul(&acc, &f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let pos = self.pos;
            let n = self.number()?;
            let n = u32::try_from(n).map_err(|_| perr(pos, "exponent too large"))?;
            return self.alg.pow(&base, n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Element> {
        let start = self.pos;
        match self.peek() {
            None => Err(perr(self.pos, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(perr(self.pos, "expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.alg.scalar((n % self.alg.p().get() as u64) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let word_start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.s[word_start..self.pos]).unwrap();
                let index = if self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    let n = self.number()?;
                    Some(u32::try_from(n).map_err(|_| perr(word_start, "index too large"))?)
                } else {
                    None
                };
                match (word, index) {
                    ("xi", Some(j)) if j >= 1 => self.alg.xi(j),
                    ("tau", Some(j)) => self.alg.tau(j),
                    (name, None) => {
                        let g = CoeffGen::ALL
                            .into_iter()
                            .find(|g| g.name() == name)
                            .ok_or_else(|| perr(word_start, format!("unknown symbol `{name}`")))?;
                        self.alg.coeff_gen(g)
                    }
                    _ => Err(perr(word_start, format!("unknown symbol `{word}`"))),
                }
            }
            Some(c) => Err(perr(start, format!("unexpected character `{}`", c as char))),
        }
    }
}
