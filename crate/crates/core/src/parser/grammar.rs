use super::{ParseError, ParseErrorKind};
use crate::linarith::Rational;
use crate::syntax::{desugar, desugar_prop, Agent, CmpOp, Group, PropFormula, SpqFormula, Surface, SurfaceSum, SurfaceTerm, SyntaxError};

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_ident_start(c: u8) -> bool {
    c.is_ascii_alphabetic() || c == b'_'
}

fn is_ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind, expected: impl Into<String>) -> ParseError {
        ParseError::at(self.src, pos, kind, expected.into())
    }

    fn expected(&self, what: &str) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax, what)
    }

    fn bytes(&self) -> &[u8] {
        self.src.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn rest(&mut self) -> &str {
        self.skip_ws();
        &self.src[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> PResult<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.expected(&format!("`{token}`")))
        }
    }

    /// Identifier at the cursor without consuming it.
    fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let b = self.bytes();
        if self.pos < b.len() && is_ident_start(b[self.pos]) {
            let mut end = self.pos + 1;
            while end < b.len() && is_ident_char(b[end]) {
                end += 1;
            }
            Some(&self.src[self.pos..end])
        } else {
            None
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            None => Err(self.expected(what)),
        }
    }

    /// `name` followed by `open`, as in `K{` or `b[`.
    fn at_operator(&mut self, name: &str, open: u8) -> bool {
        if self.peek_ident() != Some(name) {
            return false;
        }
        let mut k = self.pos + name.len();
        let b = self.bytes();
        while k < b.len() && b[k].is_ascii_whitespace() {
            k += 1;
        }
        b.get(k) == Some(&open)
    }

    fn agent_list(&mut self) -> PResult<Group> {
        let mut names = vec![self.ident("an agent name")?];
        while self.eat(",") {
            names.push(self.ident("an agent name")?);
        }
        Group::new(names.iter().map(|n| Agent::new(n.as_str()))).map_err(|e| self.syntax_error(e))
    }

    fn syntax_error(&self, e: SyntaxError) -> ParseError {
        let kind = match e {
            SyntaxError::NotPropositional => ParseErrorKind::NotPropositional,
            _ => ParseErrorKind::Invalid,
        };
        self.error_at(self.pos, kind, e.to_string())
    }

    /// formula := or (("->" | "<->") formula)?
    fn formula(&mut self, prop: bool) -> PResult<Surface> {
        let lhs = self.disjunction(prop)?;
        if self.eat("->") {
            let rhs = self.formula(prop)?;
            Ok(Surface::Implies(Box::new(lhs), Box::new(rhs)))
        } else if self.eat("<->") {
            let rhs = self.formula(prop)?;
            Ok(Surface::Iff(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self, prop: bool) -> PResult<Surface> {
        let mut acc = self.conjunction(prop)?;
        while self.eat("|") {
            let rhs = self.conjunction(prop)?;
            acc = Surface::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn conjunction(&mut self, prop: bool) -> PResult<Surface> {
        let mut acc = self.unary(prop)?;
        while self.eat("&") {
            let rhs = self.unary(prop)?;
            acc = Surface::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn modal_in_prop(&self, start: usize) -> ParseError {
        self.error_at(start, ParseErrorKind::NotPropositional, "a propositional formula (no modal operators or inequalities)")
    }

    fn unary(&mut self, prop: bool) -> PResult<Surface> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("~") {
            return Ok(Surface::Not(Box::new(self.unary(prop)?)));
        }
        for (name, kind) in [("K", 0), ("M", 1), ("C", 2), ("E", 3)] {
            if self.at_operator(name, b'{') {
                if prop {
                    return Err(self.modal_in_prop(start));
                }
                self.pos += name.len();
                self.expect("{")?;
                let group = if kind == 0 {
                    Group::singleton(self.ident("an agent name")?.as_str())
                } else {
                    self.agent_list()?
                };
                self.expect("}")?;
                let body = Box::new(self.unary(prop)?);
                return Ok(match kind {
                    0 => Surface::Know(group.iter().next().expect("singleton").clone(), body),
                    1 => Surface::Possible(group, body),
                    2 => Surface::Common(group, body),
                    _ => Surface::Everybody(group, body),
                });
            }
        }
        for (open, close) in [("[?", "]"), ("<?", ">")] {
            if self.rest().starts_with(open) {
                if prop {
                    return Err(self.modal_in_prop(start));
                }
                self.pos += open.len();
                let group = self.agent_list()?;
                self.expect(":")?;
                let question = self.formula(true)?;
                self.expect(close)?;
                let body = Box::new(self.unary(prop)?);
                return Ok(if open == "[?" {
                    Surface::Query(group, Box::new(question), body)
                } else {
                    Surface::QueryDual(group, Box::new(question), body)
                });
            }
        }
        self.atom(prop)
    }

    fn atom(&mut self, prop: bool) -> PResult<Surface> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'(') {
            let saved = self.pos;
            match self.linatom() {
                Ok(cmp) => {
                    if prop {
                        return Err(self.modal_in_prop(start));
                    }
                    return Ok(cmp);
                }
                Err(linear_err) => {
                    self.pos = saved;
                    self.expect("(")?;
                    let inner = match self.formula(prop) {
                        Ok(f) => f,
                        Err(e) => return Err(furthest(linear_err, e)),
                    };
                    if let Err(e) = self.expect(")") {
                        return Err(furthest(linear_err, e));
                    }
                    return Ok(inner);
                }
            }
        }
        match self.peek_ident() {
            Some("true") => {
                self.pos += 4;
                Ok(Surface::True)
            }
            Some("false") => {
                self.pos += 5;
                Ok(Surface::False)
            }
            Some(_) => Ok(Surface::Prop(self.ident("a formula")?)),
            None => Err(self.expected("a formula")),
        }
    }

    /// linatom := "(" linsum relop linsum ")"
    fn linatom(&mut self) -> PResult<Surface> {
        self.expect("(")?;
        let lhs = self.linsum()?;
        let op = if self.eat(">=") {
            CmpOp::Ge
        } else if self.eat("<=") {
            CmpOp::Le
        } else if self.eat(">") {
            CmpOp::Gt
        } else if self.eat("<") {
            CmpOp::Lt
        } else if self.eat("=") {
            CmpOp::Eq
        } else {
            return Err(self.expected("a comparison (`>=`, `<=`, `>`, `<` or `=`)"));
        };
        let rhs = self.linsum()?;
        self.expect(")")?;
        Ok(Surface::Compare(lhs, op, rhs))
    }

    fn linsum(&mut self) -> PResult<SurfaceSum> {
        let mut out = Vec::new();
        let negate = self.eat("-");
        let (c, t) = self.linterm()?;
        out.push((if negate { -c } else { c }, t));
        loop {
            if self.eat("+") {
                out.push(self.linterm()?);
            } else if self.rest().starts_with('-') && !self.rest().starts_with("->") {
                self.pos += 1;
                let (c, t) = self.linterm()?;
                out.push((-c, t));
            } else {
                break;
            }
        }
        Ok(out)
    }

    /// linterm := (rat "*")? ("b[" agent "]" | "c[" agent "](" prop ")" | rat)
    fn linterm(&mut self) -> PResult<(Rational, SurfaceTerm)> {
        let coeff = if matches!(self.peek(), Some(b'0'..=b'9')) {
            let r = self.rational()?;
            if !self.eat("*") {
                return Ok((r, SurfaceTerm::Constant));
            }
            Some(r)
        } else {
            None
        };
        let coeff_or_one = |c: Option<Rational>| c.unwrap_or_else(Rational::one);
        if self.at_operator("b", b'[') {
            self.pos += 1;
            self.expect("[")?;
            let agent = self.ident("an agent name")?;
            self.expect("]")?;
            return Ok((coeff_or_one(coeff), SurfaceTerm::Budget(Agent::new(agent))));
        }
        if self.at_operator("c", b'[') {
            self.pos += 1;
            self.expect("[")?;
            let agent = self.ident("an agent name")?;
            self.expect("]")?;
            self.expect("(")?;
            let formula = self.formula(true)?;
            self.expect(")")?;
            return Ok((coeff_or_one(coeff), SurfaceTerm::Cost(Agent::new(agent), Box::new(formula))));
        }
        if let Some(c) = coeff {
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                let r = self.rational()?;
                return Ok((c * r, SurfaceTerm::Constant));
            }
        }
        Err(self.expected("a term (`b[agent]`, `c[agent](formula)` or a number)"))
    }

    /// rat := int ("/" posint)?
    fn rational(&mut self) -> PResult<Rational> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.bytes()[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            s != p.pos
        };
        if !digits(self) {
            return Err(self.expected("a number"));
        }
        if self.bytes().get(self.pos) == Some(&b'/') {
            self.pos += 1;
            if !digits(self) {
                return Err(self.expected("a positive denominator"));
            }
        }
        let text = &self.src[start..self.pos];
        let r: Rational = text
            .parse()
            .map_err(|_| self.error_at(start, ParseErrorKind::Invalid, "a nonzero denominator"))?;
        Ok(r)
    }

    fn finish(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            Err(self.expected("end of input"))
        } else {
            Ok(())
        }
    }
}

fn furthest(a: ParseError, b: ParseError) -> ParseError {
    if a.offset > b.offset {
        a
    } else {
        b
    }
}

/// Parses the surface syntax without expanding abbreviations.
pub fn parse_surface(text: &str) -> Result<Surface, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula(false)?;
    p.finish()?;
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<SpqFormula, ParseError> {
    let surface = parse_surface(text)?;
    desugar(&surface).map_err(|e| ParseError::at(text, 0, ParseErrorKind::Invalid, e.to_string()))
}

/// Parses a formula that must be propositional.
pub fn parse_prop(text: &str) -> Result<PropFormula, ParseError> {
    let mut p = Parser::new(text);
    let f = p.formula(true)?;
    p.finish()?;
    desugar_prop(&f).map_err(|e| ParseError::at(text, 0, ParseErrorKind::NotPropositional, e.to_string()))
}
