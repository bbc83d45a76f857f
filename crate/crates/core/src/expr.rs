//! A small expression language for sheaf summaries.
//!
//! Audits and CLI users state bundle computations the way they are usually
//! written: `Sym2(O(2)+O(2)+O(3)) * Dual(O(10))`. `+` is direct sum, `*` is
//! tensor (binding tighter than `+`), `^m` on an atom is m-fold direct sum,
//! `**m` is m-fold tensor power with negative m meaning the dual of the
//! positive power. `SymN`/`WedgeN`/`TwistN` fuse the arity into the keyword,
//! `T(len)` is a torsion sheaf of the given length, `0` is the zero bundle,
//! and a bare identifier is a variable resolved against an [`Environment`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::splitting::{SheafSummary, SplittingType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BundleExpr {
    Line(i64),
    Zero,
    Torsion(u64),
    Var(String),
    Sum(Box<BundleExpr>, Box<BundleExpr>),
    Tensor(Box<BundleExpr>, Box<BundleExpr>),
    Sym(usize, Box<BundleExpr>),
    Wedge(usize, Box<BundleExpr>),
    Dual(Box<BundleExpr>),
    Det(Box<BundleExpr>),
    Twist(Box<BundleExpr>, i64),
    /// m-fold direct sum.
    Power(Box<BundleExpr>, usize),
    /// m-fold tensor power; negative m is the dual of the positive power.
    TensorPower(Box<BundleExpr>, i64),
}

/// Named sheaf summaries available to `eval`. Lookup of an unbound name is an
/// error, never a default.
#[derive(Debug, Clone, Default)]
pub struct Environment {
    bindings: BTreeMap<String, SheafSummary>,
}

impl Environment {
    pub fn new() -> Self {
        Environment::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, value: SheafSummary) {
        self.bindings.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&SheafSummary> {
        self.bindings.get(name)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at byte {offset}: expected {}; found {found}", expected.join(", "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("{op} applied to a summary with torsion; only direct sums and twists accept torsion")]
    TorsionOperand { op: &'static str },
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Star,
    StarStar,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::StarStar => "`**`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.pos >= self.src.len() {
            return Ok((Tok::End, start));
        }
        let c = self.src[self.pos];
        match c {
            b'+' => {
                self.pos += 1;
                Ok((Tok::Plus, start))
            }
            b'*' => {
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos] == b'*' {
                    self.pos += 1;
                    Ok((Tok::StarStar, start))
                } else {
                    Ok((Tok::Star, start))
                }
            }
            b'^' => {
                self.pos += 1;
                Ok((Tok::Caret, start))
            }
            b'(' => {
                self.pos += 1;
                Ok((Tok::LParen, start))
            }
            b')' => {
                self.pos += 1;
                Ok((Tok::RParen, start))
            }
            b'-' | b'0'..=b'9' => {
                let neg = c == b'-';
                if neg {
                    self.pos += 1;
                    if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
                        return Err(ParseError {
                            offset: start,
                            expected: vec!["digit after `-`"],
                            found: describe_byte(self.src, self.pos),
                        });
                    }
                }
                let mut val: i64 = 0;
                let mut overflow = false;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    let d = (self.src[self.pos] - b'0') as i64;
                    val = match val.checked_mul(10).and_then(|v| v.checked_add(d)) {
                        Some(v) => v,
                        None => {
                            overflow = true;
                            0
                        }
                    };
                    self.pos += 1;
                }
                if overflow {
                    return Err(ParseError {
                        offset: start,
                        expected: vec!["integer within i64 range"],
                        found: "oversized integer literal".into(),
                    });
                }
                Ok((Tok::Int(if neg { -val } else { val }), start))
            }
            c if c.is_ascii_alphabetic() => {
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ident bytes are ASCII")
                    .to_string();
                Ok((Tok::Ident(s), start))
            }
            _ => Err(ParseError {
                offset: start,
                expected: vec!["`O(`", "`T(`", "identifier", "integer", "`(`", "operator"],
                found: describe_byte(self.src, self.pos),
            }),
        }
    }
}

fn describe_byte(src: &[u8], pos: usize) -> String {
    match src.get(pos) {
        None => "end of input".into(),
        Some(&b) if b.is_ascii_graphic() => format!("`{}`", b as char),
        Some(&b) => format!("byte 0x{b:02x}"),
    }
}

// ---------------------------------------------------------------------------
// Parser (LL(1) recursive descent over the token stream)
// ---------------------------------------------------------------------------

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, offset) = lexer.next()?;
        Ok(Parser { lexer, tok, offset })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, offset) = self.lexer.next()?;
        self.tok = tok;
        self.offset = offset;
        Ok(())
    }

    fn err(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError { offset: self.offset, expected, found: self.tok.describe() }
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<(), ParseError> {
        if self.tok == want {
            self.bump()
        } else {
            Err(self.err(vec![label]))
        }
    }

    fn expr(&mut self) -> Result<BundleExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.tok == Tok::Plus {
            self.bump()?;
            let rhs = self.term()?;
            lhs = BundleExpr::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<BundleExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.tok == Tok::Star {
            self.bump()?;
            let rhs = self.factor()?;
            lhs = BundleExpr::Tensor(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<BundleExpr, ParseError> {
        let atom = self.atom()?;
        match self.tok {
            Tok::Caret => {
                self.bump()?;
                let n = self.int(vec!["nonnegative integer after `^`"])?;
                if n < 0 {
                    return Err(ParseError {
                        offset: self.offset,
                        expected: vec!["nonnegative direct-sum power"],
                        found: format!("`{n}`"),
                    });
                }
                self.bump()?;
                Ok(BundleExpr::Power(Box::new(atom), n as usize))
            }
            Tok::StarStar => {
                self.bump()?;
                let m = self.int(vec!["integer after `**`"])?;
                self.bump()?;
                Ok(BundleExpr::TensorPower(Box::new(atom), m))
            }
            _ => Ok(atom),
        }
    }

    /// Reads the current token as an integer without consuming it.
    fn int(&mut self, expected: Vec<&'static str>) -> Result<i64, ParseError> {
        match self.tok {
            Tok::Int(n) => Ok(n),
            _ => Err(self.err(expected)),
        }
    }

    fn atom(&mut self) -> Result<BundleExpr, ParseError> {
        match self.tok.clone() {
            Tok::Int(0) => {
                self.bump()?;
                Ok(BundleExpr::Zero)
            }
            Tok::Int(_) => Err(self.err(vec!["`0` (zero bundle)", "`O(`", "`T(`", "identifier", "`(`"])),
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump()?;
                // `Twist` with a negative arity arrives as a separate integer
                // token because `-` is not an identifier character.
                if name == "Twist" {
                    if let Tok::Int(d) = self.tok {
                        self.bump()?;
                        self.expect(Tok::LParen, "`(`")?;
                        let inner = self.expr()?;
                        self.expect(Tok::RParen, "`)`")?;
                        return Ok(BundleExpr::Twist(Box::new(inner), d));
                    }
                }
                if self.tok != Tok::LParen {
                    return Ok(BundleExpr::Var(name));
                }
                // ident followed by `(` is a call form
                self.bump()?;
                let node = self.call(&name)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(node)
            }
            _ => Err(self.err(vec!["`O(`", "`T(`", "identifier", "`(`", "`0`"])),
        }
    }

    /// Call forms: O(int), T(uint), SymN, WedgeN, TwistN (N signed), Dual, Det.
    /// Any other identifier before `(` is a syntax error, not a variable.
    fn call(&mut self, name: &str) -> Result<BundleExpr, ParseError> {
        match name {
            "O" => {
                let d = self.int(vec!["integer degree"])?;
                self.bump()?;
                Ok(BundleExpr::Line(d))
            }
            "T" => {
                let len = self.int(vec!["nonnegative torsion length"])?;
                if len < 0 {
                    return Err(ParseError {
                        offset: self.offset,
                        expected: vec!["nonnegative torsion length"],
                        found: format!("`{len}`"),
                    });
                }
                self.bump()?;
                Ok(BundleExpr::Torsion(len as u64))
            }
            "Dual" => Ok(BundleExpr::Dual(Box::new(self.expr()?))),
            "Det" => Ok(BundleExpr::Det(Box::new(self.expr()?))),
            _ => {
                if let Some(rest) = name.strip_prefix("Sym") {
                    if let Some(n) = parse_uint_suffix(rest) {
                        return Ok(BundleExpr::Sym(n, Box::new(self.expr()?)));
                    }
                } else if let Some(rest) = name.strip_prefix("Wedge") {
                    if let Some(k) = parse_uint_suffix(rest) {
                        return Ok(BundleExpr::Wedge(k, Box::new(self.expr()?)));
                    }
                } else if let Some(rest) = name.strip_prefix("Twist") {
                    if let Some(d) = parse_int_suffix(rest) {
                        return Ok(BundleExpr::Twist(Box::new(self.expr()?), d));
                    }
                }
                Err(ParseError {
                    offset: self.offset,
                    expected: vec!["`O`", "`T`", "`SymN`", "`WedgeN`", "`TwistN`", "`Dual`", "`Det`"],
                    found: format!("call of `{name}`"),
                })
            }
        }
    }
}

fn parse_uint_suffix(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_int_suffix(s: &str) -> Option<i64> {
    if s.is_empty() {
        return None;
    }
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn parse(text: &str) -> Result<BundleExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.err(vec!["`+`", "`*`", "`**`", "`^`", "end of input"]));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

fn torsion_free(s: SheafSummary, op: &'static str) -> Result<SplittingType, EvalError> {
    if s.is_torsion_free() {
        Ok(s.bundle)
    } else {
        Err(EvalError::TorsionOperand { op })
    }
}

pub fn eval(expr: &BundleExpr, env: &Environment) -> Result<SheafSummary, EvalError> {
    match expr {
        BundleExpr::Line(d) => Ok(SheafSummary::from_bundle(SplittingType::line(*d))),
        BundleExpr::Zero => Ok(SheafSummary::zero()),
        BundleExpr::Torsion(len) => Ok(SheafSummary::new(SplittingType::zero(), *len)),
        BundleExpr::Var(name) => env
            .get(name)
            .cloned()
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        BundleExpr::Sum(a, b) => {
            let a = eval(a, env)?;
            let b = eval(b, env)?;
            Ok(SheafSummary::new(
                a.bundle.direct_sum(&b.bundle),
                a.torsion_length + b.torsion_length,
            ))
        }
        BundleExpr::Tensor(a, b) => {
            let a = torsion_free(eval(a, env)?, "tensor")?;
            let b = torsion_free(eval(b, env)?, "tensor")?;
            Ok(SheafSummary::from_bundle(a.tensor(&b)))
        }
        BundleExpr::Sym(n, a) => {
            let a = torsion_free(eval(a, env)?, "Sym")?;
            Ok(SheafSummary::from_bundle(a.sym(*n)))
        }
        BundleExpr::Wedge(k, a) => {
            let a = torsion_free(eval(a, env)?, "Wedge")?;
            Ok(SheafSummary::from_bundle(a.wedge(*k)))
        }
        BundleExpr::Dual(a) => {
            let a = torsion_free(eval(a, env)?, "Dual")?;
            Ok(SheafSummary::from_bundle(a.dual()))
        }
        BundleExpr::Det(a) => {
            let a = torsion_free(eval(a, env)?, "Det")?;
            Ok(SheafSummary::from_bundle(a.det()))
        }
        // Twisting by a line bundle leaves torsion length unchanged.
        BundleExpr::Twist(a, d) => {
            let a = eval(a, env)?;
            Ok(SheafSummary::new(a.bundle.twist(*d), a.torsion_length))
        }
        BundleExpr::Power(a, m) => {
            let a = eval(a, env)?;
            let mut bundle = SplittingType::zero();
            for _ in 0..*m {
                bundle = bundle.direct_sum(&a.bundle);
            }
            Ok(SheafSummary::new(bundle, a.torsion_length * *m as u64))
        }
        BundleExpr::TensorPower(a, m) => {
            let a = torsion_free(eval(a, env)?, "tensor power")?;
            let k = m.unsigned_abs() as usize;
            let mut acc = SplittingType::line(0);
            for _ in 0..k {
                acc = acc.tensor(&a);
            }
            Ok(SheafSummary::from_bundle(if *m < 0 { acc.dual() } else { acc }))
        }
    }
}

/// Canonical rendering of a summary; inverse to `parse` up to evaluation.
pub fn format_summary(s: &SheafSummary) -> String {
    s.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(d: &[i64]) -> SplittingType {
        SplittingType::new(d.to_vec())
    }

    fn ev(text: &str) -> SheafSummary {
        eval(&parse(text).unwrap(), &Environment::new()).unwrap()
    }

    #[test]
    fn parses_paper_shapes() {
        let e = parse("Sym2(O(2)+O(2)+O(3))").unwrap();
        assert_eq!(
            e,
            BundleExpr::Sym(
                2,
                Box::new(BundleExpr::Sum(
                    Box::new(BundleExpr::Sum(
                        Box::new(BundleExpr::Line(2)),
                        Box::new(BundleExpr::Line(2))
                    )),
                    Box::new(BundleExpr::Line(3))
                ))
            )
        );
        let e = parse("Wedge2(O(1)+O(3)^2) * Dual(O(10))").unwrap();
        match e {
            BundleExpr::Tensor(l, r) => {
                assert!(matches!(*l, BundleExpr::Wedge(2, _)));
                assert_eq!(*r, BundleExpr::Dual(Box::new(BundleExpr::Line(10))));
            }
            other => panic!("expected tensor, got {other:?}"),
        }
        assert!(matches!(
            parse("Sym2(V2) * Dual(L4p)").unwrap(),
            BundleExpr::Tensor(_, _)
        ));
    }

    #[test]
    fn eval_matches_splitting_core() {
        assert_eq!(ev("Sym2(O(2)+O(2)+O(3))").bundle, st(&[4, 4, 4, 5, 5, 6]));
        assert_eq!(ev("Det(O(1)+O(3)+O(3)) * Dual(O(2))").bundle, st(&[5]));
        assert_eq!(ev("O(5)^0"), SheafSummary::zero());
        assert_eq!(ev("O(3)**-2").bundle, st(&[-6]));
        assert_eq!(ev("O(3)**0").bundle, st(&[0]));
        assert_eq!(ev("Twist-3(O(5)^3)").bundle, st(&[2, 2, 2]));
        assert_eq!(ev("T(3) + O(3)^2"), SheafSummary::new(st(&[3, 3]), 3));
        assert_eq!(ev("Twist2(T(3))"), SheafSummary::new(SplittingType::zero(), 3));
        assert_eq!(ev("0"), SheafSummary::zero());
        assert_eq!(ev("0 + O(5)").bundle, st(&[5]));
    }

    #[test]
    fn eval_with_environment() {
        let mut env = Environment::new();
        env.bind("V2", SheafSummary::from_bundle(st(&[5, 5, 5, 5, 5, 6])));
        env.bind("L4p", SheafSummary::from_bundle(st(&[10])));
        let e = parse("Sym2(V2) * Dual(L4p)").unwrap();
        let v = eval(&e, &env).unwrap();
        assert_eq!(v.rank(), 21);
        assert_eq!(v.bundle.degree(), 7);
        assert_eq!(v.h0(), 28);
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let e = parse("Sym2(V2)").unwrap();
        assert_eq!(
            eval(&e, &Environment::new()),
            Err(EvalError::Unbound("V2".into()))
        );
    }

    #[test]
    fn torsion_rejected_by_multilinear_functors() {
        for text in ["Sym2(T(1))", "Wedge2(T(1))", "Dual(T(1))", "Det(T(1))", "T(1) * O(2)", "T(2)**2"] {
            let e = parse(text).unwrap();
            assert!(
                matches!(eval(&e, &Environment::new()), Err(EvalError::TorsionOperand { .. })),
                "expected torsion rejection for {text}"
            );
        }
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse("Sym2(O(2)").unwrap_err();
        assert_eq!(err.offset, 9);
        let err = parse("O(2) ^ -1").unwrap_err();
        assert!(err.expected.iter().any(|e| e.contains("nonnegative")));
        let err = parse("Sym-1(O(2))").unwrap_err();
        assert!(err.offset > 0);
        let err = parse("5").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn format_round_trips() {
        for degrees in [vec![4i64, 4, 4, 5, 5, 6], vec![], vec![-2, 0, 7]] {
            for torsion in [0u64, 3] {
                let s = SheafSummary::new(SplittingType::new(degrees.clone()), torsion);
                let text = format_summary(&s);
                let back = eval(&parse(&text).unwrap(), &Environment::new()).unwrap();
                assert_eq!(back, s, "round trip through {text}");
            }
        }
        assert_eq!(format_summary(&SheafSummary::from_bundle(st(&[4, 4, 4, 5, 5, 6]))), "O(6) + O(5)^2 + O(4)^3");
    }

    #[test]
    fn environment_monotone() {
        let e = parse("Sym2(O(1)+O(3)+O(3))").unwrap();
        let mut env = Environment::new();
        let before = eval(&e, &env).unwrap();
        env.bind("unused", SheafSummary::from_bundle(st(&[99])));
        assert_eq!(eval(&e, &env).unwrap(), before);
    }
}
