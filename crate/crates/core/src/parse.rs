//! Expression grammar for rational maps and isometries.
//!
//! Arithmetic over `z` with complex literals ("0.5+0.1i"), the operators
//! `+ - * / ^` (integer powers), and the functions `mcmullen(m,d,lambda)`
//! and `newton(poly)`. Every subexpression is a rational function, so
//! the whole grammar evaluates in the field of rational maps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mcmullen::{make_mcmullen, McMullenParams};
use crate::rational::{isometry_from_map, newton_map, RationalMap};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Z,
    Number { value: f64, imaginary: bool },
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: pos,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<Spanned>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, pos });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, pos });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, pos });
                i += 1;
            }
            '+' => {
                out.push(Spanned { tok: Tok::Plus, pos });
                i += 1;
            }
            '-' => {
                out.push(Spanned { tok: Tok::Minus, pos });
                i += 1;
            }
            '*' => {
                out.push(Spanned { tok: Tok::Star, pos });
                i += 1;
            }
            '/' => {
                out.push(Spanned { tok: Tok::Slash, pos });
                i += 1;
            }
            '^' => {
                out.push(Spanned { tok: Tok::Caret, pos });
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // Scientific notation.
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| err(start, format!("bad number literal '{text}'")))?;
                let imaginary = i < bytes.len() && bytes[i] as char == 'i';
                if imaginary {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Number { value, imaginary },
                    pos: start,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                let word = &src[start..i];
                match word {
                    "z" => out.push(Spanned { tok: Tok::Z, pos: start }),
                    "i" => out.push(Spanned {
                        tok: Tok::Number {
                            value: 1.0,
                            imaginary: true,
                        },
                        pos: start,
                    }),
                    _ => out.push(Spanned {
                        tok: Tok::Ident(word.to_string()),
                        pos: start,
                    }),
                }
            }
            other => return Err(err(pos, format!("unexpected character '{other}'"))),
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        pos: src.len(),
    });
    Ok(out)
}

/// What the parsed map is, beyond its coefficients; used to pick escape
/// radii and report shapes.
#[derive(Clone, Debug)]
pub enum MapKind {
    McMullen(McMullenParams),
    Newton,
    Generic,
}

/// A parsed map along with its source text and recognized shape.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub map: RationalMap,
    pub kind: MapKind,
    pub source: String,
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    saw_newton: bool,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.at].clone();
        if self.at < self.toks.len() - 1 {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let t = self.bump();
        if t.tok == tok {
            Ok(())
        } else {
            Err(err(t.pos, format!("expected {what}")))
        }
    }

    fn parse_expr(&mut self) -> Result<RationalMap> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc + &rhs;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<RationalMap> {
        let mut acc = self.parse_unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    let rhs = self.parse_unary()?;
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    let pos = self.peek().pos;
                    self.bump();
                    let rhs = self.parse_unary()?;
                    acc = acc
                        .divide(&rhs)
                        .map_err(|_| err(pos, "division by the zero map"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<RationalMap> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            let inner = self.parse_unary()?;
            return Ok(-&inner);
        }
        self.parse_postfix()
    }

    fn parse_postfix(&mut self) -> Result<RationalMap> {
        let mut acc = self.parse_atom()?;
        while self.peek().tok == Tok::Caret {
            let caret_pos = self.peek().pos;
            self.bump();
            let exponent = self.parse_integer_exponent(caret_pos)?;
            acc = acc
                .pow(exponent)
                .map_err(|_| err(caret_pos, "cannot raise the zero map to a negative power"))?;
        }
        Ok(acc)
    }

    fn parse_integer_exponent(&mut self, caret_pos: usize) -> Result<i32> {
        let negative = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        match t.tok {
            Tok::Number { value, imaginary: false } if value.fract() == 0.0 => {
                let k = value as i32;
                Ok(if negative { -k } else { k })
            }
            _ => Err(err(
                if t.pos == usize::MAX { caret_pos } else { t.pos },
                "expected an integer exponent after '^'",
            )),
        }
    }

    fn parse_atom(&mut self) -> Result<RationalMap> {
        let t = self.bump();
        match t.tok {
            Tok::Z => Ok(RationalMap::identity()),
            Tok::Number { value, imaginary } => {
                let c = if imaginary {
                    Complex64::new(0.0, value)
                } else {
                    Complex64::new(value, 0.0)
                };
                Ok(RationalMap::constant(c))
            }
            Tok::LParen => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "mcmullen" => {
                    let params = self.parse_mcmullen_args(t.pos)?;
                    Ok(make_mcmullen(&params))
                }
                "newton" => {
                    self.expect(Tok::LParen, "'(' after newton")?;
                    let inner = self.parse_expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    let poly = polynomial_of(&inner)
                        .ok_or_else(|| err(t.pos, "newton() needs a polynomial argument"))?;
                    self.saw_newton = true;
                    newton_map(&poly)
                }
                other => Err(err(t.pos, format!("unknown function '{other}'"))),
            },
            _ => Err(err(t.pos, "expected 'z', a number, '(' or a function")),
        }
    }

    fn parse_mcmullen_args(&mut self, call_pos: usize) -> Result<McMullenParams> {
        self.expect(Tok::LParen, "'(' after mcmullen")?;
        let m = self.parse_small_integer("m")?;
        self.expect(Tok::Comma, "','")?;
        let d = self.parse_small_integer("d")?;
        self.expect(Tok::Comma, "','")?;
        let lambda_expr = self.parse_expr()?;
        self.expect(Tok::RParen, "')'")?;
        let lambda = constant_of(&lambda_expr)
            .ok_or_else(|| err(call_pos, "lambda must be a constant expression"))?;
        McMullenParams::new(m, d, lambda)
    }

    fn parse_small_integer(&mut self, what: &str) -> Result<u32> {
        let t = self.bump();
        match t.tok {
            Tok::Number { value, imaginary: false }
                if value.fract() == 0.0 && value >= 0.0 && value < 1e6 =>
            {
                Ok(value as u32)
            }
            _ => Err(err(t.pos, format!("expected a small integer for {what}"))),
        }
    }
}

fn constant_of(map: &RationalMap) -> Option<Complex64> {
    if map.degree() == 0 {
        if map.numerator().is_zero() {
            return Some(Complex64::new(0.0, 0.0));
        }
        return Some(map.numerator().coeff(0) / map.denominator().coeff(0));
    }
    None
}

fn polynomial_of(map: &RationalMap) -> Option<crate::poly::Polynomial> {
    if map.denominator().degree() == 0 {
        let d = map.denominator().coeff(0);
        return Some(map.numerator().scale(d.inv()));
    }
    None
}

/// Parses a map expression; the result records whether the input was a
/// plain `mcmullen(...)` call or a `newton(...)` call.
pub fn parse_map(src: &str) -> Result<MapSpec> {
    let toks = tokenize(src)?;
    let mcmullen_call = matches!(
        toks.first().map(|t| &t.tok),
        Some(Tok::Ident(name)) if name == "mcmullen"
    ) && matches!(toks.get(toks.len().saturating_sub(2)).map(|t| &t.tok), Some(Tok::RParen));

    let mut parser = Parser {
        toks,
        at: 0,
        saw_newton: false,
    };
    let map = parser.parse_expr()?;
    let end = parser.bump();
    if end.tok != Tok::End {
        return Err(err(end.pos, "unexpected trailing input"));
    }

    let kind = if mcmullen_call {
        // Re-derive the parameters from a fresh parse of the arguments.
        let mut p2 = Parser {
            toks: tokenize(src)?,
            at: 1,
            saw_newton: false,
        };
        MapKind::McMullen(p2.parse_mcmullen_args(0)?)
    } else if parser.saw_newton {
        MapKind::Newton
    } else {
        MapKind::Generic
    };
    Ok(MapSpec {
        map,
        kind,
        source: src.to_string(),
    })
}

/// Parses an isometry given as a degree-one map expression such as
/// "i*z" or "1/z".
pub fn parse_isometry(src: &str) -> Result<crate::isometry::Isometry> {
    let spec = parse_map(src)?;
    isometry_from_map(&spec.map, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::Isometry;
    use crate::poly::Polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_simple_powers() {
        let spec = parse_map("z^2").unwrap();
        assert_eq!(spec.map.degree(), 2);
        assert!(matches!(spec.kind, MapKind::Generic));
        let expected = RationalMap::from_polynomial(Polynomial::monomial(c(1.0, 0.0), 2));
        assert!(spec.map.equals(&expected, 1e-12));
    }

    #[test]
    fn parses_rational_with_complex_literal() {
        let spec = parse_map("(z^4 + (0.5+0.1i))/(z^2)").unwrap();
        assert_eq!(spec.map.degree(), 4);
        let v = spec.map.eval_affine(c(1.0, 0.0));
        assert!((v - c(1.5, 0.1)).norm() < 1e-12);
    }

    #[test]
    fn parses_mcmullen_shorthand() {
        let spec = parse_map("mcmullen(2,2,1)").unwrap();
        assert_eq!(spec.map.degree(), 4);
        match spec.kind {
            MapKind::McMullen(p) => {
                assert_eq!((p.m, p.d), (2, 2));
                assert!((p.lambda - c(1.0, 0.0)).norm() < 1e-12);
            }
            other => panic!("expected McMullen kind, got {other:?}"),
        }
        // Complex lambda expression.
        let spec = parse_map("mcmullen(3, 2, 0.5 - 0.25i)").unwrap();
        match spec.kind {
            MapKind::McMullen(p) => assert!((p.lambda - c(0.5, -0.25)).norm() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_map("mcmullen(1, 1, 0)"),
            Err(Error::InvalidExponents { .. })
        ));
    }

    #[test]
    fn parses_newton_call() {
        let spec = parse_map("newton(z^3+1)").unwrap();
        assert!(matches!(spec.kind, MapKind::Newton));
        assert_eq!(spec.map.degree(), 3);
        // N(z) = (2z^3 - 1) / (3z^2).
        let v = spec.map.eval_affine(c(1.0, 0.0));
        assert!((v - c(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn parse_error_carries_position() {
        match parse_map("z^^2") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_map("z^2 + ").is_err());
        assert!(parse_map("foo(z)").is_err());
        assert!(parse_map("z 2").is_err());
    }

    #[test]
    fn negative_exponents_are_rational() {
        let spec = parse_map("z^2 + 1.0*z^-2").unwrap();
        assert_eq!(spec.map.degree(), 4);
        let mc = parse_map("mcmullen(2,2,1)").unwrap();
        assert!(spec.map.equals(&mc.map, 1e-12));
    }

    #[test]
    fn parses_isometries() {
        let rot = parse_isometry("i*z").unwrap();
        assert!(rot.approx_eq(&Isometry::rotation(std::f64::consts::PI / 2.0), 1e-9));
        let inv = parse_isometry("1/z").unwrap();
        assert!(inv.approx_eq(&Isometry::inversion(c(1.0, 0.0)), 1e-9));
        assert!(matches!(
            parse_isometry("2*z"),
            Err(Error::NotAnIsometry)
        ));
        assert!(matches!(
            parse_isometry("z^2"),
            Err(Error::NotAnIsometry)
        ));
    }

    #[test]
    fn scientific_notation_literals() {
        let spec = parse_map("z^2 + 1e-3").unwrap();
        let v = spec.map.eval_affine(c(0.0, 0.0));
        assert!((v - c(1e-3, 0.0)).norm() < 1e-15);
    }
}
