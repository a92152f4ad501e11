//! Profile expressions used in config files.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := number | '-' factor | '(' expr ')' | call | 'zero'
//! call   := gaussian(a) | bump(R) | power_sing(p, R) | monomial_gauss(m, a)
//! ```
//!
//! Every term must reduce to `scalar * profile`; a bare number is rejected
//! because a constant profile is not square integrable.

use std::fmt;

use wavenorm_core::RadialProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at byte {})", self.message, self.position)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((Token::Plus, i)),
            '-' => out.push((Token::Minus, i)),
            '*' => out.push((Token::Star, i)),
            '(' => out.push((Token::LParen, i)),
            ')' => out.push((Token::RParen, i)),
            ',' => out.push((Token::Comma, i)),
            c if c.is_ascii_digit() || c == '.' => {
                i += 1;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    let exp_sign = (d == '+' || d == '-') && matches!(bytes[i - 1] as char, 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError {
                    message: format!("bad number '{text}'"),
                    position: start,
                })?;
                out.push((Token::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                i += 1;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(src[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character '{other}'"),
                    position: i,
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Intermediate value: a linear combination of profiles plus a pure scalar.
#[derive(Clone)]
struct Value {
    scalar: Option<f64>,
    terms: Vec<(f64, RadialProfile)>,
}

impl Value {
    fn number(v: f64) -> Self {
        Self {
            scalar: Some(v),
            terms: Vec::new(),
        }
    }

    fn profile(p: RadialProfile) -> Self {
        Self {
            scalar: None,
            terms: vec![(1.0, p)],
        }
    }

    fn scale(mut self, c: f64) -> Self {
        self.scalar = self.scalar.map(|s| s * c);
        for t in &mut self.terms {
            t.0 *= c;
        }
        self
    }
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.1).unwrap_or(self.len)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            message: message.into(),
            position: self.here(),
        })
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => 1.0,
                Some(Token::Minus) => -1.0,
                _ => return Ok(acc),
            };
            self.pos += 1;
            let rhs = self.term()?.scale(sign);
            acc = match (acc.scalar, rhs.scalar) {
                (Some(a), Some(b)) => Value::number(a + b),
                (None, None) => {
                    acc.terms.extend(rhs.terms);
                    acc
                }
                _ => return self.err("cannot add a number to a profile"),
            };
        }
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = match (acc.scalar, rhs.scalar) {
                (Some(a), _) => rhs.scale(a),
                (None, Some(b)) => acc.scale(b),
                (None, None) => return self.err("product of two profiles is not supported"),
            };
        }
        Ok(acc)
    }

    fn number_arg(&mut self) -> Result<f64, ParseError> {
        let v = self.expr()?;
        match v.scalar {
            Some(x) => Ok(x),
            None => self.err("expected a numeric argument"),
        }
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Token::Num(v)) => {
                self.pos += 1;
                Ok(Value::number(v))
            }
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.factor()?.scale(-1.0))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(v)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                if name == "zero" {
                    return Ok(Value::profile(RadialProfile::zero()));
                }
                let arity = match name.as_str() {
                    "gaussian" | "bump" => 1,
                    "power_sing" | "monomial_gauss" => 2,
                    _ => {
                        return Err(ParseError {
                            message: format!("unknown profile '{name}'"),
                            position: start,
                        })
                    }
                };
                self.expect(Token::LParen, "'('")?;
                let mut args = vec![self.number_arg()?];
                for _ in 1..arity {
                    self.expect(Token::Comma, "','")?;
                    args.push(self.number_arg()?);
                }
                self.expect(Token::RParen, "')'")?;
                let built = match name.as_str() {
                    "gaussian" => RadialProfile::gaussian(args[0]),
                    "bump" => RadialProfile::bump(args[0]),
                    "power_sing" => RadialProfile::power_sing(args[0], args[1]),
                    _ => {
                        let m = args[0];
                        if m < 0.0 || m.fract() != 0.0 || m > 64.0 {
                            return Err(ParseError {
                                message: "monomial_gauss order must be a non-negative integer".into(),
                                position: start,
                            });
                        }
                        RadialProfile::monomial_gauss(m as u32, args[1])
                    }
                };
                built.map(Value::profile).map_err(|e| ParseError {
                    message: e.to_string(),
                    position: start,
                })
            }
            _ => self.err("expected a number, profile or '('"),
        }
    }
}

/// Parse a profile expression such as `0.5*gaussian(1) - bump(2)`.
pub fn parse_profile(src: &str) -> Result<RadialProfile, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        len: src.len(),
    };
    let v = p.expr()?;
    if p.pos != tokens.len() {
        return p.err("unexpected trailing input");
    }
    if v.scalar.is_some() {
        return Err(ParseError {
            message: "a profile expression cannot be a bare number".into(),
            position: 0,
        });
    }
    let profile = RadialProfile::linear_combination(&v.terms);
    Ok(profile.with_label(src.trim().to_string()))
}
