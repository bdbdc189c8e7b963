//! Recursive-descent parser. Offsets in errors are byte offsets into the
//! input; both `-` and `−` (U+2212) are accepted as minus.

use super::{Expr, Func, Var};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, expected: &[&str]) -> Error {
    Error::Syntax { offset, expected: expected.iter().map(|s| s.to_string()).collect() }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();

    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            out.push(Token { tok, offset: i });
            continue;
        }

        if c.is_ascii_digit() || c == '.' {
            let mut end = i;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            // optional exponent, only consumed when well-formed
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut j = end + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    end = j;
                }
            }
            let lexeme = &text[i..end];
            let value: f64 = lexeme.parse().map_err(|_| syntax(i, &["number"]))?;
            if !value.is_finite() {
                return Err(syntax(i, &["finite number"]));
            }
            out.push(Token { tok: Tok::Num(value), offset: i });
            while chars.peek().is_some_and(|&(j, _)| j < end) {
                chars.next();
            }
            continue;
        }

        if c.is_alphabetic() || c == '_' {
            let mut end = i;
            while let Some(&(j, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    end = j + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Token { tok: Tok::Ident(text[i..end].to_string()), offset: i });
            continue;
        }

        return Err(syntax(i, &["number", "identifier", "operator", "(", ")"]));
    }

    out.push(Token { tok: Tok::End, offset: text.len() });
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

const ATOM_START: &[&str] = &["number", "identifier", "(", "-"];

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr<T: Scalar>(&mut self) -> Result<Expr<T>> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term<T: Scalar>(&mut self) -> Result<Expr<T>> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor<T: Scalar>(&mut self) -> Result<Expr<T>> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(match self.factor::<T>()? {
                Expr::Lit(x) => Expr::Lit(-x),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power<T: Scalar>(&mut self) -> Result<Expr<T>> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom<T: Scalar>(&mut self) -> Result<Expr<T>> {
        let Token { tok, offset } = self.bump().clone();
        match tok {
            Tok::Num(x) => Ok(Expr::Lit(T::of(x))),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let var = match name.as_str() {
                    "t" => Some(Var::T),
                    "u" => Some(Var::U),
                    "v" => Some(Var::V),
                    _ => None,
                };
                if let Some(v) = var {
                    return Ok(Expr::Var(v));
                }
                let func = Func::from_name(&name).ok_or(Error::UnknownIdent { name, offset })?;
                let open = self.bump().clone();
                if open.tok != Tok::LParen {
                    return Err(syntax(open.offset, &["("]));
                }
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(syntax(offset, ATOM_START)),
        }
    }

    fn expect_rparen(&mut self) -> Result<()> {
        let t = self.bump().clone();
        if t.tok == Tok::RParen {
            Ok(())
        } else {
            Err(syntax(t.offset, &[")", "operator"]))
        }
    }
}

/// Parse `text` into an expression tree.
pub fn parse<T: Scalar>(text: &str) -> Result<Expr<T>> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let e = p.expr()?;
    let rest = p.peek();
    if rest.tok != Tok::End {
        return Err(syntax(rest.offset, &["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: Expr<f64>) -> Box<Expr<f64>> {
        Box::new(e)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(
            parse::<f64>("t^2").unwrap(),
            Expr::Pow(b(Expr::Var(Var::T)), b(Expr::Lit(2.0)))
        );
        assert_eq!(
            parse::<f64>("u + 0.5*v^2").unwrap(),
            Expr::Add(
                b(Expr::Var(Var::U)),
                b(Expr::Mul(
                    b(Expr::Lit(0.5)),
                    b(Expr::Pow(b(Expr::Var(Var::V)), b(Expr::Lit(2.0))))
                ))
            )
        );
        match parse::<f64>("sin(") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // ^ is right associative
        let e = parse::<f64>("2^3^2").unwrap();
        assert_eq!(e.eval(&Default::default()).unwrap(), 512.0);
        // ^ binds tighter than unary minus
        let e = parse::<f64>("-2^2").unwrap();
        assert_eq!(e.eval(&Default::default()).unwrap(), -4.0);
        let e = parse::<f64>("2^-1").unwrap();
        assert_eq!(e.eval(&Default::default()).unwrap(), 0.5);
        let e = parse::<f64>("8/4/2 - 1 - 1").unwrap();
        assert_eq!(e.eval(&Default::default()).unwrap(), -1.0);
        let e = parse::<f64>("2 − 3").unwrap();
        assert_eq!(e.eval(&Default::default()).unwrap(), -1.0);
    }

    #[test]
    fn numbers() {
        for (text, v) in [("1e3", 1e3), ("2.5E-2", 0.025), (".5", 0.5), ("3.", 3.0)] {
            assert_eq!(parse::<f64>(text).unwrap(), Expr::Lit(v));
        }
        // `2e` is the number 2 followed by the identifier `e`
        assert!(matches!(parse::<f64>("2e"), Err(Error::Syntax { offset: 1, .. })));
        assert!(parse::<f64>("1e999").is_err());
    }

    #[test]
    fn malformed_inputs_are_rejected_with_offsets() {
        let corpus = [
            "", " ", "(", ")", "t +", "* t", "t ^", "sin", "sin t", "sin(t", "((t)", "t)", "t t",
            "1..2", "t $ 2", "cos()", "exp(,)", "--", "t^^2", "3 4", "u v", "(t+1", "ln(t))", "#",
            "t(2)", "2 + * 3",
        ];
        for text in corpus {
            match parse::<f64>(text) {
                Err(Error::Syntax { offset, expected }) => {
                    assert!(offset <= text.len(), "{text:?}");
                    assert!(!expected.is_empty());
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(matches!(
            parse::<f64>("t + foo(2)"),
            Err(Error::UnknownIdent { offset: 4, .. })
        ));
        assert!(matches!(parse::<f64>("x"), Err(Error::UnknownIdent { offset: 0, .. })));
    }
}
