use std::sync::Arc;

use super::{BinOp, Constant, Expr, ExprError, Func, Node};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(Token, usize)>, ExprError> {
        let mut lexer = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let tok = lexer.next_token()?;
            let done = tok.0 == Token::End;
            out.push(tok);
            if done {
                return Ok(out);
            }
        }
    }

    fn peek_byte(&self, ahead: usize) -> Option<u8> {
        self.src.as_bytes().get(self.pos + ahead).copied()
    }

    fn next_token(&mut self) -> Result<(Token, usize), ExprError> {
        while let Some(b) = self.peek_byte(0) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(b) = self.peek_byte(0) else {
            return Ok((Token::End, start));
        };
        match b {
            b'0'..=b'9' | b'.' => self.number(start),
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while matches!(self.peek_byte(0), Some(c) if c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.pos += 1;
                }
                Ok((Token::Ident(self.src[start..self.pos].to_string()), start))
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Ok((Token::Op(b as char), start))
            }
            b'(' => {
                self.pos += 1;
                Ok((Token::LParen, start))
            }
            b')' => {
                self.pos += 1;
                Ok((Token::RParen, start))
            }
            _ => {
                let ch = self.src[start..].chars().next().unwrap_or('?');
                Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                })
            }
        }
    }

    fn digits(&mut self) -> usize {
        let begin = self.pos;
        while matches!(self.peek_byte(0), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        self.pos - begin
    }

    fn number(&mut self, start: usize) -> Result<(Token, usize), ExprError> {
        let mut count = self.digits();
        if self.peek_byte(0) == Some(b'.') {
            self.pos += 1;
            count += self.digits();
        }
        if count == 0 {
            return Err(ExprError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        // An exponent is only consumed when digits follow; otherwise `e` is left for the
        // identifier rule and the parser reports the juxtaposition.
        if matches!(self.peek_byte(0), Some(b'e' | b'E')) {
            let sign = usize::from(matches!(self.peek_byte(1), Some(b'+' | b'-')));
            if matches!(self.peek_byte(1 + sign), Some(b'0'..=b'9')) {
                self.pos += 1 + sign;
                self.digits();
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        if !value.is_finite() {
            return Err(ExprError::Syntax {
                offset: start,
                message: format!("number `{text}` out of range"),
            });
        }
        Ok((Token::Number(value), start))
    }
}

struct Parser<'c> {
    tokens: Vec<(Token, usize)>,
    index: usize,
    coordinates: &'c [String],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.index].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.index].1
    }

    fn advance(&mut self) -> (Token, usize) {
        let t = self.tokens[self.index].clone();
        if self.index + 1 < self.tokens.len() {
            self.index += 1;
        }
        t
    }

    fn unexpected(&self) -> ExprError {
        let message = match self.peek() {
            Token::End => "unexpected end of input".to_string(),
            Token::Number(v) => format!("unexpected number `{v}`"),
            Token::Ident(s) => format!("unexpected identifier `{s}`"),
            Token::Op(c) => format!("unexpected operator `{c}`"),
            Token::LParen => "unexpected `(`".to_string(),
            Token::RParen => "unexpected `)`".to_string(),
        };
        ExprError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expression(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Op('+') => BinOp::Add,
                Token::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.term()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Op('*') => BinOp::Mul,
                Token::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.advance();
            let rhs = self.unary()?;
            lhs = Node::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if *self.peek() == Token::Op('-') {
            self.advance();
            let inner = self.unary()?;
            return Ok(Node::Neg(Box::new(inner)));
        }
        self.power()
    }

    // `^` binds tighter than unary minus and associates to the right.
    fn power(&mut self) -> Result<Node, ExprError> {
        let base = self.primary()?;
        if *self.peek() == Token::Op('^') {
            self.advance();
            let exponent = self.unary()?;
            return Ok(Node::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        match self.peek().clone() {
            Token::Number(v) => {
                self.advance();
                Ok(Node::Number(v))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expression()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let (_, offset) = self.advance();
                if *self.peek() == Token::LParen {
                    let func = Func::from_name(&name)
                        .ok_or(ExprError::UnknownFunction { name, offset })?;
                    self.advance();
                    let arg = self.expression()?;
                    self.expect_rparen()?;
                    return Ok(Node::Call(func, Box::new(arg)));
                }
                if let Some(k) = self.coordinates.iter().position(|c| *c == name) {
                    return Ok(Node::Var(k));
                }
                if Func::from_name(&name).is_some() {
                    return Err(ExprError::Syntax {
                        offset: self.offset(),
                        message: format!("expected `(` after function `{name}`"),
                    });
                }
                match name.as_str() {
                    "pi" => Ok(Node::Constant(Constant::Pi)),
                    "e" => Ok(Node::Constant(Constant::E)),
                    _ => Err(ExprError::UnknownIdentifier { name, offset }),
                }
            }
            _ => Err(self.unexpected()),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if *self.peek() == Token::RParen {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }
}

/// Parses `source` against the given coordinate names.
///
/// Precedence from tightest: `^` (right-associative), unary `-`, `* /`, `+ -`.
pub fn parse_expression<S: AsRef<str>>(source: &str, coordinates: &[S]) -> Result<Expr, ExprError> {
    let coords: Arc<[String]> = coordinates.iter().map(|c| c.as_ref().to_string()).collect();
    parse_with(source, coords)
}

pub(crate) fn parse_with(source: &str, coordinates: Arc<[String]>) -> Result<Expr, ExprError> {
    let tokens = Lexer::tokenize(source)?;
    if tokens[0].0 == Token::End {
        return Err(ExprError::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut parser = Parser {
        tokens,
        index: 0,
        coordinates: &coordinates,
    };
    let root = parser.expression()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected());
    }
    Ok(Expr::new(root, coordinates))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, coords: &[&str]) -> Result<Expr, ExprError> {
        parse_expression(s, coords)
    }

    #[test]
    fn sum_at_root() {
        let e = parse("x1^2 + exp(x2)", &["x1", "x2"]).unwrap();
        match e.root() {
            Node::Binary(BinOp::Add, lhs, rhs) => {
                assert!(matches!(**lhs, Node::Binary(BinOp::Pow, _, _)));
                assert!(matches!(**rhs, Node::Call(Func::Exp, _)));
            }
            other => panic!("unexpected root {other:?}"),
        }
    }

    #[test]
    fn dangling_operator_reports_end_offset() {
        let err = parse("1 +", &["x1"]).unwrap_err();
        assert!(
            matches!(err, ExprError::Syntax { offset: 3, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // -x^2 is -(x^2)
        let e = parse("-x^2", &["x"]).unwrap();
        assert!(
            matches!(e.root(), Node::Neg(inner) if matches!(**inner, Node::Binary(BinOp::Pow, _, _)))
        );
        // 2^3^2 is 2^(3^2)
        let e = parse("2^3^2", &["x"]).unwrap();
        match e.root() {
            Node::Binary(BinOp::Pow, lhs, rhs) => {
                assert_eq!(**lhs, Node::Number(2.0));
                assert!(matches!(**rhs, Node::Binary(BinOp::Pow, _, _)));
            }
            other => panic!("{other:?}"),
        }
        // a - b - c is (a - b) - c
        let e = parse("x - 1 - 2", &["x"]).unwrap();
        match e.root() {
            Node::Binary(BinOp::Sub, lhs, rhs) => {
                assert!(matches!(**lhs, Node::Binary(BinOp::Sub, _, _)));
                assert_eq!(**rhs, Node::Number(2.0));
            }
            other => panic!("{other:?}"),
        }
        // exponent may carry a unary minus
        assert!(parse("x^-2", &["x"]).is_ok());
    }

    #[test]
    fn identifiers_and_functions() {
        assert_eq!(
            parse("z + 1", &["x", "y"]).unwrap_err(),
            ExprError::UnknownIdentifier {
                name: "z".into(),
                offset: 0
            }
        );
        assert_eq!(
            parse("2*asin(x)", &["x"]).unwrap_err(),
            ExprError::UnknownFunction {
                name: "asin".into(),
                offset: 2
            }
        );
        let e = parse("-sin(pi*y)/2", &["x", "y"]).unwrap();
        assert!(!e.is_constant());
    }

    #[test]
    fn numbers() {
        for (src, v) in [
            ("1.5", 1.5),
            ("2e3", 2000.0),
            ("2.5E-1", 0.25),
            (".5", 0.5),
            ("7.", 7.0),
        ] {
            assert_eq!(
                *parse(src, &["x"]).unwrap().root(),
                Node::Number(v),
                "{src}"
            );
        }
        assert!(matches!(
            parse("1e999", &["x"]),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
        // `2e` is a literal followed by the constant e, which is not implicit multiplication
        assert!(matches!(
            parse("2e", &["x"]),
            Err(ExprError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse(".", &["x"]),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse("", &["x"]),
            Err(ExprError::Syntax { offset: 0, .. })
        ));
        assert!(matches!(
            parse("   ", &["x"]),
            Err(ExprError::Syntax { .. })
        ));
        assert!(matches!(
            parse("(x", &["x"]),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("x)", &["x"]),
            Err(ExprError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse("x # 2", &["x"]),
            Err(ExprError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse("sin x", &["x"]),
            Err(ExprError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse("x +* 2", &["x"]),
            Err(ExprError::Syntax { offset: 3, .. })
        ));
    }
}
