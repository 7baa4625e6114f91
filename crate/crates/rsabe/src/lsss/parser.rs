//! Policy text parser.
//!
//! Grammar (keywords case-insensitive):
//!   expr   := term ('OR' term)*
//!   term   := factor ('AND' factor)*
//!   factor := NAME | INT 'of' '(' expr (',' expr)+ ')' | '(' expr ')'
//!   NAME   := [A-Za-z_][A-Za-z0-9_]*

use super::PolicyExpr;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Or,
    And,
    Of,
    Int(u64),
    Name(String),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::PolicyParse {
        line,
        column,
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut column = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, column);
        let mut bump = |c: char, line: &mut usize, column: &mut usize| {
            if c == '\n' {
                *line += 1;
                *column = 1;
            } else {
                *column += 1;
            }
        };
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut column);
            }
            '(' => {
                chars.next();
                bump(c, &mut line, &mut column);
                out.push(Spanned {
                    tok: Tok::LParen,
                    line: tline,
                    column: tcol,
                });
            }
            ')' => {
                chars.next();
                bump(c, &mut line, &mut column);
                out.push(Spanned {
                    tok: Tok::RParen,
                    line: tline,
                    column: tcol,
                });
            }
            ',' => {
                chars.next();
                bump(c, &mut line, &mut column);
                out.push(Spanned {
                    tok: Tok::Comma,
                    line: tline,
                    column: tcol,
                });
            }
            c if c.is_ascii_digit() => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        text.push(d);
                        chars.next();
                        bump(d, &mut line, &mut column);
                    } else {
                        break;
                    }
                }
                let value: u64 = text
                    .parse()
                    .map_err(|_| err(tline, tcol, format!("integer `{text}` out of range")))?;
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: tline,
                    column: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut text = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        text.push(d);
                        chars.next();
                        bump(d, &mut line, &mut column);
                    } else {
                        break;
                    }
                }
                let tok = match text.to_ascii_lowercase().as_str() {
                    "or" => Tok::Or,
                    "and" => Tok::And,
                    "of" => Tok::Of,
                    _ => Tok::Name(text),
                };
                out.push(Spanned {
                    tok,
                    line: tline,
                    column: tcol,
                });
            }
            other => return Err(err(tline, tcol, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|s| (s.line, s.column))
            .unwrap_or((self.end_line, self.end_column))
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (line, column) = self.here();
        match self.next() {
            Some(s) if s.tok == want => Ok(()),
            Some(s) => Err(err(s.line, s.column, format!("expected {what}"))),
            None => Err(err(line, column, format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<PolicyExpr> {
        let mut terms = vec![self.term()?];
        while matches!(self.peek(), Some(s) if s.tok == Tok::Or) {
            self.next();
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PolicyExpr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<PolicyExpr> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek(), Some(s) if s.tok == Tok::And) {
            self.next();
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PolicyExpr::And(factors)
        })
    }

    fn factor(&mut self) -> Result<PolicyExpr> {
        let (line, column) = self.here();
        match self.next() {
            Some(Spanned {
                tok: Tok::Name(name),
                ..
            }) => Ok(PolicyExpr::Leaf(name)),
            Some(Spanned {
                tok: Tok::Int(k),
                line,
                column,
            }) => {
                self.expect(Tok::Of, "`of` after threshold count")?;
                self.expect(Tok::LParen, "`(`")?;
                let mut children = vec![self.expr()?];
                while matches!(self.peek(), Some(s) if s.tok == Tok::Comma) {
                    self.next();
                    children.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                if children.len() < 2 {
                    return Err(err(line, column, "threshold needs at least two branches"));
                }
                if k == 0 || k as usize > children.len() {
                    return Err(err(
                        line,
                        column,
                        format!("threshold {k} outside 1..={}", children.len()),
                    ));
                }
                Ok(PolicyExpr::Threshold {
                    k: k as u32,
                    children,
                })
            }
            Some(Spanned {
                tok: Tok::LParen, ..
            }) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(s) => Err(err(s.line, s.column, "expected attribute, threshold or `(`")),
            None => Err(err(line, column, "expected expression, found end of input")),
        }
    }
}

/// Parse policy text into an AST; errors carry line and column.
pub fn parse_policy(input: &str) -> Result<PolicyExpr> {
    let toks = lex(input)?;
    let lines = input.lines().count().max(1);
    let last_len = input.lines().last().map_or(0, str::len);
    let mut p = Parser {
        toks,
        pos: 0,
        end_line: lines,
        end_column: last_len + 1,
    };
    let expr = p.expr()?;
    if let Some(s) = p.peek() {
        return Err(err(s.line, s.column, "unexpected trailing input"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_reference_policy() {
        let p = parse_policy("(a AND b) OR 2of(c,d,e)").unwrap();
        match &p {
            PolicyExpr::Or(cs) => {
                assert!(matches!(&cs[0], PolicyExpr::And(xs) if xs.len() == 2));
                assert!(
                    matches!(&cs[1], PolicyExpr::Threshold { k: 2, children } if children.len() == 3)
                );
            }
            other => panic!("unexpected shape {other:?}"),
        }
        // keywords are case-insensitive; `of` may touch the integer
        assert_eq!(parse_policy("a and b").unwrap(), parse_policy("a AND b").unwrap());
        assert_eq!(
            parse_policy("2 OF (a, b)").unwrap(),
            parse_policy("2of(a,b)").unwrap()
        );
    }

    #[test]
    fn precedence_and_over_or() {
        let p = parse_policy("a OR b AND c").unwrap();
        assert_eq!(
            p,
            PolicyExpr::Or(vec![
                PolicyExpr::Leaf("a".into()),
                PolicyExpr::And(vec![PolicyExpr::Leaf("b".into()), PolicyExpr::Leaf("c".into())]),
            ])
        );
    }

    #[test]
    fn reports_position_of_errors() {
        match parse_policy("(a AND") {
            Err(Error::PolicyParse { line, column, .. }) => {
                assert_eq!(line, 1);
                assert_eq!(column, 7);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_policy("a OR\n  AND b") {
            Err(Error::PolicyParse { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_policy("").is_err());
        assert!(parse_policy("a b").is_err());
        assert!(parse_policy("5 of (a, b)").is_err());
        assert!(parse_policy("1 of (a)").is_err());
        assert!(parse_policy("a AND 9").is_err());
    }

    #[test]
    fn display_round_trips() {
        for text in ["a", "(a AND b) OR c", "2 of (a, b AND c, d)"] {
            let ast = parse_policy(text).unwrap();
            let back = parse_policy(&ast.to_string()).unwrap();
            assert_eq!(ast, back);
        }
    }
}
