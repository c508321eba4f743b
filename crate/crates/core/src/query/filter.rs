//! Boolean filter expressions over table columns.
//!
//! ```text
//! expr       := and ('|' and)*
//! and        := term ('&' term)*
//! term       := '!' term | '(' expr ')' | comparison
//! comparison := ident op literal | ident 'in' '[' literal (',' literal)* ']'
//! op         := '=' | '==' | '!=' | '<>' | '<' | '<=' | '>' | '>='
//! literal    := "text" | number | Inf | TRUE | FALSE
//! ```
//!
//! Comparisons against a missing cell are false, so `!(x > 0)` is true on
//! rows where `x` is missing.

use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::format::number_text;
use crate::table::{parse_date, Column, ColumnData, ColumnKind, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            CompareOp::Eq => ord == Ordering::Equal,
            CompareOp::Ne => ord != Ordering::Equal,
            CompareOp::Lt => ord == Ordering::Less,
            CompareOp::Le => ord != Ordering::Greater,
            CompareOp::Gt => ord == Ordering::Greater,
            CompareOp::Ge => ord != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Number(f64),
    Text(String),
    Bool(bool),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(x) => f.write_str(&number_text(*x)),
            Literal::Bool(true) => f.write_str("TRUE"),
            Literal::Bool(false) => f.write_str("FALSE"),
            Literal::Text(s) => {
                f.write_str("\"")?;
                for ch in s.chars() {
                    match ch {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterExpr {
    Compare {
        variable: String,
        op: CompareOp,
        literal: Literal,
    },
    InSet {
        variable: String,
        values: Vec<Literal>,
    },
    And(Box<FilterExpr>, Box<FilterExpr>),
    Or(Box<FilterExpr>, Box<FilterExpr>),
    Not(Box<FilterExpr>),
}

fn is_plain_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_' || c == '.')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '.')
        && !matches!(s, "in" | "TRUE" | "FALSE" | "true" | "false" | "Inf")
}

fn write_ident(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if is_plain_ident(s) {
        f.write_str(s)
    } else {
        write!(f, "`{}`", s.replace('`', "``"))
    }
}

impl fmt::Display for FilterExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = |f: &mut fmt::Formatter<'_>, e: &FilterExpr, wrap: bool| {
            if wrap {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            FilterExpr::Compare {
                variable,
                op,
                literal,
            } => {
                write_ident(f, variable)?;
                write!(f, " {} {literal}", op.symbol())
            }
            FilterExpr::InSet { variable, values } => {
                write_ident(f, variable)?;
                f.write_str(" in [")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
            FilterExpr::And(l, r) => {
                paren(f, l, matches!(**l, FilterExpr::Or(..)))?;
                f.write_str(" & ")?;
                paren(f, r, matches!(**r, FilterExpr::Or(..) | FilterExpr::And(..)))
            }
            FilterExpr::Or(l, r) => {
                paren(f, l, false)?;
                f.write_str(" | ")?;
                paren(f, r, matches!(**r, FilterExpr::Or(..)))
            }
            FilterExpr::Not(inner) => {
                f.write_str("!")?;
                paren(f, inner, !matches!(**inner, FilterExpr::Not(..)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Bool(bool),
    Op(CompareOp),
    In,
    And,
    Or,
    Not,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Unknown,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self, ahead: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(ahead)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char(0) {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    /// Next token with its starting byte offset.
    fn next(&mut self) -> Result<(usize, Tok)> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.peek_char(0) else {
            return Ok((start, Tok::End));
        };
        let two = |lx: &mut Self, t: Tok| {
            lx.pos += 2;
            Ok((start, t))
        };
        let one = |lx: &mut Self, t: Tok| {
            lx.pos += c.len_utf8();
            Ok((start, t))
        };
        let next = self.peek_char(1);
        match c {
            '(' => one(self, Tok::LParen),
            ')' => one(self, Tok::RParen),
            '[' => one(self, Tok::LBracket),
            ']' => one(self, Tok::RBracket),
            ',' => one(self, Tok::Comma),
            '&' if next == Some('&') => two(self, Tok::And),
            '&' => one(self, Tok::And),
            '|' if next == Some('|') => two(self, Tok::Or),
            '|' => one(self, Tok::Or),
            '!' if next == Some('=') => two(self, Tok::Op(CompareOp::Ne)),
            '!' => one(self, Tok::Not),
            '=' if next == Some('=') => two(self, Tok::Op(CompareOp::Eq)),
            '=' => one(self, Tok::Op(CompareOp::Eq)),
            '<' if next == Some('=') => two(self, Tok::Op(CompareOp::Le)),
            '<' if next == Some('>') => two(self, Tok::Op(CompareOp::Ne)),
            '<' => one(self, Tok::Op(CompareOp::Lt)),
            '>' if next == Some('=') => two(self, Tok::Op(CompareOp::Ge)),
            '>' => one(self, Tok::Op(CompareOp::Gt)),
            '≠' => one(self, Tok::Op(CompareOp::Ne)),
            '≤' => one(self, Tok::Op(CompareOp::Le)),
            '≥' => one(self, Tok::Op(CompareOp::Ge)),
            '"' | '\'' => self.string(c),
            '`' => self.quoted_ident(),
            c if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => self.number(),
            c if c.is_alphabetic() || c == '_' => {
                let end = self.src[start..]
                    .char_indices()
                    .find(|(_, ch)| !(ch.is_alphanumeric() || *ch == '_' || *ch == '.'))
                    .map_or(self.src.len(), |(i, _)| start + i);
                self.pos = end;
                let word = &self.src[start..end];
                Ok((
                    start,
                    match word {
                        "in" => Tok::In,
                        "TRUE" | "true" => Tok::Bool(true),
                        "FALSE" | "false" => Tok::Bool(false),
                        "Inf" => Tok::Number(f64::INFINITY),
                        w => Tok::Ident(w.to_string()),
                    },
                ))
            }
            _ => Ok((start, Tok::Unknown)),
        }
    }

    fn string(&mut self, quote: char) -> Result<(usize, Tok)> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(c) = self.peek_char(0) else {
                return Err(Error::Syntax {
                    offset: self.pos,
                    expected: vec![format!("closing {quote}")],
                });
            };
            self.pos += c.len_utf8();
            match c {
                '\\' => {
                    let Some(esc) = self.peek_char(0) else { continue };
                    self.pos += esc.len_utf8();
                    out.push(esc);
                }
                c if c == quote => return Ok((start, Tok::Str(out))),
                c => out.push(c),
            }
        }
    }

    fn quoted_ident(&mut self) -> Result<(usize, Tok)> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(c) = self.peek_char(0) else {
                return Err(Error::Syntax {
                    offset: self.pos,
                    expected: vec!["closing `".into()],
                });
            };
            self.pos += c.len_utf8();
            if c == '`' {
                if self.peek_char(0) == Some('`') {
                    self.pos += 1;
                    out.push('`');
                    continue;
                }
                return Ok((start, Tok::Ident(out)));
            }
            out.push(c);
        }
    }

    fn number(&mut self) -> Result<(usize, Tok)> {
        let start = self.pos;
        let rest = &self.src[start..];
        for (text, v) in [("-Inf", f64::NEG_INFINITY), ("+Inf", f64::INFINITY)] {
            if rest.starts_with(text) {
                self.pos += text.len();
                return Ok((start, Tok::Number(v)));
            }
        }
        let end = rest
            .char_indices()
            .skip(1)
            .find(|&(i, c)| {
                let prev = rest[..i].chars().last();
                !(c.is_ascii_digit()
                    || c == '.'
                    || c == 'e'
                    || c == 'E'
                    || ((c == '-' || c == '+') && matches!(prev, Some('e' | 'E'))))
            })
            .map_or(rest.len(), |(i, _)| i);
        let text = &rest[..end];
        match crate::table::parse_number(text) {
            Some(crate::table::NumberToken::Value(v)) => {
                self.pos += end;
                Ok((start, Tok::Number(v)))
            }
            _ => Ok((start, Tok::Unknown)),
        }
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

fn syntax(offset: usize, expected: &[&str]) -> Error {
    Error::Syntax {
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<Tok> {
        let (offset, tok) = self.lexer.next()?;
        self.offset = offset;
        Ok(std::mem::replace(&mut self.tok, tok))
    }

    fn expr(&mut self) -> Result<FilterExpr> {
        let mut left = self.and()?;
        while self.tok == Tok::Or {
            self.bump()?;
            let right = self.and()?;
            left = FilterExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<FilterExpr> {
        let mut left = self.term()?;
        while self.tok == Tok::And {
            self.bump()?;
            let right = self.term()?;
            left = FilterExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<FilterExpr> {
        match self.tok {
            Tok::Not => {
                self.bump()?;
                Ok(FilterExpr::Not(Box::new(self.term()?)))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return Err(syntax(self.offset, &["')'", "'&'", "'|'"]));
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Ident(_) => self.comparison(),
            _ => Err(syntax(self.offset, &["identifier", "'('", "'!'"])),
        }
    }

    fn comparison(&mut self) -> Result<FilterExpr> {
        let Tok::Ident(variable) = self.bump()? else {
            unreachable!("caller checked for an identifier")
        };
        match self.tok.clone() {
            Tok::Op(op) => {
                self.bump()?;
                let literal = self.literal()?;
                Ok(FilterExpr::Compare {
                    variable,
                    op,
                    literal,
                })
            }
            Tok::In => {
                self.bump()?;
                if self.tok != Tok::LBracket {
                    return Err(syntax(self.offset, &["'['"]));
                }
                self.bump()?;
                let mut values = vec![self.literal()?];
                loop {
                    match self.tok {
                        Tok::Comma => {
                            self.bump()?;
                            values.push(self.literal()?);
                        }
                        Tok::RBracket => {
                            self.bump()?;
                            break;
                        }
                        _ => return Err(syntax(self.offset, &["','", "']'"])),
                    }
                }
                Ok(FilterExpr::InSet { variable, values })
            }
            _ => Err(syntax(self.offset, &["comparison operator", "'in'"])),
        }
    }

    fn literal(&mut self) -> Result<Literal> {
        let lit = match &self.tok {
            Tok::Number(v) => Literal::Number(*v),
            Tok::Str(s) => Literal::Text(s.clone()),
            Tok::Bool(b) => Literal::Bool(*b),
            _ => return Err(syntax(self.offset, &["literal"])),
        };
        self.bump()?;
        Ok(lit)
    }
}

/// Parse a filter expression; errors carry the byte offset and the set of
/// expected tokens.
pub fn parse_filter(source: &str) -> Result<FilterExpr> {
    let mut p = Parser {
        lexer: Lexer { src: source, pos: 0 },
        tok: Tok::End,
        offset: 0,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(syntax(p.offset, &["'&'", "'|'", "end of input"]));
    }
    Ok(e)
}

/// A comparison bound to one column, with the literal converted to the
/// column's value domain.
enum Bound {
    Number(f64),
    Text(String),
    Bool(bool),
    Date(NaiveDate),
}

fn bind(col: &Column, lit: &Literal) -> Result<Bound> {
    let mismatch = || Error::TypeMismatch {
        column: col.name().to_string(),
        message: format!("literal {lit} is not comparable with a {} column", col.kind()),
    };
    match (col.kind(), lit) {
        (ColumnKind::Numeric, Literal::Number(x)) => Ok(Bound::Number(*x)),
        (ColumnKind::Categorical | ColumnKind::Text, Literal::Text(s)) => Ok(Bound::Text(s.clone())),
        (ColumnKind::Logical, Literal::Bool(b)) => Ok(Bound::Bool(*b)),
        (ColumnKind::Date, Literal::Text(s)) => parse_date(s).map(Bound::Date).ok_or_else(mismatch),
        _ => Err(mismatch()),
    }
}

/// Ordering of row `i` relative to the bound literal; `None` when missing.
fn cmp_row(col: &Column, i: usize, b: &Bound) -> Option<Ordering> {
    match (col.data(), b) {
        (ColumnData::Number(v), Bound::Number(x)) => v[i].partial_cmp(x),
        (ColumnData::Text(t), Bound::Text(s)) => t.get(i).map(|v| v.cmp(s.as_str())),
        (ColumnData::Logical(v), Bound::Bool(x)) => v[i].map(|v| v.cmp(x)),
        (ColumnData::Date(v), Bound::Date(x)) => v[i].map(|v| v.cmp(x)),
        _ => None,
    }
}

fn check(table: &Table, expr: &FilterExpr) -> Result<()> {
    match expr {
        FilterExpr::Compare {
            variable, literal, ..
        } => bind(table.column(variable)?, literal).map(|_| ()),
        FilterExpr::InSet { variable, values } => {
            let col = table.column(variable)?;
            values.iter().try_for_each(|v| bind(col, v).map(|_| ()))
        }
        FilterExpr::And(l, r) | FilterExpr::Or(l, r) => {
            check(table, l)?;
            check(table, r)
        }
        FilterExpr::Not(e) => check(table, e),
    }
}

fn eval(table: &Table, expr: &FilterExpr) -> Result<Vec<bool>> {
    let n = table.n_rows();
    Ok(match expr {
        FilterExpr::Compare {
            variable,
            op,
            literal,
        } => {
            let col = table.column(variable)?;
            let b = bind(col, literal)?;
            (0..n)
                .map(|i| cmp_row(col, i, &b).is_some_and(|o| op.holds(o)))
                .collect()
        }
        FilterExpr::InSet { variable, values } => {
            let col = table.column(variable)?;
            let bound = values.iter().map(|v| bind(col, v)).collect::<Result<Vec<_>>>()?;
            (0..n)
                .map(|i| bound.iter().any(|b| cmp_row(col, i, b) == Some(Ordering::Equal)))
                .collect()
        }
        FilterExpr::And(l, r) => {
            let (a, b) = (eval(table, l)?, eval(table, r)?);
            a.into_iter().zip(b).map(|(x, y)| x && y).collect()
        }
        FilterExpr::Or(l, r) => {
            let (a, b) = (eval(table, l)?, eval(table, r)?);
            a.into_iter().zip(b).map(|(x, y)| x || y).collect()
        }
        FilterExpr::Not(e) => eval(table, e)?.into_iter().map(|x| !x).collect(),
    })
}

/// Row mask of `expr` over `table`. Every referenced column and literal is
/// checked before evaluation.
pub fn apply_filter(table: &Table, expr: &FilterExpr) -> Result<Vec<bool>> {
    check(table, expr)?;
    eval(table, expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmp(v: &str, op: CompareOp, l: Literal) -> FilterExpr {
        FilterExpr::Compare {
            variable: v.into(),
            op,
            literal: l,
        }
    }

    #[test]
    fn parses_conjunction() {
        let e = parse_filter("Price > 100 & US = \"Yes\"").unwrap();
        assert_eq!(
            e,
            FilterExpr::And(
                Box::new(cmp("Price", CompareOp::Gt, Literal::Number(100.0))),
                Box::new(cmp("US", CompareOp::Eq, Literal::Text("Yes".into())))
            )
        );
    }

    #[test]
    fn parses_set_and_negation() {
        let e = parse_filter("a in [1,2,3] | !(b = \"x\")").unwrap();
        let FilterExpr::Or(l, r) = e else { panic!("not an Or") };
        assert!(matches!(*l, FilterExpr::InSet { ref values, .. } if values.len() == 3));
        assert!(matches!(*r, FilterExpr::Not(ref inner) if matches!(**inner, FilterExpr::Compare { .. })));
    }

    #[test]
    fn and_binds_tighter() {
        let e = parse_filter("a = 1 | b = 2 & c = 3").unwrap();
        assert!(matches!(e, FilterExpr::Or(_, ref r) if matches!(**r, FilterExpr::And(..))));
    }

    #[test]
    fn syntax_errors_carry_offset() {
        match parse_filter("Price >") {
            Err(Error::Syntax { offset, expected }) => {
                assert_eq!(offset, 7);
                assert_eq!(expected, vec!["literal".to_string()]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_filter("Price ~ 3"), Err(Error::Syntax { offset: 6, .. })));
        assert!(matches!(parse_filter("(a = 1"), Err(Error::Syntax { offset: 6, .. })));
        assert!(parse_filter("a = 1 b").is_err());
        assert!(parse_filter("a = \"open").is_err());
        assert!(parse_filter("").is_err());
    }

    #[test]
    fn operator_spellings() {
        for (src, op) in [
            ("x == 1", CompareOp::Eq),
            ("x != 1", CompareOp::Ne),
            ("x <> 1", CompareOp::Ne),
            ("x ≥ 1", CompareOp::Ge),
            ("x<=1", CompareOp::Le),
        ] {
            assert_eq!(parse_filter(src).unwrap(), cmp("x", op, Literal::Number(1.0)));
        }
        assert_eq!(
            parse_filter("x > -Inf").unwrap(),
            cmp("x", CompareOp::Gt, Literal::Number(f64::NEG_INFINITY))
        );
    }

    #[test]
    fn printer_round_trips() {
        for src in [
            "a = 1 & (b = 2 | c = 3)",
            "a = 1 & (b = 2 & c = 3)",
            "!(x > 2.5) | `odd name` in [\"p\", \"q\\\"r\"]",
            "!!(flag = TRUE)",
        ] {
            let e = parse_filter(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_filter(&printed).unwrap(), e, "{printed}");
        }
    }

    fn hand_table() -> Table {
        Table::new(vec![
            Column::numeric("v", [Some(1.0), Some(-2.0), None, Some(4.0), Some(0.0)]),
            Column::categorical("s", [Some("a"), Some("b"), Some("a"), None, Some("c")]),
        ])
        .unwrap()
    }

    #[test]
    fn missing_never_satisfies() {
        let t = hand_table();
        let m = apply_filter(&t, &parse_filter("v > 0").unwrap()).unwrap();
        assert_eq!(m, [true, false, false, true, false]);
        let m = apply_filter(&t, &parse_filter("!(v > 0)").unwrap()).unwrap();
        assert_eq!(m, [false, true, true, false, true]);
        let m = apply_filter(&t, &parse_filter("s in [\"a\", \"c\"]").unwrap()).unwrap();
        assert_eq!(m, [true, false, true, false, true]);
    }

    #[test]
    fn evaluation_errors() {
        let t = hand_table();
        assert!(matches!(
            apply_filter(&t, &parse_filter("nope = 1").unwrap()),
            Err(Error::UnknownColumn(c)) if c == "nope"
        ));
        assert!(matches!(
            apply_filter(&t, &parse_filter("v = \"1\"").unwrap()),
            Err(Error::TypeMismatch { .. })
        ));
        // checked even on a short-circuit-able branch
        assert!(apply_filter(&t, &parse_filter("v > 0 | s > 3").unwrap()).is_err());
    }
}
