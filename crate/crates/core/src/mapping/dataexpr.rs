use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexer::{lex, Mode, Spanned, Tok};
use super::ExprError;
use crate::text::Sentence;
use crate::wsdl::DataSet;

/// Numbers at or above this magnitude may be rendered in exponent form.
pub const PLAIN_RENDERING_LIMIT: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Concat,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Concat => 1,
            BinOp::Add | BinOp::Sub => 2,
            BinOp::Mul | BinOp::Div => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Concat => "concat",
        }
    }

    pub fn is_arithmetic(self) -> bool {
        self != BinOp::Concat
    }
}

/// Reference to a flattened leaf, optionally qualified by operation name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathRef {
    pub operation: Option<String>,
    /// Leaf key: the path sentence's words joined by spaces.
    pub key: String,
}

impl PathRef {
    pub fn new(key: &str) -> Self {
        Self {
            operation: None,
            key: Sentence::new(key).text(),
        }
    }

    pub fn qualified(operation: &str, key: &str) -> Self {
        Self {
            operation: Some(operation.to_string()),
            key: Sentence::new(key).text(),
        }
    }
}

impl fmt::Display for PathRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.operation {
            Some(op) => write!(f, "<{op}: {}>", self.key),
            None => write!(f, "<{}>", self.key),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataExpr {
    Path(PathRef),
    Number(f64),
    Text(String),
    Binary {
        op: BinOp,
        lhs: Box<DataExpr>,
        rhs: Box<DataExpr>,
    },
}

impl DataExpr {
    pub fn binary(op: BinOp, lhs: DataExpr, rhs: DataExpr) -> Self {
        Self::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Self::Binary { op, .. } => op.precedence(),
            _ => u8::MAX,
        }
    }

    pub fn paths(&self) -> Vec<&PathRef> {
        let mut out = Vec::new();
        self.walk_paths(&mut out);
        out
    }

    fn walk_paths<'a>(&'a self, out: &mut Vec<&'a PathRef>) {
        match self {
            Self::Path(p) => out.push(p),
            Self::Binary { lhs, rhs, .. } => {
                lhs.walk_paths(out);
                rhs.walk_paths(out);
            }
            _ => {}
        }
    }

    /// Operands of arithmetic operators that are statically text: string
    /// literals, concatenations, and leaves `is_numeric` reports as non-numeric.
    pub fn type_clashes(&self, is_numeric: &dyn Fn(&PathRef) -> Option<bool>) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_clashes(is_numeric, &mut out);
        out
    }

    fn is_text(&self, is_numeric: &dyn Fn(&PathRef) -> Option<bool>) -> bool {
        match self {
            Self::Text(_) => true,
            Self::Number(_) => false,
            Self::Path(p) => is_numeric(p) == Some(false),
            Self::Binary { op, .. } => *op == BinOp::Concat,
        }
    }

    fn collect_clashes(&self, is_numeric: &dyn Fn(&PathRef) -> Option<bool>, out: &mut Vec<String>) {
        if let Self::Binary { op, lhs, rhs } = self {
            if op.is_arithmetic() {
                for side in [lhs, rhs] {
                    if side.is_text(is_numeric) {
                        out.push(format!("'{}' applied to non-numeric {side}", op.symbol()));
                    }
                }
            }
            lhs.collect_clashes(is_numeric, out);
            rhs.collect_clashes(is_numeric, out);
        }
    }
}

/// Shortest decimal form that reads back to the same value.
fn render_literal(n: f64) -> String {
    format!("{n}")
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl fmt::Display for DataExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Path(p) => write!(f, "{p}"),
            Self::Number(n) => f.write_str(&render_literal(*n)),
            Self::Text(s) => f.write_str(&quote(s)),
            Self::Binary { op, lhs, rhs } => {
                let p = op.precedence();
                if lhs.precedence() < p {
                    write!(f, "({lhs})")?;
                } else {
                    write!(f, "{lhs}")?;
                }
                write!(f, " {} ", op.symbol())?;
                // operators are left-associative: an equal-precedence right operand needs parentheses
                if rhs.precedence() <= p {
                    write!(f, "({rhs})")
                } else {
                    write!(f, "{rhs}")
                }
            }
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    refs: Vec<(PathRef, usize)>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn is_concat(&self) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == "concat")
    }

    fn concat(&mut self) -> Result<DataExpr, ExprError> {
        let mut lhs = self.additive()?;
        while self.is_concat() {
            self.at += 1;
            let rhs = self.additive()?;
            lhs = DataExpr::binary(BinOp::Concat, lhs, rhs);
        }
        Ok(lhs)
    }

    fn additive(&mut self) -> Result<DataExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.term()?;
            lhs = DataExpr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<DataExpr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.at += 1;
            let rhs = self.factor()?;
            lhs = DataExpr::binary(op, lhs, rhs);
        }
    }

    fn factor(&mut self) -> Result<DataExpr, ExprError> {
        let Spanned { tok, pos } = self.peek().clone();
        self.at += 1;
        match tok {
            Tok::Number(n) => Ok(DataExpr::Number(n)),
            Tok::Minus => match self.peek().tok {
                Tok::Number(n) => {
                    self.at += 1;
                    Ok(DataExpr::Number(-n))
                }
                ref other => Err(ExprError::syntax(
                    self.peek().pos,
                    format!("expected number after unary '-', found {}", other.describe()),
                )),
            },
            Tok::Str(s) => Ok(DataExpr::Text(s)),
            Tok::Path(body) => {
                let path = parse_path(&body, pos)?;
                self.refs.push((path.clone(), pos));
                Ok(DataExpr::Path(path))
            }
            Tok::LParen => {
                let inner = self.concat()?;
                match self.peek().tok {
                    Tok::RParen => {
                        self.at += 1;
                        Ok(inner)
                    }
                    ref other => Err(ExprError::syntax(
                        self.peek().pos,
                        format!("expected ')', found {}", other.describe()),
                    )),
                }
            }
            other => Err(ExprError::syntax(
                pos,
                format!("expected a value, path or '(', found {}", other.describe()),
            )),
        }
    }
}

fn parse_path(body: &str, pos: usize) -> Result<PathRef, ExprError> {
    let (operation, key) = match body.split_once(':') {
        Some((op, key)) => {
            let op = op.trim();
            if op.is_empty() {
                return Err(ExprError::syntax(pos, "empty operation qualifier"));
            }
            (Some(op.to_string()), key)
        }
        None => (None, body),
    };
    let key = Sentence::new(key).text();
    if key.is_empty() {
        return Err(ExprError::syntax(pos, "empty path reference"));
    }
    Ok(PathRef { operation, key })
}

/// Parses `text`, returning the tree and every path reference with its position.
pub fn parse_data_expr_refs(text: &str) -> Result<(DataExpr, Vec<(PathRef, usize)>), ExprError> {
    let mut p = Parser {
        toks: lex(text, Mode::Data)?,
        at: 0,
        refs: Vec::new(),
    };
    let expr = p.concat()?;
    match &p.peek().tok {
        Tok::End => Ok((expr, p.refs)),
        other => Err(ExprError::syntax(
            p.peek().pos,
            format!("expected an operator or end of input, found {}", other.describe()),
        )),
    }
}

pub fn parse_data_expr_syntax(text: &str) -> Result<DataExpr, ExprError> {
    parse_data_expr_refs(text).map(|(e, _)| e)
}

/// Parses `text` and resolves every (unqualified) reference against `source`.
pub fn parse_data_expr(text: &str, source: &DataSet) -> Result<DataExpr, ExprError> {
    let (expr, refs) = parse_data_expr_refs(text)?;
    for (r, position) in refs {
        if source.leaf(&r.key).is_none() {
            return Err(ExprError::UnresolvedPath {
                path: r.to_string(),
                position,
            });
        }
    }
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(n) => Some(*n),
            Value::Text(_) => None,
        }
    }
}

/// Plain decimal below [`PLAIN_RENDERING_LIMIT`], exponent form above.
pub fn format_number(n: f64) -> String {
    if n.abs() >= PLAIN_RENDERING_LIMIT {
        format!("{n:e}")
    } else {
        format!("{n}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => f.write_str(&format_number(*n)),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no value bound to {0}")]
    MissingBinding(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("arithmetic on non-numeric value {0:?}")]
    NotNumeric(String),
    #[error("result is not a finite number")]
    NotFinite,
}

/// Values of leaves, keyed by leaf key or by `operation: key`.
pub type Bindings = HashMap<String, Value>;

fn lookup<'a>(bindings: &'a Bindings, r: &PathRef) -> Option<&'a Value> {
    if let Some(op) = &r.operation {
        if let Some(v) = bindings.get(&format!("{op}: {}", r.key)) {
            return Some(v);
        }
    }
    bindings.get(&r.key)
}

pub fn evaluate(expr: &DataExpr, bindings: &Bindings) -> Result<Value, EvalError> {
    match expr {
        DataExpr::Number(n) => Ok(Value::Number(*n)),
        DataExpr::Text(s) => Ok(Value::Text(s.clone())),
        DataExpr::Path(r) => lookup(bindings, r)
            .cloned()
            .ok_or_else(|| EvalError::MissingBinding(r.to_string())),
        DataExpr::Binary { op, lhs, rhs } => {
            let a = evaluate(lhs, bindings)?;
            let b = evaluate(rhs, bindings)?;
            if *op == BinOp::Concat {
                return Ok(Value::Text(format!("{a}{b}")));
            }
            let num = |v: &Value| v.as_number().ok_or_else(|| EvalError::NotNumeric(v.to_string()));
            let (x, y) = (num(&a)?, num(&b)?);
            let r = match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div if y == 0.0 => return Err(EvalError::DivisionByZero),
                BinOp::Div => x / y,
                BinOp::Concat => unreachable!(),
            };
            if r.is_finite() {
                Ok(Value::Number(r))
            } else {
                Err(EvalError::NotFinite)
            }
        }
    }
}
