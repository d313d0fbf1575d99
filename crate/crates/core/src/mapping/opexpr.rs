use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexer::{lex, Mode, Spanned, Tok};
use super::ExprError;
use crate::wsdl::ServiceDescription;

/// Which substituent operations replace one substituted operation.
///
/// `And`/`Or` nodes always have at least two children and never a child of
/// their own kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperationExpr {
    Ref(String),
    And(Vec<OperationExpr>),
    Or(Vec<OperationExpr>),
}

impl OperationExpr {
    /// Referenced operation names, first occurrence order, without repeats.
    pub fn operations(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Self::Ref(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            Self::And(xs) | Self::Or(xs) => xs.iter().for_each(|x| x.collect(out)),
        }
    }

    /// Runtime reading of the connectives, kept as plan metadata only.
    pub fn semantics(&self) -> &'static str {
        match self {
            Self::Ref(_) => "invoke",
            Self::And(_) => "invoke all, merge outputs",
            Self::Or(_) => "preference-order fallback",
        }
    }
}

impl fmt::Display for OperationExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ref(name) => f.write_str(name),
            Self::Or(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" OR ")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Self::And(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" AND ")?;
                    }
                    match x {
                        Self::Or(_) => write!(f, "({x})")?,
                        _ => write!(f, "{x}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.at]
    }

    fn keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expr(&mut self) -> Result<OperationExpr, ExprError> {
        let mut terms = vec![self.term()?];
        while self.keyword("OR") {
            self.at += 1;
            terms.push(self.term()?);
        }
        Ok(join(terms, OperationExpr::Or))
    }

    fn term(&mut self) -> Result<OperationExpr, ExprError> {
        let mut factors = vec![self.factor()?];
        while self.keyword("AND") {
            self.at += 1;
            factors.push(self.factor()?);
        }
        Ok(join(factors, OperationExpr::And))
    }

    fn factor(&mut self) -> Result<OperationExpr, ExprError> {
        let Spanned { tok, pos } = self.peek().clone();
        match tok {
            Tok::LParen => {
                self.at += 1;
                let inner = self.expr()?;
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
            Tok::Ident(name) if name != "AND" && name != "OR" => {
                self.at += 1;
                Ok(OperationExpr::Ref(name))
            }
            other => Err(ExprError::syntax(
                pos,
                format!("expected operation name or '(', found {}", other.describe()),
            )),
        }
    }
}

/// Builds an n-ary node, splicing in children of the same connective.
fn join(items: Vec<OperationExpr>, make: fn(Vec<OperationExpr>) -> OperationExpr) -> OperationExpr {
    if items.len() == 1 {
        return items.into_iter().next().unwrap();
    }
    let probe = make(Vec::new());
    let mut flat = Vec::new();
    for item in items {
        match (item, &probe) {
            (OperationExpr::And(xs), OperationExpr::And(_)) | (OperationExpr::Or(xs), OperationExpr::Or(_)) => {
                flat.extend(xs)
            }
            (other, _) => flat.push(other),
        }
    }
    make(flat)
}

/// Parses without checking names against a service.
pub fn parse_operation_expr_syntax(text: &str) -> Result<OperationExpr, ExprError> {
    let mut p = Parser {
        toks: lex(text, Mode::Operations)?,
        at: 0,
    };
    let expr = p.expr()?;
    match &p.peek().tok {
        Tok::End => Ok(expr),
        other => Err(ExprError::syntax(
            p.peek().pos,
            format!("expected AND, OR or end of input, found {}", other.describe()),
        )),
    }
}

/// Parses `text` and resolves every name against `substituent`'s operations
/// (case-sensitive).
pub fn parse_operation_expr(text: &str, substituent: &ServiceDescription) -> Result<OperationExpr, ExprError> {
    let expr = parse_operation_expr_syntax(text)?;
    for name in expr.operations() {
        if substituent.operation(name).is_none() {
            let position = lex(text, Mode::Operations)
                .ok()
                .and_then(|toks| toks.into_iter().find(|t| t.tok == Tok::Ident(name.to_string())))
                .map_or(0, |t| t.pos);
            return Err(ExprError::UnknownOperation {
                name: name.to_string(),
                position,
            });
        }
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wsdl::Operation;
    use OperationExpr::*;

    fn r(s: &str) -> OperationExpr {
        Ref(s.into())
    }

    #[test]
    fn single_ref() {
        assert_eq!(parse_operation_expr_syntax("getCity").unwrap(), r("getCity"));
    }

    #[test]
    fn and_binds_tighter() {
        assert_eq!(
            parse_operation_expr_syntax("getCity AND getTemp OR getAll").unwrap(),
            Or(vec![And(vec![r("getCity"), r("getTemp")]), r("getAll")])
        );
        assert_eq!(
            parse_operation_expr_syntax("a OR b AND c").unwrap(),
            Or(vec![r("a"), And(vec![r("b"), r("c")])])
        );
    }

    #[test]
    fn parentheses_and_flattening() {
        assert_eq!(
            parse_operation_expr_syntax("(a OR b) AND c AND (d AND e)").unwrap(),
            And(vec![Or(vec![r("a"), r("b")]), r("c"), r("d"), r("e")])
        );
        assert_eq!(parse_operation_expr_syntax("((a))").unwrap(), r("a"));
    }

    #[test]
    fn dangling_and() {
        let err = parse_operation_expr_syntax("getCity AND").unwrap_err();
        assert_eq!(err.position(), Some(11));
        assert!(err.to_string().contains("end of input"), "{err}");
    }

    #[test]
    fn other_syntax_errors() {
        assert!(parse_operation_expr_syntax("").is_err());
        assert!(parse_operation_expr_syntax("a b").is_err());
        assert!(parse_operation_expr_syntax("(a").is_err());
        assert!(parse_operation_expr_syntax("a and b").is_err());
        assert!(parse_operation_expr_syntax("a + b").is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for text in ["a", "a AND b", "a OR b AND c", "(a OR b) AND c", "a AND (b OR c) AND d OR e"] {
            let e = parse_operation_expr_syntax(text).unwrap();
            assert_eq!(e.to_string(), text);
            assert_eq!(parse_operation_expr_syntax(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn names_resolve_case_sensitively() {
        let svc = ServiceDescription::from_operations(
            "s",
            "urn:s",
            vec![Operation::from_parts("getCity", ["x"], ["y"])],
        );
        assert!(parse_operation_expr("getCity", &svc).is_ok());
        let err = parse_operation_expr("getCity OR GetCity", &svc).unwrap_err();
        assert_eq!(
            err,
            ExprError::UnknownOperation {
                name: "GetCity".into(),
                position: 11
            }
        );
    }

    #[test]
    fn operations_listed_once() {
        let e = parse_operation_expr_syntax("a AND b OR a").unwrap();
        assert_eq!(e.operations(), ["a", "b"]);
    }
}
