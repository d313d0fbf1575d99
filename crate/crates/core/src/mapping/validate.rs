use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::dataexpr::{parse_data_expr_refs, DataExpr, PathRef};
use super::opexpr::parse_operation_expr;
use super::plan::{MatchingPlan, OperationPlan};
use super::ExprError;
use crate::wsdl::{Leaf, Operation, ServiceDescription};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueKind {
    Syntax,
    UnknownOperation,
    UnknownLeaf,
    UnresolvedPath,
    AmbiguousPath,
    ForeignOperation,
    UncoveredInput,
    UncoveredOutput,
    TypeClash,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub kind: IssueKind,
    /// Substituted operation the entry belongs to.
    pub operation: String,
    /// Where in the plan: `expr`, `inputs/<op>/<leaf>` or `outputs/<leaf>`.
    pub location: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Warning)
    }
}

struct Ctx<'a> {
    report: &'a mut ValidationReport,
    operation: &'a str,
}

impl Ctx<'_> {
    fn push(&mut self, severity: Severity, kind: IssueKind, location: String, position: Option<usize>, message: String) {
        self.report.issues.push(Issue {
            severity,
            kind,
            operation: self.operation.to_string(),
            location,
            position,
            message,
        });
    }

    fn expr_error(&mut self, location: String, e: ExprError) {
        let kind = match e {
            ExprError::Syntax { .. } => IssueKind::Syntax,
            ExprError::UnknownOperation { .. } => IssueKind::UnknownOperation,
            ExprError::UnresolvedPath { .. } => IssueKind::UnresolvedPath,
        };
        self.push(Severity::Error, kind, location, e.position(), e.to_string());
    }
}

/// Checks a plan against both services. Errors block confirmation; warnings
/// (type clashes, unmapped outputs) do not.
pub fn validate_plan(
    plan: &MatchingPlan,
    substituted: &ServiceDescription,
    substituent: &ServiceDescription,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (name, op_plan) in &plan.operations {
        let mut ctx = Ctx {
            report: &mut report,
            operation: name,
        };
        match substituted.operation(name) {
            Some(op) => validate_operation(&mut ctx, op, op_plan, substituent),
            None => ctx.push(
                Severity::Error,
                IssueKind::UnknownOperation,
                "operation".into(),
                None,
                format!("substituted service has no operation {name}"),
            ),
        }
    }
    report
}

fn validate_operation(ctx: &mut Ctx, op: &Operation, plan: &OperationPlan, substituent: &ServiceDescription) {
    let referenced: Vec<&Operation> = match parse_operation_expr(&plan.expr, substituent) {
        Ok(expr) => expr.operations().iter().filter_map(|n| substituent.operation(n)).collect(),
        Err(e) => {
            ctx.expr_error("expr".into(), e);
            Vec::new()
        }
    };
    let is_referenced = |name: &str| referenced.iter().any(|o| o.name == name);

    for (target_name, leaves) in &plan.inputs {
        let location = |leaf: &str| format!("inputs/{target_name}/{leaf}");
        let Some(target) = substituent.operation(target_name) else {
            ctx.push(
                Severity::Error,
                IssueKind::UnknownOperation,
                format!("inputs/{target_name}"),
                None,
                format!("substituent service has no operation {target_name}"),
            );
            continue;
        };
        if !is_referenced(target_name) {
            ctx.push(
                Severity::Error,
                IssueKind::ForeignOperation,
                format!("inputs/{target_name}"),
                None,
                format!("input mapping for {target_name}, which the operation expression does not reference"),
            );
        }
        for (leaf, text) in leaves {
            if target.input.leaf(leaf).is_none() {
                ctx.push(
                    Severity::Error,
                    IssueKind::UnknownLeaf,
                    location(leaf),
                    None,
                    format!("{target_name} has no input leaf '{leaf}'"),
                );
            }
            let resolve = |r: &PathRef| -> Result<&Leaf, (IssueKind, String)> {
                if let Some(q) = &r.operation {
                    if q != &op.name {
                        return Err((
                            IssueKind::UnresolvedPath,
                            format!("{r}: input mappings may only read inputs of {}", op.name),
                        ));
                    }
                }
                op.input
                    .leaf(&r.key)
                    .ok_or_else(|| (IssueKind::UnresolvedPath, format!("{r} is not an input leaf of {}", op.name)))
            };
            check_expression(ctx, location(leaf), text, &resolve);
        }
    }

    for target in &referenced {
        let mapped = plan.inputs.get(&target.name);
        let missing: Vec<String> = target
            .input
            .leaves
            .iter()
            .filter(|l| l.required && !mapped.is_some_and(|m| m.contains_key(&l.key())))
            .map(Leaf::key)
            .collect();
        if !missing.is_empty() {
            ctx.push(
                Severity::Error,
                IssueKind::UncoveredInput,
                format!("inputs/{}", target.name),
                None,
                format!("uncovered input leaves of {}: {}", target.name, missing.join(", ")),
            );
        }
    }

    for (leaf, text) in &plan.outputs {
        let location = format!("outputs/{leaf}");
        if op.output.leaf(leaf).is_none() {
            ctx.push(
                Severity::Error,
                IssueKind::UnknownLeaf,
                location.clone(),
                None,
                format!("{} has no output leaf '{leaf}'", op.name),
            );
        }
        let resolve = |r: &PathRef| -> Result<&Leaf, (IssueKind, String)> {
            if let Some(q) = &r.operation {
                let Some(source) = referenced.iter().find(|o| &o.name == q) else {
                    return Err((
                        IssueKind::ForeignOperation,
                        format!("{r}: {q} is not referenced by the operation expression"),
                    ));
                };
                return source
                    .output
                    .leaf(&r.key)
                    .ok_or_else(|| (IssueKind::UnresolvedPath, format!("{r} is not an output leaf of {q}")));
            }
            let hits: Vec<(&str, &Leaf)> = referenced
                .iter()
                .filter_map(|o| o.output.leaf(&r.key).map(|l| (o.name.as_str(), l)))
                .collect();
            match hits.as_slice() {
                [] => Err((
                    IssueKind::UnresolvedPath,
                    format!("{r} is not an output leaf of any referenced operation"),
                )),
                [(_, l)] => Ok(*l),
                many => Err((
                    IssueKind::AmbiguousPath,
                    format!(
                        "{r} matches outputs of {}; qualify it as <operation: path>",
                        many.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
                    ),
                )),
            }
        };
        check_expression(ctx, location, text, &resolve);
    }

    let unmapped: BTreeSet<String> = op
        .output
        .leaves
        .iter()
        .map(Leaf::key)
        .filter(|k| !plan.outputs.contains_key(k))
        .collect();
    if !unmapped.is_empty() && !referenced.is_empty() {
        ctx.push(
            Severity::Warning,
            IssueKind::UncoveredOutput,
            "outputs".into(),
            None,
            format!(
                "output leaves of {} without a mapping: {}",
                op.name,
                unmapped.into_iter().collect::<Vec<_>>().join(", ")
            ),
        );
    }
}

type Resolver<'r, 'l> = &'r dyn Fn(&PathRef) -> Result<&'l Leaf, (IssueKind, String)>;

fn check_expression<'l>(
    ctx: &mut Ctx,
    location: String,
    text: &str,
    resolve: Resolver<'_, 'l>,
) -> Option<DataExpr> {
    let (expr, refs) = match parse_data_expr_refs(text) {
        Ok(parsed) => parsed,
        Err(e) => {
            ctx.expr_error(location, e);
            return None;
        }
    };
    for (r, pos) in &refs {
        if let Err((kind, message)) = resolve(r) {
            ctx.push(Severity::Error, kind, location.clone(), Some(*pos), message);
        }
    }
    let is_numeric = |r: &PathRef| resolve(r).ok().and_then(Leaf::is_numeric);
    for clash in expr.type_clashes(&is_numeric) {
        ctx.push(Severity::Warning, IssueKind::TypeClash, location.clone(), None, clash);
    }
    Some(expr)
}
