use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Administrator-authored matching for one substituted operation.
///
/// Expressions are kept as written; [`super::validate_plan`] parses them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperationPlan {
    /// Operation expression over substituent operations.
    pub expr: String,
    /// Substituent operation → its input leaf key → expression over the
    /// substituted operation's input leaves.
    pub inputs: BTreeMap<String, BTreeMap<String, String>>,
    /// Substituted output leaf key → expression over substituent outputs.
    pub outputs: BTreeMap<String, String>,
}

impl OperationPlan {
    pub fn new(expr: &str) -> Self {
        Self {
            expr: expr.to_string(),
            ..Self::default()
        }
    }

    pub fn input(mut self, operation: &str, leaf: &str, expr: &str) -> Self {
        self.inputs
            .entry(operation.to_string())
            .or_default()
            .insert(leaf.to_string(), expr.to_string());
        self
    }

    pub fn output(mut self, leaf: &str, expr: &str) -> Self {
        self.outputs.insert(leaf.to_string(), expr.to_string());
        self
    }
}

/// Substituted operation name → its matching.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatchingPlan {
    pub operations: BTreeMap<String, OperationPlan>,
}

impl MatchingPlan {
    pub fn is_empty(&self) -> bool {
        self.operations.is_empty()
    }

    pub fn with(mut self, substituted: &str, plan: OperationPlan) -> Self {
        self.operations.insert(substituted.to_string(), plan);
        self
    }

    /// Overlays `fragment`: non-empty expressions replace, empty ones delete.
    /// Applying the same fragment twice is the same as applying it once.
    pub fn merge(&mut self, fragment: &MatchingPlan) {
        for (name, frag) in &fragment.operations {
            let entry = self.operations.entry(name.clone()).or_default();
            if !frag.expr.trim().is_empty() {
                entry.expr = frag.expr.clone();
            }
            for (op, leaves) in &frag.inputs {
                let target = entry.inputs.entry(op.clone()).or_default();
                for (leaf, expr) in leaves {
                    if expr.trim().is_empty() {
                        target.remove(leaf);
                    } else {
                        target.insert(leaf.clone(), expr.clone());
                    }
                }
                if target.is_empty() {
                    entry.inputs.remove(op);
                }
            }
            for (leaf, expr) in &frag.outputs {
                if expr.trim().is_empty() {
                    entry.outputs.remove(leaf);
                } else {
                    entry.outputs.insert(leaf.clone(), expr.clone());
                }
            }
            // an operation whose expression was never set and carries nothing is dropped
            if entry.expr.trim().is_empty() && entry.inputs.is_empty() && entry.outputs.is_empty() {
                self.operations.remove(name);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MatchingPlan {
        MatchingPlan::default().with(
            "GetWeather",
            OperationPlan::new("GetWeatherForecast")
                .input("GetWeatherForecast", "get weather forecast city", "<get weather city name>")
                .output("get weather response humidity", "<get weather forecast response humidity>"),
        )
    }

    #[test]
    fn json_shape() {
        let json = serde_json::to_value(sample()).unwrap();
        assert_eq!(json["operations"]["GetWeather"]["expr"], "GetWeatherForecast");
        assert_eq!(
            json["operations"]["GetWeather"]["inputs"]["GetWeatherForecast"]["get weather forecast city"],
            "<get weather city name>"
        );
        let back: MatchingPlan = serde_json::from_value(json).unwrap();
        assert_eq!(back, sample());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<MatchingPlan>(r#"{"operations":{"a":{"exp":"x"}}}"#).is_err());
    }

    #[test]
    fn merge_is_idempotent() {
        let mut plan = MatchingPlan::default();
        plan.merge(&sample());
        let once = plan.clone();
        plan.merge(&sample());
        assert_eq!(plan, once);
        assert_eq!(plan, sample());
    }

    #[test]
    fn merge_overlays_and_deletes() {
        let mut plan = sample();
        let frag = MatchingPlan::default().with(
            "GetWeather",
            OperationPlan::new("")
                .input("GetWeatherForecast", "get weather forecast city", "")
                .output("get weather response temperature", "1"),
        );
        plan.merge(&frag);
        let op = &plan.operations["GetWeather"];
        assert_eq!(op.expr, "GetWeatherForecast");
        assert!(op.inputs.is_empty());
        assert_eq!(op.outputs.len(), 2);
    }

    #[test]
    fn merge_drops_empty_operations() {
        let mut plan = MatchingPlan::default();
        plan.merge(&MatchingPlan::default().with("X", OperationPlan::default()));
        assert!(plan.is_empty());
    }
}
