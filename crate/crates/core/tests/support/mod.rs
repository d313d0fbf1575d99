//! Reference implementations and generators shared by the integration tests.
#![allow(dead_code, clippy::eq_op)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use wsmatch_core::mapping::{BinOp, DataExpr, MatchingPlan, OperationPlan};
use wsmatch_core::matcher::SetRelation;
use wsmatch_core::wsdl::{DataSet, Operation, ServiceDescription};

/// `1 − MHD(A, B)` with `d = 1 − sim`, computed straight from the definition.
pub fn one_minus_modified_hausdorff(sim: &[Vec<f64>]) -> f64 {
    let n = sim.len();
    let m = sim[0].len();
    let mut forward = 0.0;
    for row in sim {
        let mut best = f64::INFINITY;
        for &v in row {
            best = best.min(1.0 - v);
        }
        forward += best;
    }
    forward /= n as f64;
    let mut backward = 0.0;
    for j in 0..m {
        let mut best = f64::INFINITY;
        for row in sim {
            best = best.min(1.0 - row[j]);
        }
        backward += best;
    }
    backward /= m as f64;
    1.0 - forward.max(backward)
}

/// Textbook Jaro-Winkler: matches within `⌊max/2⌋ − 1`, transpositions are
/// half the out-of-order matched characters, prefix boost 0.1 up to 4.
pub fn reference_jaro_winkler(s: &str, t: &str) -> f64 {
    let s: Vec<char> = s.to_lowercase().chars().collect();
    let t: Vec<char> = t.to_lowercase().chars().collect();
    if s.is_empty() && t.is_empty() {
        return 1.0;
    }
    let range = (s.len().max(t.len()) / 2) as isize - 1;
    let mut t_used = vec![false; t.len()];
    let mut s_hits = Vec::new();
    for (i, &c) in s.iter().enumerate() {
        for j in 0..t.len() {
            let close = (i as isize - j as isize).abs() <= range.max(0);
            if close && !t_used[j] && t[j] == c {
                t_used[j] = true;
                s_hits.push(c);
                break;
            }
        }
    }
    let t_hits: Vec<char> = t.iter().zip(&t_used).filter(|p| *p.1).map(|p| *p.0).collect();
    let m = s_hits.len() as f64;
    if m == 0.0 {
        return 0.0;
    }
    let out_of_order = s_hits.iter().zip(&t_hits).filter(|(a, b)| a != b).count();
    let trans = (out_of_order / 2) as f64;
    let jaro = (m / s.len() as f64 + m / t.len() as f64 + (m - trans) / m) / 3.0;
    let mut prefix = 0;
    while prefix < 4 && prefix < s.len() && prefix < t.len() && s[prefix] == t[prefix] {
        prefix += 1;
    }
    jaro + prefix as f64 * 0.1 * (1.0 - jaro)
}

/// Hand-computed Wu-Palmer scores over `fixtures/taxonomy.txt`.
// depths: entity 1; animal, artifact 2; dog, cat, bird, vehicle 3; sparrow, car 4
pub const WU_PALMER_TABLE: &[(&str, &str, f64)] = &[
    ("entity", "entity", 2.0 / 2.0),
    ("entity", "animal", 2.0 / 3.0),
    ("entity", "dog", 2.0 / 4.0),
    ("entity", "cat", 2.0 / 4.0),
    ("entity", "bird", 2.0 / 4.0),
    ("entity", "sparrow", 2.0 / 5.0),
    ("entity", "artifact", 2.0 / 3.0),
    ("entity", "vehicle", 2.0 / 4.0),
    ("entity", "car", 2.0 / 5.0),
    ("animal", "animal", 4.0 / 4.0),
    ("animal", "dog", 4.0 / 5.0),
    ("animal", "cat", 4.0 / 5.0),
    ("animal", "bird", 4.0 / 5.0),
    ("animal", "sparrow", 4.0 / 6.0),
    ("animal", "artifact", 2.0 / 4.0),
    ("animal", "vehicle", 2.0 / 5.0),
    ("animal", "car", 2.0 / 6.0),
    ("dog", "dog", 6.0 / 6.0),
    ("dog", "cat", 4.0 / 6.0),
    ("dog", "bird", 4.0 / 6.0),
    ("dog", "sparrow", 4.0 / 7.0),
    ("dog", "artifact", 2.0 / 5.0),
    ("dog", "vehicle", 2.0 / 6.0),
    ("dog", "car", 2.0 / 7.0),
    ("cat", "cat", 6.0 / 6.0),
    ("cat", "bird", 4.0 / 6.0),
    ("cat", "sparrow", 4.0 / 7.0),
    ("cat", "artifact", 2.0 / 5.0),
    ("cat", "vehicle", 2.0 / 6.0),
    ("cat", "car", 2.0 / 7.0),
    ("bird", "bird", 6.0 / 6.0),
    ("bird", "sparrow", 6.0 / 7.0),
    ("bird", "artifact", 2.0 / 5.0),
    ("bird", "vehicle", 2.0 / 6.0),
    ("bird", "car", 2.0 / 7.0),
    ("sparrow", "sparrow", 8.0 / 8.0),
    ("sparrow", "artifact", 2.0 / 6.0),
    ("sparrow", "vehicle", 2.0 / 7.0),
    ("sparrow", "car", 2.0 / 8.0),
    ("artifact", "artifact", 4.0 / 4.0),
    ("artifact", "vehicle", 4.0 / 5.0),
    ("artifact", "car", 4.0 / 6.0),
    ("vehicle", "vehicle", 6.0 / 6.0),
    ("vehicle", "car", 6.0 / 7.0),
    ("car", "car", 8.0 / 8.0),
];

/// Quantifier rules enumerated directly over the pairwise scores.
pub fn enumerated_relation(v: &[Vec<f64>], n: usize, m: usize, t: f64) -> SetRelation {
    let left = (0..n).all(|i| (0..m).any(|j| v[i][j] > t));
    let right = (0..m).all(|j| (0..n).any(|i| v[i][j] > t));
    let some = (0..n).any(|i| (0..m).any(|j| v[i][j] > t));
    if left && right {
        SetRelation::Equal
    } else if left {
        SetRelation::LeftSubsetOfRight
    } else if right {
        SetRelation::RightSubsetOfLeft
    } else if some {
        SetRelation::Intersect
    } else {
        SetRelation::Disjoint
    }
}

/// Phrases for randomized data sets.
pub const VOCABULARY: &[&str] = &[
    "city name",
    "country name",
    "town",
    "temperature",
    "humidity",
    "wind speed",
    "zip code",
    "book title",
    "author",
    "price",
    "order quantity",
    "weather forecast",
    "sky",
    "days",
];

fn precedence(op: BinOp) -> u8 {
    match op {
        BinOp::Concat => 1,
        BinOp::Add | BinOp::Sub => 2,
        BinOp::Mul | BinOp::Div => 3,
    }
}

/// Shunting-yard over `n0 op n1 op n2 op n3`.
pub fn reference_parse(operands: &[f64], ops: &[BinOp]) -> DataExpr {
    let mut out: Vec<DataExpr> = vec![DataExpr::Number(operands[0])];
    let mut stack: Vec<BinOp> = Vec::new();
    let reduce = |out: &mut Vec<DataExpr>, op: BinOp| {
        let rhs = out.pop().unwrap();
        let lhs = out.pop().unwrap();
        out.push(DataExpr::binary(op, lhs, rhs));
    };
    for (k, &op) in ops.iter().enumerate() {
        while stack.last().is_some_and(|&top| precedence(top) >= precedence(op)) {
            let top = stack.pop().unwrap();
            reduce(&mut out, top);
        }
        stack.push(op);
        out.push(DataExpr::Number(operands[k + 1]));
    }
    while let Some(top) = stack.pop() {
        reduce(&mut out, top);
    }
    out.pop().unwrap()
}

/// Drops inserted `attrExtensions` lines and inserted attributes.
pub fn strip_annotations(doc: &str) -> String {
    let mut out = String::new();
    for line in doc.split_inclusive('\n') {
        if line.trim_start().starts_with("<sawsdl:attrExtensions") {
            continue;
        }
        let mut rest = line;
        loop {
            let next = [" sawsdl:", " subst:", " xmlns:sawsdl=", " xmlns:subst="]
                .iter()
                .filter_map(|m| rest.find(m))
                .min();
            let Some(i) = next else { break };
            out.push_str(&rest[..i]);
            let q1 = i + rest[i..].find('"').unwrap();
            let q2 = q1 + 1 + rest[q1 + 1..].find('"').unwrap();
            rest = &rest[q2 + 1..];
        }
        out.push_str(rest);
    }
    out
}

pub fn term(rng: &mut StdRng, set: &DataSet, qualifier: Option<&str>) -> String {
    let leaf = set.leaves.choose(rng).unwrap();
    let path = match qualifier {
        Some(q) if rng.gen_bool(0.5) => format!("<{q}: {}>", leaf.key()),
        _ => format!("<{}>", leaf.key()),
    };
    match rng.gen_range(0..4) {
        0 => path,
        1 => format!("({path} - 32) * 5 / 9"),
        2 => format!("{path} concat \"a \\\"quoted\\\" & <odd> text\""),
        _ => format!("-{}.5 + {path}", rng.gen_range(0..100)),
    }
}

pub fn random_plan(rng: &mut StdRng, a: &ServiceDescription, b: &ServiceDescription) -> MatchingPlan {
    let mut plan = MatchingPlan::default();
    for x in &a.operations {
        if rng.gen_bool(0.3) {
            continue;
        }
        let mut ys: Vec<&Operation> = b.operations.iter().collect();
        ys.shuffle(rng);
        ys.truncate(rng.gen_range(1..=b.operations.len()));
        let names: Vec<&str> = ys.iter().map(|y| y.name.as_str()).collect();
        let expr = if names.len() > 1 && rng.gen_bool(0.5) {
            names.join(" OR ")
        } else {
            names.join(" AND ")
        };
        let mut op = OperationPlan::new(&expr);
        for y in &ys {
            for leaf in &y.input.leaves {
                if leaf.required || rng.gen_bool(0.5) {
                    op = op.input(&y.name, &leaf.key(), &term(rng, &x.input, Some(&x.name)));
                }
            }
        }
        for leaf in &x.output.leaves {
            if rng.gen_bool(0.7) {
                let y = ys.choose(rng).unwrap();
                op = op.output(&leaf.key(), &term(rng, &y.output, Some(&y.name)));
            }
        }
        plan = plan.with(&x.name, op);
    }
    if plan.is_empty() {
        return random_plan(rng, a, b);
    }
    plan
}

