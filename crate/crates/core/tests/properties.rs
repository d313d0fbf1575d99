use proptest::prelude::*;

use wsmatch_core::lexicon::Lexicon;
use wsmatch_core::mapping::{
    parse_data_expr_syntax, parse_operation_expr_syntax, BinOp, DataExpr, MatchingPlan, OperationExpr, OperationPlan,
    PathRef,
};
use wsmatch_core::matcher::relation_from_matrix;
use wsmatch_core::similarity::Weights;
use wsmatch_core::text::{hausdorff_similarity, jaro_winkler, Sentence, SimilarityMatrix, TextSimilarity};

const WORDS: &[&str] = &[
    "city", "name", "country", "temperature", "weather", "book", "title", "price", "zip", "code", "order", "wind",
    "speed", "author", "sky", "humidity",
];

fn word() -> impl Strategy<Value = &'static str> {
    prop::sample::select(WORDS)
}

fn phrase() -> impl Strategy<Value = String> {
    prop::collection::vec(word(), 1..4).prop_map(|w| w.join(" "))
}

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0.0..=1.0f64, c), r))
}

fn data_expr() -> impl Strategy<Value = DataExpr> {
    let leaf = prop_oneof![
        (-1e6..1e6f64).prop_map(DataExpr::Number),
        (0u32..1000).prop_map(|n| DataExpr::Number(f64::from(n) / 4.0)),
        "[a-z \"\\\\\n]{0,8}".prop_map(DataExpr::Text),
        phrase().prop_map(|k| DataExpr::Path(PathRef::new(&k))),
        ("[a-zA-Z][a-zA-Z0-9_]{0,6}", phrase()).prop_map(|(op, k)| DataExpr::Path(PathRef::qualified(&op, &k))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let op = prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Concat]);
        (op, inner.clone(), inner).prop_map(|(op, l, r)| DataExpr::binary(op, l, r))
    })
}

fn op_expr() -> impl Strategy<Value = OperationExpr> {
    let leaf = "[a-zA-Z][a-zA-Z0-9_]{0,6}"
        .prop_filter("keywords", |s| s != "AND" && s != "OR")
        .prop_map(OperationExpr::Ref);
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(|xs| parse_operation_expr_syntax(
                &xs.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(" AND ")
            )
            .unwrap()),
            prop::collection::vec(inner, 2..4).prop_map(|xs| parse_operation_expr_syntax(
                &xs.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(" OR ")
            )
            .unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn jaro_winkler_bounded_symmetric(a in "[a-eA-E]{0,12}", b in "[a-eA-E]{0,12}") {
        let ab = jaro_winkler(&a, &b);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, jaro_winkler(&b, &a));
        prop_assert_eq!(jaro_winkler(&a, &a), 1.0);
    }

    #[test]
    fn sentence_similarity_symmetric_with_identity(a in phrase(), b in phrase()) {
        let lex = Lexicon::builtin();
        let text = TextSimilarity::new(&lex);
        let (sa, sb) = (Sentence::new(&a), Sentence::new(&b));
        let ab = text.sentence_similarity(&sa, &sb);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!((ab - text.sentence_similarity(&sb, &sa)).abs() < 1e-12);
        prop_assert!((text.sentence_similarity(&sa, &sa) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hausdorff_bounded_and_transpose_invariant(rows in matrix()) {
        let m = SimilarityMatrix::from_rows(&rows).unwrap();
        let s = hausdorff_similarity(&m).unwrap();
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, hausdorff_similarity(&m.transpose()).unwrap());
    }

    #[test]
    fn hausdorff_monotone_in_cells(rows in matrix(), i in 0usize..6, j in 0usize..6, bump in 0.0..1.0f64) {
        let before = hausdorff_similarity(&SimilarityMatrix::from_rows(&rows).unwrap()).unwrap();
        let mut raised = rows.clone();
        let (i, j) = (i % rows.len(), j % rows[0].len());
        raised[i][j] = (raised[i][j] + bump).min(1.0);
        let after = hausdorff_similarity(&SimilarityMatrix::from_rows(&raised).unwrap()).unwrap();
        prop_assert!(after >= before - 1e-15);
    }

    #[test]
    fn relation_swaps_under_transpose(rows in matrix(), t in 0.05..0.95f64) {
        let m = SimilarityMatrix::from_rows(&rows).unwrap();
        prop_assert_eq!(relation_from_matrix(&m.transpose(), t), relation_from_matrix(&m, t).swapped());
    }

    #[test]
    fn weighted_mean_between_components(
        w in (0.01..5.0f64, 0.01..5.0f64, 0.01..5.0f64),
        s in (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64),
    ) {
        let v = Weights::new(w.0, w.1, w.2).unwrap().combine(s.0, s.1, s.2);
        let lo = s.0.min(s.1).min(s.2);
        let hi = s.0.max(s.1).max(s.2);
        prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
    }

    #[test]
    fn data_expr_render_parse(e in data_expr()) {
        let text = e.to_string();
        let back = parse_data_expr_syntax(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn op_expr_render_parse(e in op_expr()) {
        let text = e.to_string();
        prop_assert_eq!(parse_operation_expr_syntax(&text).unwrap(), e);
    }

    #[test]
    fn plan_merge_idempotent(
        base in prop::collection::btree_map("[A-C]", (phrase(), phrase()), 0..3),
        frag in prop::collection::btree_map("[A-C]", (phrase(), prop_oneof![Just(String::new()), phrase()]), 1..3),
    ) {
        let build = |m: &std::collections::BTreeMap<String, (String, String)>| {
            m.iter().fold(MatchingPlan::default(), |p, (op, (leaf, expr))| {
                p.with(op, OperationPlan::new("Y").output(leaf, expr))
            })
        };
        let mut once = build(&base);
        once.merge(&build(&frag));
        let mut twice = once.clone();
        twice.merge(&build(&frag));
        prop_assert_eq!(once, twice);
    }
}
