//! Adapted Lesk disambiguation: senses are scored by the squared lengths of
//! word runs their extended glosses share with the glosses of context senses.

use super::stopwords::is_stop_word;
use super::{Lexicon, PartOfSpeech, SynsetId};

/// Words surrounding a target word; `target_index` points into `words`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextWindow {
    words: Vec<String>,
    target_index: usize,
}

impl ContextWindow {
    pub fn new(words: Vec<String>, target_index: usize) -> Option<Self> {
        (target_index < words.len()).then_some(Self {
            words,
            target_index,
        })
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn target_index(&self) -> usize {
        self.target_index
    }

    /// Context words other than the target itself.
    pub fn neighbours(&self) -> impl Iterator<Item = &str> {
        self.words
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.target_index)
            .map(|(_, w)| w.as_str())
    }
}

/// `None` separates glosses so that a run never spans two of them.
type GlossTokens = Vec<Option<String>>;

fn gloss_tokens(text: &str, out: &mut GlossTokens) {
    for word in text
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
    {
        let word = word.to_lowercase();
        if !is_stop_word(&word) {
            out.push(Some(word));
        }
    }
}

/// Sum of squared lengths of maximal shared word runs after lowercasing and
/// stop-word removal.
pub fn gloss_overlap(first: &str, second: &str) -> u64 {
    let mut a = Vec::new();
    let mut b = Vec::new();
    gloss_tokens(first, &mut a);
    gloss_tokens(second, &mut b);
    overlap_score(&a, &b)
}

fn overlap_score(a: &[Option<String>], b: &[Option<String>]) -> u64 {
    // Greedy extraction depends on tie order; taking the better of both
    // orientations keeps the score symmetric.
    greedy_runs(a, b).max(greedy_runs(b, a))
}

/// Repeatedly removes the longest common run (earliest in `a`, then in `b`).
fn greedy_runs(a: &[Option<String>], b: &[Option<String>]) -> u64 {
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut total = 0u64;
    let mut run = vec![0usize; (a.len() + 1) * (b.len() + 1)];
    let width = b.len() + 1;
    loop {
        let mut best = (0usize, 0usize, 0usize); // (len, end_a, end_b)
        for i in 0..a.len() {
            for j in 0..b.len() {
                let cell = (i + 1) * width + (j + 1);
                let live = !used_a[i]
                    && !used_b[j]
                    && matches!((&a[i], &b[j]), (Some(x), Some(y)) if x == y);
                run[cell] = if live { run[i * width + j] + 1 } else { 0 };
                if run[cell] > best.0 {
                    best = (run[cell], i, j);
                }
            }
        }
        let (len, end_a, end_b) = best;
        if len == 0 {
            return total;
        }
        for k in 0..len {
            used_a[end_a - k] = true;
            used_b[end_b - k] = true;
        }
        total += (len * len) as u64;
    }
}

impl Lexicon {
    /// Own gloss followed by the glosses of the direct hypernyms.
    fn extended_gloss(&self, id: SynsetId) -> GlossTokens {
        let mut out = Vec::new();
        gloss_tokens(&self.synset(id).gloss, &mut out);
        for &h in self.hypernyms(id) {
            out.push(None);
            gloss_tokens(&self.synset(h).gloss, &mut out);
        }
        out
    }

    /// Picks the sense of `target` whose extended gloss overlaps most with the
    /// extended glosses of every sense of every context word. Ties keep the
    /// earlier sense; words outside the lexicon yield `None`.
    pub fn disambiguate(&self, target: &str, ctx: &ContextWindow) -> Option<SynsetId> {
        self.pick_sense(self.senses(target).to_vec(), ctx)
    }

    /// As [`Lexicon::disambiguate`], restricted to senses with part of speech `pos`.
    pub fn disambiguate_as(
        &self,
        target: &str,
        ctx: &ContextWindow,
        pos: PartOfSpeech,
    ) -> Option<SynsetId> {
        self.pick_sense(self.senses_with_pos(target, pos).collect(), ctx)
    }

    fn pick_sense(&self, candidates: Vec<SynsetId>, ctx: &ContextWindow) -> Option<SynsetId> {
        match candidates.len() {
            0 => return None,
            1 => return Some(candidates[0]),
            _ => {}
        }
        let context: Vec<GlossTokens> = ctx
            .neighbours()
            .flat_map(|w| self.senses(w).iter().copied())
            .map(|s| self.extended_gloss(s))
            .collect();
        let mut best: Option<(SynsetId, u64)> = None;
        for sense in candidates {
            let own = self.extended_gloss(sense);
            let score: u64 = context.iter().map(|g| overlap_score(&own, g)).sum();
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((sense, score));
            }
        }
        best.map(|(s, _)| s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_three_word_gloss_scores_nine() {
        assert_eq!(gloss_overlap("b c d", "b c d"), 9);
    }

    #[test]
    fn article_is_a_stop_word() {
        // "a" is dropped, leaving one shared 2-run
        assert_eq!(gloss_overlap("a b c", "a b c"), 4);
    }

    #[test]
    fn no_shared_words() {
        assert_eq!(gloss_overlap("x", "y"), 0);
        assert_eq!(gloss_overlap("", "anything"), 0);
    }

    #[test]
    fn reversed_pair_counts_two_single_runs() {
        assert_eq!(gloss_overlap("b c", "c b"), 2);
    }

    #[test]
    fn longest_run_is_removed_first() {
        // "cold front" (4) then "rain" (1)
        assert_eq!(
            gloss_overlap("rain after the cold front", "cold front brings rain"),
            5
        );
    }

    #[test]
    fn case_and_punctuation_are_ignored() {
        assert_eq!(gloss_overlap("Weather, Forecast!", "weather forecast"), 4);
    }

    const SENSES: &str = "\
root | n | thing | | an object
report | n | report | root | a written document describing findings
report2 | n | report | root | an official temperature forecast for a region
forecast | n | forecast | root | a prediction of temperature forecast values
";

    #[test]
    fn context_selects_overlapping_sense() {
        let lex = Lexicon::from_fixture_str(SENSES).unwrap();
        let ctx = ContextWindow::new(vec!["report".into(), "forecast".into()], 0).unwrap();
        let pick = lex.disambiguate("report", &ctx).unwrap();
        assert_eq!(lex.synset(pick).id, "report2");
    }

    #[test]
    fn single_sense_wins_regardless_of_context() {
        let lex = Lexicon::from_fixture_str(SENSES).unwrap();
        let ctx = ContextWindow::new(vec!["forecast".into(), "zzz".into()], 0).unwrap();
        assert_eq!(lex.synset(lex.disambiguate("forecast", &ctx).unwrap()).id, "forecast");
    }

    #[test]
    fn unknown_target_has_no_sense() {
        let lex = Lexicon::from_fixture_str(SENSES).unwrap();
        let ctx = ContextWindow::new(vec!["qq".into()], 0).unwrap();
        assert_eq!(lex.disambiguate("qq", &ctx), None);
    }

    #[test]
    fn ties_keep_lexicon_order() {
        let lex = Lexicon::from_fixture_str(SENSES).unwrap();
        let ctx = ContextWindow::new(vec!["report".into()], 0).unwrap();
        assert_eq!(lex.synset(lex.disambiguate("report", &ctx).unwrap()).id, "report");
    }

    #[test]
    fn window_rejects_out_of_range_target() {
        assert!(ContextWindow::new(vec![], 0).is_none());
        assert!(ContextWindow::new(vec!["a".into()], 1).is_none());
    }
}
