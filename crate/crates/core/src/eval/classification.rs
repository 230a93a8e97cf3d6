use serde::{Deserialize, Serialize};

use crate::sentiment::SentimentLabel;

use super::{same_len, EvalError};

fn index(label: SentimentLabel) -> usize {
    match label {
        SentimentLabel::Positive => 0,
        SentimentLabel::Neutral => 1,
        SentimentLabel::Negative => 2,
    }
}

/// Counts indexed `[actual][predicted]` in the order positive, neutral, negative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix3 {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix3 {
    pub fn get(&self, actual: SentimentLabel, predicted: SentimentLabel) -> u64 {
        self.counts[index(actual)][index(predicted)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn support(&self, c: usize) -> u64 {
        self.counts[c].iter().sum()
    }

    fn predicted(&self, c: usize) -> u64 {
        (0..3).map(|a| self.counts[a][c]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: SentimentLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Accuracy plus support-weighted precision, recall and F1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub confusion: ConfusionMatrix3,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Some class had a zero denominator and contributed 0.
    pub zero_division: bool,
}

fn ratio(num: u64, den: u64, flag: &mut bool) -> f64 {
    if den == 0 {
        *flag = true;
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// One-vs-rest per-class metrics aggregated by support.
pub fn classification_report(
    actual: &[SentimentLabel],
    predicted: &[SentimentLabel],
) -> Result<ClassificationReport, EvalError> {
    same_len(actual.len(), predicted.len())?;
    if actual.is_empty() {
        return Err(EvalError::TooFew { needed: 1, actual: 0 });
    }
    let mut confusion = ConfusionMatrix3::default();
    for (&a, &p) in actual.iter().zip(predicted) {
        confusion.counts[index(a)][index(p)] += 1;
    }
    let total = confusion.total();
    let correct: u64 = (0..3).map(|c| confusion.counts[c][c]).sum();

    let mut zero_division = false;
    let mut per_class = Vec::with_capacity(3);
    let (mut wp, mut wr, mut wf) = (0.0, 0.0, 0.0);
    for (c, label) in SentimentLabel::ALL.into_iter().enumerate() {
        let tp = confusion.counts[c][c];
        let support = confusion.support(c);
        let precision = ratio(tp, confusion.predicted(c), &mut zero_division);
        let recall = ratio(tp, support, &mut zero_division);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let w = support as f64 / total as f64;
        wp += w * precision;
        wr += w * recall;
        wf += w * f1;
        per_class.push(ClassMetrics {
            label,
            precision,
            recall,
            f1,
            support,
        });
    }
    Ok(ClassificationReport {
        accuracy: correct as f64 / total as f64,
        precision: wp,
        recall: wr,
        f1: wf,
        per_class,
        zero_division,
        confusion,
    })
}
