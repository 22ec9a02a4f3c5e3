use serde::Serialize;

use super::EvalError;

pub const DEFAULT_BINS: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    /// `None` for an empty bin.
    pub acc: Option<f64>,
    pub conf: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CalibrationReport {
    #[serde(rename = "M")]
    pub m: usize,
    pub bins: Vec<Bin>,
    pub ece: f64,
}

impl CalibrationReport {
    pub fn n(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Confidence of the predicted class for a probability of True.
pub fn confidence(p: f64) -> f64 {
    p.max(1.0 - p)
}

/// 0-based index of the bin ((m−1)/M, m/M] holding `c` ∈ (0, 1].
pub fn bin_index(c: f64, m: usize) -> usize {
    let mf = m as f64;
    let mut k = (c * mf).ceil() as i64;
    // Guard against rounding in c·M at bin edges.
    if k >= 1 && c <= (k - 1) as f64 / mf {
        k -= 1;
    }
    if c > k as f64 / mf {
        k += 1;
    }
    (k.clamp(1, m as i64) - 1) as usize
}

/// Reliability bins over `(probability of True, prediction correct)` pairs.
pub fn reliability(preds: &[(f64, bool)], m: usize) -> Result<CalibrationReport, EvalError> {
    if preds.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    if m == 0 {
        return Err(EvalError::Bins);
    }
    let mut count = vec![0usize; m];
    let mut correct = vec![0usize; m];
    let mut conf_sum = vec![0.0; m];
    for &(p, ok) in preds {
        let c = confidence(p);
        let b = bin_index(c, m);
        count[b] += 1;
        conf_sum[b] += c;
        if ok {
            correct[b] += 1;
        }
    }
    let n = preds.len() as f64;
    let mut ece = 0.0;
    let bins = (0..m)
        .map(|b| {
            let (acc, conf) = if count[b] == 0 {
                (None, None)
            } else {
                let k = count[b] as f64;
                let acc = correct[b] as f64 / k;
                let conf = conf_sum[b] / k;
                ece += k / n * (acc - conf).abs();
                (Some(acc), Some(conf))
            };
            Bin {
                lo: b as f64 / m as f64,
                hi: (b + 1) as f64 / m as f64,
                count: count[b],
                acc,
                conf,
            }
        })
        .collect();
    Ok(CalibrationReport { m, bins, ece })
}

pub fn ece(report: &CalibrationReport) -> f64 {
    report.ece
}
