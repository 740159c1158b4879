//! Positive pointwise mutual information, evaluated lazily from marginals.
//!
//! With context distribution smoothing the context marginal is replaced by
//! `M(*,c)^a / sum_c M(*,c)^a`; word marginals and joint counts stay raw.

use crate::cooc::{ContextId, CoocStats, Marginals};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Ppmi {
    alpha: f64,
    marginals: Marginals,
    smoothed_col: Vec<f64>,
    smoothed_total: f64,
}

impl Ppmi {
    pub fn new(marginals: Marginals, cds_alpha: f64) -> Result<Self> {
        if !(cds_alpha > 0.0 && cds_alpha <= 1.0) {
            return Err(Error::Config(format!("cds exponent must be in (0, 1], got {cds_alpha}")));
        }
        let smoothed_col: Vec<f64> = marginals.cols().iter().map(|&c| (c as f64).powf(cds_alpha)).collect();
        let smoothed_total = smoothed_col.iter().sum();
        Ok(Ppmi { alpha: cds_alpha, marginals, smoothed_col, smoothed_total })
    }

    pub fn from_stats(stats: &CoocStats, cds_alpha: f64) -> Result<Self> {
        Self::new(stats.marginals().clone(), cds_alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn marginals(&self) -> &Marginals {
        &self.marginals
    }

    pub fn smoothed_total(&self) -> f64 {
        self.smoothed_total
    }

    /// PPMI of `(w, c)` given its joint count. Zero counts give exactly 0.
    pub fn value(&self, w: u32, c: ContextId, joint: u64) -> Result<f64> {
        if joint == 0 {
            return Ok(0.0);
        }
        let (n_words, n_ctx) = (self.marginals.rows().len(), self.marginals.cols().len());
        if w as usize >= n_words || c.index() >= n_ctx {
            return Err(Error::OutOfRange {
                what: if w as usize >= n_words { "word id" } else { "context id" },
                index: if w as usize >= n_words { w as u64 } else { c.0 as u64 },
                limit: if w as usize >= n_words { n_words as u64 } else { n_ctx as u64 },
            });
        }
        let row = self.marginals.row(w);
        let col = self.marginals.col(c);
        let total = self.marginals.total();
        if joint > row || joint > col {
            return Err(Error::Integrity(format!("count M({w},{}) = {joint} exceeds its marginals ({row}, {col})", c.0)));
        }
        let pmi = if self.alpha == 1.0 {
            ((joint as f64 * total as f64) / (row as f64 * col as f64)).ln()
        } else {
            let total = total as f64;
            let p_joint = joint as f64 / total;
            let p_word = row as f64 / total;
            let p_ctx = self.smoothed_col[c.index()] / self.smoothed_total;
            (p_joint / (p_word * p_ctx)).ln()
        };
        Ok(pmi.max(0.0))
    }
}

/// PPMI of a cell looked up in in-memory counts.
pub fn ppmi_value(stats: &CoocStats, ppmi: &Ppmi, w: u32, c: ContextId) -> Result<f64> {
    ppmi.value(w, c, stats.count(w, c))
}
