use crate::error::Result;
use crate::iterate::Iterate;
use crate::problems::MinimaxProblem;
use crate::trace::TraceRecord;

/// Collects trace checkpoints for a run. Potential metrics are filled in only
/// when the problem supports exact `g`/`g*`; the distance to the saddle only
/// when the problem stores one.
pub(crate) struct Recorder<'a> {
    problem: &'a dyn MinimaxProblem,
    weight: f64,
    every: u64,
    g_star: Option<f64>,
    saddle: Option<Iterate>,
    trace: Vec<TraceRecord>,
    last_iter: Option<u64>,
}

impl<'a> Recorder<'a> {
    pub fn new(problem: &'a dyn MinimaxProblem, weight: f64, every: u64) -> Self {
        let g_star = if problem.has_exact_best_response() {
            problem.g_star().ok()
        } else {
            None
        };
        Recorder {
            problem,
            weight,
            every,
            g_star,
            saddle: problem.saddle(),
            trace: Vec::new(),
            last_iter: None,
        }
    }

    /// Record if `iter` falls on the metrics grid.
    pub fn maybe(&mut self, iter: u64, grad_evals: u64, it: &Iterate) -> Result<()> {
        if iter % self.every == 0 {
            self.force(iter, grad_evals, it)?;
        }
        Ok(())
    }

    /// Record unconditionally (deduplicating repeated iterations).
    pub fn force(&mut self, iter: u64, grad_evals: u64, it: &Iterate) -> Result<()> {
        if self.last_iter == Some(iter) {
            return Ok(());
        }
        let (gx, gy) = self.problem.grad(it)?;
        let (mut a, mut b, mut potential) = (None, None, None);
        if let Some(g_star) = self.g_star {
            let g = self.problem.g_value(&it.x)?;
            let f = self.problem.value(it)?;
            let av = g - g_star;
            let bv = g - f;
            a = Some(av);
            b = Some(bv);
            potential = Some(av + self.weight * bv);
        }
        let dist_to_saddle_sq = self.saddle.as_ref().map(|s| it.dist_sq(s));
        self.trace.push(TraceRecord {
            iter,
            grad_evals,
            a,
            b,
            potential,
            grad_x_norm: gx.norm(),
            grad_y_norm: gy.norm(),
            dist_to_saddle_sq,
        });
        self.last_iter = Some(iter);
        Ok(())
    }

    pub fn into_trace(self) -> Vec<TraceRecord> {
        self.trace
    }
}
