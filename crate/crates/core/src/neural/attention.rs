//! Word-by-word attention of content states over title states:
//!
//! ```text
//! m_{t,i} = tanh(W_y y_i + W_h h_t + W_r r_{t-1})
//! α_t     = softmax_i(wᵀ m_{t,i})
//! r_t     = Σ_i α_{t,i} y_i + tanh(W_t r_{t-1})
//! ```
//!
//! with r_0 = 0. The final `r_N` summarizes the title as read by the content.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::{axpy, dot, softmax_in_place, tanh, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attention {
    pub w_y: Matrix,
    pub w_h: Matrix,
    pub w_r: Matrix,
    pub w: Matrix,
    pub w_t: Matrix,
}

/// Forward record. `m` is recomputed during the backward pass from the
/// stored projections rather than kept for every (t, i) pair.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AttentionTrace {
    pub proj_y: Vec<Vec<f64>>,
    pub q: Vec<Vec<f64>>,
    pub alpha: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub r: Vec<Vec<f64>>,
}

impl AttentionTrace {
    /// Attention weights over title positions, one row per content step.
    pub fn weights(&self) -> &[Vec<f64>] {
        &self.alpha
    }
}

impl Attention {
    pub fn zeros(hidden: usize, attention: usize) -> Self {
        Self {
            w_y: Matrix::zeros(attention, hidden),
            w_h: Matrix::zeros(attention, hidden),
            w_r: Matrix::zeros(attention, hidden),
            w: Matrix::zeros(attention, 1),
            w_t: Matrix::zeros(hidden, hidden),
        }
    }

    pub fn hidden(&self) -> usize {
        self.w_t.rows()
    }

    pub(crate) fn tensors(&self) -> [(&'static str, &Matrix); 5] {
        [("w_y", &self.w_y), ("w_h", &self.w_h), ("w_r", &self.w_r), ("w", &self.w), ("w_t", &self.w_t)]
    }

    pub(crate) fn tensors_mut(&mut self) -> [(&'static str, &mut Matrix); 5] {
        [
            ("w_y", &mut self.w_y),
            ("w_h", &mut self.w_h),
            ("w_r", &mut self.w_r),
            ("w", &mut self.w),
            ("w_t", &mut self.w_t),
        ]
    }

    /// Returns the trace and `r_N`. With no title or no content `r_N` is 0.
    pub fn forward(&self, ys: &[&[f64]], hs: &[&[f64]]) -> (AttentionTrace, Vec<f64>) {
        let n = self.hidden();
        let mut trace = AttentionTrace::default();
        if ys.is_empty() {
            return (trace, vec![0.0; n]);
        }
        trace.proj_y = ys.iter().map(|y| self.w_y.mul_vec(y)).collect();
        let mut r_prev = vec![0.0; n];
        let mut m = vec![0.0; self.w_y.rows()];
        for h in hs {
            let mut q = self.w_h.mul_vec(h);
            self.w_r.mul_vec_add(&r_prev, &mut q);
            let mut alpha: Vec<f64> = trace
                .proj_y
                .iter()
                .map(|p| {
                    for ((mk, pk), qk) in m.iter_mut().zip(p).zip(&q) {
                        *mk = tanh(pk + qk);
                    }
                    dot(self.w.as_slice(), &m)
                })
                .collect();
            softmax_in_place(&mut alpha);
            let mut g = self.w_t.mul_vec(&r_prev);
            g.iter_mut().for_each(|v| *v = tanh(*v));
            let mut r = g.clone();
            for (a, y) in alpha.iter().zip(ys) {
                axpy(*a, y, &mut r);
            }
            trace.q.push(q);
            trace.alpha.push(alpha);
            trace.g.push(g);
            trace.r.push(r.clone());
            r_prev = r;
        }
        (trace, r_prev)
    }

    /// Propagates `d_r` (gradient of `r_N`) back. Gradients of the title and
    /// content states are added into `d_ys` and `d_hs`.
    #[allow(clippy::too_many_arguments)]
    pub fn backward(
        &self,
        ys: &[&[f64]],
        hs: &[&[f64]],
        trace: &AttentionTrace,
        d_r: &[f64],
        grads: &mut Attention,
        d_ys: &mut [Vec<f64>],
        d_hs: &mut [Vec<f64>],
    ) {
        if ys.is_empty() || hs.is_empty() {
            return;
        }
        let n = self.hidden();
        let a = self.w_y.rows();
        let zero = vec![0.0; n];
        let mut d_proj = vec![vec![0.0; a]; ys.len()];
        let mut dr = d_r.to_vec();
        let mut m = vec![vec![0.0; a]; ys.len()];
        let mut d_alpha = vec![0.0; ys.len()];
        let mut dq = vec![0.0; a];
        for t in (0..hs.len()).rev() {
            let r_prev = if t == 0 { zero.as_slice() } else { trace.r[t - 1].as_slice() };
            let alpha = &trace.alpha[t];
            let g = &trace.g[t];

            for (i, y) in ys.iter().enumerate() {
                d_alpha[i] = dot(y, &dr);
                axpy(alpha[i], &dr, &mut d_ys[i]);
            }
            let d_g_pre: Vec<f64> = dr.iter().zip(g).map(|(d, gv)| d * (1.0 - gv * gv)).collect();
            grads.w_t.add_outer(&d_g_pre, r_prev);
            let mut dr_prev = vec![0.0; n];
            self.w_t.mul_t_vec_add(&d_g_pre, &mut dr_prev);

            let mean: f64 = alpha.iter().zip(&d_alpha).map(|(x, y)| x * y).sum();
            dq.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..ys.len() {
                let ds = alpha[i] * (d_alpha[i] - mean);
                let mi = &mut m[i];
                for ((mk, pk), qk) in mi.iter_mut().zip(&trace.proj_y[i]).zip(&trace.q[t]) {
                    *mk = tanh(pk + qk);
                }
                axpy(ds, mi, grads.w.as_mut_slice());
                for k in 0..a {
                    let d_pre = ds * self.w.as_slice()[k] * (1.0 - mi[k] * mi[k]);
                    d_proj[i][k] += d_pre;
                    dq[k] += d_pre;
                }
            }
            grads.w_h.add_outer(&dq, hs[t]);
            self.w_h.mul_t_vec_add(&dq, &mut d_hs[t]);
            grads.w_r.add_outer(&dq, r_prev);
            self.w_r.mul_t_vec_add(&dq, &mut dr_prev);
            dr = dr_prev;
        }
        for (i, y) in ys.iter().enumerate() {
            grads.w_y.add_outer(&d_proj[i], y);
            self.w_y.mul_t_vec_add(&d_proj[i], &mut d_ys[i]);
        }
    }
}
