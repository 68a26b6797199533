//! Gated recurrent unit:
//!
//! ```text
//! z_t = σ(W_z x_t + U_z h_{t-1} + b_z)
//! r_t = σ(W_r x_t + U_r h_{t-1} + b_r)
//! c_t = tanh(W_h x_t + U_h (r_t ∘ h_{t-1}) + b_h)
//! h_t = (1 - z_t) ∘ h_{t-1} + z_t ∘ c_t
//! ```

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::linalg::{sigmoid, tanh, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GruCell {
    pub w_z: Matrix,
    pub u_z: Matrix,
    pub b_z: Matrix,
    pub w_r: Matrix,
    pub u_r: Matrix,
    pub b_r: Matrix,
    pub w_h: Matrix,
    pub u_h: Matrix,
    pub b_h: Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GruStep {
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    pub h: Vec<f64>,
}

/// Forward record of one sequence; `steps[t].h` is the state after input `t`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GruTrace {
    pub steps: Vec<GruStep>,
}

impl GruTrace {
    pub fn states(&self) -> impl Iterator<Item = &[f64]> {
        self.steps.iter().map(|s| s.h.as_slice())
    }

    /// Final state, or `None` for an empty sequence (where it equals h_0 = 0).
    pub fn last(&self) -> Option<&[f64]> {
        self.steps.last().map(|s| s.h.as_slice())
    }
}

impl GruCell {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        let w = || Matrix::zeros(hidden, input);
        let u = || Matrix::zeros(hidden, hidden);
        let b = || Matrix::zeros(hidden, 1);
        Self { w_z: w(), u_z: u(), b_z: b(), w_r: w(), u_r: u(), b_r: b(), w_h: w(), u_h: u(), b_h: b() }
    }

    pub fn hidden(&self) -> usize {
        self.u_z.rows()
    }

    pub fn input(&self) -> usize {
        self.w_z.cols()
    }

    pub(crate) fn tensors(&self) -> [(&'static str, &Matrix); 9] {
        [
            ("w_z", &self.w_z),
            ("u_z", &self.u_z),
            ("b_z", &self.b_z),
            ("w_r", &self.w_r),
            ("u_r", &self.u_r),
            ("b_r", &self.b_r),
            ("w_h", &self.w_h),
            ("u_h", &self.u_h),
            ("b_h", &self.b_h),
        ]
    }

    pub(crate) fn tensors_mut(&mut self) -> [(&'static str, &mut Matrix); 9] {
        [
            ("w_z", &mut self.w_z),
            ("u_z", &mut self.u_z),
            ("b_z", &mut self.b_z),
            ("w_r", &mut self.w_r),
            ("u_r", &mut self.u_r),
            ("b_r", &mut self.b_r),
            ("w_h", &mut self.w_h),
            ("u_h", &mut self.u_h),
            ("b_h", &mut self.b_h),
        ]
    }

    pub fn step(&self, x: &[f64], h_prev: &[f64]) -> GruStep {
        let mut z = self.b_z.as_slice().to_vec();
        self.w_z.mul_vec_add(x, &mut z);
        self.u_z.mul_vec_add(h_prev, &mut z);
        z.iter_mut().for_each(|v| *v = sigmoid(*v));

        let mut r = self.b_r.as_slice().to_vec();
        self.w_r.mul_vec_add(x, &mut r);
        self.u_r.mul_vec_add(h_prev, &mut r);
        r.iter_mut().for_each(|v| *v = sigmoid(*v));

        let gated: Vec<f64> = r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
        let mut c = self.b_h.as_slice().to_vec();
        self.w_h.mul_vec_add(x, &mut c);
        self.u_h.mul_vec_add(&gated, &mut c);
        c.iter_mut().for_each(|v| *v = tanh(*v));

        let h = h_prev.iter().zip(&z).zip(&c).map(|((hp, zi), ci)| (1.0 - zi) * hp + zi * ci).collect();
        GruStep { z, r, c, h }
    }

    /// Runs the cell over `inputs` starting from h_0 = 0.
    pub fn forward<'a>(&self, inputs: impl IntoIterator<Item = &'a [f64]>) -> GruTrace {
        let mut steps: Vec<GruStep> = Vec::new();
        let zero = vec![0.0; self.hidden()];
        for x in inputs {
            let prev = steps.last().map_or(zero.as_slice(), |s| s.h.as_slice());
            let step = self.step(x, prev);
            steps.push(step);
        }
        GruTrace { steps }
    }

    /// Backpropagation through time. `d_states[t]` is the loss gradient
    /// flowing into state `t` from outside the recurrence; parameter
    /// gradients are accumulated into `grads`.
    pub fn backward(&self, inputs: &[&[f64]], trace: &GruTrace, d_states: &[Vec<f64>], grads: &mut GruCell) {
        let n = self.hidden();
        let zero = vec![0.0; n];
        let mut carry = vec![0.0; n];
        let mut d_c_pre = vec![0.0; n];
        let mut d_z_pre = vec![0.0; n];
        let mut d_r_pre = vec![0.0; n];
        let mut d_gated = vec![0.0; n];
        for t in (0..trace.steps.len()).rev() {
            let s = &trace.steps[t];
            let h_prev = if t == 0 { zero.as_slice() } else { trace.steps[t - 1].h.as_slice() };
            let x = inputs[t];
            let dh: Vec<f64> = d_states[t].iter().zip(&carry).map(|(a, b)| a + b).collect();

            for i in 0..n {
                d_c_pre[i] = dh[i] * s.z[i] * (1.0 - s.c[i] * s.c[i]);
                d_z_pre[i] = dh[i] * (s.c[i] - h_prev[i]) * s.z[i] * (1.0 - s.z[i]);
                carry[i] = dh[i] * (1.0 - s.z[i]);
            }

            let gated: Vec<f64> = s.r.iter().zip(h_prev).map(|(a, b)| a * b).collect();
            grads.w_h.add_outer(&d_c_pre, x);
            grads.u_h.add_outer(&d_c_pre, &gated);
            crate::linalg::axpy(1.0, &d_c_pre, grads.b_h.as_mut_slice());
            d_gated.iter_mut().for_each(|v| *v = 0.0);
            self.u_h.mul_t_vec_add(&d_c_pre, &mut d_gated);
            for i in 0..n {
                d_r_pre[i] = d_gated[i] * h_prev[i] * s.r[i] * (1.0 - s.r[i]);
                carry[i] += d_gated[i] * s.r[i];
            }

            grads.w_z.add_outer(&d_z_pre, x);
            grads.u_z.add_outer(&d_z_pre, h_prev);
            crate::linalg::axpy(1.0, &d_z_pre, grads.b_z.as_mut_slice());
            self.u_z.mul_t_vec_add(&d_z_pre, &mut carry);

            grads.w_r.add_outer(&d_r_pre, x);
            grads.u_r.add_outer(&d_r_pre, h_prev);
            crate::linalg::axpy(1.0, &d_r_pre, grads.b_r.as_mut_slice());
            self.u_r.mul_t_vec_add(&d_r_pre, &mut carry);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }

    #[test]
    fn zero_weights_give_zero_states() {
        let cell = GruCell::zeros(3, 4);
        let xs = [[1.0, -2.0, 0.5], [3.0, 0.0, 1.0]];
        let trace = cell.forward(xs.iter().map(|x| x.as_slice()));
        for h in trace.states() {
            assert!(h.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn empty_sequence() {
        let cell = GruCell::zeros(2, 2);
        let trace = cell.forward(core::iter::empty());
        assert!(trace.steps.is_empty());
        assert!(trace.last().is_none());
    }

    #[test]
    fn single_step_matches_hand_evaluation() {
        let m = |d: [f64; 4]| Matrix::from_vec(2, 2, d.to_vec()).unwrap();
        let b = |d: [f64; 2]| Matrix::from_vec(2, 1, d.to_vec()).unwrap();
        let cell = GruCell {
            w_z: m([0.1, -0.2, 0.3, 0.4]),
            u_z: m([0.5, 0.1, -0.3, 0.2]),
            b_z: b([0.05, -0.1]),
            w_r: m([-0.4, 0.2, 0.1, 0.3]),
            u_r: m([0.2, -0.5, 0.4, 0.1]),
            b_r: b([0.0, 0.2]),
            w_h: m([0.3, 0.3, -0.2, 0.6]),
            u_h: m([-0.1, 0.4, 0.2, -0.3]),
            b_h: b([0.1, 0.0]),
        };
        let x = [1.0, -1.0];
        let hp = [0.5, -0.25];
        // hand evaluation, written out component by component
        let z0 = sig(0.1 * 1.0 + -0.2 * -1.0 + 0.5 * 0.5 + 0.1 * -0.25 + 0.05);
        let z1 = sig(0.3 * 1.0 + 0.4 * -1.0 + -0.3 * 0.5 + 0.2 * -0.25 - 0.1);
        let r0 = sig(-0.4 * 1.0 + 0.2 * -1.0 + 0.2 * 0.5 + -0.5 * -0.25 + 0.0);
        let r1 = sig(0.1 * 1.0 + 0.3 * -1.0 + 0.4 * 0.5 + 0.1 * -0.25 + 0.2);
        let g0 = r0 * 0.5;
        let g1 = r1 * -0.25;
        let c0 = (0.3 * 1.0 + 0.3 * -1.0 + -0.1 * g0 + 0.4 * g1 + 0.1).tanh();
        let c1 = (-0.2 * 1.0 + 0.6 * -1.0 + 0.2 * g0 + -0.3 * g1 + 0.0).tanh();
        let h0 = (1.0 - z0) * 0.5 + z0 * c0;
        let h1 = (1.0 - z1) * -0.25 + z1 * c1;
        let s = cell.step(&x, &hp);
        for (got, want) in [(s.z[0], z0), (s.z[1], z1), (s.r[0], r0), (s.r[1], r1), (s.h[0], h0), (s.h[1], h1)] {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }
}
