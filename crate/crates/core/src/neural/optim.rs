use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::NetworkParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptimizerKind {
    RmsProp,
    Adam,
}

impl OptimizerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OptimizerKind::RmsProp => "rmsprop",
            OptimizerKind::Adam => "adam",
        }
    }
}

impl core::str::FromStr for OptimizerKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rmsprop" => Ok(OptimizerKind::RmsProp),
            "adam" => Ok(OptimizerKind::Adam),
            other => Err(crate::Error::InvalidParameter(alloc::format!("unknown optimizer `{other}`"))),
        }
    }
}

const RHO: f64 = 0.9;
const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-7;

/// RMSProp or Adam state over the flattened parameter tensors.
#[derive(Debug, Clone)]
pub struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
    t: u64,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind, lr: f64, params: &NetworkParams) -> Self {
        let zeros: Vec<Vec<f64>> = params.tensors().iter().map(|(_, m)| alloc::vec![0.0; m.as_slice().len()]).collect();
        Self { kind, lr, first: zeros.clone(), second: zeros, t: 0 }
    }

    pub fn step(&mut self, params: &mut NetworkParams, grads: &NetworkParams) {
        self.t += 1;
        let (c1, c2) = match self.kind {
            OptimizerKind::Adam => {
                (1.0 - libm::pow(BETA1, self.t as f64), 1.0 - libm::pow(BETA2, self.t as f64))
            }
            OptimizerKind::RmsProp => (1.0, 1.0),
        };
        let grads = grads.tensors();
        for (k, (_, p)) in params.tensors_mut().into_iter().enumerate() {
            let g = grads[k].1.as_slice();
            let p = p.as_mut_slice();
            let (m, v) = (&mut self.first[k], &mut self.second[k]);
            for i in 0..p.len() {
                match self.kind {
                    OptimizerKind::RmsProp => {
                        v[i] = RHO * v[i] + (1.0 - RHO) * g[i] * g[i];
                        p[i] -= self.lr * g[i] / (libm::sqrt(v[i]) + EPSILON);
                    }
                    OptimizerKind::Adam => {
                        m[i] = BETA1 * m[i] + (1.0 - BETA1) * g[i];
                        v[i] = BETA2 * v[i] + (1.0 - BETA2) * g[i] * g[i];
                        p[i] -= self.lr * (m[i] / c1) / (libm::sqrt(v[i] / c2) + EPSILON);
                    }
                }
            }
        }
    }
}
