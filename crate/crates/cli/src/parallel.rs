//! Scoped-thread helpers whose results never depend on the thread count.

use fakenews_core::linalg::axpy;
use fakenews_core::neural::{batch_gradients, EncodedPair, NetworkConfig, NetworkParams};
use fakenews_core::features::WordVectors;

/// Number of pieces a mini-batch gradient is split into, whatever the
/// thread count, so the summation order is fixed.
pub const GRADIENT_PIECES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threads(usize);

impl Threads {
    pub fn new(n: usize) -> Self {
        Self(n.max(1))
    }

    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().map_or(1, usize::from))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `f` over `items`, results in input order.
    pub fn map<T: Sync, R: Send>(self, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
        if self.0 == 1 || items.len() < 2 {
            return items.iter().map(f).collect();
        }
        let chunk = items.len().div_ceil(self.0);
        let f = &f;
        std::thread::scope(|s| {
            let handles: Vec<_> =
                items.chunks(chunk).map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>())).collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    }
}

/// Mean loss and gradient of `batch`, computed as a size-weighted sum of
/// [`GRADIENT_PIECES`] sub-batch means.
pub fn batch_gradients_parallel(
    threads: Threads,
    params: &NetworkParams,
    batch: &[(&EncodedPair, bool)],
    vectors: &WordVectors,
    config: &NetworkConfig,
) -> (f64, NetworkParams) {
    if batch.is_empty() {
        return batch_gradients(params, batch, vectors, config);
    }
    let size = batch.len().div_ceil(GRADIENT_PIECES);
    let pieces: Vec<&[(&EncodedPair, bool)]> = batch.chunks(size).collect();
    let parts = threads.map(&pieces, |p| (p.len(), batch_gradients(params, p, vectors, config)));
    let n = batch.len() as f64;
    let mut total = NetworkParams::zeros(config);
    let mut loss = 0.0;
    for (len, (l, g)) in parts {
        let w = len as f64 / n;
        loss += w * l;
        for ((_, dst), (_, src)) in total.tensors_mut().into_iter().zip(g.tensors()) {
            axpy(w, src.as_slice(), dst.as_mut_slice());
        }
    }
    (loss, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fakenews_core::neural::encode;
    use fakenews_core::synthetic::{generate, SyntheticConfig};

    #[test]
    fn map_keeps_order() {
        let items: Vec<u32> = (0..103).collect();
        for t in [1, 2, 7, 200] {
            assert_eq!(Threads::new(t).map(&items, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn parallel_gradient_matches_serial_and_ignores_thread_count() {
        let s = generate(&SyntheticConfig { articles: 21, dim: 6, cluster_words: 50, ..SyntheticConfig::default() }).unwrap();
        let config = NetworkConfig { seq_len: 8, word_dim: 6, hidden: 4, attention_dim: 3, task_dim: 3, ..NetworkConfig::default() };
        let params = NetworkParams::init(&config, &mut fakenews_core::seeded_rng(2));
        let enc: Vec<(EncodedPair, bool)> = s
            .dataset
            .items()
            .iter()
            .map(|it| (encode(&it.article.title, &it.article.content, &s.vectors, 8), it.labels.unwrap().is_fake))
            .collect();
        let batch: Vec<(&EncodedPair, bool)> = enc.iter().map(|(e, y)| (e, *y)).collect();
        let (l0, g0) = batch_gradients(&params, &batch, &s.vectors, &config);
        let (l1, g1) = batch_gradients_parallel(Threads::new(1), &params, &batch, &s.vectors, &config);
        let (l4, g4) = batch_gradients_parallel(Threads::new(4), &params, &batch, &s.vectors, &config);
        assert_eq!((l1, &g1), (l4, &g4));
        assert!((l0 - l1).abs() < 1e-12);
        for ((_, a), (_, b)) in g0.tensors().into_iter().zip(g1.tensors()) {
            for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                assert!((x - y).abs() < 1e-12, "{x} vs {y}");
            }
        }
    }
}
