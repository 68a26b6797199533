use alloc::vec::Vec;

use super::{AnalyzedArticle, EMBEDDING_DIM};
use crate::embeddings::{cosine, doc_vector, EmbeddingMatrix, Vocabulary};
use crate::{Error, Result};

/// Word vectors used by the embedding feature group and the network.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVectors {
    pub vocab: Vocabulary,
    pub matrix: EmbeddingMatrix,
}

impl WordVectors {
    pub fn new(vocab: Vocabulary, matrix: EmbeddingMatrix) -> Result<Self> {
        if vocab.len() != matrix.vocab_size() {
            return Err(Error::DimensionMismatch { expected: vocab.len(), found: matrix.vocab_size() });
        }
        Ok(Self { vocab, matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Mean title vector, mean content vector and their cosine (601 values).
pub fn embedding_features(a: &AnalyzedArticle<'_>, vectors: &WordVectors) -> Result<Vec<f64>> {
    if vectors.dim() != EMBEDDING_DIM {
        return Err(Error::DimensionMismatch { expected: EMBEDDING_DIM, found: vectors.dim() });
    }
    let title = doc_vector(a.title_tokens.words().map(|t| t.lower.as_str()), &vectors.vocab, &vectors.matrix);
    let content = doc_vector(a.content_tokens.words().map(|t| t.lower.as_str()), &vectors.vocab, &vectors.matrix);
    let cos = cosine(&title, &content)?;
    let mut out = title;
    out.extend(content);
    out.push(cos);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Article;
    use crate::linalg::Matrix;
    use alloc::string::String;
    use alloc::vec;

    fn vectors() -> WordVectors {
        let vocab = Vocabulary::from_words(vec!["котка".into(), "куче".into()]).unwrap();
        let mut data = vec![0.0; 2 * EMBEDDING_DIM];
        for (i, v) in data.iter_mut().enumerate() {
            *v = ((i * 7 % 13) as f64 - 6.0) / 10.0;
        }
        let m = EmbeddingMatrix::from_input(Matrix::from_vec(2, EMBEDDING_DIM, data).unwrap()).unwrap();
        WordVectors::new(vocab, m).unwrap()
    }

    fn article(title: &str, content: &str) -> Article {
        Article { id: 0, url: String::new(), date: String::new(), title: title.into(), content: content.into() }
    }

    #[test]
    fn title_equals_content() {
        let v = vectors();
        let art = article("Котка и куче", "котка и куче");
        let f = embedding_features(&AnalyzedArticle::new(&art), &v).unwrap();
        assert_eq!(f.len(), 601);
        assert!((f[600] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oov_title_and_single_word() {
        let v = vectors();
        let art = article("непознато", "котка");
        let f = embedding_features(&AnalyzedArticle::new(&art), &v).unwrap();
        assert!(f[..300].iter().all(|&x| x == 0.0));
        assert_eq!(f[600], 0.0);
        let art = article("куче", "");
        let f = embedding_features(&AnalyzedArticle::new(&art), &v).unwrap();
        assert_eq!(&f[..300], v.matrix.vector(1));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let vocab = Vocabulary::from_words(vec!["a".into()]).unwrap();
        let m = EmbeddingMatrix::from_input(Matrix::zeros(1, 3)).unwrap();
        let v = WordVectors::new(vocab, m).unwrap();
        let art = article("a", "a");
        assert!(matches!(
            embedding_features(&AnalyzedArticle::new(&art), &v),
            Err(Error::DimensionMismatch { expected: 300, found: 3 })
        ));
    }
}
