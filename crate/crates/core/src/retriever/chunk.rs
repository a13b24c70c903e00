//! Fixed-size sliding-window chunking over character offsets.

use serde::{Deserialize, Serialize};

use super::RetrieverError;
use crate::text::{char_len, char_slice};

pub const DEFAULT_CHUNK_SIZE: usize = 800;
pub const DEFAULT_OVERLAP: usize = 80;

/// Window geometry. `overlap < size` is enforced by [`Chunking::new`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chunking {
    size: usize,
    overlap: usize,
}

impl Chunking {
    pub fn new(size: usize, overlap: usize) -> Result<Self, RetrieverError> {
        if size == 0 {
            return Err(RetrieverError::Config("chunk size must be positive".into()));
        }
        if overlap >= size {
            return Err(RetrieverError::Config(format!(
                "overlap ({overlap}) must be smaller than chunk size ({size})"
            )));
        }
        Ok(Self { size, overlap })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    fn stride(&self) -> usize {
        self.size - self.overlap
    }

    /// Half-open char spans covering `[0, len)`.
    pub fn spans(&self, len: usize) -> Vec<(usize, usize)> {
        let mut spans = Vec::with_capacity(len / self.stride() + 1);
        let mut start = 0;
        while start < len {
            let end = (start + self.size).min(len);
            spans.push((start, end));
            if end == len {
                break;
            }
            start += self.stride();
        }
        spans
    }
}

impl Default for Chunking {
    fn default() -> Self {
        Self {
            size: DEFAULT_CHUNK_SIZE,
            overlap: DEFAULT_OVERLAP,
        }
    }
}

/// A contiguous span of a document body.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chunk {
    pub chunk_id: String,
    pub doc_id: String,
    pub ordinal: usize,
    pub text: String,
    pub char_start: usize,
    pub char_end: usize,
}

/// Chunk identifiers sort by document, then by ordinal.
pub fn chunk_id(doc_id: &str, ordinal: usize) -> String {
    format!("{doc_id}#{ordinal:05}")
}

/// Splits `body` into overlapping windows of `chunking.size()` characters.
pub fn chunk_text(doc_id: &str, body: &str, chunking: Chunking) -> Result<Vec<Chunk>, RetrieverError> {
    let len = char_len(body);
    if len == 0 {
        return Err(RetrieverError::EmptyBody(doc_id.to_string()));
    }
    Ok(chunking
        .spans(len)
        .into_iter()
        .enumerate()
        .map(|(ordinal, (start, end))| Chunk {
            chunk_id: chunk_id(doc_id, ordinal),
            doc_id: doc_id.to_string(),
            ordinal,
            text: char_slice(body, start, end).to_string(),
            char_start: start,
            char_end: end,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spans(body_len: usize, size: usize, overlap: usize) -> Vec<(usize, usize)> {
        let body = "x".repeat(body_len);
        chunk_text("d", &body, Chunking::new(size, overlap).unwrap())
            .unwrap()
            .iter()
            .map(|c| (c.char_start, c.char_end))
            .collect()
    }

    #[test]
    fn stride_of_350_over_1000_chars() {
        assert_eq!(spans(1000, 400, 50), vec![(0, 400), (350, 750), (700, 1000)]);
    }

    #[test]
    fn body_shorter_than_window() {
        assert_eq!(spans(100, 400, 50), vec![(0, 100)]);
    }

    #[test]
    fn six_chars_size_four_overlap_two() {
        let chunks = chunk_text("d", "abcdef", Chunking::new(4, 2).unwrap()).unwrap();
        let got: Vec<_> = chunks.iter().map(|c| (c.char_start, c.char_end, c.text.as_str())).collect();
        assert_eq!(got, vec![(0, 4, "abcd"), (2, 6, "cdef")]);
        assert_eq!(chunks[1].chunk_id, "d#00001");
    }

    #[test]
    fn overlap_must_be_smaller_than_size() {
        assert!(matches!(Chunking::new(4, 4), Err(RetrieverError::Config(_))));
        assert!(matches!(Chunking::new(0, 0), Err(RetrieverError::Config(_))));
        assert!(Chunking::new(4, 3).is_ok());
    }

    #[test]
    fn empty_body_rejected() {
        assert!(matches!(
            chunk_text("d", "", Chunking::default()),
            Err(RetrieverError::EmptyBody(_))
        ));
    }

    #[test]
    fn offsets_are_chars_not_bytes() {
        let chunks = chunk_text("d", "ééééé", Chunking::new(3, 1).unwrap()).unwrap();
        assert_eq!(chunks[0].text, "ééé");
        assert_eq!(chunks[1].text, "ééé");
        assert_eq!((chunks[1].char_start, chunks[1].char_end), (2, 5));
    }

    proptest! {
        #[test]
        fn spans_cover_body_with_declared_overlap(
            size in 1usize..=64,
            overlap_frac in 0.0f64..1.0,
            body in "[a-zé ]{1,300}",
        ) {
            let overlap = ((size as f64) * overlap_frac) as usize % size;
            let chunking = Chunking::new(size, overlap).unwrap();
            let chunks = chunk_text("d", &body, chunking).unwrap();
            let len = body.chars().count();
            prop_assert_eq!(chunks[0].char_start, 0);
            prop_assert_eq!(chunks.last().unwrap().char_end, len);
            for c in &chunks {
                prop_assert!(c.char_start < c.char_end && c.char_end <= len);
                prop_assert_eq!(&c.text, char_slice(&body, c.char_start, c.char_end));
            }
            for w in chunks.windows(2) {
                prop_assert_eq!(w[1].char_start, w[0].char_start + size - overlap);
                prop_assert!(w[1].char_start <= w[0].char_end);
                prop_assert_eq!(w[0].char_end - size, w[0].char_start);
            }
        }
    }
}
