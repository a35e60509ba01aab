//! Trainable sentence boundary detection.
//!
//! Every `.`, `?` and `!` in the input is a candidate boundary. A binary
//! maximum-entropy model, fitted by Generalized Iterative Scaling on a corpus
//! with one sentence per line, decides which candidates end a sentence.
//!
//! ```
//! use sentbound::{corpus::AnnotatedCorpus, detector::{train, TrainConfig}};
//!
//! let corpus = AnnotatedCorpus::from_lines([
//!     "Mr. Smith resigned.",
//!     "Acme Corp. said sales rose 3.5 percent.",
//!     "Dr. Jones left.",
//! ])
//! .unwrap();
//! let trained = train(&corpus, &TrainConfig::default(), None).unwrap();
//! let sentences = trained.detector.sentences("Mr. Brown resigned. Sales rose.");
//! assert_eq!(sentences.len(), 2);
//! ```

pub mod candidates;
pub mod cli;
pub mod corpus;
pub mod detector;
pub mod error;
pub mod eval;
pub mod features;
pub mod maxent;
pub mod model;
pub mod synthetic;

pub use error::{Error, Result};
