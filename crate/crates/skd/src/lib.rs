//! Subclass knowledge distillation, measured and simulated.
//!
//! When a classification task has few classes, a teacher network's soft
//! targets carry little information and distillation gains are limited.
//! Training the teacher on *subclasses* and distilling subclass
//! probabilities transfers more: this crate quantifies how much, and lets
//! you watch it happen at desk scale.
//!
//! Two halves:
//!
//! * **Analysis** — treat the teacher's normalized confusion matrices as
//!   discrete memoryless channels and compute the label bits per training
//!   sample they can carry: closed forms for the binary asymmetric,
//!   Z, q-ary symmetric, and (weakly) symmetric families ([`capacity`]),
//!   class + subclass decompositions ([`labelbits`]), all cross-checked by
//!   a Blahut–Arimoto oracle.
//! * **Simulation** — deterministic synthetic datasets with subclass
//!   structure ([`synthdata`]) and exact-gradient toy networks ([`distill`])
//!   for teacher / baseline / class-distillation / subclass-distillation
//!   comparisons, gradient-checked against finite differences.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```text
//! cargo run -p skd --example channel_capacity    # closed forms vs the iterative oracle
//! cargo run -p skd --example classify_channel    # structural channel classification
//! cargo run -p skd --example label_bits          # class/subclass label-bit reports
//! cargo run -p skd --example polyp_tasks         # the six HP/SSA-style task analyses
//! cargo run -p skd --example gradient_check      # backprop vs finite differences
//! cargo run -p skd --example synthetic_data      # dataset generation and CSV export
//! cargo run -p skd --example distill_run         # one teacher/student training round
//! cargo run -p skd --example full_experiment     # the multi-run four-arm comparison
//! ```
//!
//! The `skd` binary wraps the same entry points for scripting:
//! `skd capacity`, `skd labelbits`, `skd simulate`, `skd gradcheck`.
//!
//! ## Determinism
//!
//! Everything that draws randomness is seeded ChaCha8; training, dataset
//! generation, and experiment reports are byte-identical across repeated
//! invocations with the same inputs, and independent runs are seeded
//! `base + run index` so parallel and serial execution agree exactly.

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod distill;
pub mod entropy;
pub mod error;
pub mod labelbits;
pub mod report;
pub mod synthdata;

pub use channel::{ChannelKind, ChannelMatrix};
pub use entropy::{binary_entropy, entropy, ProbVector};
pub use error::{Error, Result};
