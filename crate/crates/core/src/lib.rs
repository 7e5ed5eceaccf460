//! Machine checks for the finite content of repetition-threshold proofs
//! built on uniform binary morphisms and Pansiot encodings.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: binary and `Σ_n` words, periods, exact exponents.
//! * [`pansiot`]: the encoding between the two alphabets.
//! * [`perms`]: permutations and the homomorphism `σ`.
//! * [`morphisms`]: the embedded morphisms `h_15 … h_26`, limit words and
//!   factor sets.
//! * [`markability`]: phase determinism of factors inside morphic images.
//! * [`verifier`]: the per-`n` report tying everything together.
//! * [`search`]: backtracking rediscovery of suitable morphisms.

pub mod markability;
pub mod morphisms;
pub mod pansiot;
pub mod perms;
pub mod search;
pub mod verifier;
pub mod words;

pub use morphisms::{builtin, builtins, UniformMorphism};
pub use perms::Permutation;
pub use words::{BinaryWord, RepetitionOccurrence, SigmaWord};
