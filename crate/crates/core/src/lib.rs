//! Numerics for classical sequence spaces: Marcinkiewicz, Lorentz, Orlicz
//! and Musielak-Orlicz norms, the weight and Orlicz-function calculus around
//! them, and truncated criteria with explicit verdicts.

pub mod l1probe;
pub mod marcinkiewicz;
pub mod orlicz;
pub mod report;
pub mod seqvec;
pub mod verify;
pub mod weights;
