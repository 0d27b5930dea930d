//! Finite-blocklength distribution matchers for probabilistically shaped QAM and a
//! kurtosis-aware per-block nonlinear-interference SNR model.

pub mod ccdm;
pub mod codec;
pub mod combinatorics;
pub mod commands;
pub mod error;
pub mod ess;
pub mod io;
pub mod mpdm;
pub mod nli;
pub mod optimizer;
pub mod scheme;

pub use combinatorics::{AmplitudeAlphabet, Composition, Pmf};
pub use error::{Error, Result};
pub use scheme::{Addressing, CompositionSet, Leaf, SchemeTag};
