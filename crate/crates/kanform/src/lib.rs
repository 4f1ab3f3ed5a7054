pub mod chains;
pub mod cyclelift;
pub mod error;
pub mod intlinalg;
pub mod liegroup;
pub mod moduli;
pub mod pairing;
pub mod simplicial;
pub mod words;

pub use error::{Error, ParseError, Result};
pub use words::{ExponentVector, Generator, Letter, Word};
