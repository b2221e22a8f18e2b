//! Sketches that let a receiver repair one `k`-substring edit.
//!
//! A sender computes a short [`codec::Sketch`] of a binary string `x`; a
//! receiver holding any `y` obtained from `x` by replacing at most `k`
//! consecutive bits with at most `k` other bits recovers `x` from `y` and
//! the sketch.
//!
//! ```
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! use ssec::bits::{BitString, EditOp};
//! use ssec::channel::apply_edit;
//! use ssec::codec::{recover, sketch};
//! use ssec::params::{derive_params, Mode};
//!
//! let x: BitString = "0011010011100101".parse()?;
//! let params = derive_params(2, x.len(), Mode::Paper, None)?;
//! let sk = sketch(&x, &params)?;
//! let y = apply_edit(&x, &EditOp::new(5, 2, "1".parse()?))?;
//! assert_eq!(recover(&y, &sk)?, x);
//! # Ok(())
//! # }
//! ```

pub mod bits;
pub mod blockhash;
pub mod channel;
pub mod features;
pub mod locate;
pub mod modular;
pub mod params;
pub mod partition;
pub mod codec;
pub mod verify;
