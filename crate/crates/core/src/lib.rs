//! Exact orbit decompositions for minimal parabolic k-subgroups acting on
//! symmetric k-varieties of split `SL(n)`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed with exact
//! arithmetic: rationals for the characteristic-zero field models, residues
//! for finite fields, and `a + b√d` pairs for quadratic extensions.
//!
//! The modules follow the computation bottom-up:
//!
//! * [`field`]: scalars, field models and square-class decisions.
//! * [`matrix`] and [`group`]: `SL(n)` over a field model, involutions, `τ`,
//!   and exhaustive enumeration over finite fields.
//! * [`tori`]: θ-stable maximal k-split tori, their `T⁺T⁻` signatures and
//!   `H_k`-conjugacy classes.
//! * [`weyl`]: Weyl groups and the quotients `W_{G_k}(A)/W_{H_k}(A)`.
//! * [`orbits`]: the Weyl-quotient orbit count and the brute-force double coset
//!   oracle.
//! * [`roots`]: the type-A root system, Cayley transforms and flip chains.
//! * [`complexify`]: I-posets, orbit diagrams and the generalized
//!   complexification map.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complexify;
pub mod error;
pub mod field;
pub mod group;
mod linalg;
pub mod matrix;
pub mod orbits;
pub mod parse;
pub mod roots;
pub mod tori;
pub mod weyl;

pub use error::{Error, Result};
pub use field::{ClassLabel, FieldModel, Scalar};
pub use group::{GroupElement, InvolutionSpec, NamedInvolution};
pub use matrix::Matrix;

use core::fmt;

/// Default cap on the number of group elements an exhaustive routine may touch.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A cardinality that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(v) => Some(v),
            Count::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Count::Infinite)
    }
}

impl core::ops::Add for Count {
    type Output = Count;

    fn add(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a + b),
            _ => Count::Infinite,
        }
    }
}

impl core::ops::Mul for Count {
    type Output = Count;

    fn mul(self, rhs: Count) -> Count {
        match (self, rhs) {
            (Count::Finite(0), _) | (_, Count::Finite(0)) => Count::Finite(0),
            (Count::Finite(a), Count::Finite(b)) => Count::Finite(a * b),
            _ => Count::Infinite,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}
