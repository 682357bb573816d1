// SPDX-License-Identifier: Apache-2.0

//! The guide in `book/`, included chapter by chapter so that its code samples
//! run as doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/permutations.md")]
pub mod permutations {}

#[doc = include_str!("../../../book/src/circuits.md")]
pub mod circuits {}

#[doc = include_str!("../../../book/src/canonical.md")]
pub mod canonical {}

#[doc = include_str!("../../../book/src/table.md")]
pub mod table {}

#[doc = include_str!("../../../book/src/synthesis.md")]
pub mod synthesis {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
