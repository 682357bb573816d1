// SPDX-License-Identifier: Apache-2.0

pub mod bfs;
pub mod canonical;
pub mod circuit;
pub mod experiments;
pub mod gate;
pub mod lanes;
pub mod perm;
pub mod store;
pub mod synth;
