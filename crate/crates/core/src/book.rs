#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/quivers.md")]
pub mod quivers {}
#[doc = include_str!("../../../book/src/invariants.md")]
pub mod invariants {}
#[doc = include_str!("../../../book/src/pbw.md")]
pub mod pbw {}
#[doc = include_str!("../../../book/src/series.md")]
pub mod series {}
#[doc = include_str!("../../../book/src/relations.md")]
pub mod relations {}
#[doc = include_str!("../../../book/src/harness.md")]
pub mod harness {}
