//! Existence gate and construction of H-selfadjoint m-th roots.

mod builders;
mod gate;
mod pipeline;

pub use builders::{
    assemble_root, root_block_negative_even, root_block_nilpotent, root_block_nonreal, root_block_real,
    solve_bilinear_normalization, solve_hankel_normalization, RootPart,
};
pub use gate::{
    m_tuple_partition, root_exists, sign_pattern_check, Certificate, CertificateKind, MTuple, RootDecision,
};
pub use pipeline::{mth_root, RootOptions, RootOutcome, RootResult};
