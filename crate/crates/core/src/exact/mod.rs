//! Exact rational polynomial arithmetic, Sturm sequences and the exact
//! decision of when a `C_θ` code beats the 24-cell for `(1+t)^k`.

pub mod poly;
pub mod proposition;
pub mod q7;
pub mod sturm;

pub use poly::{BigRat, RatFn, RatPoly};
pub use proposition::{
    energy_diff_rational, proposition_check, proposition_table, tail_criterion, tail_first_k,
    tail_induction_step_holds, three_design_roots, verify_k3_identity, PropositionRow,
    ThreeDesignData,
};
pub use q7::Q7;
pub use sturm::{
    attains_positive, refine_root, sturm_real_roots, RootInterval, RootIsolation, SturmChain,
};
