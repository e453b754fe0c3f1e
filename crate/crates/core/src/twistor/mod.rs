//! Vector bundles on `ℙ¹` given by a single gluing matrix, their filtrations
//! by subbundles and morphisms between them.

mod bundle;
mod morphism;
pub(crate) mod poly_ops;
mod subbundle;

pub use bundle::{Birkhoff, TwistorBundle};
pub use morphism::{
    conjugacy_constancy, degree_bound_check, laurent_scaled, morphism_ker_im_coker, morphism_weight_filtration, sample_points,
    strong_compat_via_twistor, sub_intersect, sub_sum, BundleMorphism, ConjugacyReport, DegreeBound, KerImCoker, SamplePoint,
    TwistorStrongReport,
};
pub use subbundle::{chain_verdict, quotient_gluing, FilteredTwistorBundle, MixedVerdict, Subbundle};
