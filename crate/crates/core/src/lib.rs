//! Numerical toolkit for composed and integral grand Lebesgue spaces.
//!
//! A composed grand Lebesgue norm sees a function only through its L_p
//! profile `p ↦ |f|_p`; an outer norm is then applied to that profile. The
//! integral variant uses `(∫ |f|_p^Q ν(dp))^{1/Q}` for a measure ν on the
//! exponent axis, the classical grand Lebesgue norm uses `sup_p |f|_p / ψ(p)`.

pub mod acn;
pub mod boyd;
pub mod cgls;
pub mod corpus;
pub mod duality;
pub mod error;
pub mod fundamental;
pub mod operators;
pub mod profiles;
pub mod report;
pub mod schema;
pub mod search;
pub mod spectral;

pub use acn::{acn_modulus, difference_modulus, uniform_acn, AcnCurve};
pub use boyd::{boyd_indices, dilation_norm, BoydEstimate, DilationFamily};
pub use cgls::{cgls_norm, NormValue, OuterNorm};
pub use duality::{conjugate_measure, fundamental_product_report, holder_pairing_check, qprime_norm, ConjugateSpace};
pub use error::{GlsError, Result};
pub use fundamental::{
    am_class_test, fundamental_function, saddle_asymptote, zeta, AMTestReport, AmVerdict, FundamentalCurve,
};
pub use operators::{
    hardy_average, hilbert_transform, hl_maximal, transfer_norm, verify_transfer_bound, KpConstant, OperatorKind,
    TransferSpace,
};
pub use profiles::{BaseSpace, ClosedForm, LpProfile, SampledFunction, SpaceKind};
pub use report::ReportRecord;
pub use schema::{BaseDesc, FunctionDesc, MeasureDesc, SchemaError, SpaceDesc};
pub use spectral::{ExponentInterval, PsiFunction, QuadratureSpec, SpectralMeasure};
