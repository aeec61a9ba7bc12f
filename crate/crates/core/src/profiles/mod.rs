//! Base measure spaces, sampled functions, L_p norms and L_p profiles.

mod closed_form;
mod profile;
mod sampled;
mod space;

pub use closed_form::ClosedForm;
pub use profile::{LpProfile, Provenance};
pub use sampled::SampledFunction;
pub use space::{BaseSpace, SpaceKind, DEFAULT_SEQUENCE_LEN, DEFAULT_T_MAX};

/// `|f|_p`; see [`SampledFunction::lp_norm`].
pub fn lp_norm(f: &SampledFunction, p: f64) -> crate::Result<f64> {
    f.lp_norm(p)
}

/// The profile `p ↦ |f|_p` on `domain`.
pub fn profile_of(f: &SampledFunction, domain: crate::spectral::ExponentInterval) -> LpProfile {
    LpProfile::of(f, domain)
}

/// See [`SampledFunction::decreasing_rearrangement`].
pub fn decreasing_rearrangement(f: &SampledFunction) -> SampledFunction {
    f.decreasing_rearrangement()
}
