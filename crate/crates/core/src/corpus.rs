//! Seeded random fixtures: closed-form profiles and sampled function pairs.
//!
//! ChaCha8 keeps the streams identical across platforms and rand releases, so a
//! seed fully determines a corpus.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::profiles::{BaseSpace, ClosedForm, LpProfile, SampledFunction};
use crate::spectral::ExponentInterval;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random half-line closed form whose L_p norm is finite on the whole of `domain`.
pub fn random_closed_form<R: Rng>(rng: &mut R, domain: ExponentInterval) -> ClosedForm {
    let amp = rng.gen_range(0.1..5.0);
    let (a, b) = (domain.a(), domain.b());
    match rng.gen_range(0..4) {
        0 => {
            let lo = rng.gen_range(0.0..5.0);
            ClosedForm::Indicator {
                lo,
                hi: lo + rng.gen_range(0.05..20.0),
                amp,
            }
        }
        1 if b.is_finite() => ClosedForm::PowerHead {
            exponent: rng.gen_range(0.0..0.9) / b,
            end: rng.gen_range(0.2..5.0),
            amp,
        },
        2 => ClosedForm::PowerTail {
            exponent: rng.gen_range(1.1..3.0) / a,
            start: rng.gen_range(0.2..5.0),
            amp,
        },
        _ => ClosedForm::ExpDecay {
            rate: rng.gen_range(0.1..10.0),
            amp,
        },
    }
}

/// `p ↦ |f|_p` for a random closed form, evaluated analytically.
pub fn random_profile<R: Rng>(rng: &mut R, domain: ExponentInterval) -> LpProfile {
    let form = random_closed_form(rng, domain);
    LpProfile::closed_form(domain, move |p| form.lp_norm(p))
}

pub fn random_profile_pair<R: Rng>(rng: &mut R, domain: ExponentInterval) -> (LpProfile, LpProfile) {
    (random_profile(rng, domain), random_profile(rng, domain))
}

/// A signed step-and-decay function on `space`, without a closed form so that
/// every integral is taken against the same grid weights.
pub fn random_function<R: Rng>(rng: &mut R, space: &BaseSpace) -> Result<SampledFunction> {
    let pts = space.points();
    let (lo, hi) = (pts[0], pts[pts.len() - 1]);
    let bumps: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..4))
        .map(|_| {
            let u = rng.gen_range(lo..hi);
            let v = rng.gen_range(u..hi);
            (u, v, rng.gen_range(-3.0..3.0))
        })
        .collect();
    let rate = rng.gen_range(0.2..3.0);
    let decay = rng.gen_range(-2.0..2.0);
    SampledFunction::from_fn(space.clone(), move |t| {
        let steps: f64 = bumps
            .iter()
            .filter(|(u, v, _)| (*u..=*v).contains(&t))
            .map(|(_, _, c)| c)
            .sum();
        steps + decay * (-rate * (t - lo)).exp()
    })
}

pub fn random_function_pair<R: Rng>(
    rng: &mut R,
    space: &BaseSpace,
) -> Result<(SampledFunction, SampledFunction)> {
    Ok((random_function(rng, space)?, random_function(rng, space)?))
}
