//! Correlated distributions on the hypercube.
//!
//! `y ~ρ x` copies each coordinate of `x` with probability `(1+ρ)/2` and flips
//! it otherwise. The refined `y ~ρ^L x` does this only on the coordinates of
//! `L` and draws the rest uniformly. Everything here is either an exact
//! computation over a distance census, a seeded Monte-Carlo estimate, or a
//! closed-form bound evaluated at finite `n`.

mod exact;
mod fat_layer;
mod lemmas;
mod rsse;
mod sample;
mod spec;
mod split;

pub use exact::{direct_joint_probability, exact_joint_probability, DirectCheck, ProbabilityReport};
pub use fat_layer::{fat_layer_fraction, full_cube_fat_layer_fraction, in_fat_window, FatLayerReport};
pub use lemmas::{dense_restriction, lemma6_upper, lemma7_lower, sandwich, Lemma6Terms, Lemma7Terms, SandwichReport};
pub use rsse::{rsse_check, rsse_lower_bound, RssBoundInputs, RsseCheck};
pub use sample::{bernoulli, monte_carlo_joint, rng_for, sample_correlated, sample_correlated_seeded, McEstimate};
pub use spec::CorrelationSpec;
pub use split::{find_split, split_window, SplitMode, SplitReport};
