//! Univariate and bivariate Gaussian machinery.

pub mod bivariate;
pub mod lemmas;
pub mod normal;
pub mod region;

pub use bivariate::{bvn_lower, bvn_upper, psi, BvnCov, CovKind};
pub use lemmas::{lemma1_shift_check, lemma2_sandwich, sandwich_exponents, SandwichReport, ShiftReport};
pub use normal::{pdf, phi, phi_inv};
pub use region::{psi_inv_membership, trace_boundary, PsiInverseRegion, RegionShape};
