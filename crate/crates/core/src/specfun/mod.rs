//! Special functions used by the closed-form solutions.

mod elementary;
mod kernels;
mod oscillatory;

pub use crate::quad::{QuadratureControl, SpecfunValue};
pub use elementary::{conf_hyp_m_1_32, cosine_integral, dawson, dawson_derivative, sine_integral};
pub use kernels::{i1_kernel, s1, s1_ds, Sign};
pub use oscillatory::{j2, j2_ds, j2_euler_integrand, s2, s2_ds};
