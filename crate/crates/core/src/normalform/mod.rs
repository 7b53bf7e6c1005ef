//! Normal forms of self-intersection-one cocycles and the residual
//! (α, β, γ, θ)-action that preserves them.

mod normalize;
mod residual;
mod shape;

pub use normalize::{conjugate, normalize, EliminationStep, Normalization};
pub use residual::{act, act_with_cancel, residual_charts, Acted, ResidualParam};
pub use shape::{
    a_window_allows, b_window_allows, is_normal_form, normal_form_offenders, NormalForm, Offender,
    Part,
};
