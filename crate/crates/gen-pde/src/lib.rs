//! Physics-informed PDE solving with learnable basis-function expansions.
//!
//! The library trains two kinds of models against a PDE residual loss:
//!
//! * a basis-expansion model — a small catalog of analytic basis families
//!   (decaying sines, separable Gaussians, characteristic-line pairs) whose
//!   parameters are trained jointly with a 20-unit tanh synthesis network
//!   that composes the basis outputs into `u(x, t)`;
//! * a plain multilayer perceptron on raw `(x, t)` as the baseline.
//!
//! Derivatives come from [`autodiff`]: second-order forward jets carry
//! `u_x, u_t, u_xx, u_xt, u_tt` through any composition, and a reverse tape
//! over jets yields exact parameter gradients of losses built from those
//! derivative channels. Three benchmark problems (heat, wave, viscous
//! Burgers) ship with closed-form, d'Alembert, Cole–Hopf and
//! finite-difference reference solutions for cross-checked evaluation,
//! including outside the training domain.
//!
//! The narrative guide lives in `book/`; its code snippets compile as
//! doc-tests of this crate.

pub mod autodiff;
pub mod basis;
pub mod domain;
pub mod error;
pub mod model;
pub mod pde;
pub mod training;

pub use domain::DomainBox;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            pub struct $name;
        };
    }

    chapter!(Introduction, "../../../book/src/introduction.md");
    chapter!(JetsAndTapes, "../../../book/src/jets-and-tapes.md");
    chapter!(BasisFunctions, "../../../book/src/basis-functions.md");
    chapter!(Models, "../../../book/src/models.md");
    chapter!(Problems, "../../../book/src/problems.md");
    chapter!(Training, "../../../book/src/training.md");
    chapter!(CommandLine, "../../../book/src/command-line.md");
}
