//! Correlation-function model of the quantized electromagnetic field coupled
//! to classical and quantum current sources.
//!
//! Test functions live in 4D Fourier space ([`testfn`]), restrict to photon
//! wave functions on the positive light cone ([`hilbert`]), and feed the
//! quasi-free correlation kernels in [`states`]. Currents and Green's-function
//! smearing are in [`currents`]; finite GNS data (Gram matrices, positivity,
//! Weyl relations) in [`gns`]. Every momentum-space integral goes through the
//! spherical quadrature of [`kspace`].
//!
//! Conventions: metric signature (+,−,−,−); all four-vectors are stored as
//! contravariant components and contracted with [`minkowski::dot`]; the
//! Fourier transform is `f(q) = (2π)^-2 ∫ f̃(k) e^{-i k·q} d⁴k`.

pub mod currents;
pub mod error;
pub mod gns;
pub mod hilbert;
pub mod kspace;
pub mod minkowski;
pub mod quad4;
pub mod sampling;
pub mod states;
pub mod testfn;

pub use currents::{
    ClassicalCurrent, Greens, IrReport, IrVerdict, OnShellAmplitude, OnShellSource, QuantumCurrent,
    Source, SyntheticAmplitude,
};
pub use error::{Error, Result};
pub use gns::GramReport;
pub use hilbert::WaveFunction;
pub use kspace::{Grid, GridSpec};
pub use minkowski::{CVec4, Vec4, C64};
pub use states::{CorrelationKernel, Features, KernelVariant};
pub use testfn::{Mode, Polarization, Profile, ProfileKind, TestFunction};
