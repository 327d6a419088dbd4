//! Numerics for bosonic dephasing channels.
//!
//! A bosonic dephasing channel averages random phase rotations of a single
//! mode against a probability density `p` on the circle.  In the Fock basis
//! the channel acts entrywise: the input state is multiplied, entry by entry,
//! by a Toeplitz matrix whose symbol is `p` (entry `(h, k)` holds the Fourier
//! coefficient of `p` at frequency `h - k`).  All the standard capacities of
//! this channel (quantum, private, and their two-way assisted versions)
//! coincide and equal the relative entropy between `p` and the uniform
//! density, `log2(2*pi) - h(p)` bits per channel use, where `h` is the
//! differential entropy of `p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: scalar special functions (modified Bessel `I_n`, the Euler
//!   function) and periodic trapezoidal quadrature.
//! * [`circular`]: circular probability densities (wrapped normal, von Mises,
//!   wrapped Cauchy, uniform, tabulated, products), their Fourier
//!   coefficients, entropies, and divergences to uniform.
//! * [`toeplitz`]: finite Toeplitz truncations of the channel symbol and
//!   their spectra, via a dependency-free Jacobi eigensolver.
//! * [`capacity`]: exact capacities, closed forms per family, finite-size
//!   rates, and convergence reports.
//! * [`channelsim`]: a truncated Fock-space simulator for the channel and its
//!   approximate teleportation simulation.

pub mod capacity;
pub mod channelsim;
pub mod circular;
pub mod specfun;
pub mod toeplitz;
