//! Physical constants, pinned for bit-stable regression values.

use super::units::{qty, Dim, Quantity};

/// Newtonian gravitational constant (m^3 kg^-1 s^-2).
pub const G: f64 = 6.6743e-11;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant (J/K).
pub const K_B: f64 = 1.380649e-23;
/// Speed of light (m/s).
pub const C_LIGHT: f64 = 2.99792458e8;
/// Stefan-Boltzmann constant (W m^-2 K^-4).
pub const SIGMA_SB: f64 = 5.670374419e-8;
/// Vacuum permeability (N/A^2).
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;
/// Permeability value used by the magnetic-gradient budget. The quoted
/// 1.3e-3 T/m threshold presumes 4 pi x 1e-6 N/A^2 here; kept as its own
/// constant so the convention is explicit.
pub const MU_0_GRADIENT_BUDGET: f64 = 4.0e-6 * std::f64::consts::PI;
/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.8541878128e-12;
/// Wien displacement constant (m K).
pub const WIEN_B: f64 = 2.898e-3;
/// Mass of a hydrogen molecule (kg).
pub const M_H2: f64 = 3.347e-27;
/// Planck mass (kg).
pub const M_PLANCK: f64 = 2.18e-8;

pub const DIM_G: Dim = Dim { m: 3, kg: -1, s: -2, k: 0, a: 0 };
pub const DIM_HBAR: Dim = Dim { m: 2, kg: 1, s: -1, k: 0, a: 0 };
pub const DIM_KB: Dim = Dim { m: 2, kg: 1, s: -2, k: -1, a: 0 };
pub const DIM_SPEED: Dim = Dim { m: 1, kg: 0, s: -1, k: 0, a: 0 };
pub const DIM_SIGMA_SB: Dim = Dim { m: 0, kg: 1, s: -3, k: -4, a: 0 };
pub const DIM_MU0: Dim = Dim { m: 1, kg: 1, s: -2, k: 0, a: -2 };
pub const DIM_EPS0: Dim = Dim { m: -3, kg: -1, s: 4, k: 0, a: 2 };

pub fn g_newton() -> Quantity {
    qty(G, DIM_G)
}

pub fn hbar() -> Quantity {
    qty(HBAR, DIM_HBAR)
}

pub fn k_b() -> Quantity {
    qty(K_B, DIM_KB)
}

pub fn c_light() -> Quantity {
    qty(C_LIGHT, DIM_SPEED)
}

pub fn sigma_sb() -> Quantity {
    qty(SIGMA_SB, DIM_SIGMA_SB)
}

pub fn mu_0() -> Quantity {
    qty(MU_0, DIM_MU0)
}

pub fn mu_0_gradient_budget() -> Quantity {
    qty(MU_0_GRADIENT_BUDGET, DIM_MU0)
}

pub fn epsilon_0() -> Quantity {
    qty(EPSILON_0, DIM_EPS0)
}

pub fn wien_b() -> Quantity {
    qty(WIEN_B, Dim::METER.mul(Dim::KELVIN))
}

pub fn m_h2() -> Quantity {
    qty(M_H2, Dim::KILOGRAM)
}

pub fn m_planck() -> Quantity {
    qty(M_PLANCK, Dim::KILOGRAM)
}
