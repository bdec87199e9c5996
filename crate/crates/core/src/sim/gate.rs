//! Gate set and angle slots.
//!
//! Rotation convention: `R_P(θ) = exp(-iθP/2)` for `P ∈ {X, Y, Z, Z⊗Z}`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// An angle slot of a gate: either a literal or an affine function
/// `scale * θ + offset` of one circuit parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Angle {
    Fixed(f64),
    Param { index: usize, scale: f64, offset: f64 },
}

impl Angle {
    pub fn param(index: usize) -> Self {
        Angle::Param { index, scale: 1.0, offset: 0.0 }
    }

    pub fn affine(index: usize, scale: f64, offset: f64) -> Self {
        Angle::Param { index, scale, offset }
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        match *self {
            Angle::Fixed(v) => v,
            Angle::Param { index, scale, offset } => scale * params[index] + offset,
        }
    }

    pub fn param_index(&self) -> Option<usize> {
        match *self {
            Angle::Fixed(_) => None,
            Angle::Param { index, .. } => Some(index),
        }
    }

    /// Derivative of the slot value with respect to its parameter.
    pub fn scale(&self) -> f64 {
        match *self {
            Angle::Fixed(_) => 0.0,
            Angle::Param { scale, .. } => scale,
        }
    }
}

impl From<f64> for Angle {
    fn from(v: f64) -> Self {
        Angle::Fixed(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H,
    X,
    Y,
    Z,
    S,
    RX(Angle),
    RY(Angle),
    RZ(Angle),
    /// `RZ(φ + π) · RY(θ + π/2)`, the exchange-gate rotation; slots are (θ, φ).
    R2(Angle, Angle),
    ZZ(Angle),
    CNOT,
    CZ,
    SWAP,
    /// Single-qubit `inner` gate applied when all `controls` qubits are 1.
    /// Targets list the controls first, the inner target last.
    Controlled { controls: usize, inner: Box<Gate> },
    U3(Angle, Angle, Angle),
}

/// How the parameter-shift rule applies to one angle slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftRule {
    /// Generator with eigenvalues ±1/2: two-term rule with shifts ±π/2.
    TwoTerm,
    /// Generator with eigenvalues {0, ±1/2} (controlled rotations):
    /// four-term rule with shifts ±π/2 and ±3π/2.
    FourTerm,
}

impl Gate {
    pub fn controlled(controls: usize, inner: Gate) -> Self {
        Gate::Controlled { controls, inner: Box::new(inner) }
    }

    pub fn name(&self) -> String {
        match self {
            Gate::H => "H".into(),
            Gate::X => "X".into(),
            Gate::Y => "Y".into(),
            Gate::Z => "Z".into(),
            Gate::S => "S".into(),
            Gate::RX(_) => "RX".into(),
            Gate::RY(_) => "RY".into(),
            Gate::RZ(_) => "RZ".into(),
            Gate::R2(..) => "R2".into(),
            Gate::ZZ(_) => "ZZ".into(),
            Gate::CNOT => "CNOT".into(),
            Gate::CZ => "CZ".into(),
            Gate::SWAP => "SWAP".into(),
            Gate::Controlled { controls, inner } => format!("C{}-{}", controls, inner.name()),
            Gate::U3(..) => "U3".into(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::ZZ(_) | Gate::CNOT | Gate::CZ | Gate::SWAP => 2,
            Gate::Controlled { controls, inner } => controls + inner.arity(),
            _ => 1,
        }
    }

    pub fn angles(&self) -> Vec<Angle> {
        match self {
            Gate::RX(a) | Gate::RY(a) | Gate::RZ(a) | Gate::ZZ(a) => vec![*a],
            Gate::R2(t, p) => vec![*t, *p],
            Gate::U3(t, p, l) => vec![*t, *p, *l],
            Gate::Controlled { inner, .. } => inner.angles(),
            _ => Vec::new(),
        }
    }

    pub fn is_parameterized(&self) -> bool {
        self.angles().iter().any(|a| a.param_index().is_some())
    }

    /// Replace every angle slot with its bound value.
    pub fn bind(&self, params: &[f64]) -> Gate {
        self.map_angles(&mut |_, a| Angle::Fixed(a.value(params)))
    }

    /// Rebuild the gate with `f(slot, angle)` applied to every angle slot.
    pub fn map_angles(&self, f: &mut impl FnMut(usize, Angle) -> Angle) -> Gate {
        match self {
            Gate::RX(a) => Gate::RX(f(0, *a)),
            Gate::RY(a) => Gate::RY(f(0, *a)),
            Gate::RZ(a) => Gate::RZ(f(0, *a)),
            Gate::ZZ(a) => Gate::ZZ(f(0, *a)),
            Gate::R2(t, p) => Gate::R2(f(0, *t), f(1, *p)),
            Gate::U3(t, p, l) => Gate::U3(f(0, *t), f(1, *p), f(2, *l)),
            Gate::Controlled { controls, inner } => {
                Gate::Controlled { controls: *controls, inner: Box::new(inner.map_angles(f)) }
            }
            other => other.clone(),
        }
    }

    /// Shift rule for a given angle slot, if the slot is a Pauli rotation.
    pub fn shift_rule(&self, slot: usize) -> Option<ShiftRule> {
        match self {
            Gate::RX(_) | Gate::RY(_) | Gate::RZ(_) | Gate::ZZ(_) if slot == 0 => {
                Some(ShiftRule::TwoTerm)
            }
            Gate::R2(..) if slot < 2 => Some(ShiftRule::TwoTerm),
            Gate::U3(..) if slot < 3 => Some(ShiftRule::TwoTerm),
            Gate::Controlled { inner, .. } => match inner.as_ref() {
                Gate::RX(_) | Gate::RY(_) | Gate::RZ(_) if slot == 0 => Some(ShiftRule::FourTerm),
                _ => None,
            },
            _ => None,
        }
    }

    /// Unitary of a fully bound gate. Local basis index is little-endian
    /// in the target order: target `k` is bit `k`.
    pub fn matrix(&self) -> Result<DMatrix<C64>> {
        let bound = |a: &Angle| match a {
            Angle::Fixed(v) => Ok(*v),
            Angle::Param { index, .. } => Err(Error::Unbound(format!("#{index}"))),
        };
        let m = match self {
            Gate::H => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                mat2([h, h, h, -h])
            }
            Gate::X => mat2([ZERO, ONE, ONE, ZERO]),
            Gate::Y => mat2([ZERO, -I, I, ZERO]),
            Gate::Z => mat2([ONE, ZERO, ZERO, -ONE]),
            Gate::S => mat2([ONE, ZERO, ZERO, I]),
            Gate::RX(a) => mat2(rx(bound(a)?)),
            Gate::RY(a) => mat2(ry(bound(a)?)),
            Gate::RZ(a) => mat2(rz(bound(a)?)),
            Gate::R2(t, p) => mat2(r2(bound(t)?, bound(p)?)),
            Gate::U3(t, p, l) => mat2(u3(bound(t)?, bound(p)?, bound(l)?)),
            Gate::ZZ(a) => {
                let t = bound(a)?;
                let m = C64::from_polar(1.0, -t / 2.0);
                let p = C64::from_polar(1.0, t / 2.0);
                DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![m, p, p, m]))
            }
            Gate::CNOT => permutation(&[0, 3, 2, 1]),
            Gate::CZ => DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE])),
            Gate::SWAP => permutation(&[0, 2, 1, 3]),
            Gate::Controlled { controls, inner } => {
                let u = inner.matrix()?;
                if u.nrows() != 2 {
                    return Err(Error::Unsupported(format!(
                        "controlled multi-qubit gate {}",
                        inner.name()
                    )));
                }
                let dim = 2usize << controls;
                let mask = (1usize << controls) - 1;
                let mut m = DMatrix::identity(dim, dim);
                let t = 1usize << controls;
                m[(mask, mask)] = u[(0, 0)];
                m[(mask, mask | t)] = u[(0, 1)];
                m[(mask | t, mask)] = u[(1, 0)];
                m[(mask | t, mask | t)] = u[(1, 1)];
                m
            }
        };
        Ok(m)
    }

    /// 2×2 matrix entries `[m00, m01, m10, m11]` of a bound single-qubit gate.
    pub(crate) fn single_qubit(&self) -> Option<[C64; 4]> {
        let f = |a: &Angle| match a {
            Angle::Fixed(v) => Some(*v),
            Angle::Param { .. } => None,
        };
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Some(match self {
            Gate::H => [h, h, h, -h],
            Gate::X => [ZERO, ONE, ONE, ZERO],
            Gate::Y => [ZERO, -I, I, ZERO],
            Gate::Z => [ONE, ZERO, ZERO, -ONE],
            Gate::S => [ONE, ZERO, ZERO, I],
            Gate::RX(a) => rx(f(a)?),
            Gate::RY(a) => ry(f(a)?),
            Gate::RZ(a) => rz(f(a)?),
            Gate::R2(t, p) => r2(f(t)?, f(p)?),
            Gate::U3(t, p, l) => u3(f(t)?, f(p)?, f(l)?),
            _ => return None,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn mat2(e: [C64; 4]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &e)
}

fn permutation(images: &[usize]) -> DMatrix<C64> {
    let n = images.len();
    let mut m = DMatrix::zeros(n, n);
    for (col, &row) in images.iter().enumerate() {
        m[(row, col)] = ONE;
    }
    m
}

fn rx(t: f64) -> [C64; 4] {
    let (s, c) = (t / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::new(0.0, -s), C64::new(0.0, -s), C64::new(c, 0.0)]
}

fn ry(t: f64) -> [C64; 4] {
    let (s, c) = (t / 2.0).sin_cos();
    [C64::new(c, 0.0), C64::new(-s, 0.0), C64::new(s, 0.0), C64::new(c, 0.0)]
}

fn rz(t: f64) -> [C64; 4] {
    [C64::from_polar(1.0, -t / 2.0), ZERO, ZERO, C64::from_polar(1.0, t / 2.0)]
}

fn mul2(a: [C64; 4], b: [C64; 4]) -> [C64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn r2(theta: f64, phi: f64) -> [C64; 4] {
    mul2(rz(phi + PI), ry(theta + FRAC_PI_2))
}

fn u3(theta: f64, phi: f64, lambda: f64) -> [C64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        C64::new(c, 0.0),
        -C64::from_polar(s, lambda),
        C64::from_polar(s, phi),
        C64::from_polar(c, phi + lambda),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_unitary(m: &DMatrix<C64>) -> bool {
        let p = m.adjoint() * m;
        let id = DMatrix::<C64>::identity(m.nrows(), m.ncols());
        (p - id).iter().all(|z| z.norm() < 1e-12)
    }

    #[test]
    fn all_gates_unitary() {
        let gates = vec![
            Gate::H,
            Gate::X,
            Gate::Y,
            Gate::Z,
            Gate::S,
            Gate::RX(0.3.into()),
            Gate::RY(1.1.into()),
            Gate::RZ((-0.7).into()),
            Gate::R2(0.4.into(), 2.0.into()),
            Gate::ZZ(0.9.into()),
            Gate::CNOT,
            Gate::CZ,
            Gate::SWAP,
            Gate::controlled(2, Gate::RY(0.5.into())),
            Gate::U3(0.1.into(), 0.2.into(), 0.3.into()),
        ];
        for g in gates {
            let m = g.matrix().unwrap();
            assert_eq!(m.nrows(), 1 << g.arity(), "{g}");
            assert!(is_unitary(&m), "{g}");
        }
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let m = Gate::RX(PI.into()).matrix().unwrap();
        assert!((m[(1, 0)] - C64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(m[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn u3_matches_euler_product_up_to_phase() {
        let (t, p, l) = (0.7, -1.2, 2.5);
        let u = u3(t, p, l);
        let e = mul2(rz(p), mul2(ry(t), rz(l)));
        let phase = C64::from_polar(1.0, (p + l) / 2.0);
        for k in 0..4 {
            assert!((u[k] - phase * e[k]).norm() < 1e-14);
        }
    }

    #[test]
    fn unbound_matrix_is_error() {
        assert!(matches!(Gate::RX(Angle::param(0)).matrix(), Err(Error::Unbound(_))));
    }
}
