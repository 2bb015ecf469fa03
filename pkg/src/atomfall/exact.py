"""Exact internal evolution of the driven, uniformly accelerated two-level atom.

Per momentum eigenvalue the internal flow equation

    dW/d(lambda) = (B - lambda [Q,P] sigma_3) W,   W(0) = 1,  lambda -> 1

reduces to Weber's equation, so W is assembled in closed form from
parabolic cylinder functions of order theta -+ 1/2 (theta = i zeta omt^2/4)
evaluated at the scaled detunings at time 0 and time s:

    y0 = -i xi0 / sqrt(i zeta),     y1 = -i (xi0 - zeta s) / sqrt(i zeta).

The full single-momentum evolution operator then factorizes into this W
(with momenta shifted by -+ hbar k / 2), internal diagonal phases, photon
momentum kicks on the off-diagonal entries, and a center-of-mass
exponential that the wavepacket propagator applies separately.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import approx
from .errors import NonConvergenceError, RegimeError
from .params import HBAR, PhysicalParams, reduce_params, sqrt_izeta
from .specfun import pcf_pair_mp, pcf_u, pcf_v

SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class Matrix2C:
    """A 2x2 complex matrix with named entries."""

    w11: complex
    w12: complex
    w21: complex
    w22: complex

    @classmethod
    def identity(cls) -> "Matrix2C":
        return cls(1.0 + 0j, 0j, 0j, 1.0 + 0j)

    @classmethod
    def from_array(cls, m) -> "Matrix2C":
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def as_array(self) -> np.ndarray:
        return np.array([[self.w11, self.w12], [self.w21, self.w22]], dtype=complex)

    def det(self) -> complex:
        return self.w11 * self.w22 - self.w12 * self.w21

    def max_abs_diff(self, other: "Matrix2C") -> float:
        return max(
            abs(self.w11 - other.w11), abs(self.w12 - other.w12),
            abs(self.w21 - other.w21), abs(self.w22 - other.w22),
        )

    def unitarity_defect(self) -> float:
        m = self.as_array()
        return float(np.max(np.abs(m.conj().T @ m - np.eye(2))))


def _free_diagonal(xi0, s: float, zeta: int) -> Matrix2C:
    """Laser-off W: pure detuning phases exp(+-(i s xi0/2 - i zeta s^2/4))."""
    arg = 0.5j * s * xi0 - 0.25j * zeta * s * s
    return Matrix2C(cmath.exp(arg), 0j, 0j, cmath.exp(-arg))


def _w_assembly_double(theta, sqrt_theta, y0, y1) -> Matrix2C:
    a_minus = theta - 0.5
    a_plus = theta + 0.5
    u_m0 = pcf_u(a_minus, y0).value
    u_m1 = pcf_u(a_minus, y1).value
    v_m0 = pcf_v(a_minus, y0).value
    v_m1 = pcf_v(a_minus, y1).value
    u_p0 = pcf_u(a_plus, y0).value
    u_p1 = pcf_u(a_plus, y1).value
    v_p0 = pcf_v(a_plus, y0).value
    v_p1 = pcf_v(a_plus, y1).value
    return Matrix2C(
        SQRT_PI_OVER_2 * (v_p0 * u_m1 + theta * u_p0 * v_m1),
        SQRT_PI_OVER_2 * sqrt_theta * (u_m0 * v_m1 - v_m0 * u_m1),
        SQRT_PI_OVER_2 * sqrt_theta * (u_p0 * v_p1 - v_p0 * u_p1),
        SQRT_PI_OVER_2 * (theta * v_m0 * u_p1 + u_m0 * v_p1),
    )


def _w_assembly_mp(theta, sqrt_theta, y0, y1, dps: int) -> Matrix2C:
    with mpmath.workdps(dps):
        th = mpmath.mpc(theta)
        sq = mpmath.mpc(sqrt_theta)
        pref = mpmath.sqrt(mpmath.pi / 2)
        u_m0, v_m0 = pcf_pair_mp(theta - 0.5, y0, dps)
        u_m1, v_m1 = pcf_pair_mp(theta - 0.5, y1, dps)
        u_p0, v_p0 = pcf_pair_mp(theta + 0.5, y0, dps)
        u_p1, v_p1 = pcf_pair_mp(theta + 0.5, y1, dps)
        return Matrix2C(
            complex(pref * (v_p0 * u_m1 + th * u_p0 * v_m1)),
            complex(pref * sq * (u_m0 * v_m1 - v_m0 * u_m1)),
            complex(pref * sq * (u_p0 * v_p1 - v_p0 * u_p1)),
            complex(pref * (th * v_m0 * u_p1 + u_m0 * v_p1)),
        )


def w_matrix(xi0, omega_tilde: float, s: float, zeta: int) -> Matrix2C:
    """Closed-form W at one momentum point, exact in s.

    ``xi0`` may be complex (decay-shifted detuning).  zeta = 0 is refused:
    theta diverges there and the gravity-free closed form takes over
    (see :func:`atomfall.approx.rabi_w`).

    The four-product assembly cancels like e^{pi |theta|}, invisibly to
    the per-function error estimates, so the result is certified against
    the exact identity det W = 1 (the flow generator is traceless for any
    parameters) and recomputed wholesale at elevated precision when the
    defect exceeds 1e-10.
    """
    if zeta not in (1, -1):
        raise RegimeError("w_matrix requires zeta = +-1; use the Rabi form for zeta = 0")
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s == 0:
        return Matrix2C.identity()
    if omega_tilde == 0:
        return _free_diagonal(xi0, s, zeta)

    theta = 0.25j * zeta * omega_tilde * omega_tilde
    root = sqrt_izeta(zeta)
    y0 = -1j * xi0 / root
    y1 = -1j * (xi0 - zeta * s) / root
    sqrt_theta = 0.5j * omega_tilde / root  # the branch with sqrt_theta^2 = theta

    w = _w_assembly_double(theta, sqrt_theta, y0, y1)
    entries = (w.w11, w.w12, w.w21, w.w22)
    finite = all(math.isfinite(e.real) and math.isfinite(e.imag) for e in entries)
    if finite and abs(w.det() - 1.0) <= 1e-10:
        return w
    # pi*|theta|/ln(10) digits die in the assembly; retry with headroom.
    dps = 25 + int(1.4 * abs(theta))
    for _ in range(3):
        w = _w_assembly_mp(theta, sqrt_theta, y0, y1, dps)
        if abs(w.det() - 1.0) <= 1e-10:
            return w
        dps += 15 + dps // 2
    raise NonConvergenceError(
        "w_matrix did not reach det W = 1 at elevated precision",
        xi0=xi0, omega_tilde=omega_tilde, s=s, zeta=zeta,
        det_defect=abs(w.det() - 1.0), dps=dps,
    )


@dataclass(frozen=True)
class UBlocks:
    """Single-momentum factorization of the full evolution operator.

    ``w_shift_minus`` is W evaluated with momentum p - hbar k/2 (feeds the
    excited row), ``w_shift_plus`` with p + hbar k/2 (ground row).
    ``diag_phase`` holds the internal phases exp(-+ i t (omega_L - D)/2)
    exp(+- i k a t^2 / 4).  ``kick`` is the photon momentum hbar k that the
    off-diagonal entries transfer: W12 couples to the ground amplitude at
    p - kick, W21 to the excited amplitude at p + kick.  The kick is kept
    symbolic here so the per-momentum evaluation stays pure; the packet
    propagator applies the corresponding exact grid shifts.
    ``global_phase`` carries the scalar energy/recoil factor including the
    complex-energy decay; the center-of-mass exponential is excluded
    (it is applied separately in momentum representation).
    """

    w_shift_minus: Matrix2C
    w_shift_plus: Matrix2C
    diag_phase: tuple[complex, complex]
    kick: float
    global_phase: complex
    laser_phase: float

    def pointwise_matrix(self) -> Matrix2C:
        """Entry values with all scalar phases folded in (kicks not applied)."""
        ph_e, ph_g = self.diag_phase
        g = self.global_phase
        return Matrix2C(
            g * ph_e * self.w_shift_minus.w11,
            g * ph_e * self.w_shift_minus.w12 * cmath.exp(-1j * self.laser_phase),
            g * ph_g * self.w_shift_plus.w21 * cmath.exp(1j * self.laser_phase),
            g * ph_g * self.w_shift_plus.w22,
        )


def evolution_blocks(p: float, t: float, phys: PhysicalParams) -> UBlocks:
    """Evolution-operator blocks for momentum eigenvalue p at time t.

    The W arguments use p -+ hbar k/2 exactly, which re-creates the recoil
    shift -+ delta in the Doppler-shifted detuning.  Decay rates enter only
    through the complex energy phases.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    red = reduce_params(phys)
    k = phys.wave_number
    half_kick = 0.5 * HBAR * k

    if red.gravity_free:
        # Rabi closed form with time itself as the scale: W = exp(B(t)).
        det_c = red.complex_detuning
        xi_minus = (det_c - red.doppler(p - half_kick)) * t
        xi_plus = (det_c - red.doppler(p + half_kick)) * t
        xi_minus = xi_minus.real if xi_minus.imag == 0 else xi_minus
        xi_plus = xi_plus.real if xi_plus.imag == 0 else xi_plus
        w_minus = approx.rabi_w(xi_minus, phys.rabi * t, 1.0)
        w_plus = approx.rabi_w(xi_plus, phys.rabi * t, 1.0)
    else:
        s = t / red.tau_a
        w_minus = w_matrix(red.xi0_at(p - half_kick), red.omega_tilde, s, red.zeta)
        w_plus = w_matrix(red.xi0_at(p + half_kick), red.omega_tilde, s, red.zeta)

    ka = phys.wave_number * phys.accel
    half_arg = 0.5 * t * (phys.laser_freq - red.doppler(p)) - 0.25 * ka * t * t
    phase_e = cmath.exp(-1j * half_arg)
    phase_g = cmath.exp(1j * half_arg)
    e_e, e_g = red.complex_energy_shift
    global_phase = cmath.exp(-1j * t * (0.5 * (e_e + e_g) / HBAR + 0.5 * red.recoil))
    return UBlocks(
        w_shift_minus=w_minus,
        w_shift_plus=w_plus,
        diag_phase=(phase_e, phase_g),
        kick=HBAR * k,
        global_phase=global_phase,
        laser_phase=phys.phase,
    )


def free_fall_operator(p: float, t: float, phys: PhysicalParams) -> Matrix2C:
    """Laser-off internal evolution: diag(e^{-i E_e t/hbar}, e^{-i E_g t/hbar}).

    Degeneration target for :func:`evolution_blocks` at rabi = 0.  The
    center-of-mass factor is common to both paths and excluded here, so
    the result is independent of p (kept in the signature because callers
    evaluate per momentum point).
    """
    red = reduce_params(phys)
    e_e, e_g = red.complex_energy_shift
    return Matrix2C(
        cmath.exp(-1j * t * e_e / HBAR), 0j,
        0j, cmath.exp(-1j * t * e_g / HBAR),
    )
