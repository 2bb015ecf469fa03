"""Parameter model: SI inputs and the dimensionless groups the dynamics run on.

Geometry is reduced to one axis: wave number, acceleration and packet
momenta are signed scalars along the common direction.  Perpendicular
components decouple into trivial free evolution and are out of scope.

All dynamics downstream are driven by four dimensionless numbers per
momentum eigenvalue:

    xi0   = tau_a * (detuning - Doppler shift)     initial scaled detuning
    omt   = Omega * tau_a                          scaled Rabi frequency
    s     = t / tau_a                              scaled time
    zeta  = sign(k * a)                            orientation of the sweep

with tau_a = 1/sqrt(|k a|) the time over which gravity sweeps the atom
through one unit of scaled detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

HBAR = 1.054571817e-34  # J s

SQRT_I = complex(math.sqrt(0.5), math.sqrt(0.5))  # exp(i pi/4)


def sqrt_izeta(zeta: int) -> complex:
    """sqrt(i*zeta) on the fixed branch arg(i*zeta) = zeta*pi/2."""
    if zeta == 1:
        return SQRT_I
    if zeta == -1:
        return SQRT_I.conjugate()
    raise ValueError(f"zeta must be +-1, got {zeta}")


@dataclass(frozen=True)
class PhysicalParams:
    """SI description of atom, laser and gravity.

    energy_excited/energy_ground in J, decay rates in 1/s, rabi and
    laser_freq in rad/s, wave_number a signed scalar in 1/m, accel a signed
    scalar in m/s^2 along the same axis.
    """

    energy_excited: float
    energy_ground: float
    gamma_excited: float = 0.0
    gamma_ground: float = 0.0
    mass: float = 1e-25
    rabi: float = 0.0
    laser_freq: float = 1e15
    wave_number: float = 1e7
    phase: float = 0.0
    accel: float = 0.0

    def __post_init__(self):
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if self.rabi < 0:
            raise ValueError("rabi must be nonnegative")
        if self.gamma_excited < 0 or self.gamma_ground < 0:
            raise ValueError("decay rates must be nonnegative")
        if self.laser_freq <= 0:
            raise ValueError("laser_freq must be positive")

    @property
    def transition_freq(self) -> float:
        """omega_eg = (E_e - E_g)/hbar."""
        return (self.energy_excited - self.energy_ground) / HBAR


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless groups derived from :class:`PhysicalParams`.

    For zeta = 0 (gravity-free branch) tau_a is infinite and the
    tau_a-scaled groups are undefined (NaN); that branch is served by the
    ordinary Rabi closed form and never consumes them.
    """

    tau_a: float
    zeta: int
    theta: complex
    detuning: float
    recoil: float
    omega_tilde: float
    recoil_tilde: float
    complex_energy_shift: tuple[complex, complex]
    mass: float
    wave_number: float
    rabi: float
    accel: float

    @property
    def gravity_free(self) -> bool:
        return self.zeta == 0

    def doppler(self, p: float) -> float:
        """Doppler shift k*p/M (rad/s) at scalar momentum p."""
        return self.wave_number * p / self.mass

    def xi0_at(self, p: float):
        """Scaled initial detuning tau_a * Delta_hat_0 at momentum p.

        Finite decay rates shift the level splitting into the complex
        plane, which surfaces here as an imaginary part of the detuning.
        Returns a plain float when both decay rates coincide.
        """
        if self.zeta == 0:
            raise ValueError("xi0_at undefined on the gravity-free branch")
        xi = self.tau_a * (self.complex_detuning - self.doppler(p))
        return xi.real if xi.imag == 0.0 else xi

    @property
    def complex_detuning(self) -> complex:
        """Detuning against the decay-shifted level splitting."""
        e_e, e_g = self.complex_energy_shift
        omega_eg_c = (e_e - e_g) / HBAR
        return self.detuning + (omega_eg_c.real - omega_eg_c)


def reduce_params(p: PhysicalParams) -> ReducedParams:
    """Derive every dimensionless group from the SI inputs.

    Total function: k*a = 0 selects the gravity-free branch (zeta = 0)
    explicitly instead of letting tau_a diverge.
    """
    ka = p.wave_number * p.accel
    delta = p.laser_freq - p.transition_freq
    recoil = HBAR * p.wave_number ** 2 / (2.0 * p.mass)
    e_e = p.energy_excited - 0.5j * HBAR * p.gamma_excited
    e_g = p.energy_ground - 0.5j * HBAR * p.gamma_ground
    if ka == 0.0:
        return ReducedParams(
            tau_a=math.inf, zeta=0, theta=0j, detuning=delta, recoil=recoil,
            omega_tilde=math.nan, recoil_tilde=math.nan,
            complex_energy_shift=(e_e, e_g),
            mass=p.mass, wave_number=p.wave_number, rabi=p.rabi, accel=p.accel,
        )
    zeta = 1 if ka > 0 else -1
    tau_a = 1.0 / math.sqrt(abs(ka))
    omega_tilde = p.rabi * tau_a
    theta = 0.25j * zeta * omega_tilde ** 2  # i Omega^2 / (4 k a)
    return ReducedParams(
        tau_a=tau_a, zeta=zeta, theta=theta, detuning=delta, recoil=recoil,
        omega_tilde=omega_tilde, recoil_tilde=recoil * tau_a,
        complex_energy_shift=(e_e, e_g),
        mass=p.mass, wave_number=p.wave_number, rabi=p.rabi, accel=p.accel,
    )


def doppler_detuning(xi0, s: float, zeta: int):
    """Scaled Doppler-shifted detuning xi(s) = xi0 - zeta*s.

    The gravitational sweep moves the detuning linearly in scaled time;
    zeta only fixes the direction of the sweep.
    """
    return xi0 - zeta * s


@dataclass(frozen=True)
class OdeGenerators:
    """Scalarized generators of the internal flow at one momentum value.

    p_gen and r_gen are the sigma_3 / sigma_1 coefficients of the constant
    part of the flow generator; qp_comm is the c-number commutator that
    gravity adds, linear in the flow parameter.
    """

    p_gen: complex
    r_gen: complex
    qp_comm: complex


def ode_generators(xi0, omega_tilde: float, s: float, zeta: int) -> OdeGenerators:
    """Generators (P, R, [Q,P]) for one momentum eigenvalue.

    P = (i s / 2) xi0,  R = (i s / 2) omega_tilde,  [Q,P] = (i/2) zeta s^2.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    return OdeGenerators(
        p_gen=0.5j * s * xi0,
        r_gen=0.5j * s * omega_tilde,
        qp_comm=0.5j * zeta * s * s,
    )
