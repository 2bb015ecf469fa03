"""Shared scenario builders for the test suite.

Scenarios are constructed backwards from the scaled variables: pick the
grid spacing and packet width in units of scaled detuning, then derive
the mass that makes the photon kick an exact number of grid steps.
"""

import math
from dataclasses import dataclass

import pytest

from atomfall import (
    HBAR,
    MomentumGrid,
    PhysicalParams,
    ReducedParams,
    commensurate_times,
    reduce_params,
)


@dataclass(frozen=True)
class Scenario:
    phys: PhysicalParams
    grid: MomentumGrid
    p0: float
    sigma_p: float
    red: ReducedParams
    tau_a: float

    def times_at(self, s_targets):
        """Times at the requested multiples of tau_a, snapped to exact grid shifts."""
        return commensurate_times(self.phys, self.grid, [s * self.tau_a for s in s_targets])


def make_scenario(omega_tilde=1.0, spacing_xi=0.1, n_kick=2, sigma_xi=0.3,
                  xi_span=(-58.0, 3.0), xi0_center=0.0, phase=0.0,
                  wave_number=1.0e7, accel=9.81, gamma_excited=0.0,
                  gamma_ground=0.0) -> Scenario:
    """Gravity scenario resonant (xi0 = xi0_center) at the kick midpoint p0 + hbar k/2.

    The packet drifts toward decreasing scaled detuning, so xi_span should
    extend far enough below zero to hold the swept packet at the latest
    output time.
    """
    k = wave_number
    tau = 1.0 / math.sqrt(abs(k * accel))
    mass = tau * HBAR * k * k / (n_kick * spacing_xi)
    spacing_p = HBAR * k / n_kick
    p0 = 0.0
    detuning = xi0_center / tau + k * (p0 + 0.5 * HBAR * k) / mass
    laser_freq = 2.4e15
    phys = PhysicalParams(
        energy_excited=HBAR * (laser_freq - detuning),
        energy_ground=0.0,
        gamma_excited=gamma_excited,
        gamma_ground=gamma_ground,
        mass=mass,
        rabi=omega_tilde / tau,
        laser_freq=laser_freq,
        wave_number=k,
        phase=phase,
        accel=accel,
    )

    def p_of_xi(xi):
        return (detuning - xi / tau) * mass / k

    p_lo = p_of_xi(xi_span[1])
    p_hi = p_of_xi(xi_span[0])
    n = int(round((p_hi - p_lo) / spacing_p)) + 1
    grid = MomentumGrid(p_lo, p_lo + spacing_p * (n - 1), n)
    sigma_p = sigma_xi * spacing_p / spacing_xi
    return Scenario(phys=phys, grid=grid, p0=p0, sigma_p=sigma_p,
                    red=reduce_params(phys), tau_a=tau)


def make_free_scenario(rabi=9.9e3, detuning_offset=0.0, sigma_p_steps=3.0,
                       n_kick=2, n_points=241, phase=0.0) -> Scenario:
    """Gravity-free scenario (accel = 0) resonant at the kick midpoint."""
    k = 1.0e7
    mass = 5.0e-24
    spacing_p = HBAR * k / n_kick
    p0 = 0.0
    detuning = k * (p0 + 0.5 * HBAR * k) / mass + detuning_offset
    laser_freq = 2.4e15
    phys = PhysicalParams(
        energy_excited=HBAR * (laser_freq - detuning),
        energy_ground=0.0,
        mass=mass,
        rabi=rabi,
        laser_freq=laser_freq,
        wave_number=k,
        phase=phase,
        accel=0.0,
    )
    half = spacing_p * (n_points - 1) / 2.0
    grid = MomentumGrid(p0 - half, p0 + half, n_points)
    return Scenario(phys=phys, grid=grid, p0=p0, sigma_p=sigma_p_steps * spacing_p,
                    red=reduce_params(phys), tau_a=math.inf)


@pytest.fixture
def scenario():
    return make_scenario()
