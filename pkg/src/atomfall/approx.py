"""Analytic approximation regimes for the internal evolution matrix.

Four regimes, all per momentum eigenvalue and all in the scaled variables
(xi0, omega_tilde, s, zeta):

* ``rabi_w``        -- gravity-free Rabi oscillations, W = exp(B), exact
                       when zeta = 0.
* ``weak_gravity_w``-- first order in the gravitational sweep; residual
                       against the exact W is quadratic in the sweep
                       strength.
* ``longtime_w``    -- amplitudes frozen, phases drifting logarithmically;
                       valid once the swept detuning is large.
* ``magnus_f/w``    -- first-order exponent of the Magnus expansion with
                       the Bernoulli series resummed in closed form; breaks
                       down with spurious poles at omega_hat * s = 2 pi N,
                       which this module makes observable on purpose.

Every trig ratio is evaluated through series near its removable
singularity, so omega_hat -> 0 yields the identity limit, never NaN.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import RegimeError, SingularExponentError
from .params import ode_generators, sqrt_izeta
from .specfun import _rgamma, pcf_u, pcf_v

SQRT_PI_OVER_2 = math.sqrt(math.pi / 2.0)

# Distance of omega_hat*s*lambda from 2 pi N below which the resummed
# Magnus coefficient is considered to sit on a pole.
SINGULARITY_TOL = 1e-6

# Matrix type lives in exact.py; imported lazily to keep this module
# importable from exact without a cycle.


def _matrix(w11, w12, w21, w22):
    from .exact import Matrix2C

    return Matrix2C(w11, w12, w21, w22)


@dataclass(frozen=True)
class RabiFrequency:
    """Scaled generalized Rabi frequency omega_hat * tau_a.

    Reduces to omega_tilde on resonance and to |xi0| for a dark laser
    (where formally the negative square-root branch applies; every
    appearance below is even in the root, so the positive value is used
    throughout).
    """

    omega_hat: complex

    @classmethod
    def from_params(cls, xi0, omega_tilde: float) -> "RabiFrequency":
        return cls(cmath.sqrt(omega_tilde * omega_tilde + xi0 * xi0))


def _sinc(u: complex) -> complex:
    """sin(u)/u, series-evaluated near u = 0."""
    if abs(u) < 1e-4:
        u2 = u * u
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0
    return cmath.sin(u) / u


def _cos_minus_sinc_over_u2(u: complex) -> complex:
    """(cos u - sin(u)/u) / u^2, series-evaluated near u = 0."""
    if abs(u) < 1e-3:
        u2 = u * u
        return -1.0 / 3.0 + u2 / 30.0 - u2 * u2 / 840.0
    return (cmath.cos(u) - _sinc(u)) / (u * u)


def rabi_w(xi0, omega_tilde: float, s: float):
    """Gravity-free internal evolution W = exp(B): ordinary Rabi flopping.

    Diagonal cos(w s/2) +- i (xi0/w) sin(w s/2), off-diagonal
    i (omt/w) sin(w s/2), with w the generalized Rabi frequency.  All
    ratios are formed as (s/2) * sinc, so w -> 0 degrades smoothly to the
    identity limit.
    """
    w = RabiFrequency.from_params(xi0, omega_tilde).omega_hat
    u = 0.5 * w * s
    cos_u = cmath.cos(u)
    half_s_sinc = 0.5 * s * _sinc(u)   # sin(u)/w
    off = 1j * omega_tilde * half_s_sinc
    return _matrix(
        cos_u + 1j * xi0 * half_s_sinc,
        off,
        off,
        cos_u - 1j * xi0 * half_s_sinc,
    )


def weak_gravity_w(xi0, omega_tilde: float, s: float, zeta: int):
    """Rabi matrix plus the complete first-order gravitational correction.

    The correction is linear in the sweep strength (zeta s in the scaled
    detuning, zeta s^2 in the accumulated phase); the neglected remainder
    is quadratic.  Valid on times short against the sweep scale; a warning
    is emitted beyond s = 1.
    """
    if s > 1.0:
        warnings.warn(
            "weak_gravity_w outside its domain (s > 1); "
            "first-order sweep corrections are no longer small",
            stacklevel=2,
        )
    w = RabiFrequency.from_params(xi0, omega_tilde).omega_hat
    u = 0.5 * w * s
    cos_u = cmath.cos(u)
    sc = _sinc(u)
    half_s_sinc = 0.5 * s * sc
    h = _cos_minus_sinc_over_u2(u)          # (cos - sinc)/u^2
    quarter_s2_h = 0.25 * s * s * h         # (cos - sinc)/w^2

    base_off = 1j * omega_tilde * half_s_sinc
    diag_sweep = xi0 * xi0 * quarter_s2_h   # (xi0^2/w^2)(cos - sinc)
    mix = 1j * xi0 * half_s_sinc            # i (xi0/w) sin

    corr11 = 0.25j * zeta * s * s * (-diag_sweep - mix - sc)
    corr22 = 0.25j * zeta * s * s * (+diag_sweep - mix + sc)
    off_scale = 0.5 * zeta * s * omega_tilde * quarter_s2_h
    corr12 = -off_scale * (1.0 + 0.5j * s * xi0)
    corr21 = +off_scale * (1.0 - 0.5j * s * xi0)

    return _matrix(
        cos_u + mix + corr11,
        base_off + corr12,
        base_off + corr21,
        cos_u - mix + corr22,
    )


def longtime_w(xi0, omega_tilde: float, s: float, zeta: int):
    """Large swept-detuning limit of the exact W.

    Amplitudes are constant in s; only phases move (a quadratic sweep
    phase and a logarithmic power-law phase).  Gate: the swept detuning
    must already be large and on the outgoing branch,
    |xi(s)| >= 10 and -zeta * xi(s) > 0.
    """
    xi_t = xi0 - zeta * s
    if abs(xi_t) < 10.0 or -(zeta * xi_t.real if isinstance(xi_t, complex) else zeta * xi_t) <= 0.0:
        raise RegimeError(
            "longtime_w gate violated: requires |xi(s)| >= 10 and -zeta*xi(s) > 0, "
            f"got xi(s) = {xi_t}, zeta = {zeta}"
        )
    if omega_tilde == 0.0:
        arg = 0.25j * zeta * (xi0 * xi0 - xi_t * xi_t)
        return _matrix(cmath.exp(arg), 0j, 0j, cmath.exp(-arg))

    theta = 0.25j * zeta * omega_tilde * omega_tilde
    root = sqrt_izeta(zeta)
    y0 = -1j * xi0 / root
    sqrt_theta = 0.5j * omega_tilde / root
    inv_gamma = _rgamma(-theta)  # 1/Gamma(-i zeta omt^2/4)

    log_pow = cmath.log(-zeta * xi_t)
    quad = 0.25j * zeta * xi_t * xi_t
    grow = math.pi * omega_tilde * omega_tilde / 16.0
    c_up = cmath.exp(-quad - theta * log_pow + grow)
    c_down = cmath.exp(quad + theta * log_pow - grow)

    u_m0 = pcf_u(theta - 0.5, y0).value
    u_p0 = pcf_u(theta + 0.5, y0).value
    v_m0 = pcf_v(theta - 0.5, y0).value
    v_p0 = pcf_v(theta + 0.5, y0).value

    w11 = SQRT_PI_OVER_2 * c_up * (v_p0 - 1j * zeta * u_p0 * inv_gamma)
    w12 = -SQRT_PI_OVER_2 * sqrt_theta * c_up * (
        v_m0 + 4.0 * u_m0 * inv_gamma / (omega_tilde * omega_tilde)
    )
    w21 = sqrt_theta * c_down * u_p0
    w22 = c_down * u_m0
    return _matrix(w11, w12, w21, w22)


def resonant_asymptotic_amplitudes(omega_tilde: float) -> tuple[float, float]:
    """Frozen |W11| and |W12| for an atom that starts on resonance.

    (sqrt((1 + e^{-pi omt^2/4})/2), sqrt((1 - e^{-pi omt^2/4})/2)):
    no transfer without light, complete mixing for strong drive.
    """
    if omega_tilde < 0:
        raise ValueError("omega_tilde must be nonnegative")
    damp = math.exp(-math.pi * omega_tilde * omega_tilde / 4.0)
    return math.sqrt(0.5 * (1.0 + damp)), math.sqrt(0.5 * (1.0 - damp))


# ---------------------------------------------------------------------------
# Magnus expansion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MagnusExponent:
    """First-order Magnus exponent F in the basis (B, sigma_3, [sigma_3, B]).

    F = coeff_b * B + coeff_sigma3 * sigma_3 + coeff_r1 * [sigma_3, B],
    with the Bernoulli tail of the expansion resummed into coeff_r1.
    ``singular`` marks flow parameters sitting on a resonance pole
    omega_hat s lambda = 2 pi N, where the resummed coefficient diverges
    and is withheld (NaN).
    """

    coeff_b: complex
    coeff_sigma3: complex
    coeff_r1: complex
    singular: bool
    p_gen: complex
    r_gen: complex


def _bernoulli_tail_ratio(x: complex) -> complex:
    """g(x)/x^2 with g(x) = x/(e^x - 1) - 1 + x/2; finite everywhere off-pole."""
    if abs(x) <= 0.5:
        x2 = x * x
        return 1.0 / 12.0 - x2 / 720.0 + x2 * x2 / 30240.0
    return (x / (cmath.exp(x) - 1.0) - 1.0 + 0.5 * x) / (x * x)


def magnus_f(lam: float, xi0, omega_tilde: float, s: float, zeta: int) -> MagnusExponent:
    """First-order Magnus exponent at flow parameter lam.

    F(lam) = lam B - (lam^2/2)[Q,P] sigma_3
             + [Q,P] [sigma_3, B] (lam / (s^2 w^2)) g(i s w lam),

    written with the removable s w -> 0 singularity eliminated:
    lam/(s^2 w^2) * g(x) = -lam^3 * g(x)/x^2 at x = i s w lam.
    """
    gens = ode_generators(xi0, omega_tilde, s, zeta)
    w = RabiFrequency.from_params(xi0, omega_tilde).omega_hat
    x = 1j * s * w * lam

    singular = False
    cycles = round(x.imag / (2.0 * math.pi))
    if cycles >= 1 and abs(x - 2j * math.pi * cycles) < SINGULARITY_TOL:
        singular = True

    coeff_sigma3 = -0.5 * lam * lam * gens.qp_comm
    if singular:
        coeff_r1 = complex(math.nan, math.nan)
    else:
        coeff_r1 = -gens.qp_comm * lam ** 3 * _bernoulli_tail_ratio(x)
    return MagnusExponent(
        coeff_b=complex(lam),
        coeff_sigma3=coeff_sigma3,
        coeff_r1=coeff_r1,
        singular=singular,
        p_gen=gens.p_gen,
        r_gen=gens.r_gen,
    )


def _sinhc(mu: complex) -> complex:
    if abs(mu) < 1e-4:
        mu2 = mu * mu
        return 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0
    return cmath.sinh(mu) / mu


def magnus_w(exponent: MagnusExponent):
    """Closed-form exponential of the traceless Magnus exponent.

    exp(F) = cosh(mu) 1 + sinh(mu)/mu F with mu^2 = F11^2 + F12 F21;
    cosh/sinh are even/odd so the branch of mu is immaterial.
    """
    if exponent.singular:
        raise SingularExponentError(
            "Magnus exponent sits on a resonance pole (omega_hat*s*lambda = 2*pi*N)"
        )
    p, r = exponent.p_gen, exponent.r_gen
    f11 = exponent.coeff_b * p + exponent.coeff_sigma3
    # [sigma_3, B] = 2 R (i sigma_2): off-diagonal (+2R, -2R)
    f12 = exponent.coeff_b * r + 2.0 * r * exponent.coeff_r1
    f21 = exponent.coeff_b * r - 2.0 * r * exponent.coeff_r1
    mu = cmath.sqrt(f11 * f11 + f12 * f21)
    ch = cmath.cosh(mu)
    shc = _sinhc(mu)
    return _matrix(ch + shc * f11, shc * f12, shc * f21, ch - shc * f11)


def magnus_singularities(xi0, omega_tilde: float, s_max: float) -> list[float]:
    """All pole locations s = 2 pi N / omega_hat up to s_max, ascending."""
    if s_max <= 0:
        raise ValueError("s_max must be positive")
    w = abs(RabiFrequency.from_params(xi0, omega_tilde).omega_hat)
    if w == 0.0:
        return []
    out = []
    n = 1
    while 2.0 * math.pi * n / w <= s_max:
        out.append(2.0 * math.pi * n / w)
        n += 1
    return out


def bernoulli_numbers(count: int) -> list[Fraction]:
    """B_0 .. B_count as exact rationals (B_1 = -1/2 convention).

    Generated from sum_{l<n} C(n,l) B_l = 0, the defining recurrence,
    independently of any expansion coefficients they are checked against.
    """
    bs = [Fraction(1)]
    for n in range(2, count + 2):
        acc = Fraction(0)
        for l in range(n - 1):
            acc += math.comb(n, l) * bs[l]
        bs.append(-acc / n)
    return bs[: count + 1]
