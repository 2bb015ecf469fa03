"""Parabolic cylinder functions of complex order and argument, with certified accuracy.

Implements the Weber-equation solutions U(a, y) and V(a, y) (Abramowitz &
Stegun ch. 19) on top of a confluent hypergeometric kernel:

    U(a, y) = sqrt(pi) e^{-y^2/4} [ 1F1(a/2+1/4, 1/2, y^2/2) / (2^{a/2+1/4} Gamma(a/2+3/4))
                                  - y 1F1(a/2+3/4, 3/2, y^2/2) / (2^{a/2-1/4} Gamma(a/2+1/4)) ]
    V(a, y) = Gamma(a+1/2)/pi [ sin(pi a) U(a, y) + U(a, -y) ]

1F1 is summed by its Taylor series up to ``SWITCH_RADIUS`` and by the full
large-|z| expansion (A&S 13.5.1) beyond it, with the branch of e^{+-i pi a}
selected by arg z (upper sign on -pi/2 < arg z < 3pi/2, lower sign on the
reflected sector).

Every evaluation carries a running relative-error estimate.  The dominant
loss mechanism is cancellation: the Taylor series of 1F1 loses roughly
|z|/ln 10 digits on the imaginary axis, and the two terms of U can nearly
cancel for large |y|.  Whenever the tracked estimate exceeds the requested
tolerance, the same formula is re-evaluated in arbitrary precision (mpmath)
with enough guard digits, transparently to the caller.

All functions are pure; results for the default tolerance are memoised.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

import mpmath
import scipy.special as _sps

from .errors import GammaPoleError, NonConvergenceError

# Series/asymptotic crossover for 1F1 and its certification parameters.
SWITCH_RADIUS = 25.0
SERIES_TOL = 1e-12
MAX_TERMS = 5000

# Re-evaluate in arbitrary precision when the running estimate exceeds this.
_ESCALATE_AT = 1e-12
_GUARD_RATIO = 1e6  # two combined terms agreeing to > 6 digits
_EPS = 2.3e-16
_TINY = 1e-300

SQRT_PI = math.sqrt(math.pi)
SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SpecFunResult:
    """A certified special-function value.

    ``est_rel_error`` is a running estimate of the relative error
    accumulated through series truncation and cancellation.
    ``branch_note`` records which sign of the large-argument expansion
    contributed ("principal" for the upper sign, "reflected" for the lower).
    """

    value: complex
    est_rel_error: float
    branch_note: str = "principal"


def _require_finite(name, z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z}")
    return z


def _nonpositive_int(z: complex, tol: float = 1e-12) -> bool:
    if abs(z.imag) > tol:
        return False
    n = round(z.real)
    return n <= 0 and abs(z.real - n) <= tol


def complex_ln_gamma(z: complex) -> complex:
    """Principal branch of log Gamma for complex z.

    Raises :class:`GammaPoleError` at the poles z = 0, -1, -2, ...
    """
    z = _require_finite("z", z)
    if _nonpositive_int(z):
        raise GammaPoleError(z)
    return complex(_sps.loggamma(z))


def _rgamma(z: complex) -> complex:
    """1/Gamma(z); entire, returns exactly 0 at the poles of Gamma."""
    return complex(_sps.rgamma(z))


def _gamma(z: complex) -> complex:
    if _nonpositive_int(z):
        raise GammaPoleError(z)
    return complex(_sps.gamma(z))


# ---------------------------------------------------------------------------
# 1F1 kernels
# ---------------------------------------------------------------------------

def _series_1f1(a, b, z, tol, max_terms):
    """Taylor series of 1F1 in double precision.

    Returns (value, est_rel_error).  The estimate is the peak-term to sum
    ratio times machine epsilon: the digits destroyed by cancellation.
    """
    term = 1.0 + 0.0j
    total = term
    peak = 1.0
    small_streak = 0
    for n in range(max_terms):
        term *= (a + n) * z / ((b + n) * (n + 1))
        total += term
        mag = abs(term)
        if mag > peak:
            peak = mag
        if mag <= tol * max(abs(total), _TINY):
            small_streak += 1
            if small_streak >= 2:
                break
        else:
            small_streak = 0
    else:
        raise NonConvergenceError(
            "1F1 series did not converge",
            a=a, b=b, z=z, terms=max_terms, last_term=abs(term),
        )
    est = peak / max(abs(total), _TINY) * _EPS + tol
    return total, est


def _series_1f1_mp(a, b, z, tol, max_terms, dps):
    """Same Taylor series evaluated with mpmath at ``dps`` digits."""
    with mpmath.workdps(dps):
        am, bm, zm = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(z)
        term = mpmath.mpc(1)
        total = term
        peak = mpmath.mpf(1)
        stop = mpmath.mpf(10) ** (-(dps - 2))
        small_streak = 0
        for n in range(max_terms):
            term *= (am + n) * zm / ((bm + n) * (n + 1))
            total += term
            mag = abs(term)
            if mag > peak:
                peak = mag
            if mag <= stop * max(abs(total), stop):
                small_streak += 1
                if small_streak >= 2:
                    break
            else:
                small_streak = 0
        else:
            raise NonConvergenceError(
                "1F1 series did not converge (mp)",
                a=a, b=b, z=z, terms=max_terms, dps=dps,
            )
        cancel = float(peak / max(abs(total), stop))
        est = cancel * 10.0 ** (1 - dps) + tol
        return complex(total), max(est, 10.0 ** (2 - dps))


def _asymptotic_1f1(a, b, z, tol):
    """Full large-|z| expansion of 1F1 (A&S 13.5.1).

    The two component series are summed to ``tol`` or to their optimal
    truncation point; the reached floor enters the error estimate.
    Branch rule: e^{+i pi a} for -pi/2 < arg z < 3 pi/2, e^{-i pi a} for
    -3 pi/2 < arg z <= -pi/2 (principal powers of z throughout).
    """
    arg = cmath.phase(z)
    sigma = 1.0 if arg > -math.pi / 2.0 else -1.0
    branch = "principal" if sigma > 0 else "reflected"
    logz = cmath.log(z)

    nmax = int(abs(z)) + 25

    def _sum(ratio):
        term = 1.0 + 0.0j
        total = term
        prev_mag = 1.0
        floor = None
        for n in range(nmax):
            term *= ratio(n)
            mag = abs(term)
            if mag >= prev_mag:
                # divergent tail reached: stop at the optimal truncation
                floor = prev_mag
                break
            total += term
            prev_mag = mag
            if mag <= tol * max(abs(total), _TINY):
                floor = mag
                break
        if floor is None:
            floor = prev_mag
        return total, floor / max(abs(total), _TINY)

    s1, f1 = _sum(lambda n: (a + n) * (a - b + 1 + n) / ((n + 1) * (-z)))
    s2, f2 = _sum(lambda n: (b - a + n) * (1 - a + n) / ((n + 1) * z))

    gb = _gamma(b)
    t1 = _rgamma(b - a) * cmath.exp(sigma * 1j * math.pi * a - a * logz) * s1
    t2 = _rgamma(a) * cmath.exp(z + (a - b) * logz) * s2
    value = gb * (t1 + t2)
    scale = abs(gb) * (abs(t1) + abs(t2))
    est = (scale / max(abs(value), _TINY)) * (_EPS + max(f1, f2))
    return value, est, branch


def _eval_1f1(a, b, z, tol, max_terms):
    """Dispatch + precision escalation; returns (value, est, branch)."""
    if abs(z) <= SWITCH_RADIUS:
        value, est = _series_1f1(a, b, z, tol, max_terms)
        good = math.isfinite(value.real) and math.isfinite(value.imag)
        if est > _ESCALATE_AT or not good:
            lost = math.log10(max(est / _EPS, 1.0))
            dps = 17 + int(lost) + 8
            value, est = _series_1f1_mp(a, b, z, tol, max_terms, dps)
        return value, est, "principal"
    return _asymptotic_1f1(a, b, z, tol)


@functools.lru_cache(maxsize=262144)
def _eval_1f1_cached(a, b, z):
    return _eval_1f1(a, b, z, SERIES_TOL, MAX_TERMS)


def kummer_1f1(a: complex, b: complex, z: complex,
               tol: float = SERIES_TOL, max_terms: int = MAX_TERMS) -> SpecFunResult:
    """Confluent hypergeometric function 1F1(a; b; z) for complex arguments.

    Taylor series below ``SWITCH_RADIUS``, full asymptotic expansion above
    it.  Raises :class:`GammaPoleError` when b is a nonpositive integer and
    :class:`NonConvergenceError` when the series stalls.
    """
    a = _require_finite("a", a)
    b = _require_finite("b", b)
    z = _require_finite("z", z)
    if _nonpositive_int(b):
        raise GammaPoleError(b)
    if tol == SERIES_TOL and max_terms == MAX_TERMS:
        value, est, branch = _eval_1f1_cached(a, b, z)
    else:
        value, est, branch = _eval_1f1(a, b, z, tol, max_terms)
    return SpecFunResult(value, est, branch)


# ---------------------------------------------------------------------------
# Parabolic cylinder functions
# ---------------------------------------------------------------------------

def _u_parts(alpha, y, dps=None):
    """The two terms of the U(alpha, y) defining formula.

    Returns (t1, t2, est, branch) with U(alpha, y) = t1 - t2 and
    U(alpha, -y) = t1 + t2 (only t2 is odd in y).  ``dps`` selects an
    arbitrary-precision evaluation of both terms.
    """
    z = y * y / 2.0
    a1 = alpha / 2.0 + 0.25
    a2 = alpha / 2.0 + 0.75
    if dps is None:
        f1, e1, br1 = _eval_1f1_cached(a1, 0.5, z)
        f2, e2, br2 = _eval_1f1_cached(a2, 1.5, z)
        pre = SQRT_PI * cmath.exp(-z / 2.0)
        t1 = pre * f1 * _rgamma(a2) * cmath.exp(-a1 * _LN2)
        t2 = pre * y * f2 * _rgamma(a1) * cmath.exp(-(a2 - 1.0) * _LN2)
        est = max(e1, e2) + _EPS
        branch = "reflected" if "reflected" in (br1, br2) else "principal"
        return t1, t2, est, branch
    with mpmath.workdps(dps):
        am, ym = mpmath.mpc(alpha), mpmath.mpc(y)
        zm = ym * ym / 2
        a1m = am / 2 + mpmath.mpf(1) / 4
        a2m = am / 2 + mpmath.mpf(3) / 4
        pre = mpmath.sqrt(mpmath.pi) * mpmath.exp(-zm / 2)
        f1 = mpmath.hyp1f1(a1m, mpmath.mpf(1) / 2, zm)
        f2 = mpmath.hyp1f1(a2m, mpmath.mpf(3) / 2, zm)
        t1 = pre * f1 * mpmath.rgamma(a2m) * mpmath.power(2, -a1m)
        t2 = pre * ym * f2 * mpmath.rgamma(a1m) * mpmath.power(2, -(a2m - 1))
        est = 10.0 ** (4 - dps)
        return complex(t1), complex(t2), est, "principal"


def _guard_dps(cancel):
    if not math.isfinite(cancel):
        # double pass overflowed outright; restart with generous headroom
        cancel = 1e40
    lost = math.log10(max(cancel, 1.0))
    return 17 + int(lost) + 8


def pcf_u(alpha: complex, y: complex) -> SpecFunResult:
    """Parabolic cylinder U(alpha, y), the recessive Weber solution.

    Assembled from two 1F1 evaluations; when the two terms agree to more
    than six leading digits the value is recomputed with guard digits so
    the subtraction cannot silently destroy accuracy.
    """
    alpha = _require_finite("alpha", alpha)
    y = _require_finite("y", y)
    t1, t2, est, branch = _u_parts(alpha, y)
    value = t1 - t2
    scale = abs(t1) + abs(t2)
    cancel = scale / max(abs(value), _TINY)
    total_est = cancel * (est + _EPS)
    bad = not (math.isfinite(value.real) and math.isfinite(value.imag))
    if cancel > _GUARD_RATIO or total_est > 1e-11 or bad:
        t1, t2, est, _ = _u_parts(alpha, y, dps=_guard_dps(cancel))
        value = t1 - t2
        cancel = (abs(t1) + abs(t2)) / max(abs(value), _TINY)
        total_est = cancel * est
    return SpecFunResult(value, total_est, branch)


def pcf_v(alpha: complex, y: complex) -> SpecFunResult:
    """Parabolic cylinder V(alpha, y) via the reflection combination.

    V = Gamma(alpha+1/2)/pi { sin(pi alpha) U(alpha, y) + U(alpha, -y) }.
    Internally the two U evaluations share their 1F1 values (only the
    linear-in-y term changes sign), and the weights 1 +- sin(pi alpha) are
    formed as 2 cos^2 / 2 sin^2 of (pi alpha/2 - pi/4) so that small
    |alpha + 1/2| does not cancel.  Raises :class:`GammaPoleError` when
    alpha + 1/2 is a nonpositive integer.
    """
    alpha = _require_finite("alpha", alpha)
    y = _require_finite("y", y)
    if _nonpositive_int(alpha + 0.5):
        raise GammaPoleError(alpha + 0.5)

    half = math.pi / 2.0 * alpha - math.pi / 4.0
    cos_h = cmath.cos(half)
    sin_h = cmath.sin(half)
    # products, not **2: a doubled-angle overflow must flow to inf so the
    # precision guard can catch it, not raise out of complex pow
    c_plus = 2.0 * cos_h * cos_h   # 1 + sin(pi alpha)
    c_minus = 2.0 * sin_h * sin_h  # 1 - sin(pi alpha)
    gam = _gamma(alpha + 0.5) / math.pi

    t1, t2, est, branch = _u_parts(alpha, y)
    value = gam * (c_plus * t1 + c_minus * t2)
    scale = abs(gam) * (abs(c_plus * t1) + abs(c_minus * t2))
    cancel = scale / max(abs(value), _TINY)
    total_est = cancel * (est + _EPS)
    bad = not (math.isfinite(value.real) and math.isfinite(value.imag))
    if cancel > _GUARD_RATIO or total_est > 1e-11 or bad:
        t1, t2, est, _ = _u_parts(alpha, y, dps=_guard_dps(cancel))
        value = gam * (c_plus * t1 + c_minus * t2)
        cancel = abs(gam) * (abs(c_plus * t1) + abs(c_minus * t2)) / max(abs(value), _TINY)
        total_est = cancel * est
    return SpecFunResult(value, total_est, branch)


def pcf_pair_mp(alpha, y, dps: int):
    """U(alpha, y) and V(alpha, y) as mpmath values at ``dps`` digits.

    Backs the whole-matrix precision escalation: large imaginary order
    makes the downstream four-product assemblies cancel like e^{pi |alpha|},
    which no per-function estimate can see, so the caller re-runs the
    entire assembly at elevated precision and needs unrounded values.
    Must be called inside ``mpmath.workdps(dps)``.
    """
    am, ym = mpmath.mpc(alpha), mpmath.mpc(y)
    zm = ym * ym / 2
    a1 = am / 2 + mpmath.mpf(1) / 4
    a2 = am / 2 + mpmath.mpf(3) / 4
    pre = mpmath.sqrt(mpmath.pi) * mpmath.exp(-zm / 2)
    f1 = mpmath.hyp1f1(a1, mpmath.mpf(1) / 2, zm)
    f2 = mpmath.hyp1f1(a2, mpmath.mpf(3) / 2, zm)
    t1 = pre * f1 * mpmath.rgamma(a2) * mpmath.power(2, -a1)
    t2 = pre * ym * f2 * mpmath.rgamma(a1) * mpmath.power(2, -(a2 - 1))
    u_val = t1 - t2
    half = mpmath.pi / 2 * am - mpmath.pi / 4
    c_plus = 2 * mpmath.cos(half) ** 2
    c_minus = 2 * mpmath.sin(half) ** 2
    v_val = mpmath.gamma(am + mpmath.mpf(1) / 2) / mpmath.pi * (c_plus * t1 + c_minus * t2)
    return u_val, v_val


def pcf_u_derivative(alpha: complex, y: complex) -> complex:
    """dU/dy from the ladder relation dU/dy = -y/2 U - (alpha+1/2) U(alpha+1, y)."""
    u0 = pcf_u(alpha, y).value
    u1 = pcf_u(alpha + 1.0, y).value
    return -0.5 * y * u0 - (alpha + 0.5) * u1


def pcf_v_derivative(alpha: complex, y: complex) -> complex:
    """dV/dy from the ladder relation dV/dy = V(alpha+1, y) - y/2 V."""
    v0 = pcf_v(alpha, y).value
    v1 = pcf_v(alpha + 1.0, y).value
    return v1 - 0.5 * y * v0


def pcf_wronskian_residual(alpha: complex, y: complex) -> float:
    """|U dV/dy - dU/dy V - sqrt(2/pi)|, a scalar accuracy diagnostic.

    Derivatives come from the ladder relations, never from finite
    differences.  The combination collapses to

        U(a,y) V(a+1,y) + (a+1/2) U(a+1,y) V(a,y) = sqrt(2/pi);

    the second product carries the explicit factor (a+1/2) and is skipped
    when that factor is exactly zero, which keeps the diagnostic defined
    at a = -1/2 where V(a, y) itself has a gamma pole.
    """
    alpha = _require_finite("alpha", alpha)
    y = _require_finite("y", y)
    u0 = pcf_u(alpha, y).value
    v1 = pcf_v(alpha + 1.0, y).value
    coeff = alpha + 0.5
    if coeff == 0:
        cross = 0.0j
    else:
        cross = coeff * pcf_u(alpha + 1.0, y).value * pcf_v(alpha, y).value
    return abs(u0 * v1 + cross - SQRT_2_OVER_PI)
