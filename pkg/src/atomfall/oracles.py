"""Independent verification routes for the closed-form evolution matrix.

Two cross-checks, both free of special functions:

* :func:`ode_w` integrates the flow equation
  dW/d(lambda) = (B - lambda [Q,P] sigma_3) W directly with an embedded
  Dormand-Prince 5(4) pair on the four complex entries.
* :func:`taylor_w` expands W in powers of the sweep parameter
  eps = sqrt(2 [Q,P]) through the derivative recursion

      X_{n+1} = X'_n + (y^2/4 + theta - 1/2) Y_n,
      Y_{n+1} = Y'_n + X_n,        X_0 = 1, Y_0 = 0,

  whose Wronskian collapse turns every matrix entry into a single series
  in eps.  The recursion is carried as exact rational polynomials in
  (y, theta) and only evaluated numerically at the end, which preserves
  the cancellation structure across mixed orders.

The bottom-row entries follow from conjugating the flow by sigma_1, which
maps (xi0, zeta) -> (-xi0, -zeta); their series reuse the same polynomials
at the mirrored parameters.
"""

from __future__ import annotations

import cmath
import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import RegimeError, StepLimitError
from .exact import Matrix2C
from .params import ode_generators, sqrt_izeta


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-integrator knobs; the built-in pair is Dormand-Prince 5(4)."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 100_000
    method_order: int = 5

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.method_order != 5:
            raise ValueError("only the order-5 Dormand-Prince pair is built in")


# Dormand-Prince 5(4) tableau.
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def ode_w(xi0, omega_tilde: float, s: float, zeta: int,
          cfg: IntegratorConfig = IntegratorConfig()) -> Matrix2C:
    """W(lambda = 1) by direct adaptive integration of the flow equation.

    Works for every zeta including 0.  Raises :class:`StepLimitError`
    carrying the worst local-error estimate when the budget runs out.
    """
    if s < 0:
        raise ValueError("s must be nonnegative")
    gens = ode_generators(xi0, omega_tilde, s, zeta)
    p, r, c = gens.p_gen, gens.r_gen, gens.qp_comm
    if p == 0 and r == 0 and c == 0:
        return Matrix2C.identity()

    def rhs(lam, y):
        w11, w21, w12, w22 = y
        g = p - lam * c
        return (
            g * w11 + r * w21,
            r * w11 - g * w21,
            g * w12 + r * w22,
            r * w12 - g * w22,
        )

    y = (1.0 + 0j, 0j, 0j, 1.0 + 0j)
    lam = 0.0
    scale = abs(p) + abs(r) + abs(c)
    h = min(0.5, 0.5 / max(scale, 1e-3))
    k1 = rhs(lam, y)
    worst = 0.0
    for _ in range(cfg.max_steps):
        if lam >= 1.0:
            return Matrix2C(y[0], y[2], y[1], y[3])
        h = min(h, 1.0 - lam)
        ks = [k1]
        for i in range(1, 7):
            yi = tuple(
                y[j] + h * sum(_A[i][m] * ks[m][j] for m in range(i))
                for j in range(4)
            )
            ks.append(rhs(lam + _C[i] * h, yi))
        y_new = tuple(
            y[j] + h * sum(_A[6][m] * ks[m][j] for m in range(6))
            for j in range(4)
        )
        err = 0.0
        for j in range(4):
            e = h * sum(_ERR[m] * ks[m][j] for m in range(7))
            tol = cfg.abs_tol + cfg.rel_tol * max(abs(y[j]), abs(y_new[j]))
            err = max(err, abs(e) / tol)
        worst = max(worst, err)
        if err <= 1.0:
            lam += h
            y = y_new
            k1 = ks[6]  # first-same-as-last
        factor = 0.9 * (err + 1e-16) ** -0.2
        h *= min(5.0, max(0.2, factor))
    raise StepLimitError(
        f"flow integration exceeded {cfg.max_steps} steps at lambda = {lam:.6f}",
        worst_error=worst,
    )


# ---------------------------------------------------------------------------
# Taylor route
# ---------------------------------------------------------------------------

# Polynomials in (y, theta) with exact rational coefficients,
# keyed {(y_power, theta_power): Fraction}.

def _poly_dy(poly):
    out = {}
    for (j, k), coef in poly.items():
        if j:
            out[(j - 1, k)] = out.get((j - 1, k), Fraction(0)) + j * coef
    return out


def _poly_add(a, b):
    out = dict(a)
    for key, coef in b.items():
        out[key] = out.get(key, Fraction(0)) + coef
        if out[key] == 0:
            del out[key]
    return out


def _poly_potential_mul(poly):
    """Multiply by (y^2/4 + theta - 1/2)."""
    out = {}
    for (j, k), coef in poly.items():
        for dj, dk, f in ((2, 0, Fraction(1, 4)), (0, 1, Fraction(1)), (0, 0, Fraction(-1, 2))):
            key = (j + dj, k + dk)
            out[key] = out.get(key, Fraction(0)) + coef * f
            if out[key] == 0:
                del out[key]
    return out


@functools.lru_cache(maxsize=None)
def _xy_polys(order: int):
    """(X_l, Y_l) for l = 0..order as exact (y, theta) polynomials."""
    xs = [{(0, 0): Fraction(1)}]
    ys = [{}]
    for _ in range(order):
        xs.append(_poly_add(_poly_dy(xs[-1]), _poly_potential_mul(ys[-1])))
        ys.append(_poly_add(_poly_dy(ys[-1]), xs[-2]))
    return tuple(xs), tuple(ys)


def _poly_eval(poly, y0: complex, theta: complex) -> complex:
    if not poly:
        return 0j
    jmax = max(j for j, _ in poly)
    kmax = max(k for _, k in poly)
    ypow = [1.0 + 0j]
    for _ in range(jmax):
        ypow.append(ypow[-1] * y0)
    tpow = [1.0 + 0j]
    for _ in range(kmax):
        tpow.append(tpow[-1] * theta)
    return sum(float(c) * ypow[j] * tpow[k] for (j, k), c in poly.items())


@dataclass(frozen=True)
class TaylorState:
    """Evaluated recursion data for one half of the matrix.

    x_coeffs/y_coeffs are X_l(theta - 1/2, y0) and Y_l(theta - 1/2, y0);
    eps = sqrt(2 [Q,P]) and y0 the scaled initial detuning in Weber
    variables.
    """

    x_coeffs: tuple
    y_coeffs: tuple
    eps: complex
    y0: complex
    order: int


def _taylor_state(xi0, omega_tilde: float, s: float, zeta: int, order: int) -> TaylorState:
    theta = 0.25j * zeta * omega_tilde * omega_tilde
    root = sqrt_izeta(zeta)
    y0 = -1j * xi0 / root
    eps = s * root
    xs, ys = _xy_polys(order)
    xv = tuple(_poly_eval(p, y0, theta) for p in xs)
    yv = tuple(_poly_eval(p, y0, theta) for p in ys)
    return TaylorState(xv, yv, eps, y0, order)


def _taylor_half(state: TaylorState, r_gen: complex):
    """(W_diag, W_off) from one evaluated recursion.

    W_diag = sum eps^l/l! (X_l - y0/2 Y_l),  W_off = R sum eps^(l-1)/l! Y_l.
    """
    diag = 1.0 + 0j  # l = 0: X_0 = 1, Y_0 = 0
    off_sum = 0j
    coef = 1.0 + 0j  # eps^(l-1) / l!
    mags = [1.0]
    for l in range(1, state.order + 1):
        if l > 1:
            coef *= state.eps / l
        term_d = coef * state.eps * (state.x_coeffs[l] - 0.5 * state.y0 * state.y_coeffs[l])
        diag += term_d
        off_sum += coef * state.y_coeffs[l]
        mags.append(abs(term_d))
    tail = mags[-3:]
    if len(mags) > 6 and min(tail) > 1e-14 and tail == sorted(tail):
        warnings.warn(
            "taylor_w terms stopped decreasing before truncation; "
            "the expansion is outside its convergent domain",
            stacklevel=3,
        )
    return diag, r_gen * off_sum


def taylor_w(xi0, omega_tilde: float, s: float, zeta: int, order: int = 30) -> Matrix2C:
    """W from the sweep-parameter Taylor expansion, truncated at ``order``.

    Valid for |eps| = s below roughly one sweep scale; emits a divergence
    warning when the terms stop decreasing.  zeta = 0 has eps identically
    zero and is served by the Rabi closed form instead.
    """
    if zeta not in (1, -1):
        raise RegimeError("taylor_w requires zeta = +-1; use rabi_w for zeta = 0")
    if s < 0:
        raise ValueError("s must be nonnegative")
    if not 0 < order <= 40:
        raise ValueError("order must be in 1..40")
    r_gen = 0.5j * s * omega_tilde
    top = _taylor_state(xi0, omega_tilde, s, zeta, order)
    w11, w12 = _taylor_half(top, r_gen)
    mirror = _taylor_state(-xi0, omega_tilde, s, -zeta, order)
    w22, w21 = _taylor_half(mirror, r_gen)
    return Matrix2C(w11, w12, w21, w22)


# ---------------------------------------------------------------------------
# Comparison records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EvalReport:
    """Oracle-vs-closed-form comparison at one grid point."""

    xi0: float
    omega_tilde: float
    s: float
    zeta: int
    max_elem_err: float
    unitarity_err: float
    det_err: float
    regime: str


def evaluate_point(xi0, omega_tilde: float, s: float, zeta: int,
                   cfg: IntegratorConfig = IntegratorConfig()) -> EvalReport:
    """Compare the closed form against the flow integration at one point."""
    from . import approx
    from .exact import w_matrix

    if zeta == 0:
        closed = approx.rabi_w(xi0, omega_tilde, s)
        regime = "rabi"
    else:
        closed = w_matrix(xi0, omega_tilde, s, zeta)
        regime = "exact"
    reference = ode_w(xi0, omega_tilde, s, zeta, cfg)
    return EvalReport(
        xi0=xi0, omega_tilde=omega_tilde, s=s, zeta=zeta,
        max_elem_err=closed.max_abs_diff(reference),
        unitarity_err=closed.unitarity_defect(),
        det_err=abs(closed.det() - 1.0),
        regime=regime,
    )
