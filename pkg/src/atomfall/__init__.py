"""Exact and approximate dynamics of a laser-driven two-level atom in uniform gravity.

The internal evolution per momentum eigenvalue is available in closed form
(:func:`atomfall.exact.w_matrix`, built from parabolic cylinder functions),
in three analytic approximation regimes (:mod:`atomfall.approx`), and
through two independent special-function-free verification routes
(:mod:`atomfall.oracles`).  :mod:`atomfall.sim` evolves momentum-space
wavepackets with exact photon-kick and free-fall momentum shifts, and
:mod:`atomfall.cli` wraps everything in a deterministic CSV runner.
"""

from .approx import (
    MagnusExponent,
    RabiFrequency,
    bernoulli_numbers,
    longtime_w,
    magnus_f,
    magnus_singularities,
    magnus_w,
    rabi_w,
    resonant_asymptotic_amplitudes,
    weak_gravity_w,
)
from .errors import (
    AtomfallError,
    GammaPoleError,
    GridError,
    NonConvergenceError,
    RegimeError,
    SingularExponentError,
    StepLimitError,
)
from .exact import Matrix2C, UBlocks, evolution_blocks, free_fall_operator, w_matrix
from .oracles import EvalReport, IntegratorConfig, TaylorState, evaluate_point, ode_w, taylor_w
from .params import (
    HBAR,
    OdeGenerators,
    PhysicalParams,
    ReducedParams,
    doppler_detuning,
    ode_generators,
    reduce_params,
)
from .sim import (
    CmPhase,
    MomentumGrid,
    SpinorPacket,
    TimeSeriesRow,
    cm_phase,
    commensurate_times,
    evolve_packet,
    excitation_probability,
    gaussian_packet,
    time_series,
)
from .specfun import (
    SpecFunResult,
    complex_ln_gamma,
    kummer_1f1,
    pcf_u,
    pcf_v,
    pcf_wronskian_residual,
)

__version__ = "0.1.0"
