"""Monte Carlo and analytic tools for small-time moments of the running
supremum of Levy processes."""

from .exceptions import (ConfigError, DivergentIntegralError, DomainError, LevyError, MomentNotFiniteError,
                         NotCoveredError, QuadratureError, UnsupportedOperationError)
from .levy_core import (DriftConvention, Family, LevyMeasure, PowerLawMeasure, ProcessSpec, bg_index,
                        char_exponent, drift_for, gamma_process, hyperbolic, inverse_gaussian, make_process,
                        meixner, moment_exists, nig, stable, tempered_stable)
from .moment_engine import (MomentCurve, MomentEstimate, estimate_marginal_moment, estimate_sup_moment,
                            moment_curve, moment_curves)
from .rates import RateModel, RateRegressor, RateSource, compensator_integrals, fit_rate, predict_rate
from .sampler import Scheme, SchemeKind, SmallJumpMode, path_stream, sample_increments, sample_path
from .specfun import bessel_k, gamma_fn

__version__ = "0.1.0"
