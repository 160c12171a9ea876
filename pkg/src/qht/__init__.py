"""Error exponents for discriminating two quantum states.

Chernoff distance, Hoeffding exponent curves, the spectral map to a classical
pair, exact n-copy errors and randomized checks of the underlying inequalities.
"""

from .asymptotics import (
    chernoff_rate_experiment,
    hoeffding_test,
    n_copy_error,
    type_class_ml_error,
)
from .chernoff import (
    ChernoffResult,
    chernoff_distance,
    fidelity,
    hellinger_arc,
    q_s,
    q_s_curve,
    q_s_derivative,
    trace_distance,
)
from .discrimination import classical_ml_error, helstrom, neyman_pearson, quantum_error_of_test
from .errors import *  # noqa: F401,F403
from .hoeffding import (
    critical_points,
    e_classical,
    e_quantum,
    hoeffding_curve,
    stein_rate,
)
from .kernels import BACKEND
from .mapping import classical_pair, classical_q_s, classical_relent, ns_map, quantum_relent
from .states import Priors, diag_state, pure_state, random_density, random_psd, validate_density

__version__ = "0.1.0"
