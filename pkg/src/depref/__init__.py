"""depref: a simulation and verification laboratory for de-preferential
random graph growth.

Graphs grow by attaching each new vertex's m half edges to existing
vertices with weights that *decrease* in degree, either linearly
(theta - alpha*d/(k+(2n-1)m)) or as an inverse power ((delta+d)**-alpha).
The package grows the discrete sequences, simulates their continuous-time
embeddings, solves for the Malthusian parameter lambda*, and checks the
limit laws those constructions imply.

Hot loops run in a compiled extension when available, with a pure-Python
fallback selected at import (see depref._backend); both consume the random
stream identically, so results never depend on the backend.
"""
__version__ = "0.1.0"

from ._backend import BACKEND, available_backends
from .analytics import (
    DegreeHistogram,
    ReplicaSummary,
    attachment_degree_frequency,
    clt_standardize,
    empirical_pk,
    expected_fixed_degree_linear,
    fixed_vertex_ratio,
    linear_limit_pmf,
    max_abs_deviation,
    statistical_tests,
)
from .core import (
    AttachmentEvent,
    GraphState,
    InternalStateError,
    attachment_weight,
    grow_step,
    grow_to,
    init_graph,
    normalizer,
    snapshot_grid,
)
from .embedding import (
    BirthTrajectory,
    CMJTree,
    YuleEnsemble,
    athreya_karlin_grow,
    birth_asymptotic_ratio,
    cmj_grow,
    simulate_birth_process,
    tau_normalization,
)
from .malthusian import (
    LimitPmf,
    MalthusianResult,
    RhoHatEval,
    SolverError,
    growth_constant,
    lambda_star_sweep,
    limit_degree_pmf,
    pmf_stats,
    rho_hat,
    solve_lambda_star,
)
from .params import INVERSE, LINEAR, ModelParams, ParameterError, inverse, linear
from .runner import EnsembleConfig, ExperimentConfig, replica_rng, run_ensembles, run_experiment
from .samplers import (
    SamplerKind,
    sample_target_bucketed,
    sample_target_rejection,
    sample_target_scan,
    step_distribution,
)
