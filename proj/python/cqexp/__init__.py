"""Error-exponent bounds and entropy-duality checks for classical-quantum sources.

The heavy lifting lives in the compiled extension; this package re-exports
its operations. States are numpy complex matrices, channels are lists of
density matrices indexed by the classical input.
"""

from ._core import (  # noqa: F401
    ResourceError,
    SolverError,
    ValidationError,
    build_cq_state,
    cc_exponent_lower,
    cc_sphere_packing,
    cond_entropy_petz_up,
    cond_entropy_sand_down,
    dc_error_exact,
    dc_exponent_lower,
    dc_sphere_packing,
    dual_pa_state,
    duality_check,
    e0_entropy_identity,
    e0_opt,
    fidelity,
    gallager_e0,
    helstrom,
    holevo_condition,
    mat_pow,
    max_fidelity_uniform,
    pa_distance_exact,
    pa_exponent_lower,
    pa_sphere_packing,
    parse_channel_spec,
    partial_trace,
    petz_divergence,
    pguess,
    sandwiched_divergence,
    sibson_optimizer,
    trace_norm,
    umegaki_divergence,
    von_neumann_cond,
)

__all__ = [name for name in dir() if not name.startswith("_")]
