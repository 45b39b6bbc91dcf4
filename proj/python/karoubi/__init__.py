"""Idempotent splitting and biproduct completions over executable process
theories: boolean relations, stochastic matrices and quantum channels.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._karoubi import (  # noqa: F401
    Block,
    BlockDecomposition,
    Channel,
    KaroubiError,
    causalize_subcausal,
    channel_from_choi,
    channel_from_kraus,
    check_theory_laws,
    copy_delta,
    decoherence_idempotent,
    decompose_cptp_idempotent,
    discard_channel,
    environment_axiom_check,
    fixed_point_space,
    flor_decompose,
    identity_channel,
    is_causal,
    is_idempotent,
    is_subcausal,
    pants_delta,
    pure_embed,
    random_idempotent_instance,
    search_splitting_bool,
    stinespring_leak,
    validate_channel,
    verify_decomposition,
    verify_frobenius,
    zero_channel,
)

__all__ = [
    "Block",
    "BlockDecomposition",
    "Channel",
    "KaroubiError",
    "causalize_subcausal",
    "channel_from_choi",
    "channel_from_kraus",
    "check_theory_laws",
    "copy_delta",
    "decoherence_idempotent",
    "decompose_cptp_idempotent",
    "discard_channel",
    "environment_axiom_check",
    "fixed_point_space",
    "flor_decompose",
    "identity_channel",
    "is_causal",
    "is_idempotent",
    "is_subcausal",
    "pants_delta",
    "pure_embed",
    "random_idempotent_instance",
    "search_splitting_bool",
    "stinespring_leak",
    "validate_channel",
    "verify_decomposition",
    "verify_frobenius",
    "zero_channel",
]
