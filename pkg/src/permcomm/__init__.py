"""Even permutations as commutators of generating pairs of A_n and S_n."""
from ._kernels import BACKEND
from .decomposer import (
    DecompositionCertificate,
    prime_in_window,
    run_pipeline,
    sample_coverage,
    verify_certificate,
)
from .perm import (
    CycleForm,
    Permutation,
    commutator,
    compose,
    cycle_decomposition,
    format_cycles,
    invert,
    parity,
    parse_cycles,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CycleForm",
    "DecompositionCertificate",
    "Permutation",
    "commutator",
    "compose",
    "cycle_decomposition",
    "format_cycles",
    "invert",
    "parity",
    "parse_cycles",
    "prime_in_window",
    "run_pipeline",
    "sample_coverage",
    "verify_certificate",
]
