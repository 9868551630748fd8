"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation. Set ``QSEAL_KERNELS=numpy`` to force the fallback.
"""
import os

from . import _pykernels

if os.environ.get("QSEAL_KERNELS", "").lower() in ("numpy", "python", "py"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND

apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
apply_cswap = _impl.apply_cswap
apply_pauli = _impl.apply_pauli
pauli_expectation = _impl.pauli_expectation
prob_one = _impl.prob_one
marginal = _impl.marginal
collapse = _impl.collapse
masked_weight = _impl.masked_weight
majority_project = _impl.majority_project


def available_backends():
    """Return the kernel modules importable in this environment, by name."""
    found = {"numpy": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
