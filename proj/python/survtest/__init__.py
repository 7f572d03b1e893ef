"""Kernel log-rank tests for right-censored factorial designs.

Thin wrapper over the compiled extension. The extension is built by the CMake
project; point PYTHONPATH at the build directory (or install the module next
to this package) before importing.
"""

from _survtest import (  # noqa: F401
    __version__,
    hypothesis,
    kernel_labels,
    load_dataset,
    mctest,
    simulate,
    statistic,
    test,
)

__all__ = [
    "__version__",
    "hypothesis",
    "kernel_labels",
    "load_dataset",
    "mctest",
    "simulate",
    "statistic",
    "test",
]
