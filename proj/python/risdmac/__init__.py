"""Capacity regions and outage probabilities for a two-user RIS-assisted dirty MAC.

Thin bindings over the C++ library. Configs use the same INI text as the
command-line tool; subcommands return their CSV (or JSON) output as a string.
"""

from ._risdmac import (
    DomainError,
    IoError,
    MixtureGammaParams,
    NumericalError,
    ParseError,
    SnrDistribution,
    TruncationPolicy,
    ValidationError,
    average_snrs,
    build_mixture_params,
    dist_check,
    lower_incomplete_gamma,
    op_doubly,
    op_single,
    outage,
    pdf_H2_exact,
    pdf_H2_mixture,
    rate_to_threshold,
    region,
    sweep,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
