"""Pair correlation toolkit: exact pair-correlation statistics, continued
fractions, three-gap bundle decompositions, additive energy, quasi-arithmetic
certificates, and the non-Poissonian witness search.

The heavy lifting happens in the compiled extension; alpha and sequence
arguments are spec strings such as ``"quad:1,2,5"`` (the golden ratio) or
``"density:0.5:seed=7"``, keeping all inputs exact.
"""

from ._core import (
    PcError,
    __version__,
    additive_energy,
    cf_digits,
    convergents,
    detect,
    difference_profile,
    experiment,
    frac_parts,
    gaps,
    generate,
    r2,
    r2_window,
    resolve_alpha,
    witness,
)

__all__ = [
    "PcError",
    "__version__",
    "additive_energy",
    "cf_digits",
    "convergents",
    "detect",
    "difference_profile",
    "experiment",
    "frac_parts",
    "gaps",
    "generate",
    "r2",
    "r2_window",
    "resolve_alpha",
    "witness",
]
