"""Entanglement and correlation numerics for second-quantized systems.

Modules:

- :mod:`sqent.measures`: density matrices, entropies, PPT, concurrence.
- :mod:`sqent.mode_transform`: Bogoliubov maps, squeezed and thermal spectra.
- :mod:`sqent.fock_oracle`: truncated Fock-space brute force for cross-checks.
- :mod:`sqent.fermi_gas`: exchange-induced spin correlations of free electrons.
- :mod:`sqent.cli`: the ``sqent`` command.
"""

from .errors import (
    AmbiguityError,
    DomainError,
    NotAStateError,
    PreconditionError,
    ResourceError,
    SqentError,
    TruncationError,
    ValidationError,
)
from .measures import DensityMatrix, PureBipartiteState

__version__ = "0.1.0"
