"""Machine checks of Noether's first theorem and its converse in Hamiltonian form."""

__version__ = "0.1.0"

from .errors import NoetherLabError  # noqa: E402
from .phasespace import (  # noqa: E402
    ComplexObservable,
    Observable,
    PhaseState,
    SystemSpec,
    Transformation,
    make_state,
    sample_states,
)

__all__ = [
    "ComplexObservable",
    "NoetherLabError",
    "Observable",
    "PhaseState",
    "SystemSpec",
    "Transformation",
    "make_state",
    "sample_states",
    "__version__",
]
