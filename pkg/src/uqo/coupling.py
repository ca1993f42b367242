"""Detector-field couplings and their scaling dimensions."""

from enum import Enum


class Coupling(Enum):
    """Detector-field coupling in four dimensions.

    ``delta`` is the scaling dimension of the coupling constant: the
    response function carries a factor ``T**(-2*delta)``.
    """

    LINEAR = "linear"
    QUADRATIC = "quadratic"
    FERMIONIC = "fermionic"

    @property
    def delta(self) -> int:
        return _DELTA[self]

    @classmethod
    def parse(cls, value):
        """Accept a Coupling, its value, or its name (case-insensitive)."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown coupling {value!r}; expected one of "
                f"{', '.join(c.value for c in cls)}"
            ) from None


_DELTA = {Coupling.LINEAR: 0, Coupling.QUADRATIC: 1, Coupling.FERMIONIC: 2}


def scaling_dimension(kind, d=4):
    """Scaling dimension of the coupling constant in ``d`` dimensions."""
    kind = Coupling.parse(kind)
    if kind is Coupling.LINEAR:
        return (d - 4) / 2
    if kind is Coupling.QUADRATIC:
        return d - 3
    return d - 2
