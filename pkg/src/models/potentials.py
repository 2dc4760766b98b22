"""Environmental and interaction potentials on the torus."""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
from scipy import fft as sp_fft

from ..utils.errors import ConfigurationError


Harmonic = Tuple[int, float]


@dataclass(frozen=True)
class TrigSeries:
    """
    Finite trigonometric series ``sum_h a_h cos(h x) + b_h sin(h x)``.

    Picklable, so models built from it can be shipped to worker processes.
    """

    cos: Tuple[Harmonic, ...] = ()
    sin: Tuple[Harmonic, ...] = ()

    @classmethod
    def from_pairs(
        cls, cos: Sequence[Sequence[float]] = (), sin: Sequence[Sequence[float]] = (), key: str = ""
    ) -> "TrigSeries":
        """Build from ``[[h, amplitude], ...]`` lists as they appear in config files."""
        def _pairs(raw: Sequence[Sequence[float]], part: str) -> Tuple[Harmonic, ...]:
            out = []
            for item in raw:
                if len(item) != 2 or int(item[0]) != item[0] or item[0] < 0:
                    raise ConfigurationError(
                        f"expected [harmonic, amplitude], got {item!r}", f"{key}.{part}" if key else part
                    )
                out.append((int(item[0]), float(item[1])))
            return tuple(out)

        return cls(cos=_pairs(cos, "cos"), sin=_pairs(sin, "sin"))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        value = np.zeros_like(x)
        for h, a in self.cos:
            value = value + a * np.cos(h * x)
        for h, b in self.sin:
            value = value + b * np.sin(h * x)
        return value

    def derivative(self) -> "TrigSeries":
        """Exact derivative, again a trigonometric series."""
        cos = tuple((h, b * h) for h, b in self.sin if h)
        sin = tuple((h, -a * h) for h, a in self.cos if h)
        return TrigSeries(cos=cos, sin=sin)

    @property
    def max_harmonic(self) -> int:
        return max([h for h, _ in self.cos + self.sin], default=0)


@dataclass(frozen=True)
class Potentials:
    """
    The pair (V, F) of the McKean-Vlasov drift, with derivatives.

    Attributes:
        name: Preset name or ``"custom"``
        V: Environmental potential
        Vprime: Derivative of V
        F: Interaction potential
        Fprime: Derivative of F
    """

    name: str
    V: Callable[[np.ndarray], np.ndarray]
    Vprime: Callable[[np.ndarray], np.ndarray]
    F: Callable[[np.ndarray], np.ndarray]
    Fprime: Callable[[np.ndarray], np.ndarray]
    symmetric: bool = field(default=False, compare=False)

    @classmethod
    def from_series(cls, name: str, V: TrigSeries, F: TrigSeries) -> "Potentials":
        """Potentials whose derivatives are taken analytically."""
        symmetric = not V.sin and not F.sin
        return cls(name, V, V.derivative(), F, F.derivative(), symmetric=symmetric)

    def interaction_harmonics(self, M: int = 256, tol: float = 1e-12) -> List[int]:
        """
        Harmonics ``h >= 1`` present in F.

        Each one contributes a ``(sin hx, cos hx)`` moment pair to the
        self-consistency problem for stationary densities.
        """
        if isinstance(self.F, TrigSeries):
            return sorted({h for h, amp in self.F.cos + self.F.sin if h >= 1 and amp != 0.0})
        x = 2.0 * np.pi * np.arange(M) / M
        amplitudes = np.abs(sp_fft.rfft(self.F(x))) / M
        scale = max(1.0, float(amplitudes.max()))
        return [h for h in range(1, M // 2) if amplitudes[h] > tol * scale]

    def interaction_coefficients(self, harmonics: Sequence[int], M: int = 256) -> Dict[int, Tuple[float, float]]:
        """``{h: (a_h, b_h)}`` with ``F = sum a_h cos hx + b_h sin hx`` (mean dropped)."""
        x = 2.0 * np.pi * np.arange(M) / M
        spectrum = sp_fft.rfft(self.F(x)) * (2.0 / M)
        return {h: (float(spectrum[h].real), float(-spectrum[h].imag)) for h in harmonics}


DOUBLE_WELL = Potentials.from_series(
    "double_well",
    V=TrigSeries(cos=((2, 1.0),)),
    F=TrigSeries(cos=((1, -1.0),)),
)

FOUR_WELL = Potentials.from_series(
    "four_well",
    V=TrigSeries(cos=((4, 1.0),)),
    F=TrigSeries(cos=((1, -1.0),)),
)

PRESETS: Dict[str, Potentials] = {
    DOUBLE_WELL.name: DOUBLE_WELL,
    FOUR_WELL.name: FOUR_WELL,
}


def get_potentials(name: str) -> Potentials:
    """Look up a named preset."""
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown preset {name!r}; expected one of {sorted(PRESETS)}", "model.preset"
        ) from None
