"""Acquisition geometry: interferometric wavenumbers, steering vectors, resolutions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_DIFFERENCE_ORDER",
    "ArrayConfig",
    "make_uniform_array",
    "fourier_resolution",
    "coarse_resolution",
    "steering_vector",
    "baseline_differences",
    "difference_power_matrix",
]

# (delta kz)^d loses all precision well before d reaches this for realistic
# geometries; moment orders used in practice stay at or below 6.
MAX_DIFFERENCE_ORDER = 12

_TWO_PI = 2.0 * math.pi


def _uniform_period(kz: np.ndarray) -> float | None:
    """Common vertical period of the steering vectors, if the spacing is uniform."""
    steps = np.diff(kz)
    if np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        return float(_TWO_PI / steps[0])
    return None


@dataclass(frozen=True)
class ArrayConfig:
    """Wavenumber configuration of a multibaseline acquisition stack.

    Parameters
    ----------
    kz : array_like
        Interferometric vertical wavenumbers in rad/m, strictly increasing,
        at least two of them.
    ambiguity : float, optional
        Common vertical period of all steering vectors, in m.  Derived
        automatically for uniformly spaced arrays; ``None`` when the array
        has no known period.
    """

    kz: np.ndarray
    ambiguity: float | None = None

    def __post_init__(self) -> None:
        kz = np.array(self.kz, dtype=float, copy=True)
        if kz.ndim != 1 or kz.size < 2:
            raise ValueError("kz must be a 1-d sequence with at least two wavenumbers")
        if not np.all(np.isfinite(kz)):
            raise ValueError("kz must contain finite values only")
        if not np.all(np.diff(kz) > 0.0):
            raise ValueError("kz must be strictly increasing")
        kz.setflags(write=False)
        object.__setattr__(self, "kz", kz)
        amb = self.ambiguity
        if amb is None:
            object.__setattr__(self, "ambiguity", _uniform_period(kz))
        else:
            amb = float(amb)
            if not (math.isfinite(amb) and amb > 0.0):
                raise ValueError("ambiguity must be a positive finite length")
            object.__setattr__(self, "ambiguity", amb)

    @property
    def M(self) -> int:
        """Number of acquisitions."""
        return int(self.kz.size)

    def _is_canonical_uniform(self) -> bool:
        if self.ambiguity is None or self.kz[0] != 0.0:
            return False
        ref = _TWO_PI * np.arange(self.M) / self.ambiguity
        return bool(np.allclose(self.kz, ref, rtol=0.0, atol=1e-12 * max(self.kz[-1], 1.0)))

    def to_json(self) -> dict:
        """JSON-serializable form, ``{"M", "z_amb"}`` for canonical uniform arrays."""
        if self._is_canonical_uniform():
            return {"M": self.M, "z_amb": float(self.ambiguity)}
        return {"kz": [float(k) for k in self.kz]}

    @classmethod
    def from_json(cls, obj: dict) -> "ArrayConfig":
        """Accepts either ``{"kz": [...]}`` or ``{"M": int, "z_amb": float}``."""
        if "kz" in obj:
            return cls(np.asarray(obj["kz"], dtype=float))
        if "M" in obj and "z_amb" in obj:
            return make_uniform_array(int(obj["M"]), float(obj["z_amb"]))
        raise ValueError("array config needs either 'kz' or both 'M' and 'z_amb'")


def make_uniform_array(M: int, z_amb: float) -> ArrayConfig:
    """Uniform wavenumber stack ``kz_n = 2 pi n / z_amb`` for n = 0..M-1.

    The resulting steering vectors all share the exact vertical period
    ``z_amb`` (the height ambiguity), which is stored on the config.

    Parameters
    ----------
    M : int
        Number of acquisitions, at least 2.
    z_amb : float
        Height ambiguity in m, positive.
    """
    if int(M) != M or M < 2:
        raise ValueError("M must be an integer >= 2")
    z_amb = float(z_amb)
    if not (math.isfinite(z_amb) and z_amb > 0.0):
        raise ValueError("z_amb must be a positive finite length")
    kz = _TWO_PI * np.arange(int(M)) / z_amb
    return ArrayConfig(kz, ambiguity=z_amb)


def fourier_resolution(config: ArrayConfig) -> float:
    """Rayleigh vertical resolution ``2 pi / (kz_max - kz_min)`` in m."""
    return float(_TWO_PI / (config.kz[-1] - config.kz[0]))


def coarse_resolution(config: ArrayConfig) -> float:
    """Ambiguity height divided by the acquisition count.

    Convenience convention for quasi-uniform stacks (``z_amb`` is then about
    M times the resolution cell).  Requires a known ambiguity.
    """
    if config.ambiguity is None:
        raise ValueError("coarse_resolution needs an array with a known ambiguity")
    return float(config.ambiguity) / config.M


def steering_vector(config: ArrayConfig, z: float) -> np.ndarray:
    """Complex steering vector ``exp(j kz_n z)`` at height z (m)."""
    z = float(z)
    if not math.isfinite(z):
        raise ValueError("z must be finite")
    return np.exp(1j * config.kz * z)


def baseline_differences(config: ArrayConfig) -> np.ndarray:
    """Matrix of wavenumber differences ``kz_n - kz_m`` (row n, column m)."""
    kz = config.kz
    return kz[:, None] - kz[None, :]


def difference_power_matrix(config: ArrayConfig, d: int) -> np.ndarray:
    """Elementwise power of the wavenumber differences, ``(kz_n - kz_m)**d``.

    ``d = 0`` gives the all-ones matrix.  Even orders are symmetric, odd
    orders antisymmetric.  Orders above ``MAX_DIFFERENCE_ORDER`` are refused.
    """
    if int(d) != d or d < 0 or d > MAX_DIFFERENCE_ORDER:
        raise ValueError(f"order d must be an integer in [0, {MAX_DIFFERENCE_ORDER}]")
    return baseline_differences(config) ** int(d)
