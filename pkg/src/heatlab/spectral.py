"""
Bath spectral models and system/bath descriptions.

A :class:`SpectralModel` describes the *bare* bath correlation: the rate
``gamma(omega)`` it returns is multiplied by the matrix elements of the
noise operator, which carry all of the coupling strength. ``omega`` is the
energy the system loses in a transition (``omega > 0`` is emission).

``xi`` is the one-sided integral of ``|C(s)|``. For delta-correlated noise
``C(s) = gamma0 * delta(s)`` we use ``int_0^inf delta(s) ds = 1/2``, so the
default is ``xi = gamma0 / 2``. Any value can be passed explicitly.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .numcore import check_hermitian

XI_CONVENTION_NOTE = (
    "white-noise xi uses the half-delta convention int_0^inf delta(s) ds = 1/2, "
    "xi = gamma0/2 for the bare spectral rate gamma0 (= gamma_wn / (2 g^2))")

KINDS = ('flat_zero_temperature', 'flat_thermal', 'band_pass')


@dataclass(frozen=True)
class SpectralModel:
    kind: str
    gamma0: float
    beta: float = np.inf
    window: Optional[Tuple[float, float]] = None
    xi: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown spectral model kind {self.kind!r}")
        if not self.gamma0 >= 0:
            raise ValueError("gamma0 must be nonnegative")
        if self.kind == 'band_pass':
            if self.window is None or not self.window[0] < self.window[1]:
                raise ValueError("band_pass needs a window (lo, hi) with lo < hi")
        if self.xi is None:
            object.__setattr__(self, 'xi', 0.5 * self.gamma0)
        elif self.xi < 0:
            raise ValueError("xi must be nonnegative")

    def rate(self, omega):
        return rate(self, omega)


def rate(model, omega):
    """Transition rate ``gamma(omega)``; vectorised over ``omega``."""
    w = np.asarray(omega, dtype=float)
    g0 = model.gamma0
    if model.kind == 'flat_zero_temperature':
        out = np.where(w > 0, g0, 0.0)
    elif model.kind == 'flat_thermal':
        with np.errstate(over='ignore', invalid='ignore'):
            boltz = np.exp(model.beta * np.minimum(w, 0.0))
        out = np.where(w >= 0, g0, g0 * boltz)
    else:
        lo, hi = model.window
        out = np.where((w >= lo) & (w <= hi), g0, 0.0)
    return out if out.ndim else float(out)


def xi(model):
    return float(model.xi)


def flat_zero_temperature(gamma0, xi=None):
    return SpectralModel('flat_zero_temperature', gamma0, np.inf, None, xi)


def flat_thermal(gamma0, beta, xi=None):
    """Flat emission rate with detailed-balance absorption ``gamma0 e^{beta omega}``.

    ``beta = inf`` is the zero-temperature limit; a negative ``beta``
    describes a population-inverting bath.
    """
    return SpectralModel('flat_thermal', gamma0, float(beta), None, xi)


def band_pass(gamma0, window, xi=None):
    return SpectralModel('band_pass', gamma0, np.inf, tuple(window), xi)


def white_noise(gamma_wn, g_ref=1.0, beta=np.inf):
    """Spectrum whose dressed rate ``g_ref^2 gamma(omega)`` equals ``gamma_wn``.

    With ``beta = inf`` (default) only emission is allowed.
    """
    if g_ref == 0:
        raise ValueError("g_ref must be nonzero")
    bare = gamma_wn / g_ref ** 2
    if np.isinf(beta) and beta > 0:
        return flat_zero_temperature(bare)
    return flat_thermal(bare, beta)


@dataclass
class BathSpec:
    """One heat bath: its channels are ``(noise operator, spectral model)`` pairs.

    Channels are taken to be uncorrelated, so the channel-resolved ``xi``
    matrix is diagonal.
    """
    label: str
    beta: float
    channels: List[Tuple[np.ndarray, SpectralModel]] = field(default_factory=list)

    def __post_init__(self):
        if not self.channels:
            raise ValueError(f"bath {self.label!r} needs at least one channel")
        self.channels = [(check_hermitian(np.asarray(A)), m) for A, m in self.channels]
        dims = {A.shape for A, _ in self.channels}
        if len(dims) != 1:
            raise ValueError(f"bath {self.label!r} channels have mixed shapes {dims}")

    @property
    def dim(self):
        return self.channels[0][0].shape[0]

    @property
    def operators(self):
        return [A for A, _ in self.channels]

    @property
    def models(self):
        return [m for _, m in self.channels]

    def xi_matrix(self):
        return np.diag([m.xi for m in self.models])


@dataclass
class SystemSpec:
    hamiltonian: np.ndarray
    baths: Sequence[BathSpec]

    def __post_init__(self):
        self.hamiltonian = check_hermitian(np.asarray(self.hamiltonian))
        self.baths = list(self.baths)
        for bath in self.baths:
            if bath.dim != self.dim:
                raise ValueError(
                    f"bath {bath.label!r} acts on dim {bath.dim}, system has {self.dim}")

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    def bath_index(self, label):
        for i, b in enumerate(self.baths):
            if b.label == label:
                return i
        raise KeyError(label)
