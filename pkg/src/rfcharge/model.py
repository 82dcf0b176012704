"""Recharge-power physics.

A single charger delivers ``rho / (d + eps)**2`` watts of rectified power at
distance ``d``. With several chargers the per-charger contributions are
phasors ``P_k * exp(-j*2*pi*d_k/lambda)`` and the node harvests the modulus of
their sum (``SUPERPOSITION``). Two baselines are provided for comparison:
plain scalar addition (``SUMMATION``) and a coverage disk of radius ``r1``
around each charger (``DISK``).

All quantities are SI: watts and meters.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from rfcharge.errors import ConfigurationError

__all__ = [
    "PowerModel",
    "PowerProfile",
    "RadioParams",
    "c_radius",
    "combine_measured",
    "db_to_linear",
    "harvested_power",
    "joint_power",
    "pattern_radii",
    "required_power",
    "single_charger_power",
]


def db_to_linear(value_db):
    """Convert a dB (or dBi) figure to a linear power ratio."""
    return 10.0 ** (value_db / 10.0)


@dataclass(frozen=True)
class RadioParams:
    """Antenna and propagation constants of a charger/receiver pair.

    Defaults are the hardware values of a WISP 4.1 DL tag charged by an
    Impinj Speedway reader.
    """

    eta: float = 0.3
    gs_dbi: float = 8.0
    gr_dbi: float = 2.0
    lp_db: float = 3.0
    lambda_m: float = 0.33
    ps_w: float = 1.0
    epsilon_m: float = 0.2316

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ConfigurationError(f"eta must lie in (0, 1], got {self.eta}")
        for name in ("lambda_m", "ps_w", "epsilon_m"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigurationError(f"{name} must be positive, got {value}")
        for name in ("gs_dbi", "gr_dbi", "lp_db"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    @property
    def rho(self) -> float:
        """Lumped constant ``eta*Gs*Gr*Ps/Lp * (lambda/4pi)**2`` in W*m^2."""
        gain = db_to_linear(self.gs_dbi) * db_to_linear(self.gr_dbi) / db_to_linear(self.lp_db)
        return self.eta * gain * self.ps_w * (self.lambda_m / (4.0 * math.pi)) ** 2

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.lambda_m


@dataclass(frozen=True)
class PowerProfile:
    """Node power draw and duty cycle.

    ``alpha`` is the fraction of time spent active. Defaults: 600 uA active
    and 1 uA quiescent at 1.8 V.
    """

    pa_w: float = 1.08e-3
    pq_w: float = 1.8e-6
    alpha: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.pa_w > self.pq_w > 0.0:
            raise ConfigurationError("power draw must satisfy pa_w > pq_w > 0")

    def with_alpha(self, alpha: float) -> "PowerProfile":
        return PowerProfile(self.pa_w, self.pq_w, alpha)


class PowerModel(enum.Enum):
    """How contributions from several chargers combine at a node."""

    SUPERPOSITION = "superposition"
    SUMMATION = "summation"
    DISK = "disk"

    @classmethod
    def parse(cls, value) -> "PowerModel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ConfigurationError(f"unknown power model {value!r} (choose from {names})") from None


def single_charger_power(params: RadioParams, d):
    """Rectified power harvested at distance ``d`` from one charger.

    Accepts scalars or arrays. Raises ``ValueError`` for negative distances.
    """
    d = np.asarray(d, dtype=float)
    if np.any(d < 0):
        raise ValueError("distance must be non-negative")
    out = params.rho / (d + params.epsilon_m) ** 2
    return float(out) if out.ndim == 0 else out


def required_power(profile: PowerProfile) -> float:
    """Average power needed to sustain the duty cycle ``alpha``."""
    return profile.alpha * profile.pa_w + (1.0 - profile.alpha) * profile.pq_w


def pattern_radii(params: RadioParams, profile: PowerProfile):
    """Return ``(r1, r3)``: single-charger and three-charger coverage radii.

    ``r1`` is where one charger alone just meets the requirement; ``r3`` is
    where three equidistant chargers meet it under scalar summation.
    """
    req = required_power(profile)
    r1 = math.sqrt(params.rho / req) - params.epsilon_m
    r3 = math.sqrt(3.0 * params.rho / req) - params.epsilon_m
    return r1, r3


def c_radius(params: RadioParams, profile: PowerProfile, delta: float = 0.25) -> float:
    """Distance at which a single charger delivers ``delta * P_req``.

    Chargers farther from a node than this are treated as non-contributive
    when grouping nodes into clusters.
    """
    if not 0.0 < delta <= 1.0:
        raise ConfigurationError(f"delta must lie in (0, 1), got {delta}")
    radicand = params.rho / (delta * required_power(profile))
    if radicand <= params.epsilon_m ** 2:
        raise ConfigurationError("contributive region is degenerate (radius <= 0)")
    return math.sqrt(radicand) - params.epsilon_m


def combine_measured(p1, p2, d1, d2, lambda_m=0.33):
    """Joint power of two sources from their individually measured powers.

    The two powers are treated as phasor magnitudes with phases set by the
    path lengths ``d1`` and ``d2``. Units of ``p1``/``p2`` carry through.
    """
    p1, p2, d1, d2 = (np.asarray(v, dtype=float) for v in (p1, p2, d1, d2))
    if np.any(p1 < 0) or np.any(p2 < 0) or np.any(d1 < 0) or np.any(d2 < 0):
        raise ValueError("powers and distances must be non-negative")
    cross = 2.0 * p1 * p2 * np.cos(2.0 * np.pi * (d1 - d2) / lambda_m)
    out = np.sqrt(np.maximum(p1 * p1 + p2 * p2 + cross, 0.0))
    return float(out) if out.ndim == 0 else out


def _distances(nodes, chargers):
    nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
    chargers = np.asarray(chargers, dtype=float).reshape(-1, 2)
    diff = nodes[:, None, :] - chargers[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def harvested_power(model, params: RadioParams, nodes, chargers, profile: PowerProfile | None = None):
    """Harvested power at each node for a charger set.

    Parameters
    ----------
    model : PowerModel or str
    params : RadioParams
    nodes : array_like, shape (N, 2)
    chargers : array_like, shape (K, 2)
        An empty charger set yields zero power everywhere.
    profile : PowerProfile, optional
        Needed only for ``DISK``, whose radius is ``r1``.

    Returns
    -------
    ndarray, shape (N,)
    """
    model = PowerModel.parse(model)
    nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
    chargers = np.asarray(chargers, dtype=float).reshape(-1, 2)
    if len(chargers) == 0:
        return np.zeros(len(nodes))
    d = _distances(nodes, chargers)
    amplitude = params.rho / (d + params.epsilon_m) ** 2
    if model is PowerModel.SUPERPOSITION:
        phase = params.wavenumber * d
        re = (amplitude * np.cos(phase)).sum(axis=1)
        im = (amplitude * np.sin(phase)).sum(axis=1)
        return np.hypot(re, im)
    if model is PowerModel.SUMMATION:
        return amplitude.sum(axis=1)
    if profile is None:
        raise ConfigurationError("the disk model needs a PowerProfile to size its radius")
    r1, _ = pattern_radii(params, profile)
    nearest = d.min(axis=1)
    return np.where(nearest <= r1, params.rho / (nearest + params.epsilon_m) ** 2, 0.0)


def joint_power(model, params: RadioParams, node, chargers, profile: PowerProfile | None = None) -> float:
    """Harvested power at a single node; see :func:`harvested_power`."""
    return float(harvested_power(model, params, [node], chargers, profile)[0])
