"""Conjugate beamforming, RIS phase alignment and power allocation.

Every AP precodes with the conjugate of its aggregate channel.  The RIS
phases are chosen to make the reflected UAV paths add constructively with
the direct ones.  Transmit power obeys a per-AP budget p_d, split with a
fraction kappa to the UAV and the rest shared among GUEs proportionally to
the analytic precoder second moments gamma.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .channel import LargeScaleParams, _rician_weights
from .geometry import ConfigError, SimulationError


@dataclass(frozen=True)
class RisConfig:
    """Unit-modulus reflection coefficients v_n = exp(j theta_n)."""

    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex)
        object.__setattr__(self, "v", v)
        if v.size and not np.allclose(np.abs(v), 1.0, atol=1e-9):
            raise ConfigError("v: RIS coefficients must be unit modulus")

    @classmethod
    def none(cls) -> "RisConfig":
        return cls(v=np.zeros(0, dtype=complex))


@dataclass(frozen=True)
class PowerAllocation:
    """Per-AP, per-user transmit powers and power-control coefficients."""

    p_dl: np.ndarray   # (M, K) watts
    eta: np.ndarray    # (M, K) p_dl / gamma


def ris_align_uav(H_ris: np.ndarray, h_ris_uav: np.ndarray,
                  h_uav: np.ndarray) -> RisConfig:
    """Phase the RIS toward the UAV.

    With R = H_ris diag(h_ris_uav), element n gets
    v_n = exp(-j angle([R^T conj(h_uav)]_n)) so reflected paths add
    constructively with the direct AP-UAV paths.  A zero coefficient leaves
    the phase at 0 (it cannot affect the product).
    """
    if H_ris.shape[1] == 0:
        return RisConfig.none()
    v = _kernels.align_phases(np.ascontiguousarray(H_ris, dtype=complex),
                              np.ascontiguousarray(h_ris_uav, dtype=complex),
                              np.ascontiguousarray(h_uav, dtype=complex))
    return RisConfig(v=v)


def cb_precoders(G: np.ndarray) -> np.ndarray:
    """Conjugate (maximum-ratio) precoders: W = conj(G), elementwise."""
    return np.conj(G)


def gamma_analytic(ls: LargeScaleParams, ris: RisConfig) -> np.ndarray:
    """Closed-form second moment gamma[m,k] = E|g_{m,k}|^2 of the precoder.

    gamma = |mu|^2 + sigma^2 where mu stacks the deterministic RIS
    reflection term and the direct LoS term, and sigma^2 the two scatter
    variances.  The RIS->UAV column is pure LoS so its variance term
    vanishes; with unit-modulus coefficients the RIS quadratic form reduces
    to sum_n |H_ris[m,n]|^2.
    """
    los_d, _ = _rician_weights(ls.rician_direct)
    mu = los_d * ls.beta_direct * ls.h_bar_direct
    var = ls.beta_direct ** 2 / (ls.rician_direct + 1.0)

    v = np.asarray(ris.v, dtype=complex)
    if v.size:
        los_ru, _ = _rician_weights(ls.rician_ris_user)
        cascade = ls.H_ris @ (v[:, None] * ls.a_ris_user)   # (M, K)
        mu = mu + (los_ru * ls.beta_ris_user)[None, :] * cascade
        ris_var_w = np.where(np.isinf(ls.rician_ris_user), 0.0,
                             ls.beta_ris_user ** 2
                             / (ls.rician_ris_user + 1.0))
        var = var + ris_var_w[None, :] \
            * np.sum(np.abs(ls.H_ris) ** 2, axis=1)[:, None]
    return np.abs(mu) ** 2 + var


def ppa_allocate(gamma: np.ndarray, kappa: float, p_d: float
                 ) -> PowerAllocation:
    """Proportional power allocation under the per-AP budget.

    The UAV column receives kappa * p_d from every AP; each GUE receives a
    share of (1 - kappa) * p_d proportional to its gamma.  Per-AP totals
    equal p_d exactly.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ConfigError("kappa: must be in [0, 1]")
    gamma = np.asarray(gamma, dtype=float)
    gue_sum = gamma[:, 1:].sum(axis=1)
    if np.any(gue_sum <= 0.0):
        raise SimulationError("degenerate geometry: zero GUE channel "
                              "strength at some AP")
    p_dl = np.empty_like(gamma)
    p_dl[:, 0] = kappa * p_d
    p_dl[:, 1:] = (1.0 - kappa) * p_d * gamma[:, 1:] / gue_sum[:, None]
    with np.errstate(invalid="ignore"):
        eta = np.where(p_dl > 0.0, p_dl / gamma, 0.0)
    return PowerAllocation(p_dl=p_dl, eta=eta)


def uav_received_power(R: np.ndarray, ris: RisConfig, h_uav: np.ndarray,
                       w_uav: np.ndarray) -> float:
    """Received UAV signal power |(R v + h_uav)^T w_uav|^2.

    With the conjugate precoder w = conj(g) this equals ||g||^4.
    """
    g0 = h_uav if R.shape[1] == 0 else h_uav + R @ ris.v
    return float(np.abs(g0 @ w_uav) ** 2)
