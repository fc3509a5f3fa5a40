"""
📡 Wiretap LBB - Location-Based Beamformer Family
=================================================

Zero-forcing projector pair built from Eve's LOS direction g_o and the
one-parameter beamformer family

    w(τ) = √τ · w_ZF + √(1−τ) · w_ZF⊥,   τ ∈ [0, 1]

where w_ZF is h's component outside span{g_oᴴ} and w_ZF⊥ its component
inside it, both normalized. G_o = r_oᵀ g_o has rank 1, so the projector onto
its row space reduces to g_oᴴ g_o / ‖g_o‖² and does not depend on r_o.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from src.channel.fading import EveChannel, MainChannel
from src.channel.steering import SteeringVector
from src.utils import config
from src.utils.errors import DegenerateGeometry, DomainError

logger = logging.getLogger(__name__)

ChannelLike = Union[MainChannel, np.ndarray]
EveLike = Union[EveChannel, np.ndarray]


@dataclass(frozen=True)
class ProjectorPair:
    onto_eve_los: np.ndarray  # Ψ_{G_o}
    onto_complement: np.ndarray  # Ψ⊥_{G_o}


@dataclass(frozen=True)
class BeamformerFamily:
    w_zf: np.ndarray
    w_zf_perp: np.ndarray
    a: float  # ‖Ψ⊥ hᴴ‖
    b: float  # ‖Ψ hᴴ‖


@dataclass(frozen=True)
class FamilyBatch:
    """Families for a stack of main-channel draws; rows with ``valid`` False are degenerate."""
    w_zf: np.ndarray  # (R, N_A)
    w_zf_perp: np.ndarray  # (R, N_A)
    a: np.ndarray  # (R,)
    b: np.ndarray  # (R,)
    valid: np.ndarray  # (R,) bool


def _channel_vector(h: ChannelLike) -> np.ndarray:
    return h.h if isinstance(h, MainChannel) else np.asarray(h)


def _eve_matrix(g: EveLike) -> np.ndarray:
    return g.g if isinstance(g, EveChannel) else np.asarray(g)


def eve_los_projectors(g_o: SteeringVector) -> ProjectorPair:
    g_o = np.asarray(g_o)
    energy = float(np.vdot(g_o, g_o).real)
    if energy == 0.0:
        raise DomainError("g_o must be non-zero")
    onto = np.outer(g_o.conj(), g_o) / energy
    return ProjectorPair(onto_eve_los=onto, onto_complement=np.eye(g_o.size) - onto)


def project_onto_eve_los(v: np.ndarray, g_o: SteeringVector) -> np.ndarray:
    """Ψ_{G_o}·v without forming the matrix; v may be a vector or a stack of rows."""
    g_o = np.asarray(g_o)
    coefficients = np.asarray(v) @ g_o  # g_o · v for each row
    return np.multiply.outer(coefficients, g_o.conj()) / float(np.vdot(g_o, g_o).real)


def build_family(h: ChannelLike, g_o: SteeringVector) -> BeamformerFamily:
    h_vec = _channel_vector(h)
    h_conj = h_vec.conj()
    perp_part = project_onto_eve_los(h_conj, g_o)
    zf_part = h_conj - perp_part
    a = float(np.linalg.norm(zf_part))
    b = float(np.linalg.norm(perp_part))
    tolerance = config.DEGENERACY_RELATIVE_TOL * float(np.linalg.norm(h_vec))
    if a <= tolerance:
        raise DegenerateGeometry("zf", a, tolerance)
    if b <= tolerance:
        raise DegenerateGeometry("perp", b, tolerance)
    return BeamformerFamily(w_zf=zf_part / a, w_zf_perp=perp_part / b, a=a, b=b)


def build_family_batch(channels: np.ndarray, g_o: SteeringVector) -> FamilyBatch:
    """Vectorized build_family over rows of ``channels`` (shape (R, N_A))."""
    h_conj = np.asarray(channels).conj()
    perp_part = project_onto_eve_los(h_conj, g_o)
    zf_part = h_conj - perp_part
    a = np.linalg.norm(zf_part, axis=1)
    b = np.linalg.norm(perp_part, axis=1)
    tolerance = config.DEGENERACY_RELATIVE_TOL * np.linalg.norm(channels, axis=1)
    valid = (a > tolerance) & (b > tolerance)
    safe_a = np.where(valid, a, 1.0)
    safe_b = np.where(valid, b, 1.0)
    return FamilyBatch(
        w_zf=np.where(valid[:, None], zf_part / safe_a[:, None], 0.0),
        w_zf_perp=np.where(valid[:, None], perp_part / safe_b[:, None], 0.0),
        a=np.where(valid, a, 0.0),
        b=np.where(valid, b, 0.0),
        valid=valid,
    )


def _check_tau(tau) -> None:
    taus = np.asarray(tau, dtype=float)
    if np.any(~np.isfinite(taus)) or np.any(taus < 0.0) or np.any(taus > 1.0):
        raise DomainError(f"tau must lie in [0, 1], got {tau}")


def combine(family: BeamformerFamily, tau: float) -> np.ndarray:
    _check_tau(tau)
    return np.sqrt(tau) * family.w_zf + np.sqrt(1.0 - tau) * family.w_zf_perp


def combine_many(family: BeamformerFamily, taus: np.ndarray) -> np.ndarray:
    """w(τ) for every τ in ``taus``, shape (len(taus), N_A)."""
    _check_tau(taus)
    taus = np.asarray(taus, dtype=float)
    return np.sqrt(taus)[:, None] * family.w_zf[None, :] + np.sqrt(1.0 - taus)[:, None] * family.w_zf_perp[None, :]


def mrt_beamformer(h: ChannelLike) -> np.ndarray:
    """Maximum ratio transmission hᴴ/‖h‖."""
    h_vec = _channel_vector(h)
    return h_vec.conj() / np.linalg.norm(h_vec)


def bob_snr(h: ChannelLike, w: np.ndarray, mean_snr_bob: float) -> float:
    """γ_B = γ̄_B·|h·w|²."""
    return float(mean_snr_bob * np.abs(np.dot(_channel_vector(h), w)) ** 2)


def eve_snr(g: EveLike, w: np.ndarray, mean_snr_eve: float) -> float:
    """γ_E = γ̄_E·‖G·w‖² (MRC at Eve)."""
    return float(mean_snr_eve * np.linalg.norm(_eve_matrix(g) @ w) ** 2)


def los_leakage(g_o: SteeringVector, w: np.ndarray):
    """|g_o·w|²; ``w`` may be a single vector or a stack of rows."""
    return np.abs(np.asarray(w) @ np.asarray(g_o)) ** 2
