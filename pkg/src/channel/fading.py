"""
📡 Wiretap LBB - Rician Fading
==============================

Sampling of the main channel h (1 × N_A) and the eavesdropper channel
G (N_E × N_A) under quasi-static i.i.d. Rician fading. Scattered parts are
CN(0, 1) per entry, drawn as (N(0, ½) + j·N(0, ½)).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.channel.steering import (
    SteeringVector,
    alice_steering,
    eve_array_response,
    los_eve_matrix,
)
from src.model.scenario import Scenario


@dataclass(frozen=True)
class MainChannel:
    h: np.ndarray  # length N_A
    los: SteeringVector  # h_o
    k_bob: float


@dataclass(frozen=True)
class EveChannel:
    g: np.ndarray  # N_E × N_A
    los: np.ndarray  # G_o = r_oᵀ g_o, rank 1
    k_eve: float


def rician_weights(k_factor: float) -> Tuple[float, float]:
    """(LOS weight, scatter weight) = (√(K/(1+K)), √(1/(1+K))); K = ∞ is pure LOS."""
    if math.isinf(k_factor):
        return 1.0, 0.0
    return math.sqrt(k_factor / (1.0 + k_factor)), math.sqrt(1.0 / (1.0 + k_factor))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """i.i.d. CN(0, 1) entries: real part first, then imaginary part."""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / math.sqrt(2.0)


def main_los(scenario: Scenario) -> SteeringVector:
    return alice_steering(scenario.bob_angle, scenario.n_alice, scenario.spacing_alice)


def eve_los_direction(scenario: Scenario) -> SteeringVector:
    """g_o, the array response at Alice toward Eve."""
    return alice_steering(scenario.eve_angle, scenario.n_alice, scenario.spacing_alice)


def eve_los(scenario: Scenario, eve_aoa: Optional[float] = None) -> np.ndarray:
    aoa = scenario.eve_aoa if eve_aoa is None else eve_aoa
    r_o = eve_array_response(aoa, scenario.n_eve, scenario.spacing_eve)
    return los_eve_matrix(r_o, eve_los_direction(scenario))


def sample_main_channel(scenario: Scenario, rng: np.random.Generator) -> MainChannel:
    los = main_los(scenario)
    los_weight, scatter_weight = rician_weights(scenario.k_bob)
    h = los_weight * los + scatter_weight * complex_gaussian(rng, scenario.n_alice)
    return MainChannel(h=h, los=los, k_bob=scenario.k_bob)


def sample_main_channels(scenario: Scenario, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent draws of h stacked as rows, shape (count, N_A)."""
    los = main_los(scenario)
    los_weight, scatter_weight = rician_weights(scenario.k_bob)
    return los_weight * los[None, :] + scatter_weight * complex_gaussian(rng, (count, scenario.n_alice))


def sample_eve_channel(scenario: Scenario, rng: np.random.Generator,
                       eve_aoa: Optional[float] = None) -> EveChannel:
    los = eve_los(scenario, eve_aoa)
    los_weight, scatter_weight = rician_weights(scenario.k_eve)
    g = los_weight * los + scatter_weight * complex_gaussian(rng, los.shape)
    return EveChannel(g=g, los=los, k_eve=scenario.k_eve)


def sample_eve_channels(scenario: Scenario, count: int, rng: np.random.Generator,
                        eve_aoa: Optional[float] = None) -> np.ndarray:
    """``count`` independent draws of G, shape (count, N_E, N_A)."""
    los = eve_los(scenario, eve_aoa)
    los_weight, scatter_weight = rician_weights(scenario.k_eve)
    scatter = complex_gaussian(rng, (count,) + los.shape)
    return los_weight * los[None, :, :] + scatter_weight * scatter
