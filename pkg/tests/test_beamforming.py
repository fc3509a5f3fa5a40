import math
import sys

sys.path.append(".")

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()

from src.beamforming.family import (
    bob_snr,
    build_family,
    build_family_batch,
    combine,
    combine_many,
    eve_los_projectors,
    eve_snr,
    los_leakage,
    mrt_beamformer,
)
from src.channel.fading import complex_gaussian, eve_los_direction, sample_eve_channel, sample_main_channel
from src.channel.steering import alice_steering
from src.utils.errors import DegenerateGeometry, DomainError


def _draw(scenario, seed=3):
    return sample_main_channel(scenario, np.random.default_rng(seed))


def test_projectors_are_complementary_idempotent_and_hermitian():
    g_o = alice_steering(0.7, 5, 0.5)
    pair = eve_los_projectors(g_o)
    assert np.allclose(pair.onto_eve_los @ pair.onto_eve_los, pair.onto_eve_los)
    assert np.allclose(pair.onto_complement @ pair.onto_complement, pair.onto_complement)
    assert np.allclose(pair.onto_eve_los + pair.onto_complement, np.eye(5))
    assert np.allclose(pair.onto_eve_los, pair.onto_eve_los.conj().T)
    assert np.allclose(pair.onto_eve_los @ pair.onto_complement, 0.0)


def test_family_components(reference_scenario):
    h = _draw(reference_scenario)
    g_o = eve_los_direction(reference_scenario)
    family = build_family(h, g_o)
    assert np.linalg.norm(family.w_zf) == pytest.approx(1.0)
    assert np.linalg.norm(family.w_zf_perp) == pytest.approx(1.0)
    assert abs(g_o @ family.w_zf) < 1e-12
    assert h.h @ family.w_zf == pytest.approx(family.a)
    assert h.h @ family.w_zf_perp == pytest.approx(family.b)
    assert family.a ** 2 + family.b ** 2 == pytest.approx(np.linalg.norm(h.h) ** 2)


def test_combine_leakage_and_norm(reference_scenario):
    h = _draw(reference_scenario, seed=8)
    g_o = eve_los_direction(reference_scenario)
    family = build_family(h, g_o)
    for tau in np.linspace(0.0, 1.0, 9):
        w = combine(family, tau)
        assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)
        assert los_leakage(g_o, w) == pytest.approx((1.0 - tau) * 4, abs=1e-10)
    assert los_leakage(g_o, combine(family, 1.0)) < 1e-20


def test_best_tau_reaches_channel_energy(reference_scenario):
    h = _draw(reference_scenario, seed=21)
    family = build_family(h, eve_los_direction(reference_scenario))
    w = combine(family, family.a ** 2 / (family.a ** 2 + family.b ** 2))
    assert abs(h.h @ w) ** 2 == pytest.approx(np.linalg.norm(h.h) ** 2)
    assert bob_snr(h, w, 10.0) == pytest.approx(10.0 * np.linalg.norm(h.h) ** 2)


def test_combine_many_matches_combine(reference_scenario):
    family = build_family(_draw(reference_scenario), eve_los_direction(reference_scenario))
    taus = np.array([0.0, 0.3, 1.0])
    stacked = combine_many(family, taus)
    for row, tau in zip(stacked, taus):
        assert np.allclose(row, combine(family, tau))


def test_tau_outside_unit_interval(reference_scenario):
    family = build_family(_draw(reference_scenario), eve_los_direction(reference_scenario))
    with pytest.raises(DomainError):
        combine(family, 1.5)
    with pytest.raises(DomainError):
        combine(family, -0.1)


def test_channel_parallel_to_eve_los_is_degenerate():
    g_o = alice_steering(0.9, 3, 0.5)
    with pytest.raises(DegenerateGeometry) as info:
        build_family(g_o, g_o)
    assert info.value.component == "zf"


def test_channel_orthogonal_to_eve_los_is_degenerate():
    alpha = 2.0 * math.pi * 0.5 * math.cos(0.9)
    g_o = np.array([1.0, np.exp(1j * alpha)])
    h = np.array([1.0, -np.exp(1j * alpha)])
    with pytest.raises(DegenerateGeometry) as info:
        build_family(h, g_o)
    assert info.value.component == "perp"


def test_batch_matches_scalar_and_flags_degenerate_rows():
    g_o = alice_steering(0.9, 3, 0.5)
    rng = np.random.default_rng(12)
    channels = np.vstack([complex_gaussian(rng, (2, 3)), g_o[None, :]])
    batch = build_family_batch(channels, g_o)
    assert batch.valid.tolist() == [True, True, False]
    for row in range(2):
        family = build_family(channels[row], g_o)
        assert np.allclose(batch.w_zf[row], family.w_zf)
        assert np.allclose(batch.w_zf_perp[row], family.w_zf_perp)
        assert batch.a[row] == pytest.approx(family.a)


def test_mrt_maximizes_bob_gain(reference_scenario):
    h = _draw(reference_scenario, seed=4)
    w = mrt_beamformer(h)
    assert abs(h.h @ w) ** 2 == pytest.approx(np.linalg.norm(h.h) ** 2)


def test_eve_snr_is_mrc_energy(reference_scenario):
    g = sample_eve_channel(reference_scenario, np.random.default_rng(9))
    w = mrt_beamformer(_draw(reference_scenario))
    assert eve_snr(g, w, 2.0) == pytest.approx(2.0 * np.sum(np.abs(g.g @ w) ** 2))
