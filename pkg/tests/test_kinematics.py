import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import nucoherence as nc
from nucoherence import kinematics as kin
from nucoherence.errors import DegenerateConfigurationError, RootNotFoundError
from oracles import fd_dl_dE, fd_velocity, vacuum_coh_length_m, vacuum_osc_length_m

P = nc.default_params()
E = 4.5e10


def test_dl_dE_vanishes_without_matter():
    assert nc.dl_dE(P, E, 0.0) == (0.0, 0.0)


@given(st.floats(1e9, 1e12), st.floats(1e-18, 1e-11))
@settings(max_examples=200, deadline=None)
def test_dl_dE_branches_sum_to_twice_potential(energy, v):
    d1, d3 = nc.dl_dE(P, energy, v)
    assert d1 + d3 == pytest.approx(2 * v, rel=1e-12)


@pytest.mark.parametrize("v", [1e-16, 1e-14, 2.6e-14, 1e-12])
def test_dl_dE_matches_finite_difference(v):
    got = nc.dl_dE(P, E, v)
    ref = fd_dl_dE(P, E, v)
    for g, r in zip(got, ref):
        assert g == pytest.approx(r, rel=1e-7, abs=1e-7 * v)


def test_dl_dE_antineutrino_flips_potential():
    v = 1e-14
    d1, d3 = nc.dl_dE(P, E, v, "antineutrino")
    assert d1 + d3 == pytest.approx(-2 * v, rel=1e-12)
    ref = fd_dl_dE(P, E, -v)
    assert d1 == pytest.approx(ref[0], rel=1e-7, abs=1e-7 * v)
    assert d3 == pytest.approx(ref[1], rel=1e-7, abs=1e-7 * v)


def test_velocity_in_vacuum():
    dv = nc.velocity_differences(P, E, 0.0)
    assert dv.dv21 == pytest.approx(-P.dm21_sq / (2 * E**2), rel=1e-12)
    assert dv.dv32 == pytest.approx(-(P.dm31_sq - P.dm21_sq) / (2 * E**2), rel=1e-12)
    assert dv.dv31 == dv.dv21 + dv.dv32
    assert dv["31"] == dv.dv31


@given(st.floats(-17, -12), st.floats(9.5, 11.5), st.sampled_from(["neutrino", "antineutrino"]))
@settings(max_examples=60, deadline=None)
def test_velocity_matches_richardson(log_v, log_e, kind):
    v, energy = 10**log_v, 10**log_e
    got = nc.velocity_differences(P, energy, v, kind)
    sign = 1 if kind == "neutrino" else -1
    ref = fd_velocity(P, energy, sign * v)
    scale = P.dm31_sq / (2 * energy**2)
    assert got.dv21 == pytest.approx(ref[0], rel=1e-6, abs=1e-9 * scale)
    assert got.dv32 == pytest.approx(ref[1], rel=1e-6, abs=1e-9 * scale)


@pytest.mark.parametrize("v", [1e-16, 5e-15, 2.5e-14, 3e-13])
def test_velocity_inverted_ordering(v):
    p = P.replace(dm31_sq=-2.4e-3)
    got = nc.velocity_differences(p, E, v)
    ref = fd_velocity(p, E, v)
    scale = abs(p.dm31_sq) / (2 * E**2)
    assert got.dv21 == pytest.approx(ref[0], rel=1e-6, abs=1e-9 * scale)
    assert got.dv32 == pytest.approx(ref[1], rel=1e-6, abs=1e-9 * scale)


def test_velocity_degenerate_floor_raises_with_term():
    with pytest.raises(DegenerateConfigurationError) as info:
        nc.velocity_differences(P, E, 1e-14, floor=1.0)
    assert "4E*E2m - (l1+l2)" in str(info.value)
    assert info.value.floor == 1.0


def test_three_infinite_coherence_potentials():
    roots = nc.find_infinite_coherence_potentials(P, E)
    assert [r[0] for r in roots] == ["21", "21", "32"]
    for (_, got), want in zip(roots, (2.242e-15, 1.099e-14, 2.824e-14)):
        assert got == pytest.approx(want, rel=5e-3)


def test_roots_substitute_back():
    scale = P.dm31_sq / (2 * E**2)
    for pair, v in nc.find_infinite_coherence_potentials(P, E):
        assert abs(nc.velocity_differences(P, E, v)[pair]) <= 1e-12 * scale
    v1, v2 = nc.find_resonance_potentials(P, E)
    assert abs(nc.theta12_matter(P, E, v1) - math.pi / 4) <= 1e-12
    assert abs(nc.theta13_matter(P, E, v2) - math.pi / 4) <= 1e-12


def test_resonances_scale_inversely_with_energy():
    v1, v2 = nc.find_resonance_potentials(P, E)
    w1, w2 = nc.find_resonance_potentials(P, 2 * E)
    assert w1 == pytest.approx(v1 / 2, rel=1e-3)
    assert w2 == pytest.approx(v2 / 2, rel=1e-3)


def test_resonance_missing_from_bracket():
    with pytest.raises(RootNotFoundError):
        nc.find_resonance_potentials(P, E, bracket=(1e-13, 1e-11))


def test_vacuum_lengths_match_closed_forms():
    lengths = nc.vacuum_lengths(P, E, 0.5e-9)
    assert lengths["21"].l_osc == pytest.approx(1.51e9, rel=1e-2)
    assert lengths["21"].l_coh == pytest.approx(7.75e16, rel=1e-3)
    for pair, dm2 in (("21", P.dm21_sq), ("31", P.dm31_sq), ("32", P.dm31_sq - P.dm21_sq)):
        assert lengths[pair].l_osc == pytest.approx(vacuum_osc_length_m(E, dm2), rel=1e-12)
        assert lengths[pair].l_coh == pytest.approx(vacuum_coh_length_m(E, dm2, 0.5e-9), rel=1e-12)


def test_matter_lengths_reduce_to_vacuum():
    vac = nc.vacuum_lengths(P, E, 0.5e-9)
    mat = nc.matter_lengths(P, E, 0.0, sigma_x=0.5e-9)
    for pair in kin.PAIRS:
        assert mat[pair].l_osc == pytest.approx(vac[pair].l_osc, rel=1e-10)
        assert mat[pair].l_coh == pytest.approx(vac[pair].l_coh, rel=1e-10)


def test_matter_lengths_infinite_at_velocity_zeros():
    for pair, v in nc.find_infinite_coherence_potentials(P, E):
        lengths = nc.matter_lengths(P, E, v)
        assert lengths[pair].l_coh == math.inf
        assert 0 < lengths[pair].l_osc < math.inf


def test_matter_lengths_accept_wave_packet_config():
    wp = nc.WavePacketConfig(sigma_x=1e-9)
    a = nc.matter_lengths(P, E, 1e-14, sigma_x=wp)
    b = nc.matter_lengths(P, E, 1e-14, sigma_x=1e-9)
    assert a == b


def test_matter_lengths_reject_bad_width():
    with pytest.raises(nc.DomainError):
        nc.matter_lengths(P, E, 1e-14, sigma_x=0.0)


def test_bisect_full_resolution():
    root = kin.bisect(lambda x: x * x - 2.0, 1.0, 2.0)
    assert root == pytest.approx(math.sqrt(2.0), rel=4e-16)


def test_log_bisect_across_decades():
    root = kin.log_bisect(lambda x: math.log(x / 3.7e-15), 1e-18, 1e-11)
    assert root == pytest.approx(3.7e-15, rel=1e-14)


def test_bisect_returns_exact_endpoint_root():
    assert kin.bisect(lambda x: x - 1.0, 1.0, 2.0) == 1.0


def test_bisect_without_sign_change():
    with pytest.raises(RootNotFoundError):
        kin.bisect(lambda x: x * x + 1.0, -1.0, 1.0)


def test_energy_must_be_positive():
    with pytest.raises(nc.DomainError):
        nc.velocity_differences(P, 0.0, 1e-14)
    with pytest.raises(nc.DomainError):
        nc.dl_dE(P, -1.0, 1e-14)


def test_splittings_are_consistent():
    s = kin.splittings(P, E, 1e-14)
    assert s["31"] == pytest.approx(s["21"] + s["32"], rel=1e-14)
    assert np.all(np.array(list(s.values())) > 0)
