import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import nucoherence as nc
from nucoherence import backend
from nucoherence.kinematics import DEGENERACY_FLOOR, VELOCITY_RTOL
from nucoherence.probability import interference_sum
from oracles import brute_force_averaged_row, pmns_closed_form

P = nc.default_params()
E = 4.5e10
WP = nc.WavePacketConfig()
PW = WP.with_mode("pw")

log_l = st.floats(0, 18.5)
log_v = st.floats(-18, -11)
log_e = st.floats(8, 12)


def test_vacuum_identity_at_zero_baseline():
    for a in range(3):
        for b in range(3):
            assert nc.vacuum_probability(P, WP, a, b, 0.0, E) == pytest.approx(float(a == b), abs=1e-10)


def test_vacuum_averaged_limit_is_fourth_powers():
    u = pmns_closed_form(P.theta12, P.theta13, P.theta23, P.delta_cp)
    want = float(np.sum(np.abs(u[0]) ** 4))
    assert nc.vacuum_probability(P, WP, "e", "e", 1e20, E) == pytest.approx(want, abs=1e-9)
    assert want == pytest.approx(0.5476, abs=1e-3)


@given(log_l, log_v, log_e, st.sampled_from(["pw", "wp"]), st.integers(0, 2), st.booleans())
@settings(max_examples=300, deadline=None)
def test_rows_sum_to_one(ll, lv, le, mode, alpha, anti):
    kind = "antineutrino" if anti else "neutrino"
    wp = WP.with_mode(mode)
    m = nc.probability_matrix(P, wp, 10**ll, 10**le, 10**lv, kind).matrix
    assert np.allclose(m.sum(axis=1), 1.0, atol=1e-10)
    assert np.all(m >= -1e-12) and np.all(m <= 1 + 1e-12)
    vac = sum(nc.vacuum_probability(P, wp, alpha, b, 10**ll, 10**le, kind) for b in range(3))
    assert vac == pytest.approx(1.0, abs=1e-10)


@given(log_l, log_v, log_e)
@settings(max_examples=100, deadline=None)
def test_plane_wave_columns_sum_to_one(ll, lv, le):
    m = nc.probability_matrix(P, PW, 10**ll, 10**le, 10**lv).matrix
    assert np.allclose(m.sum(axis=0), 1.0, atol=1e-10)


@pytest.mark.parametrize("mode", ["pw", "wp"])
def test_matter_at_zero_potential_is_vacuum(mode):
    wp = WP.with_mode(mode)
    for L in np.logspace(13, 18, 100):
        for b in range(3):
            got = nc.matter_probability(P, wp, "e", b, L, E, 0.0)
            assert got == pytest.approx(nc.vacuum_probability(P, wp, "e", b, L, E), abs=1e-9)


def test_plane_wave_is_squared_amplitude():
    for L, v in ((3e11, 1e-14), (7.7e16, 3.2e-16), (1e18, 2.6e-14)):
        amp = nc.amplitudes(P, "mu", L, E, v)
        for b in range(3):
            # phases reach 1e9-1e11 rad here; the two paths round them differently
            assert nc.matter_probability(P, PW, "mu", b, L, E, v) == pytest.approx(abs(amp[b]) ** 2, abs=1e-10)


def test_probability_matrix_matches_single_entries():
    L = nc.vacuum_lengths(P, E, WP.sigma_x)["21"].l_osc / 2
    m = nc.probability_matrix(P, WP, L, E, 0.0, alpha="e")
    assert m.initial is nc.Flavor.E
    assert m.medium == "vacuum"
    for b in range(3):
        assert m["e", b] == pytest.approx(nc.vacuum_probability(P, WP, "e", b, L, E), abs=1e-12)


def test_averaged_rows_are_stochastic_and_match_decohered_limit():
    for v in (0.0, 3e-16, 2.5e-14, 1e-12):
        row = [nc.averaged_probability(P, "e", b, E, v) for b in range(3)]
        assert sum(row) == pytest.approx(1.0, abs=1e-14)
        far = [nc.matter_probability(P, WP, "e", b, 1e22, E, v) for b in range(3)]
        assert far == pytest.approx(row, abs=1e-9)


def test_averaged_vacuum_matches_brute_force():
    assert nc.averaged_probability(P, "e", "e", E, 0.0) == pytest.approx(
        brute_force_averaged_row(P, E, 0.0, 0)[0], abs=1e-12
    )


def test_matter_dominated_electron_survives():
    for L in (1e15, 1e17, 1e18):
        assert nc.matter_probability(P, WP, "e", "e", L, E, 1e-12) > 0.999
        assert nc.matter_probability(P, WP, "e", "mu", L, E, 1e-12) < 1e-3


def test_muon_survival_undamped_at_dv32_zero():
    v = [r[1] for r in nc.find_infinite_coherence_potentials(P, E) if r[0] == "32"][0]
    x = np.logspace(17, 18, 4000)
    rows = nc.probability_rows(P, WP, "mu", x, E, v)
    tail = rows[x > 5e17, 1]
    # still oscillating with a swing of order one at 1e18 m
    assert tail.max() - tail.min() > 0.3


def test_wave_packet_close_to_plane_wave_early():
    L = 1e12
    pw = nc.probability_matrix(P, PW, L, E, 1e-14).matrix
    wp = nc.probability_matrix(P, WP, L, E, 1e-14).matrix
    lengths = nc.matter_lengths(P, E, 1e-14)
    l_coh = min(x.l_coh for x in lengths.values())
    l_osc = min(x.l_osc for x in lengths.values())
    bound = (L / l_coh) ** 2 + 2 * math.pi**2 * (WP.sigma_x / l_osc) ** 2
    assert np.max(np.abs(pw - wp)) <= bound


def test_damping_envelope_shrinks():
    l_osc = nc.vacuum_lengths(P, E, WP.sigma_x)["21"].l_osc
    avg = nc.averaged_probability(P, "e", "e", E, 0.0)
    samples = [abs(nc.vacuum_probability(P, WP, "e", "e", k * l_osc, E) - avg) for k in (1e6, 1e7, 3e7, 1e8)]
    assert all(b <= a + 1e-12 for a, b in zip(samples, samples[1:]))


@pytest.mark.parametrize("bad", [-1.0, math.inf, math.nan])
def test_domain_errors(bad):
    with pytest.raises(nc.DomainError):
        nc.vacuum_probability(P, WP, "e", "e", bad, E)
    with pytest.raises(nc.DomainError):
        nc.matter_probability(P, WP, "e", "e", 1e15, bad, 1e-14)
    with pytest.raises(nc.DomainError):
        nc.matter_probability(P, WP, "e", "e", 1e15, E, bad)
    with pytest.raises(nc.DomainError):
        nc.probability_rows(P, WP, "e", [1e15, bad], E, 1e-14)


def test_wave_packet_config_validation():
    with pytest.raises(nc.DomainError):
        nc.WavePacketConfig(sigma_x=0.0)
    with pytest.raises(nc.DomainError):
        nc.WavePacketConfig(rho=-1.0)
    with pytest.raises(nc.DomainError):
        nc.WavePacketConfig(mode="both")
    assert nc.WavePacketConfig(mode="plane_wave").mode is nc.Mode.PLANE_WAVE


def test_imaginary_residue_is_rejected():
    u = pmns_closed_form(0.6, 0.15, 0.87, 0.0)
    # phases that are not antisymmetric leave an imaginary part behind
    phase = np.array([[0.0, 1.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    with pytest.raises(ArithmeticError):
        interference_sum(u, 0, 1, phase, np.ones((3, 3)))


def test_antineutrino_vacuum_conjugates_phase():
    L = 3e9
    nu = nc.vacuum_probability(P, PW, "e", "mu", L, E)
    anti = nc.vacuum_probability(P, PW, "e", "mu", L, E, "antineutrino")
    flipped = nc.vacuum_probability(P.replace(delta_cp=2 * math.pi - P.delta_cp), PW, "e", "mu", L, E)
    assert anti == pytest.approx(flipped, abs=1e-14)
    assert abs(nu - anti) > 1e-4
    # T-reversal: P(e->mu) of antineutrinos equals P(mu->e) of neutrinos
    assert anti == pytest.approx(nc.vacuum_probability(P, PW, "mu", "e", L, E), abs=1e-14)


@pytest.mark.parametrize("mode", ["pw", "wp"])
@pytest.mark.parametrize("kind", ["neutrino", "antineutrino"])
def test_batch_rows_match_scalar(mode, kind):
    wp = WP.with_mode(mode)
    L = np.logspace(13, 18, 40)
    v = np.repeat([0.0, 3.2e-16, 2.5e-14, 1e-12], 10)
    rows = nc.probability_rows(P, wp, "mu", L, E, v, kind)
    for k in range(L.size):
        ref = nc.probability_matrix(P, wp, L[k], E, v[k], kind).row("mu")
        assert rows[k] == pytest.approx(ref, abs=1e-12)


@pytest.mark.skipif(backend.compiled_probability_rows is None, reason="compiled kernel not built")
@pytest.mark.parametrize("wave_packet", [False, True])
def test_backends_agree(wave_packet):
    rng = np.random.default_rng(7)
    n = 500
    L = 10 ** rng.uniform(10, 18.5, n)
    e = np.repeat(10 ** rng.uniform(9, 12, n // 5), 5)
    v = np.repeat(10 ** rng.uniform(-18, -11, n // 5), 5)
    for sign in (1, -1):
        args = (P, e, v, L, 0, sign, WP.sigma_x, WP.rho, wave_packet, DEGENERACY_FLOOR, VELOCITY_RTOL)
        a = backend.python_probability_rows(*args)
        b = backend.compiled_probability_rows(*args)
        assert np.max(np.abs(a - b)) < 1e-12
