"""System-level identities: analysis, Parseval, fiber sums, telescoping."""

import math
from fractions import Fraction

import numpy as np
import pytest

from lcaframes.chains import cyclic_chain, euclidean_chain, integer_chain, torus_chain
from lcaframes.charfun import band_chain_cyclic, band_chain_torus, full_band_chain
from lcaframes.exact import cis
from lcaframes.exceptions import (
    DomainParameterError,
    ProperSubsetError,
    UncertifiedLevelError,
    UnsupportedVerificationError,
)
from lcaframes.frame import (
    analysis,
    build_bspline_system,
    build_charfun_system,
    coefficient_energy,
    energy_bounds_check,
    fiber_identity_sides,
    frame_operator,
    parseval_residual,
    system_from_json,
    system_to_json,
    telescoping_residual,
)
from lcaframes.functions import DiscreteFunction, delta, random_test_function
from lcaframes.groups import cyclic_group, dual_group, integer_group

SEED = 0x5EED


def test_analysis_haar_delta():
    system = build_bspline_system(integer_chain(1), 1)
    coeffs = analysis(system, delta(integer_group(), 0))
    assert set(coeffs) == {("phi[0]", 0), ("psi[0][1]", 0)}
    for v in coeffs.values():
        assert abs(abs(v) - 2**-0.5) < 1e-15


def test_analysis_zero_function_empty():
    system = build_bspline_system(integer_chain(1), 1)
    zero = DiscreteFunction(integer_group(), 0, (0j, 0j))
    assert analysis(system, zero) == {}


def test_analysis_shannon_basis_vector():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    e3 = delta(cyclic_group(8), 3)
    coeffs = analysis(system, e3)
    assert sum(abs(v) ** 2 for v in coeffs.values()) == pytest.approx(1.0, abs=1e-14)


def test_parseval_haar_delta():
    system = build_bspline_system(integer_chain(3), 1)
    assert parseval_residual(system, delta(integer_group(), 5)) <= 1e-12


def test_parseval_bspline_seeded():
    system = build_bspline_system(integer_chain(3), 2)
    rng = np.random.default_rng(SEED)
    for _ in range(100):
        f = random_test_function(integer_group(), (0, 20), rng)
        assert parseval_residual(system, f) <= 1e-10


def test_parseval_zero_function_rejected():
    system = build_bspline_system(integer_chain(2), 1)
    with pytest.raises(DomainParameterError):
        parseval_residual(system, DiscreteFunction(integer_group(), 0, (0j,)))


def test_parseval_shannon_all_basis_vectors():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    for x in range(8):
        assert parseval_residual(system, delta(cyclic_group(8), x)) <= 1e-14


def test_frame_operator_shannon_identity():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    S = frame_operator(system)
    assert np.max(np.abs(S - np.eye(8))) <= 1e-12
    assert np.allclose(S, S.conj().T)


def test_frame_operator_proper_identity():
    band = band_chain_cyclic(3, [0, 1, 2, 7])
    system = build_charfun_system(band, "proper", k0=2)
    S = frame_operator(system)
    assert np.max(np.abs(S - np.eye(8))) <= 1e-12


def test_frame_operator_missing_family_far_from_identity():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    pruned = system.__class__(
        system.chain,
        system.family,
        system.k0,
        system.k1,
        system.level_filters,
        system.scalings,
        system.wavelets[:-1],  # drop one wavelet family
        system.band,
    )
    S = frame_operator(pruned)
    assert np.max(np.abs(S - np.eye(8))) > 0.1


def test_frame_operator_needs_finite_group():
    system = build_bspline_system(integer_chain(2), 1)
    with pytest.raises(UnsupportedVerificationError):
        frame_operator(system)


def test_fiber_identity_seeded_triples():
    rng = np.random.default_rng(SEED)
    for M in (3, 4):
        chain = cyclic_chain(M)
        n = chain.group.modulus
        for _ in range(50):
            k = int(rng.integers(0, M + 1))
            F = random_test_function(chain.dual, (0, n - 1), rng)
            Phi = random_test_function(chain.dual, (0, n - 1), rng)
            lhs, rhs = fiber_identity_sides(chain.level(k).lattice, chain.level(k).domain_v, F, Phi)
            assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_fiber_identity_zero_generator():
    chain = cyclic_chain(3)
    zero = DiscreteFunction(chain.dual, 0, (0j,) * 8)
    F = delta(chain.dual, 1)
    lhs, rhs = fiber_identity_sides(chain.level(1).lattice, chain.level(1).domain_v, F, zero)
    assert lhs == 0 and rhs == 0


def test_fiber_identity_single_fiber():
    # F supported on one annihilator fiber: both sides collapse to one term
    chain = cyclic_chain(3)
    lat = chain.level(1).lattice  # {0, 4}, annihilator {0,2,4,6}, V = {0,1}
    vals = [0j] * 8
    vals[1] = 2.0  # gamma = 1 fiber
    F = DiscreteFunction(chain.dual, 0, tuple(vals))
    Phi = DiscreteFunction(chain.dual, 0, tuple([1 + 0j] * 8))
    lhs, rhs = fiber_identity_sides(lat, chain.level(1).domain_v, F, Phi)
    weight = 1 / 8
    fiber_sum = abs(2.0 * 1.0) ** 2
    expected = (2 / 8) * weight * fiber_sum
    assert lhs == pytest.approx(expected, abs=1e-15)
    assert rhs == pytest.approx(expected, abs=1e-15)


def test_telescoping_bspline():
    system = build_bspline_system(integer_chain(3), 2)
    assert telescoping_residual(system, 1, delta(integer_group(), 0)) <= 1e-12
    zero = DiscreteFunction(integer_group(), 0, (0j,))
    assert telescoping_residual(system, 1, zero) == 0.0


def test_telescoping_shannon_seeded():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    rng = np.random.default_rng(SEED)
    f = random_test_function(cyclic_group(8), (0, 7), rng)
    assert telescoping_residual(system, 1, f) <= 1e-14


def test_telescoping_uncertified_level():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    from lcaframes.filters import scale_filter
    from lcaframes.frame import LevelFilters

    lf = system.level_filters[1]
    broken = LevelFilters(lf.k, lf.h, tuple(scale_filter(g, 0.0) for g in lf.gs))
    corrupted = system.__class__(
        system.chain,
        system.family,
        system.k0,
        system.k1,
        (system.level_filters[0], broken, system.level_filters[2]),
        system.scalings,
        system.wavelets,
        system.band,
    )
    with pytest.raises(UncertifiedLevelError):
        telescoping_residual(corrupted, 1, delta(cyclic_group(8), 0))


def test_telescoping_composes_to_full_analysis():
    # summing the level splits from k0 to k1 reproduces the deep-level energy
    system = build_bspline_system(integer_chain(3), 2)
    rng = np.random.default_rng(SEED)
    f = random_test_function(integer_group(), (0, 10), rng)
    from lcaframes.frame import _energy

    deep = _energy(system, system.scaling(system.k1), f, "time")
    total = _energy(system, system.scaling(system.k0), f, "time")
    for w in system.wavelets:
        total += _energy(system, w, f, "time")
    assert abs(deep - total) <= 1e-12
    assert abs(coefficient_energy(system, f) - deep) <= 1e-12


def test_energy_bounds_cyclic_band():
    band = band_chain_cyclic(3, [0, 1, 2, 7])
    system = build_charfun_system(band, "proper", k0=2)
    rng = np.random.default_rng(SEED)
    f = random_test_function(cyclic_group(8), (0, 7), rng)
    assert energy_bounds_check(system, f, 0.0, K=3)
    assert energy_bounds_check(system, f, 1.0, K=3)


def test_energy_bounds_bspline_top_level():
    system = build_bspline_system(integer_chain(3), 2)
    rng = np.random.default_rng(SEED)
    f = random_test_function(integer_group(), (0, 9), rng)
    assert energy_bounds_check(system, f, 0.0, K=3)


def test_parseval_and_operator_verdicts_agree():
    good = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    data = system_to_json(good)
    # corrupt one wavelet filter in the artifact
    for piece in data["filters"][1]["g"][0]["pieces"]:
        piece["value"] = {"re": 0.0, "im": 0.0}
    bad = system_from_json(data)
    rng = np.random.default_rng(SEED)
    for system, expect_pass in ((good, True), (bad, False)):
        op_dev = float(np.max(np.abs(frame_operator(system) - np.eye(8))))
        worst = max(
            parseval_residual(system, random_test_function(cyclic_group(8), (0, 7), rng))
            for _ in range(5)
        )
        assert (op_dev <= 1e-12) == expect_pass
        assert (worst <= 1e-10) == expect_pass


def test_translation_modulation_equivalence_cyclic():
    # the same coefficient energies on both sides of the transform
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    rng = np.random.default_rng(SEED)
    f = random_test_function(cyclic_group(8), (0, 7), rng)
    dual = dual_group(cyclic_group(8))
    fhat = DiscreteFunction(
        dual,
        0,
        tuple(
            sum(f.value_at(x) * cis(Fraction(-x * g, 8)) for x in range(8)) for g in range(8)
        ),
    )
    assert abs(f.norm2() - fhat.norm2()) < 1e-12  # Plancherel under these weights
    e_time = coefficient_energy(system, f, "time")
    e_freq = coefficient_energy(system, fhat, "freq")
    assert abs(e_time - e_freq) < 1e-12


def test_torus_system_parseval_inside_target():
    band = band_chain_torus([2, 3, 2], [0, 1, 3])
    system = build_charfun_system(band, "proper")
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        f = random_test_function(integer_group(), (-3, 3), rng)
        assert parseval_residual(system, f) <= 1e-12
        for k in (0, 1):
            assert telescoping_residual(system, k, f) <= 1e-12


def test_haar_windowed_gram_identity():
    M = 6
    system = build_bspline_system(integer_chain(M), 1)
    n = 2**M
    vectors = []
    for gen in system.system_generators():
        g = gen.time
        step = int(system.chain.level(gen.level).lattice.step[0])
        lam = 0
        while lam + g.stop <= n:
            vec = np.zeros(n, dtype=complex)
            vec[lam + g.start : lam + g.stop] = g.array
            vectors.append(vec)
            lam += step
    basis = np.array(vectors)
    assert basis.shape == (n, n)
    gram = basis.conj() @ basis.T
    assert np.max(np.abs(gram - np.eye(n))) <= 1e-12


def test_shannon_norms_and_gram():
    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    for gen in system.system_generators():
        assert abs(gen.freq.norm2() - 1) <= 1e-12
        assert abs(gen.time.norm2() - 1) <= 1e-12
    vectors = []
    for gen in system.system_generators():
        for lam in system.chain.level(gen.level).lattice.points():
            vectors.append(gen.time.translate(lam).array)
    basis = np.array(vectors)
    assert basis.shape == (8, 8)
    gram = basis.conj() @ basis.T
    assert np.max(np.abs(gram - np.eye(8))) <= 1e-12


def test_proper_mode_refuses_full_band_level():
    band = band_chain_cyclic(3, [0, 1, 2, 7])
    with pytest.raises(ProperSubsetError):
        build_charfun_system(band, "proper", k0=0)  # level 0 band equals the cell


def test_euclidean_system_is_matrix_condition_only():
    ech = euclidean_chain([[2, 2]])
    system = build_bspline_system(ech, 2)
    with pytest.raises(UnsupportedVerificationError):
        analysis(system, delta(integer_group(), 0))


def test_torus_bspline_has_no_finite_side():
    system = build_bspline_system(torus_chain([2, 2]), 2)
    f = DiscreteFunction(integer_group(), 0, (1 + 0j,))
    with pytest.raises(UnsupportedVerificationError):
        analysis(system, f, "freq")


def test_system_json_round_trip_preserves_verification():
    system = build_bspline_system(integer_chain(3), 2)
    back = system_from_json(system_to_json(system))
    f = delta(integer_group(), 3)
    assert abs(parseval_residual(system, f) - parseval_residual(back, f)) < 1e-15
    assert [g.label for g in back.system_generators()] == [
        g.label for g in system.system_generators()
    ]


def test_build_counts():
    system = build_bspline_system(integer_chain(10), 2)
    assert len(system.wavelets) == 2 * 10
    assert len(system.system_generators()) == 1 + 20
    shannon = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    assert len(shannon.system_generators()) == 1 + 3


def test_cyclic_parseval_seeded_deep():
    rng = np.random.default_rng(SEED)
    full = build_charfun_system(full_band_chain(cyclic_chain(6)), "shannon")
    from lcaframes.charfun import band_chain_cyclic as bcc

    proper = build_charfun_system(bcc(6, [0, 1, 2, 3, 4, 5, 63]), "proper", k0=2)
    for system in (full, proper):
        worst = 0.0
        for _ in range(100):
            f = random_test_function(cyclic_group(64), (0, 63), rng)
            worst = max(worst, parseval_residual(system, f))
        assert worst <= 1e-10


def test_generator_json_round_trip():
    from lcaframes.functions import function_from_json, function_to_json

    system = build_bspline_system(integer_chain(2), 2)
    gen = system.wavelets[0]
    data = function_to_json(gen.time)
    assert set(data) == {"support_start", "values"}
    back = function_from_json(integer_group(), data)
    assert back.start == gen.time.start
    assert np.allclose(back.array, gen.time.array)


def test_coefficient_table_json():
    import json as _json

    from lcaframes.frame import coefficients_to_json

    system = build_bspline_system(integer_chain(1), 1)
    table = coefficients_to_json(analysis(system, delta(integer_group(), 0)))
    blob = _json.dumps(table, sort_keys=True)
    assert "phi[0] @ 0" in table
    assert _json.loads(blob) == table


def test_frame_operator_csv_export(tmp_path):
    from lcaframes.frame import write_matrix_csv

    system = build_charfun_system(full_band_chain(cyclic_chain(2)), "shannon")
    path = tmp_path / "operator.csv"
    write_matrix_csv(frame_operator(system), path)
    rows = path.read_text().strip().splitlines()
    assert rows[0] == "row,col,re,im"
    assert len(rows) == 1 + 16


def test_uep_report_serialization():
    from lcaframes.filters import dual_sampling_plan, verify_uep

    system = build_charfun_system(full_band_chain(cyclic_chain(3)), "shannon")
    rep = verify_uep(system.uep_matrix(0), dual_sampling_plan(system.chain, 0))
    data = rep.to_json()
    assert {"residual", "exact", "worst_point", "samples", "sampling"} <= set(data)
    assert data["residual"] == 0.0 and data["exact"] is True


def test_chain_json_schema_fields():
    from lcaframes.chains import chain_to_json

    data = chain_to_json(integer_chain(2))
    assert set(data) == {"group", "kind", "params", "levels"}
    assert data["group"]["variant"] == "integers"
    assert [lvl["k"] for lvl in data["levels"]] == [0, 1, 2]
    assert data["levels"][0]["d"] == 2 and "eta" in data["levels"][0]
