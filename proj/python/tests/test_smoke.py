import math

import pytest

import locc


def test_bipartite_examples():
    assert locc.canonicalize([1, 3]) == [0.75, 0.25]
    assert locc.source_entanglement([0.4, 0.3, 0.2, 0.1])["entanglement"] == pytest.approx(0.904, abs=5e-4)
    assert locc.accessible_entanglement([0.4, 0.3, 0.2, 0.1])["entanglement"] == pytest.approx(87 / 125, abs=1e-9)
    assert locc.source_volume([0.6, 0.4]) == pytest.approx(math.sqrt(2) * 0.1)
    assert len(locc.accessible_vertices([0.4, 0.3, 0.2, 0.1])) == 8
    assert locc.majorizes([0.7, 0.3], [0.6, 0.4])


def test_domain_errors_carry_codes():
    with pytest.raises(locc.Error) as info:
        locc.canonicalize([0.5, -0.2])
    assert info.value.code == "schmidt.NegativeComponent"
    with pytest.raises(ValueError):
        locc.source_volume([1.0] * 12)


def test_oracle_matches_closed_form():
    est = locc.mc_source_volume([0.5, 0.3, 0.2], samples=200_000, seed=5)
    assert abs(est["estimate"] - locc.source_volume([0.5, 0.3, 0.2])) < 3 * est["std_error"]


def test_fourqubit():
    zero = [[0, 0, 0]] * 4
    assert locc.classify(zero)["structure"] == "Seed"
    src, acc = locc.fourqubit_measures(zero)
    assert acc["entanglement"] == pytest.approx(1.0)
    target = [[0.23, 0.13, 0.15], [0, 0, 0], [0, 0, 0], [0, 0, 0]]
    assert locc.can_convert(zero, target) == (True, "iiia")
    w = locc.povm_witness(zero, target)
    assert len(w["weights"]) == 4
    assert w["completeness_error"] < 1e-12
