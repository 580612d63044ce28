"""Fusion rings: constructors, axioms, dimensions, and the file format."""

import math

import pytest

from fusionhom.exactarith import RF_ONE, RatFunc
from fusionhom.fusion import (FusionRing, InvalidRingFile, NotConnected,
                              beta0, chebyshev_dims, from_group,
                              hochschild_h1_witness, perron_dims, product,
                              relabel, ring_from_text, ring_to_text, tlj_even,
                              tlj_global_index, tlj_ladder, verify_axioms)
from fusionhom.groups import cyclic, dihedral, symmetric


def test_group_ring_axioms():
    for grp in (cyclic(2), cyclic(5), symmetric(3), dihedral(4)):
        ring = from_group(grp)
        assert verify_axioms(ring) == []
        assert ring.global_index() == pytest.approx(len(grp.elements))


def test_tlj_even_axioms_and_labels():
    ring = tlj_even(7)
    assert ring.labels == ("f0", "f2", "f4", "f6")
    assert verify_axioms(ring) == []


@pytest.mark.parametrize("n", [2, 3, 5, 8, 13, 21, 40])
def test_tlj_global_index_closed_form(n):
    ring = tlj_even(n)
    assert ring.global_index() == pytest.approx(tlj_global_index(n), abs=1e-9)


def test_tlj_even_dim_symmetry():
    # the window is symmetric: d(f_k) = d(f_{n-1-k})
    ring = tlj_even(9)
    dims = [ring.dims[lab] for lab in ring.labels]
    assert dims == pytest.approx(dims[::-1])


def test_chebyshev_dims_recurrence():
    exact = chebyshev_dims(6)
    delta = RatFunc.delta()
    for k in range(2, 6):
        assert exact[k] == delta * exact[k - 1] - exact[k - 2]


def test_ladder_is_truncated_with_frontier():
    ring = tlj_ladder(8, delta=2.0)
    assert ring.truncated
    assert ring.frontier == {"f6", "f7"}
    assert verify_axioms(ring) == []
    assert [ring.dims[f"f{k}"] for k in range(8)] == list(range(1, 9))


def test_ladder_exact_dims_match_floats():
    ring = tlj_ladder(30, delta=1.5)
    for lab in ring.labels:
        assert ring.dims_exact[lab].eval_float(1.5) == pytest.approx(
            ring.dims[lab], rel=1e-9)


def test_product_ring_multiplies_index():
    a = from_group(cyclic(2))
    b = tlj_even(5)
    prod = product(a, b)
    assert verify_axioms(prod) == []
    assert prod.global_index() == pytest.approx(
        a.global_index() * b.global_index())


def test_perron_matches_stored_dims():
    ring = tlj_even(7)
    computed = perron_dims(ring)
    for lab in ring.labels:
        assert computed[lab] == pytest.approx(ring.dims[lab], abs=1e-9)
    silver = 1 + math.sqrt(2)
    assert computed["f2"] == pytest.approx(silver, abs=1e-9)


def test_perron_rejects_disconnected():
    labels = ("e", "x")
    N = {("e", "e", "e"): 1, ("e", "x", "x"): 1}
    ring = FusionRing(labels, {"e": "e", "x": "x"}, N)
    with pytest.raises(NotConnected):
        perron_dims(ring)


def test_beta0_exact_group():
    rep = beta0(from_group(symmetric(3)))
    assert rep.beta0_exact == RatFunc.from_fraction(1) / RatFunc.from_int(6)
    assert rep.beta0 == pytest.approx(1 / 6)


def test_verify_axioms_reports_broken_dual():
    ring = from_group(cyclic(3))
    bad_dual = dict(ring.dual)
    g1, g2 = ring.labels[1], ring.labels[2]
    bad_dual[g1] = g1
    broken = FusionRing(ring.labels, bad_dual, ring.N, ring.dims,
                        ring.dims_exact)
    failures = verify_axioms(broken)
    assert failures
    assert any("dual" in f or "Frobenius" in f for f in failures)


def test_hochschild_witness():
    rep = hochschild_h1_witness(6)
    assert rep["functional_vanishes_on_boundaries"]
    assert rep["witness_cycle_value"] == RF_ONE
    assert rep["boundaries_checked"] == 28


def test_ring_round_trip_group():
    ring = relabel(from_group(dihedral(4)))
    text = ring_to_text(ring)
    loaded = ring_from_text(text)
    assert loaded.labels == ring.labels
    assert loaded.N == ring.N
    assert loaded.dual == ring.dual


def test_ring_round_trip_preserves_truncation():
    ring = tlj_ladder(6, delta=2.0)
    loaded = ring_from_text(ring_to_text(ring))
    assert loaded.truncated
    assert loaded.frontier == ring.frontier
    assert loaded.N == ring.N


def test_truncated_ring_file_keeps_dims_unset():
    ring = tlj_ladder(6)
    assert ring.dims is None
    loaded = ring_from_text(ring_to_text(ring))
    assert loaded.dims is None


def test_ring_to_text_rejects_spaced_labels():
    ring = from_group(symmetric(3))
    with pytest.raises(ValueError):
        ring_to_text(ring)


def test_ring_file_rejects_broken_associativity():
    ring = relabel(from_group(cyclic(3)))
    text = ring_to_text(ring)
    # x1 * x1 = x2 in Z/3; retarget the product to x1
    bad = text.replace("x1 x1 x2 1", "x1 x1 x1 1")
    assert bad != text
    with pytest.raises(InvalidRingFile):
        ring_from_text(bad)


def test_ring_file_rejects_junk():
    with pytest.raises((InvalidRingFile, ValueError)):
        ring_from_text("labels: a b\nnonsense\n")
