"""Folner sets and Kesten norms on weighted fusion graphs."""

import pytest

from fusionhom.amenability import (TruncationInconclusive, WeightedFusionGraph,
                                   boundary_measure, folner_search,
                                   from_fusion_ring, graph_from_text,
                                   graph_to_text, kesten_check,
                                   tlj_kesten_window)
from fusionhom.fusion import from_group, relabel, tlj_ladder
from fusionhom.groups import cyclic, symmetric


def ladder_graph(width, delta):
    return from_fusion_ring(tlj_ladder(width, delta=delta), generators=["f1"])


def test_constructor_validation():
    with pytest.raises(ValueError, match="weight"):
        WeightedFusionGraph(("a",), {"a": -1.0}, ("a",), {"a": ("a",)})
    with pytest.raises(ValueError, match="symmetric"):
        WeightedFusionGraph(("a", "b"), {"a": 1.0, "b": 1.0}, ("a",),
                            {"a": ("b",), "b": ()})


def test_generators_must_be_dual_closed():
    ring = from_group(cyclic(3))
    with pytest.raises(ValueError, match="dual"):
        from_fusion_ring(ring, generators=[1])
    g = from_fusion_ring(ring, generators=[1, 2])
    assert g.generators == (1, 2)


def test_group_graph_is_complete_and_amenable():
    g = from_fusion_ring(from_group(cyclic(3)))
    assert g.ball(1) == set(g.vertices)
    bd, vol = boundary_measure(g, set(g.vertices))
    assert bd == 0 and vol == pytest.approx(3.0)
    rep = folner_search(g, 0.05, 10)
    assert rep.found and rep.ratio == 0.0


def test_ladder_ball_ratio():
    g = ladder_graph(60, 2.0)
    assert g.truncated and g.frontier == frozenset({"f58", "f59"})
    F = {f"f{k}" for k in range(51)}
    bd, vol = boundary_measure(g, F)
    assert bd / vol == pytest.approx(0.11652681983921276, abs=1e-12)


def test_frontier_contact_is_inconclusive():
    g = ladder_graph(60, 2.0)
    F = {f"f{k}" for k in range(59)}
    with pytest.raises(TruncationInconclusive):
        boundary_measure(g, F)
    bd, vol = boundary_measure(g, F, allow_frontier=True)
    assert bd / vol < 0.11


def test_folner_search_on_flat_ladder():
    g = ladder_graph(60, 2.0)
    rep = folner_search(g, 0.2, 55)
    assert rep.found
    assert rep.ratio < 0.2
    assert rep.epsilon == 0.2
    greedy = folner_search(g, 0.2, 55, strategy="greedy")
    assert greedy.found and greedy.ratio == rep.ratio


def test_folner_search_fails_on_expanding_ladder():
    g = ladder_graph(60, 3.0)
    rep = folner_search(g, 0.05, 40)
    assert not rep.found
    assert rep.best_ratio > 0.05
    # the best candidate is still reported for inspection
    assert rep.set and rep.ratio == rep.best_ratio


def test_folner_report_repeatable():
    g = ladder_graph(40, 2.0)
    a = folner_search(g, 0.3, 30)
    b = folner_search(g, 0.3, 30)
    assert (a.found, a.ratio, a.set) == (b.found, b.ratio, b.set)


def test_kesten_window_matches_full_ring():
    slim = kesten_check(tlj_kesten_window(64, 2.0), "f1")
    full = kesten_check(tlj_ladder(64, delta=2.0), "f1")
    assert slim["graph_norm"] == pytest.approx(full["graph_norm"], abs=1e-12)


def test_kesten_norms_increase_with_window():
    norms = [kesten_check(tlj_kesten_window(w, 2.0), "f1")["graph_norm"]
             for w in (8, 16, 32, 64, 128)]
    assert norms == sorted(norms)
    assert norms[0] == pytest.approx(1.8793852415718166, abs=1e-12)


def test_kesten_unstable_window_gives_no_verdict():
    report = kesten_check(tlj_kesten_window(16, 2.0), "f1")
    assert not report["stable"]
    assert report["amenable"] is None


def test_kesten_separates_flat_from_expanding():
    flat = kesten_check(tlj_kesten_window(4096, 2.0), "f1")
    assert flat["stable"] and flat["amenable"] is True
    assert abs(flat["graph_norm"] - flat["dimension"]) < 1e-6
    sharp = kesten_check(tlj_kesten_window(512, 3.0), "f1")
    assert sharp["stable"] and sharp["amenable"] is False
    assert sharp["graph_norm"] < 2.0 < sharp["dimension"]


def test_kesten_on_finite_group_ring():
    report = kesten_check(from_group(cyclic(3)), 1)
    assert report["stable"] and report["amenable"] is True
    assert report["graph_norm"] == pytest.approx(1.0)


def test_graph_text_round_trip():
    g = from_fusion_ring(relabel(from_group(symmetric(3))))
    txt = graph_to_text(g)
    h = graph_from_text(txt)
    assert h.vertices == g.vertices
    assert h.generators == g.generators
    assert h.adjacency == g.adjacency
    assert graph_to_text(h) == txt


def test_graph_text_rejects_multiword_labels():
    g = from_fusion_ring(from_group(symmetric(3)))
    with pytest.raises(ValueError, match="token"):
        graph_to_text(g)


@pytest.mark.parametrize("text", [
    "not-a-graph\n",
    "vertex: a 1.0\ngenerators: a\nedge: a b\n",
    "vertex: a zero\ngenerators: a\n",
    "vertex: a -2\ngenerators: a\nedge: a a\n",
    "vertex: a 1.0\nvertex: a 2.0\ngenerators: a\n",
], ids=["junk", "unknown-edge-end", "nonnumeric-weight", "negative-weight",
        "duplicate-vertex"])
def test_malformed_graph_files_rejected(text):
    with pytest.raises(ValueError):
        graph_from_text(text)
