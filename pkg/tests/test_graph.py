import math
import random

import pytest

from jobrank.errors import UnknownSkill
from jobrank.graph import DEFAULT_HOP_WEIGHTS, KnowledgeGraph, SkillPath, build_graph, location_key
from jobrank.models import CandidateProfile, Channel, Location
from tests.conftest import make_posting


def chain_graph():
    """Skills a-b-c-d in a RELATED_TO chain, three jobs hanging off them."""
    postings = [
        make_posting("j1", required_skills=frozenset({"a"})),
        make_posting("j2", required_skills=frozenset({"c"})),
        make_posting("j3", required_skills=frozenset({"b", "d"})),
    ]
    return build_graph(postings, relations=[("a", "b"), ("b", "c"), ("c", "d")])


def reference_scores(graph, expanded):
    """Independent scoring: sum hop weights over each job's edge set."""
    scores = {}
    for job_id, edges in graph.requires.items():
        total = 0.0
        for skill in edges:
            if skill in expanded:
                total += graph.hop_weights.get(expanded[skill], 0.0)
        if total > 0.0:
            scores[job_id] = total
    return scores


class TestExpansion:
    def test_bfs_distances_hand_case(self):
        g = chain_graph()
        assert g.expand_skills({"a"}, depth=2) == {"a": 0, "b": 1, "c": 2}

    def test_depth_zero_keeps_seeds_only(self):
        g = chain_graph()
        assert g.expand_skills({"a", "c"}, depth=0) == {"a": 0, "c": 0}

    def test_multiple_seeds_take_minimal_distance(self):
        g = chain_graph()
        got = g.expand_skills({"a", "d"}, depth=2)
        assert got == {"a": 0, "d": 0, "b": 1, "c": 1}

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            chain_graph().expand_skills({"a"}, depth=-1)

    def test_unknown_seed_is_isolated(self):
        g = chain_graph()
        assert g.expand_skills({"zzz"}, depth=2) == {"zzz": 0}


class TestGraphSearch:
    def test_hand_scores(self):
        g = chain_graph()
        expanded = g.expand_skills({"a"}, depth=2)
        result = g.search(expanded, k=10)
        assert result.channel is Channel.GRAPH
        assert result.job_ids() == ["j1", "j3", "j2"]
        scores = dict(result.entries)
        assert scores["j1"] == pytest.approx(1.0)
        assert scores["j3"] == pytest.approx(0.5)
        assert scores["j2"] == pytest.approx(0.25)

    def test_matches_reference_scoring(self):
        g = chain_graph()
        for seeds in ({"a"}, {"b"}, {"a", "d"}, {"c"}):
            expanded = g.expand_skills(seeds, depth=2)
            expected = reference_scores(g, expanded)
            got = dict(g.search(expanded, k=10).entries)
            assert got == pytest.approx(expected)

    def test_preferred_skills_count(self):
        postings = [make_posting("j1", required_skills=frozenset({"x"}),
                                 preferred_skills=frozenset({"y"}))]
        g = build_graph(postings, relations=[("x", "y")])
        result = g.search({"y": 0}, k=5)
        assert dict(result.entries) == {"j1": pytest.approx(1.0)}

    def test_skills_beyond_depth_do_not_score(self):
        g = chain_graph()
        expanded = g.expand_skills({"a"}, depth=1)
        got = dict(g.search(expanded, k=10).entries)
        # j2 requires only c, which is 2 hops out
        assert "j2" not in got

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            chain_graph().search({"a": 0}, k=0)


class TestRelatedness:
    def test_values(self):
        g = chain_graph()
        assert g.relatedness("a", "a") == 0
        assert g.relatedness("a", "b") == 1
        assert g.relatedness("a", "c") == 2
        assert g.relatedness("a", "d") == math.inf
        assert g.relatedness("a", "zzz") == math.inf

    def test_symmetric(self):
        g = chain_graph()
        assert g.relatedness("c", "a") == g.relatedness("a", "c")


class TestBestPath:
    def test_direct_membership_is_zero_hops(self):
        g = chain_graph()
        path = g.best_path({"a", "b"}, "a")
        assert path == SkillPath(("a",))
        assert path.hop_count == 0

    def test_one_hop(self):
        g = chain_graph()
        path = g.best_path({"a"}, "b")
        assert path.nodes == ("a", "b")
        assert path.source == "a"
        assert path.target == "b"

    def test_two_hops(self):
        path = chain_graph().best_path({"a"}, "c")
        assert path.nodes == ("a", "b", "c")

    def test_beyond_max_hops_is_none(self):
        assert chain_graph().best_path({"a"}, "d") is None

    def test_unknown_target_is_none(self):
        assert chain_graph().best_path({"a"}, "zzz") is None

    def test_tie_broken_lexicographically(self):
        postings = [make_posting("j1", required_skills=frozenset({"s", "t", "m1", "m2"}))]
        g = build_graph(postings, relations=[("s", "m1"), ("m1", "t"), ("s", "m2"), ("m2", "t")])
        path = g.best_path({"s"}, "t")
        assert path.nodes == ("s", "m1", "t")


class TestNeighborhood:
    def test_radius_one_hand_case(self):
        g = chain_graph()
        sub = g.neighborhood("a", radius=1)
        ids = [(n["id"], n["type"], n["distance"]) for n in sub["nodes"]]
        assert ids == [("a", "skill", 0), ("b", "skill", 1), ("j1", "job", 1), ("j3", "job", 2)]
        relations = {(e["source"], e["target"], e["relation"]) for e in sub["edges"]}
        assert ("a", "b", "RELATED_TO") in relations
        assert ("j1", "a", "REQUIRES_SKILL") in relations
        assert ("j3", "b", "REQUIRES_SKILL") in relations

    def test_budget_truncates_nearest_first(self):
        g = chain_graph()
        sub = g.neighborhood("a", radius=2, budget=2)
        assert [n["id"] for n in sub["nodes"]] == ["a", "b"]
        # edges are induced on the surviving nodes only
        for e in sub["edges"]:
            assert {e["source"], e["target"]} <= {"a", "b"}

    def test_preferred_flag_on_edges(self):
        postings = [make_posting("j1", required_skills=frozenset({"x"}),
                                 preferred_skills=frozenset({"y"}))]
        g = build_graph(postings, relations=[("x", "y")])
        sub = g.neighborhood("x", radius=1)
        flags = {(e["source"], e["target"]): e.get("preferred")
                 for e in sub["edges"] if e["relation"] == "REQUIRES_SKILL"}
        assert flags == {("j1", "x"): False, ("j1", "y"): True}

    def test_unknown_skill_raises(self):
        with pytest.raises(UnknownSkill):
            chain_graph().neighborhood("zzz", radius=1)

    def test_bad_radius_raises(self):
        with pytest.raises(ValueError):
            chain_graph().neighborhood("a", radius=3)


class TestConstruction:
    def test_dangling_relations_recorded(self):
        g = build_graph([make_posting("j1", required_skills=frozenset({"a"}))],
                        relations=[("a", "ghost"), ("phantom", "a")])
        assert g.related == {}
        assert len(g.dangling) == 2
        assert g.dangling[0].missing == ("ghost",)

    def test_self_loops_rejected(self):
        g = build_graph([make_posting("j1", required_skills=frozenset({"a"}))],
                        relations=[("a", "a")])
        assert g.related == {}
        assert g.dangling == []

    def test_profile_nodes(self):
        g = KnowledgeGraph()
        g.add_profile(CandidateProfile(
            profile_id="p1",
            skills=frozenset({"python"}),
            preferred_locations=(Location(city="Austin", state="TX"),),
        ))
        assert "p1" in g.candidates
        assert g.has_skill["p1"] == {"python"}
        assert "austin, tx" in g.locations

    def test_stats(self):
        g = chain_graph()
        stats = g.stats()
        assert stats.nodes_by_type["skill"] == 4
        assert stats.nodes_by_type["job"] == 3
        assert stats.edges_by_relation["REQUIRES_SKILL"] == 4
        assert stats.edges_by_relation["RELATED_TO"] == 3
        assert stats.dangling_edges == 0

    def test_insertion_order_invariance(self):
        postings = [
            make_posting("j1", required_skills=frozenset({"a"})),
            make_posting("j2", required_skills=frozenset({"c"})),
            make_posting("j3", required_skills=frozenset({"b", "d"})),
        ]
        relations = [("a", "b"), ("b", "c"), ("c", "d")]
        rng = random.Random(17)
        baseline = build_graph(postings, relations=relations).to_dict()
        for _ in range(5):
            ps = postings[:]
            rs = relations[:]
            rng.shuffle(ps)
            rs = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in rs]
            rng.shuffle(rs)
            assert build_graph(ps, relations=rs).to_dict() == baseline


class TestLocationKey:
    def test_forms(self):
        assert location_key(Location(city="Austin", state="TX")) == "austin, tx"
        assert location_key(Location(city="Austin")) == "austin"
        assert location_key(Location(state="TX")) == "tx"
        assert location_key(Location()) == ""


class TestGraphSerialization:
    def test_round_trip(self):
        g = chain_graph()
        restored = KnowledgeGraph.from_dict(g.to_dict())
        assert restored.to_dict() == g.to_dict()
        expanded = restored.expand_skills({"a"}, 2)
        assert expanded == g.expand_skills({"a"}, 2)
        assert restored.search(expanded, k=10).entries == g.search(expanded, k=10).entries

    def test_hop_weights_preserved(self):
        g = build_graph([make_posting("j1", required_skills=frozenset({"a"}))],
                        hop_weights={0: 1.0, 1: 0.9})
        restored = KnowledgeGraph.from_dict(g.to_dict())
        assert restored.hop_weights == {0: 1.0, 1: 0.9}

    def test_default_hop_weights(self):
        assert KnowledgeGraph().hop_weights == DEFAULT_HOP_WEIGHTS
