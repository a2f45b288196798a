import random

import pytest

from graphgen import build_random_app_graph
from pafg.actors import default_library
from pafg.dataflow import AppGraphBuilder
from pafg.errors import NotACandidateError, UnknownKindError, UnresolvableRateError
from pafg.ir import ACTV, PSSV, check_abc, check_association, is_alternating
from pafg.transform import (
    assert_step_arithmetic,
    compute_bmr,
    derive_direct_pafg,
    estimate_copy_count,
    find_candidates,
    passivize,
    passivize_fixpoint,
)
from topologies import chain_graph, gain_fork_cluster_graph, ten_plus_four_graph


@pytest.fixture(scope="module")
def lib():
    return default_library()


def test_derive_chain(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    assert len(z.pafg.blocks) == 5
    assert len(z.pafg.graph.edges) == 4
    assert is_alternating(z)
    assert z.coord("A") == ACTV
    assert z.coord("A.out->B.in") == PSSV
    simple = z.pafg.block("A.out->B.in")
    assert simple.capacity == 100 and simple.token_type == "f64"


def test_derive_single_actor(lib):
    g = AppGraphBuilder().actor("A", "src").build()
    z = derive_direct_pafg(g, lib)
    assert len(z.pafg.blocks) == 1
    assert not z.pafg.graph.edges
    assert z.coord("A") == ACTV


def test_derive_rejects_unknown_kind(lib):
    g = AppGraphBuilder().actor("A", "warp-core").build()
    with pytest.raises(UnknownKindError):
        derive_direct_pafg(g, lib)


def test_derive_ten_plus_four(lib):
    z = derive_direct_pafg(ten_plus_four_graph(), lib)
    simple = [n for n, b in z.pafg.blocks.items() if b.is_simple]
    buffers = [n for n, b in z.pafg.blocks.items() if not b.is_simple and lib.is_buffer_actor(b.kind)]
    comps = [n for n, b in z.pafg.blocks.items() if not b.is_simple and not lib.is_buffer_actor(b.kind)]
    assert len(comps) == 10
    assert len(buffers) == 4
    assert len(simple) == 15
    assert len(z.pafg.graph.edges) == 30
    assert all(z.coord(n) == PSSV for n in simple)
    assert all(z.coord(n) == ACTV for n in buffers + comps)


def test_candidates_ten_plus_four(lib):
    z = derive_direct_pafg(ten_plus_four_graph(), lib)
    names = [c.block for c in find_candidates(z, lib)]
    assert names == ["J1", "J2", "J3", "J4"]
    # simple blocks are never simply surrounded (their neighbors are actor blocks)
    assert not any(z.pafg.blocks[n].is_simple for n in names)


def test_candidates_chain(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    assert [c.block for c in find_candidates(z, lib)] == ["B"]


def test_no_candidates_without_buffer_actors(lib):
    g = (
        AppGraphBuilder()
        .actor("A", "src")
        .actor("B", "gain")
        .edge("A.out", "B.in", capacity=4)
        .build()
    )
    z = derive_direct_pafg(g, lib)
    assert find_candidates(z, lib) == []


def test_passivize_chain(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    z2, step = passivize(z, lib, "B")
    assert set(z2.pafg.blocks) == {"A", "B", "C"}
    assert z2.pafg.graph.edges == {("A", "B"), ("B", "C")}
    assert z2.coord("B") == PSSV
    assert z2.pafg.block("B").capacity == 100
    assert is_alternating(z2)
    assert check_association(chain_graph(), z2.pafg)
    assert step.block == "B" and len(step.removed) == 2
    assert_step_arithmetic(z, z2, step)


def test_passivize_gain_fork_cluster(lib):
    g = gain_fork_cluster_graph()
    z = derive_direct_pafg(g, lib)
    assert len(z.pafg.blocks) == 7
    z2, step = passivize(z, lib, "F")
    assert len(z2.pafg.blocks) == 4
    assert z2.pafg.graph.edges == {("G", "F"), ("F", "C1"), ("F", "C2")}
    assert z2.coord("F") == PSSV
    assert z2.coord("G") == ACTV
    assert_step_arithmetic(z, z2, step)


def test_passivize_ten_plus_four_sequence(lib):
    g = ten_plus_four_graph()
    z = derive_direct_pafg(g, lib)
    for name in ("J1", "J2", "J3"):
        z2, step = passivize(z, lib, name)
        assert_step_arithmetic(z, z2, step)
        assert is_alternating(z2)
        assert check_abc(z2)
        assert check_association(g, z2.pafg)
        z = z2
    assert [z.coord(f"J{i}") for i in (1, 2, 3)] == [PSSV, PSSV, PSSV]
    assert z.coord("J4") == ACTV
    # the three clusters are disjoint: 9 simple blocks removed, 6 remain
    simple = [n for n, b in z.pafg.blocks.items() if b.is_simple]
    assert len(simple) == 6
    assert len(z.pafg.blocks) == 20
    # J4 lost its candidacy when J3 became its direct passive predecessor
    assert [c.block for c in find_candidates(z, lib)] == []


def test_passivize_rejects_non_candidates(lib):
    z = derive_direct_pafg(ten_plus_four_graph(), lib)
    with pytest.raises(NotACandidateError):
        passivize(z, lib, "H2")  # computational
    with pytest.raises(NotACandidateError):
        passivize(z, lib, "H1.out->J1.in")  # simple block
    z2, _ = passivize(z, lib, "J3")
    with pytest.raises(NotACandidateError):
        passivize(z2, lib, "J4")  # neighbor is now a passive non-simple block
    with pytest.raises(NotACandidateError):
        passivize(z2, lib, "J3")  # already passive


def test_fixpoint_auto_matches_manual_order(lib):
    g = ten_plus_four_graph()
    z = derive_direct_pafg(g, lib)
    z_auto, log = passivize_fixpoint(z, lib)
    assert [s.block for s in log] == ["J1", "J2", "J3"]
    z_manual, _ = passivize_fixpoint(z, lib, blocks=["J1", "J2", "J3"])
    assert z_auto == z_manual


def test_fixpoint_chain(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    z2, log = passivize_fixpoint(z, lib)
    assert [s.block for s in log] == ["B"]
    assert find_candidates(z2, lib) == []


def test_fixpoint_identity_without_buffers(lib):
    g = (
        AppGraphBuilder()
        .actor("A", "src")
        .actor("B", "snk")
        .edge("A.out", "B.in", capacity=4)
        .build()
    )
    z = derive_direct_pafg(g, lib)
    z2, log = passivize_fixpoint(z, lib)
    assert log == []
    assert z2 == z


def test_fixpoint_idempotent(lib):
    z = derive_direct_pafg(ten_plus_four_graph(), lib)
    once, _ = passivize_fixpoint(z, lib)
    twice, log = passivize_fixpoint(once, lib)
    assert log == []
    assert twice == once


def test_bmr_chain(lib):
    z = derive_direct_pafg(chain_graph(capacity=100), lib)
    assert compute_bmr(z).total_bytes == 1600  # 2 x 100 x 8
    z2, _ = passivize(z, lib, "B")
    assert compute_bmr(z2).total_bytes == 800  # single 100-token ring


def test_bmr_fork_cluster_reduction(lib):
    # fanout m = 2 with equal capacities: the cluster sheds m/(m+1) of its BMR
    g = gain_fork_cluster_graph(capacity=32)
    z = derive_direct_pafg(g, lib)
    before = compute_bmr(z).total_bytes
    z2, _ = passivize(z, lib, "F")
    after = compute_bmr(z2).total_bytes
    assert before == 3 * 32 * 8
    assert after == 32 * 8
    assert (before - after) * 3 == before * 2


def test_estimate_copy_count_fork(lib):
    g = gain_fork_cluster_graph()
    z = derive_direct_pafg(g, lib)
    n = 50
    counts = {"G": n, "F": 2 * n, "C1": 0, "C2": 0}
    assert estimate_copy_count(z, counts) == 3 * n
    z2, _ = passivize(z, lib, "F")
    assert estimate_copy_count(z2, counts) == n


def test_estimate_copy_count_chain_identity(lib):
    # a fanout-1 buffer in a plain chain saves exactly its own stores
    z = derive_direct_pafg(chain_graph(), lib)
    counts = {"A": 7, "B": 7, "C": 0}
    assert estimate_copy_count(z, counts) == 14
    z2, _ = passivize(z, lib, "B")
    assert estimate_copy_count(z2, counts) == 7


def test_estimate_copy_count_missing_block(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    with pytest.raises(UnresolvableRateError):
        estimate_copy_count(z, {"B": 5})


def test_random_graph_passivization_properties(lib):
    rng = random.Random(202)
    for _ in range(60):
        g, _ = build_random_app_graph(rng, max_actors=14)
        z = derive_direct_pafg(g, lib)
        for cand in find_candidates(z, lib):
            z2, step = passivize(z, lib, cand.block)
            assert is_alternating(z2)
            assert check_abc(z2)
            assert check_association(g, z2.pafg)
            assert_step_arithmetic(z, z2, step)
            # BMR monotonicity: when every removed buffer is at least the
            # ring capacity split across the removals, BMR strictly drops
            removed_caps = [z.pafg.block(n).capacity for n in step.removed]
            ring_cap = z2.pafg.block(cand.block).capacity
            if all(c >= ring_cap / len(removed_caps) for c in removed_caps):
                assert compute_bmr(z2).total_bytes < compute_bmr(z).total_bytes
        z_fix, _ = passivize_fixpoint(z, lib)
        z_again, log = passivize_fixpoint(z_fix, lib)
        assert log == [] and z_again == z_fix
