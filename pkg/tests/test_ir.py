import random

import pytest

from graphgen import build_random_app_graph
from pafg.actors import default_library
from pafg.dataflow import AppGraphBuilder
from pafg.errors import DanglingProvenanceError, IrError
from pafg.graph import DirectedGraph
from pafg.ir import (
    ACTV,
    ActorRef,
    Block,
    CoordinatedPafg,
    EdgeRef,
    PSSV,
    Pafg,
    check_abc,
    check_association,
    is_alternating,
    is_interface_block,
    validate_coordinated,
)
from pafg.transform import derive_direct_pafg, passivize


@pytest.fixture(scope="module")
def lib():
    return default_library()


def chain_graph():
    return (
        AppGraphBuilder()
        .actor("A", "src")
        .actor("B", "fork", fanout=1)
        .actor("C", "snk")
        .edge("A.out", "B.in", capacity=100)
        .edge("B.out0", "C.in", capacity=100)
        .build()
    )


def test_direct_pafg_is_alternating(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    assert is_alternating(z)
    assert check_abc(z)


def test_empty_pafg_is_alternating(lib):
    z = derive_direct_pafg(AppGraphBuilder().build(), lib)
    assert is_alternating(z)
    assert check_abc(z)


def test_active_active_edge_breaks_alternation(lib):
    g = chain_graph()
    blocks = {
        "A": Block("A", ActorRef("A"), kind="src"),
        "B": Block("B", ActorRef("B"), kind="fork"),
    }
    pafg = Pafg(DirectedGraph.of(["A", "B"], [("A", "B")]), blocks)
    z = CoordinatedPafg(pafg, {"A": ACTV, "B": ACTV}, g)
    assert not is_alternating(z)
    assert check_abc(z)  # no passive-passive edge either


def test_adjacent_passive_blocks_fail_abc(lib):
    g = chain_graph()
    e1 = EdgeRef("A", "out", "B", "in")
    e2 = EdgeRef("B", "out0", "C", "in")
    blocks = {
        e1.signature(): Block(e1.signature(), e1, capacity=100, token_type="f64"),
        e2.signature(): Block(e2.signature(), e2, capacity=100, token_type="f64"),
    }
    pafg = Pafg(
        DirectedGraph.of(blocks, [(e1.signature(), e2.signature())]), blocks
    )
    z = CoordinatedPafg(pafg, {n: PSSV for n in blocks}, g)
    assert not check_abc(z)
    assert not is_alternating(z)


def test_single_block_pafg_satisfies_abc(lib):
    g = AppGraphBuilder().actor("A", "src").build()
    z = derive_direct_pafg(g, lib)
    assert check_abc(z)


def test_interface_blocks(lib):
    z = derive_direct_pafg(chain_graph(), lib)
    assert is_interface_block(z.pafg, "A")  # no inputs
    assert not is_interface_block(z.pafg, "B")
    g = AppGraphBuilder().actor("A", "src").build()
    z2 = derive_direct_pafg(g, lib)
    assert is_interface_block(z2.pafg, "A")  # isolated


def test_direct_pafg_is_associated(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    assert check_association(g, z.pafg)


def test_association_survives_passivization(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    z2, _ = passivize(z, lib, "B")
    assert check_association(g, z2.pafg)


def test_association_false_for_foreign_edge(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    ref = EdgeRef("X", "out", "Y", "in")
    blocks = dict(z.pafg.blocks)
    blocks["ghost"] = Block("ghost", ref, capacity=4, token_type="f64")
    graph = z.pafg.graph.add_vertex("ghost").add_edge("A", "ghost")
    pafg = Pafg(graph, blocks)
    assert not check_association(g, pafg)


def test_association_rejects_port_mismatch(lib):
    g = chain_graph()
    ref = EdgeRef("A", "bogus", "B", "in")
    blocks = {"p": Block("p", ref, capacity=4, token_type="f64")}
    pafg = Pafg(DirectedGraph.of(["p"]), blocks)
    with pytest.raises(DanglingProvenanceError):
        check_association(g, pafg)


def test_association_requires_injectivity(lib):
    g = chain_graph()
    blocks = {
        "b1": Block("b1", ActorRef("B"), kind="fork"),
        "b2": Block("b2", ActorRef("B"), kind="fork"),
    }
    pafg = Pafg(DirectedGraph.of(["b1", "b2"]), blocks)
    assert not check_association(g, pafg)


def test_coordination_must_be_total(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    partial = dict(z.coordination)
    partial.pop("A")
    with pytest.raises(IrError):
        CoordinatedPafg(z.pafg, partial, g)


def test_validator_rejects_active_simple_block(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    coord = dict(z.coordination)
    simple = next(n for n, b in z.pafg.blocks.items() if b.is_simple)
    coord[simple] = ACTV
    with pytest.raises(IrError):
        validate_coordinated(CoordinatedPafg(z.pafg, coord, g), lib)


def test_validator_rejects_passive_computational_block(lib):
    g = chain_graph()
    z = derive_direct_pafg(g, lib)
    coord = dict(z.coordination)
    coord["C"] = PSSV
    with pytest.raises(IrError):
        validate_coordinated(CoordinatedPafg(z.pafg, coord, g), lib)


def test_validator_rejects_passive_interface_block(lib):
    g = (
        AppGraphBuilder()
        .actor("F", "fork", fanout=1)
        .actor("C", "snk")
        .edge("F.out0", "C.in", capacity=4)
        .build()
    )
    z = derive_direct_pafg(g, lib)
    coord = dict(z.coordination)
    blocks = dict(z.pafg.blocks)
    blocks["F"] = Block("F", ActorRef("F"), kind="fork", capacity=4, token_type="f64")
    coord["F"] = PSSV  # F has no producers; nothing could ever write it
    with pytest.raises(IrError):
        validate_coordinated(CoordinatedPafg(Pafg(z.pafg.graph, blocks), coord, g), lib)


def test_alternating_implies_abc_on_random_graphs(lib):
    rng = random.Random(11)
    for _ in range(60):
        g, _ = build_random_app_graph(rng, max_actors=14)
        z = derive_direct_pafg(g, lib)
        assert is_alternating(z)
        assert check_abc(z)
        assert check_association(g, z.pafg)
        validate_coordinated(z, lib)
