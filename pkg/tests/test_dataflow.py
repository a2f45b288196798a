import pytest

from pafg.actors import (
    ForkActor,
    GainActor,
    SourceActor,
    VarSourceActor,
    WindowAverageActor,
    default_library,
)
from pafg.dataflow import ActorSpec, AppGraphBuilder
from pafg.errors import ModelError, UnknownKindError, UnknownPortError


def test_fork_enable_true_when_fed():
    fork = ForkActor("f", fanout=2)
    assert fork.enable({"in": 1}, {"out0": 1, "out1": 1})


def test_fork_enable_false_without_input():
    fork = ForkActor("f", fanout=2)
    assert not fork.enable({"in": 0}, {"out0": 4, "out1": 4})


def test_gain_enable_false_without_space():
    gain = GainActor("g", k=2.0)
    assert not gain.enable({"in": 5}, {"out": 0})


def test_enable_unknown_port():
    gain = GainActor("g")
    with pytest.raises(UnknownPortError):
        gain.enable({"bogus": 1}, {"out": 1})
    with pytest.raises(UnknownPortError):
        gain.enable({"in": 1}, {})


def test_enable_is_side_effect_free():
    src = SourceActor("s")
    src.bind([1.0, 2.0])
    for _ in range(5):
        assert src.enable({}, {"out": 1})
    assert src.remaining() == 2


def test_fork_invoke_broadcasts():
    fork = ForkActor("f", fanout=2)
    assert fork.invoke({"in": [7.0]}) == {"out0": [7.0], "out1": [7.0]}


def test_gain_invoke():
    gain = GainActor("g", k=2.0)
    assert gain.invoke({"in": [3.0]}) == {"out": [6.0]}


def test_var_source_two_mode_cycle():
    src = VarSourceActor("s")
    src.bind([2, 10.0, 20.0])
    emitted = []
    assert src.mode == "emit-length"
    out = src.invoke({})
    emitted += out["len"] + out["out"]
    assert src.mode == "emit-data"
    for _ in range(2):
        out = src.invoke({})
        emitted += out["len"] + out["out"]
    assert src.mode == "emit-length"
    assert emitted == [2, 10.0, 20.0]
    assert len(emitted) == 1 + 2


def test_avg_windowed_mean():
    avg = WindowAverageActor("a")
    assert avg.mode == "read-length"
    avg.invoke({"len": [3]})
    assert avg.mode == "accumulate"
    avg.invoke({"in": [1.0]})
    avg.invoke({"in": [2.0]})
    assert avg.mode == "finish"
    out = avg.invoke({"in": [6.0]})
    assert out == {"out": [3.0]}
    assert avg.mode == "read-length"


def test_avg_single_sample_window():
    avg = WindowAverageActor("a")
    avg.invoke({"len": [1]})
    assert avg.mode == "finish"
    assert avg.invoke({"in": [5.0]}) == {"out": [5.0]}


def test_avg_rejects_bad_length():
    avg = WindowAverageActor("a")
    with pytest.raises(ModelError):
        avg.invoke({"len": [0]})


def test_rate_conformance_across_modes():
    avg = WindowAverageActor("a")
    consume, produce = avg.rates()
    assert consume == {"len": 1, "in": 0}
    avg.invoke({"len": [2]})
    consume, produce = avg.rates()
    assert consume == {"len": 0, "in": 1} and produce == {"out": 0}
    avg.invoke({"in": [1.0]})
    consume, produce = avg.rates()
    assert produce == {"out": 1}


def test_library_buffer_actors():
    lib = default_library()
    assert lib.is_buffer_actor("fork")
    assert lib.is_buffer_actor("interleave")
    assert lib.is_buffer_actor("gain-fork")
    assert not lib.is_buffer_actor("rms-ratio")
    assert not lib.is_buffer_actor("gain")
    with pytest.raises(UnknownKindError):
        lib.is_buffer_actor("warp")


def test_library_make_active():
    lib = default_library()
    actor = lib.make_active(ActorSpec("f", "fork", {"fanout": 3}))
    assert actor.output_ports == ("out0", "out1", "out2")


def chain_builder():
    return (
        AppGraphBuilder()
        .actor("A", "src")
        .actor("B", "gain", k=2.0)
        .actor("C", "snk")
        .edge("A.out", "B.in", capacity=4)
        .edge("B.out", "C.in", capacity=4)
    )


def test_builder_round_trip():
    g = chain_builder().build()
    assert set(g.actors) == {"A", "B", "C"}
    assert g.edge("A", "B").snk_port == "in"
    assert g.actor("B").param("k") == 2.0


def test_builder_rejects_double_port_binding():
    b = (
        AppGraphBuilder()
        .actor("A", "src")
        .actor("B", "snk")
        .actor("C", "snk")
        .edge("A.out", "B.in", capacity=1)
        .edge("A.out", "C.in", capacity=1)
    )
    with pytest.raises(ModelError):
        b.build()


def test_builder_rejects_bad_capacity():
    b = AppGraphBuilder().actor("A", "src").actor("B", "snk")
    with pytest.raises(ModelError):
        b.edge("A.out", "B.in", capacity=0)


def test_builder_rejects_bad_endpoint():
    b = AppGraphBuilder().actor("A", "src").actor("B", "snk")
    with pytest.raises(ModelError):
        b.edge("A", "B.in", capacity=1)
