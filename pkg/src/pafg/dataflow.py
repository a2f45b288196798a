"""Application-graph layer: actors with enable/invoke semantics, typed
FIFO edges, and the actor library that records which kinds also have a
passive (read/write) implementation.

An ApplicationGraph is a pure value: vertices carry ActorSpecs (kind plus
construction parameters), not live actor state. Live actors are created
from the library when a graph is instantiated for execution.
"""

from dataclasses import dataclass, field

from .errors import ModelError, UnknownKindError, UnknownPortError
from .graph import DirectedGraph

F64 = "f64"
I64 = "i64"
TOKEN_TYPES = (F64, I64)
TOKEN_BYTES = 8  # both token types are 8 bytes wide


@dataclass(frozen=True)
class DataflowEdge:
    """A single-producer single-consumer FIFO channel between actor ports."""

    src: str
    src_port: str
    snk: str
    snk_port: str
    capacity: int
    token_type: str = F64

    def __post_init__(self):
        if self.capacity < 1:
            raise ModelError(f"edge {self.key()}: capacity must be >= 1")
        if self.token_type not in TOKEN_TYPES:
            raise ModelError(f"edge {self.key()}: unknown token type {self.token_type!r}")

    def key(self):
        return (self.src, self.snk)

    def signature(self):
        return f"{self.src}.{self.src_port}->{self.snk}.{self.snk_port}"


@dataclass(frozen=True)
class ActorSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)

    def param(self, key, default=None):
        return self.params.get(key, default)


class CfdfActor:
    """Behavioral contract for actors: finite modes with fixed per-port
    rates, a side-effect-free enable test, and an invoke that consumes and
    produces exactly the declared counts before selecting the next mode.

    Subclasses define input_ports/output_ports, rate tables per mode, and
    the token function in invoke().
    """

    kind = None
    input_ports = ()
    output_ports = ()
    is_source = False  # sources additionally expose bind(values)

    def __init__(self, name):
        self.name = name
        self.mode = self.initial_mode()

    def initial_mode(self):
        return "run"

    def rates(self):
        """(consumption, production) per port for the current mode."""
        raise NotImplementedError

    def ready(self):
        """Extra internal fireability condition (e.g. source data left)."""
        return True

    def enable(self, input_populations, output_free_space):
        """True iff the current mode can fire against the reported buffer
        populations and free space. Never mutates state."""
        self._check_ports(input_populations, self.input_ports, "input")
        self._check_ports(output_free_space, self.output_ports, "output")
        consume, produce = self.rates()
        for port, need in consume.items():
            if input_populations[port] < need:
                return False
        for port, need in produce.items():
            if output_free_space[port] < need:
                return False
        return self.ready()

    def _check_ports(self, reported, declared, side):
        for port in reported:
            if port not in declared:
                raise UnknownPortError(f"{self.name}: unknown {side} port {port!r}")
        for port in declared:
            if port not in reported:
                raise UnknownPortError(f"{self.name}: {side} port {port!r} not reported")

    def invoke(self, inputs):
        """Fire once: consume the supplied tokens (exactly the declared
        counts for the current mode), return produced tokens per output
        port, and advance the mode."""
        raise NotImplementedError


@dataclass
class ActorLibraryEntry:
    kind: str
    active_factory: object
    passive_factory: object = None

    @property
    def has_passive_impl(self):
        return self.passive_factory is not None


class ActorLibrary:
    """Registry of actor kinds. A kind is a buffer actor iff it has a
    passive implementation in addition to the mandatory active one."""

    def __init__(self):
        self._entries = {}

    def register(self, kind, active_factory, passive_factory=None):
        if kind in self._entries:
            raise ModelError(f"actor kind {kind!r} already registered")
        self._entries[kind] = ActorLibraryEntry(kind, active_factory, passive_factory)

    def entry(self, kind):
        try:
            return self._entries[kind]
        except KeyError:
            raise UnknownKindError(f"unknown actor kind {kind!r}") from None

    def has_kind(self, kind):
        return kind in self._entries

    def is_buffer_actor(self, kind):
        return self.entry(kind).has_passive_impl

    def make_active(self, spec):
        return self.entry(spec.kind).active_factory(spec)

    def make_passive(self, spec, capacity):
        entry = self.entry(spec.kind)
        if entry.passive_factory is None:
            raise UnknownKindError(f"actor kind {spec.kind!r} has no passive implementation")
        return entry.passive_factory(spec, capacity)


@dataclass(frozen=True)
class ApplicationGraph:
    """Directed graph of actor specs plus per-edge FIFO metadata."""

    graph: DirectedGraph
    actors: dict
    edges: dict

    def __post_init__(self):
        if set(self.actors) != set(self.graph.vertices):
            raise ModelError("actor table does not match vertex set")
        if set(self.edges) != set(self.graph.edges):
            raise ModelError("edge table does not match edge set")
        bound = set()
        for key, e in self.edges.items():
            if key != e.key():
                raise ModelError(f"edge table key {key} does not match edge {e.key()}")
            for endpoint in ((e.src, e.src_port, "out"), (e.snk, e.snk_port, "in")):
                if endpoint in bound:
                    raise ModelError(
                        f"port {endpoint[0]}.{endpoint[1]} bound to more than one edge"
                    )
                bound.add(endpoint)

    def actor(self, name):
        try:
            return self.actors[name]
        except KeyError:
            raise ModelError(f"unknown actor {name!r}") from None

    def edge(self, src, snk):
        try:
            return self.edges[(src, snk)]
        except KeyError:
            raise ModelError(f"unknown edge ({src!r}, {snk!r})") from None

    def out_edges_of(self, name):
        return sorted(
            (self.edges[e] for e in self.graph.out_edges(name)),
            key=lambda e: e.src_port,
        )

    def in_edges_of(self, name):
        return sorted(
            (self.edges[e] for e in self.graph.in_edges(name)),
            key=lambda e: e.snk_port,
        )


class AppGraphBuilder:
    """Single-owner builder for ApplicationGraph values.

    Endpoints are written "actor.port", e.g. builder.edge("A.out", "B.in",
    capacity=16).
    """

    def __init__(self):
        self._graph = DirectedGraph.empty()
        self._actors = {}
        self._edges = {}

    def actor(self, name, kind, **params):
        self._graph = self._graph.add_vertex(name)
        self._actors[name] = ActorSpec(name, kind, dict(params))
        return self

    def edge(self, src_endpoint, snk_endpoint, capacity, token_type=F64):
        src, src_port = _split_endpoint(src_endpoint)
        snk, snk_port = _split_endpoint(snk_endpoint)
        self._graph = self._graph.add_edge(src, snk)
        e = DataflowEdge(src, src_port, snk, snk_port, capacity, token_type)
        self._edges[e.key()] = e
        return self

    def build(self):
        return ApplicationGraph(self._graph, dict(self._actors), dict(self._edges))


def _split_endpoint(endpoint):
    actor, sep, port = endpoint.rpartition(".")
    if not sep or not actor or not port:
        raise ModelError(f"endpoint {endpoint!r} is not of the form actor.port")
    return actor, port
