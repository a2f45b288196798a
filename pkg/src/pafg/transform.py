"""Rewrite engine over coordinated PAFGs.

derive_direct_pafg turns an application graph into its direct PAFG: one
passive simple buffer per edge, one active block per actor, and the two
connecting edges per buffer. passivize flips a simply surrounded active
buffer block to passive form, deleting its adjacent simple buffers and
rewiring their outer neighbors straight onto the block. The analyses
compute buffer memory (BMR) and the token-store count per iteration.
"""

from dataclasses import dataclass, field

from .dataflow import TOKEN_BYTES
from .errors import (
    MissingCapacityError,
    NotACandidateError,
    TransformError,
    UnknownKindError,
    UnresolvableRateError,
)
from .graph import DirectedGraph
from .ir import (
    ACTV,
    ActorRef,
    Block,
    CoordinatedPafg,
    EdgeRef,
    PSSV,
    Pafg,
    block_category,
    is_alternating,
)
from .kernels import capacity_rule


def derive_direct_pafg(app_graph, lib):
    """Direct PAFG of an application graph: every block active except the
    per-edge simple buffers, which inherit their edge's capacity and token
    type. The result is always alternating and associated."""
    blocks = {}
    coordination = {}
    vertices = set()
    pafg_edges = set()
    for name, spec in app_graph.actors.items():
        if not lib.has_kind(spec.kind):
            raise UnknownKindError(f"actor {name!r}: unregistered kind {spec.kind!r}")
        blocks[name] = Block(name, ActorRef(name), kind=spec.kind)
        coordination[name] = ACTV
        vertices.add(name)
    for e in app_graph.edges.values():
        ref = EdgeRef(e.src, e.src_port, e.snk, e.snk_port)
        name = ref.signature()
        blocks[name] = Block(
            name, ref, capacity=e.capacity, token_type=e.token_type
        )
        coordination[name] = PSSV
        vertices.add(name)
        pafg_edges.add((e.src, name))
        pafg_edges.add((name, e.snk))
    pafg = Pafg(DirectedGraph(frozenset(vertices), frozenset(pafg_edges)), blocks)
    return CoordinatedPafg(pafg, coordination, app_graph)


@dataclass(frozen=True)
class PassivizationCandidate:
    """An active non-simple buffer block whose neighbors are all simple
    passive buffers, together with the sets the rewrite manipulates."""

    block: str
    removed: frozenset  # the adjacent simple blocks
    new_producers: frozenset
    new_consumers: frozenset


def _candidate_for(z, lib, name):
    block = z.pafg.block(name)
    if z.coord(name) != ACTV:
        return None, f"block {name!r} is not active"
    if block_category(block, lib) != "buffer":
        return None, f"block {name!r} is not a non-simple buffer block"
    g = z.pafg.graph
    preds = g.pred(name)
    succs = g.succ(name)
    if not preds or not succs:
        return None, f"block {name!r} is an interface block"
    for neighbor in preds | succs:
        if not z.pafg.block(neighbor).is_simple:
            return None, f"neighbor {neighbor!r} of {name!r} is not a simple passive buffer"
    new_producers = frozenset(p for x in preds for p in g.pred(x))
    new_consumers = frozenset(s for x in succs for s in g.succ(x))
    return PassivizationCandidate(name, frozenset(preds | succs), new_producers, new_consumers), None


def find_candidates(z, lib):
    """All simply surrounded active buffer blocks, ordered by name."""
    out = []
    for name in sorted(z.pafg.blocks):
        cand, _ = _candidate_for(z, lib, name)
        if cand is not None:
            out.append(cand)
    return out


@dataclass
class TransformStep:
    block: str
    removed: list
    added_edges: list

    def render(self):
        removed = ",".join(self.removed)
        added = ",".join(f"({a},{b})" for a, b in self.added_edges)
        return f"passivize {self.block} removed={removed} added_edges={added}"


def passivize(z, lib, name):
    """Apply the passivization transformation with respect to one simply
    surrounded active buffer block. Returns (new PAFG, step log entry)."""
    if not is_alternating(z):
        raise TransformError("passivization is defined on alternating PAFGs only")
    cand, reason = _candidate_for(z, lib, name)
    if cand is None:
        raise NotACandidateError(reason)
    g = z.pafg.graph
    removed = cand.removed
    # Every removed simple block must connect only into the cluster's
    # one-producer/one-consumer shape; assert rather than assume.
    for x in removed:
        if len(g.pred(x)) > 1 or len(g.succ(x)) > 1:
            raise TransformError(f"simple block {x!r} has multiple producers or consumers")

    input_caps = []
    for x in sorted(g.pred(name)):
        b = z.pafg.block(x)
        if b.capacity is None:
            raise MissingCapacityError(f"simple block {x!r} has no capacity")
        input_caps.append(b.capacity)
    block = z.pafg.block(name)
    capacity = capacity_rule(block.kind, input_caps)
    token_type = z.source.in_edges_of(block.provenance.name)[0].token_type

    new_edges = set()
    for src, snk in g.edges:
        if src in removed or snk in removed:
            continue
        new_edges.add((src, snk))
    added = sorted(
        {(x, name) for x in cand.new_producers} | {(name, y) for y in cand.new_consumers}
    )
    new_edges.update(added)

    new_blocks = {}
    for bname, b in z.pafg.blocks.items():
        if bname in removed:
            continue
        new_blocks[bname] = b
    new_blocks[name] = Block(
        name, block.provenance, kind=block.kind, capacity=capacity, token_type=token_type
    )
    coordination = {b: c for b, c in z.coordination.items() if b not in removed}
    coordination[name] = PSSV

    pafg = Pafg(
        DirectedGraph(frozenset(new_blocks), frozenset(new_edges)), new_blocks
    )
    result = CoordinatedPafg(pafg, coordination, z.source)
    step = TransformStep(name, sorted(removed), added)
    return result, step


def passivize_fixpoint(z, lib, blocks=None):
    """Repeatedly passivize. With blocks=None the first candidate by name
    is taken each round until none remain; otherwise the named blocks are
    applied in the given order. Returns (PAFG, step log)."""
    log = []
    if blocks is not None:
        for name in blocks:
            z, step = passivize(z, lib, name)
            log.append(step)
        return z, log
    while True:
        candidates = find_candidates(z, lib)
        if not candidates:
            return z, log
        z, step = passivize(z, lib, candidates[0].block)
        log.append(step)


@dataclass
class BmrReport:
    """Bytes of passive buffer storage, per block and in total."""

    per_block: dict = field(default_factory=dict)

    @property
    def total_bytes(self):
        return sum(self.per_block.values())


def compute_bmr(z):
    """Buffer memory requirement: capacity times token width summed over
    every passive block, simple or not."""
    report = BmrReport()
    for name, b in z.pafg.blocks.items():
        if z.coord(name) != PSSV:
            continue
        if b.capacity is None:
            raise MissingCapacityError(f"passive block {name!r} has no capacity")
        report.per_block[name] = b.capacity * TOKEN_BYTES
    return report


def estimate_copy_count(z, produced_per_block):
    """Token-store operations into passive-block memory per iteration.

    produced_per_block gives, for each active block, the total number of
    tokens it writes per iteration (summed across its output ports); a
    passive block stores nothing beyond its producers' writes. Blocks
    without output edges may be omitted."""
    total = 0
    missing = []
    for name in z.pafg.blocks:
        if z.coord(name) != ACTV:
            continue
        if not z.pafg.graph.out_edges(name):
            continue  # nothing downstream to store into
        if name not in produced_per_block:
            missing.append(name)
            continue
        total += produced_per_block[name]
    if missing:
        raise UnresolvableRateError(
            f"no production count for active block(s): {', '.join(sorted(missing))}"
        )
    return total


def assert_step_arithmetic(before, after, step):
    """Block/edge-count bookkeeping for one passivization step:
    |V_b| = |V_a| - |removed| and |E_b| = |E_a| - |E_r| + |added|."""
    va, vb = before.pafg.graph, after.pafg.graph
    removed = set(step.removed)
    e_r = {e for e in va.edges if e[0] in removed or e[1] in removed}
    if len(vb.vertices) != len(va.vertices) - len(removed):
        raise TransformError("vertex count arithmetic violated")
    if len(vb.edges) != len(va.edges) - len(e_r) + len(step.added_edges):
        raise TransformError("edge count arithmetic violated")
    if not is_alternating(after):
        raise TransformError("passivization produced a non-alternating PAFG")
