"""Line-oriented text formats.

Graph files:
    actor <name> <kind> [key=value]*
    edge <src>.<port> -> <dst>.<port> capacity=<int> [type=<f64|i64>]

A PAFG file contains the application graph it is associated with plus one
line per block and per block connection:
    block <name> kind=<kind|simple> coord=<actv|pssv>
          from=<actor:<name>|edge:<src.port->dst.port>> [capacity=<int>]
    bedge <a> -> <b>

Blank lines and '#' comments are ignored. Sample files carry one decimal
value per line, written with %.17g so float64 values round-trip exactly.
"""

from .dataflow import AppGraphBuilder, F64, I64, TOKEN_TYPES
from .errors import ParseError, PafgError
from .graph import DirectedGraph
from .ir import ACTV, ActorRef, Block, CoordinatedPafg, EdgeRef, PSSV, Pafg


def _parse_value(text):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_params(tokens, lineno):
    params = {}
    for tok in tokens:
        key, sep, raw = tok.partition("=")
        if not sep or not key:
            raise ParseError(f"expected key=value, got {tok!r}", line=lineno)
        if key in params:
            raise ParseError(f"duplicate key {key!r}", line=lineno)
        params[key] = _parse_value(raw)
    return params


def _split_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_edge_signature(sig, lineno):
    left, sep, right = sig.partition("->")
    if not sep:
        raise ParseError(f"bad edge reference {sig!r}", line=lineno)
    src, s1, src_port = left.rpartition(".")
    snk, s2, snk_port = right.rpartition(".")
    if not (s1 and s2 and src and src_port and snk and snk_port):
        raise ParseError(f"bad edge reference {sig!r}", line=lineno)
    return src, src_port, snk, snk_port


def _scan(text, allowed):
    for lineno, line in _split_lines(text):
        tokens = line.split()
        directive = tokens[0]
        if directive not in allowed:
            raise ParseError(f"unknown directive {directive!r}", line=lineno)
        yield lineno, directive, tokens[1:]


def _build_app_graph(records):
    builder = AppGraphBuilder()
    for lineno, directive, rest in records:
        try:
            if directive == "actor":
                if len(rest) < 2:
                    raise ParseError("actor needs a name and a kind", line=lineno)
                name, kind = rest[0], rest[1]
                builder.actor(name, kind, **_parse_params(rest[2:], lineno))
            else:  # edge
                if len(rest) < 4 or rest[1] != "->":
                    raise ParseError(
                        "edge needs the form: edge <src>.<port> -> <dst>.<port> capacity=<int>",
                        line=lineno,
                    )
                src, _, src_port = rest[0].rpartition(".")
                snk, _, snk_port = rest[2].rpartition(".")
                if not (src and src_port and snk and snk_port):
                    raise ParseError(f"bad endpoint in {' '.join(rest[:3])!r}", line=lineno)
                params = _parse_params(rest[3:], lineno)
                if "capacity" not in params:
                    raise ParseError("edge needs capacity=<int>", line=lineno)
                token_type = params.get("type", F64)
                if token_type not in TOKEN_TYPES:
                    raise ParseError(f"unknown token type {token_type!r}", line=lineno)
                builder.edge(
                    f"{src}.{src_port}",
                    f"{snk}.{snk_port}",
                    capacity=params["capacity"],
                    token_type=token_type,
                )
        except ParseError:
            raise
        except PafgError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    try:
        return builder.build()
    except PafgError as exc:
        raise ParseError(str(exc)) from exc


def parse_graph(text, lib=None):
    records = list(_scan(text, ("actor", "edge")))
    graph = _build_app_graph(records)
    _check_kinds(graph, lib, records)
    return graph


def _check_kinds(graph, lib, records):
    if lib is None:
        return
    lines = {rest[0]: lineno for lineno, d, rest in records if d == "actor"}
    for name, spec in graph.actors.items():
        if not lib.has_kind(spec.kind):
            raise ParseError(f"unknown actor kind {spec.kind!r}", line=lines.get(name))


def serialize_graph(graph):
    lines = []
    for name in sorted(graph.actors):
        spec = graph.actors[name]
        parts = [f"actor {name} {spec.kind}"]
        for key in sorted(spec.params):
            parts.append(f"{key}={_format_value(spec.params[key])}")
        lines.append(" ".join(parts))
    for key in sorted(graph.edges):
        e = graph.edges[key]
        lines.append(
            f"edge {e.src}.{e.src_port} -> {e.snk}.{e.snk_port} "
            f"capacity={e.capacity} type={e.token_type}"
        )
    return "\n".join(lines) + "\n"


def parse_pafg(text, lib=None):
    records = list(_scan(text, ("actor", "edge", "block", "bedge")))
    app_graph = _build_app_graph([r for r in records if r[1] in ("actor", "edge")])
    _check_kinds(app_graph, lib, records)

    blocks = {}
    coordination = {}
    bedges = set()
    for lineno, directive, rest in records:
        if directive == "block":
            _parse_block(rest, lineno, app_graph, blocks, coordination)
        elif directive == "bedge":
            if len(rest) != 3 or rest[1] != "->":
                raise ParseError("bedge needs the form: bedge <a> -> <b>", line=lineno)
            bedges.add((rest[0], rest[2]))
    for lineno, directive, rest in records:
        if directive == "bedge":
            for name in (rest[0], rest[2]):
                if name not in blocks:
                    raise ParseError(f"bedge references unknown block {name!r}", line=lineno)
    try:
        pafg = Pafg(DirectedGraph(frozenset(blocks), frozenset(bedges)), blocks)
        return CoordinatedPafg(pafg, coordination, app_graph)
    except PafgError as exc:
        raise ParseError(str(exc)) from exc


def _parse_block(rest, lineno, app_graph, blocks, coordination):
    if not rest:
        raise ParseError("block needs a name", line=lineno)
    name = rest[0]
    if name in blocks:
        raise ParseError(f"duplicate block {name!r}", line=lineno)
    params = _parse_params(rest[1:], lineno)
    for required in ("kind", "coord", "from"):
        if required not in params:
            raise ParseError(f"block needs {required}=...", line=lineno)
    coord = params["coord"]
    if coord not in (PSSV, ACTV):
        raise ParseError(f"bad coordination {coord!r}", line=lineno)

    origin = str(params["from"])
    tag, sep, target = origin.partition(":")
    if not sep or tag not in ("actor", "edge"):
        raise ParseError(f"bad provenance {origin!r}", line=lineno)
    if tag == "actor":
        if params["kind"] == "simple":
            raise ParseError("actor-provenance block cannot have kind=simple", line=lineno)
        if target not in app_graph.actors:
            raise ParseError(f"provenance references unknown actor {target!r}", line=lineno)
        spec = app_graph.actors[target]
        if spec.kind != params["kind"]:
            raise ParseError(
                f"block kind {params['kind']!r} disagrees with actor kind {spec.kind!r}",
                line=lineno,
            )
        capacity = params.get("capacity")
        token_type = None
        if coord == PSSV:
            if capacity is None:
                raise ParseError("passive block needs capacity=<int>", line=lineno)
            in_edges = app_graph.in_edges_of(target)
            token_type = in_edges[0].token_type if in_edges else F64
        blocks[name] = Block(
            name, ActorRef(target), kind=spec.kind, capacity=capacity, token_type=token_type
        )
    else:
        if params["kind"] != "simple":
            raise ParseError("edge-provenance block must have kind=simple", line=lineno)
        src, src_port, snk, snk_port = _parse_edge_signature(target, lineno)
        edge = app_graph.edges.get((src, snk))
        if edge is None or (edge.src_port, edge.snk_port) != (src_port, snk_port):
            raise ParseError(f"provenance references unknown edge {target!r}", line=lineno)
        capacity = params.get("capacity", edge.capacity)
        if capacity != edge.capacity:
            raise ParseError(
                f"simple block capacity {capacity} disagrees with edge capacity "
                f"{edge.capacity}",
                line=lineno,
            )
        blocks[name] = Block(
            name,
            EdgeRef(src, src_port, snk, snk_port),
            capacity=edge.capacity,
            token_type=edge.token_type,
        )
    coordination[name] = coord


def serialize_pafg(z):
    lines = [serialize_graph(z.source).rstrip("\n")]
    for name in sorted(z.pafg.blocks):
        b = z.pafg.blocks[name]
        if b.is_simple:
            origin = f"edge:{b.provenance.signature()}"
            kind = "simple"
        else:
            origin = f"actor:{b.provenance.name}"
            kind = b.kind
        parts = [f"block {name} kind={kind} coord={z.coord(name)} from={origin}"]
        if b.capacity is not None:
            parts.append(f"capacity={b.capacity}")
        lines.append(" ".join(parts))
    for src, snk in sorted(z.pafg.graph.edges):
        lines.append(f"bedge {src} -> {snk}")
    return "\n".join(lines) + "\n"


def format_sample(value):
    if isinstance(value, int):
        return str(value)
    return f"{value:.17g}"


def write_samples(path, values):
    with open(path, "w", encoding="utf-8") as fh:
        for v in values:
            fh.write(format_sample(v) + "\n")


def read_samples(path, token_type=F64):
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                values.append(int(line) if token_type == I64 else float(line))
            except ValueError:
                raise ParseError(f"bad sample {line!r}", line=lineno) from None
    return values
