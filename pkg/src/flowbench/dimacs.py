"""DIMACS max-flow file format: reader, writer, solution emitters.

Grammar accepted by the parser:

* ``c ...``            comment, ignored
* ``p max <n> <m>``    exactly one problem line
* ``n <id> s|t``       exactly one source and one sink designation
* ``a <u> <v> <cap>``  arc lines, 1-based ids, non-negative capacities

Tokens are separated by any run of blanks/tabs; LF and CRLF both work.
Node ids are 1-based on disk and 0-based in memory. The declared arc count
must match the number of raw ``a`` lines (merging happens afterwards, in
build_network), which catches truncated downloads.
"""

import io
import os
from dataclasses import dataclass

from .errors import DimacsFormatError
from .network import FlowNetwork, FlowState, build_network
from . import verify as _verify


@dataclass
class ProblemInstance:
    name: str
    network: FlowNetwork


def _read_bytes(source):
    if isinstance(source, bytes):
        return source, "<bytes>"
    if isinstance(source, str) and "\n" in source:
        return source.encode("ascii"), "<string>"
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        with open(path, "rb") as fh:
            return fh.read(), os.path.basename(path)
    data = source.read()
    if isinstance(data, str):
        data = data.encode("ascii")
    return data, getattr(source, "name", "<stream>")


def parse_dimacs(source, name=None):
    """Parse a DIMACS max-flow problem from bytes, a path, or a stream."""
    data, detected = _read_bytes(source)
    if name is None:
        name = detected
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise DimacsFormatError(f"non-ASCII byte in input: {exc}") from exc

    n = None
    declared_m = None
    source_id = None
    sink_id = None
    arcs = []

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        tokens = line.split()
        if not tokens:
            continue
        kind = tokens[0]
        if kind == "c":
            continue
        if kind == "p":
            if n is not None:
                raise DimacsFormatError(f"line {lineno}: duplicate problem line")
            if len(tokens) != 4 or tokens[1] != "max":
                raise DimacsFormatError(f"line {lineno}: expected 'p max <n> <m>'")
            n = _int_token(tokens[2], lineno)
            declared_m = _int_token(tokens[3], lineno)
            if n < 1 or declared_m < 0:
                raise DimacsFormatError(f"line {lineno}: invalid problem sizes")
            continue
        if n is None:
            raise DimacsFormatError(f"line {lineno}: '{kind}' line before problem line")
        if kind == "n":
            if len(tokens) != 3 or tokens[2] not in ("s", "t"):
                raise DimacsFormatError(f"line {lineno}: expected 'n <id> s|t'")
            node = _int_token(tokens[1], lineno)
            if not (1 <= node <= n):
                raise DimacsFormatError(f"line {lineno}: node id {node} out of range [1, {n}]")
            if tokens[2] == "s":
                if source_id is not None:
                    raise DimacsFormatError(f"line {lineno}: duplicate source designation")
                source_id = node - 1
            else:
                if sink_id is not None:
                    raise DimacsFormatError(f"line {lineno}: duplicate sink designation")
                sink_id = node - 1
            continue
        if kind == "a":
            if len(tokens) != 4:
                raise DimacsFormatError(f"line {lineno}: expected 'a <u> <v> <cap>'")
            u = _int_token(tokens[1], lineno)
            v = _int_token(tokens[2], lineno)
            c = _int_token(tokens[3], lineno)
            if not (1 <= u <= n) or not (1 <= v <= n):
                raise DimacsFormatError(f"line {lineno}: arc endpoint out of range [1, {n}]")
            if c < 0:
                raise DimacsFormatError(f"line {lineno}: negative capacity {c}")
            arcs.append((u - 1, v - 1, c))
            continue
        raise DimacsFormatError(f"line {lineno}: unknown line type '{kind}'")

    if n is None:
        raise DimacsFormatError("missing problem line 'p max <n> <m>'")
    if source_id is None:
        raise DimacsFormatError("missing source designation 'n <id> s'")
    if sink_id is None:
        raise DimacsFormatError("missing sink designation 'n <id> t'")
    if len(arcs) != declared_m:
        raise DimacsFormatError(
            f"declared arc count {declared_m} != {len(arcs)} arc lines (truncated file?)")
    if source_id == sink_id:
        raise DimacsFormatError("source and sink designate the same node")
    net = build_network(n, source_id, sink_id, arcs)
    return ProblemInstance(name=name, network=net)


def _int_token(token, lineno):
    try:
        return int(token, 10)
    except ValueError:
        raise DimacsFormatError(f"line {lineno}: non-integer token '{token}'") from None


def write_dimacs(instance, out=None):
    """Serialize an instance back to DIMACS bytes (normalized form).

    Each stored direction with positive capacity becomes one ``a`` line, in
    pair creation order; parse(write(x)) is a fixpoint on networks that came
    out of build_network. Returns the bytes when ``out`` is None.
    """
    net = instance.network if isinstance(instance, ProblemInstance) else instance
    chunks = []
    lines = []
    for a, u, v, cf, cr in net.arc_pairs():
        if cf > 0:
            lines.append(f"a {u + 1} {v + 1} {cf}")
        if cr > 0:
            lines.append(f"a {v + 1} {u + 1} {cr}")
    chunks.append(f"p max {net.node_count} {len(lines)}")
    chunks.append(f"n {net.source + 1} s")
    chunks.append(f"n {net.sink + 1} t")
    chunks.extend(lines)
    data = ("\n".join(chunks) + "\n").encode("ascii")
    if out is None:
        return data
    out.write(data)
    return None


def write_cut_solution(cut, out):
    """Emit ``f <value>`` then one ``s <id>`` line per source-side node,
    1-based, ascending. Deterministic bytes for a given cut."""
    buf = io.StringIO()
    buf.write(f"f {cut.cut_value}\n")
    for v in cut.source_nodes():
        buf.write(f"s {v + 1}\n")
    out.write(buf.getvalue().encode("ascii"))


def write_flow_solution(net, flow, out):
    """Emit ``f <value>`` then ``f <u> <v> <flow>`` per stored arc with
    positive flow, in input order. The flow must be feasible."""
    report = _verify.check_feasible_flow(net, flow)
    if not report.feasible:
        raise ValueError(f"flow is not feasible: {report.violation}")
    buf = io.StringIO()
    buf.write(f"f {report.flow_value}\n")
    for j in range(net.pair_count):
        f = int(flow.pair_flow[j])
        a = 2 * j
        if f > 0:
            buf.write(f"f {int(net.tail[a]) + 1} {int(net.head[a]) + 1} {f}\n")
        elif f < 0:
            buf.write(f"f {int(net.head[a]) + 1} {int(net.tail[a]) + 1} {-f}\n")
    out.write(buf.getvalue().encode("ascii"))


def dimacs_bytes_of_cut(cut):
    out = io.BytesIO()
    write_cut_solution(cut, out)
    return out.getvalue()


def dimacs_bytes_of_flow(net, flow):
    out = io.BytesIO()
    write_flow_solution(net, flow, out)
    return out.getvalue()


__all__ = [
    "ProblemInstance", "parse_dimacs", "write_dimacs",
    "write_cut_solution", "write_flow_solution",
    "dimacs_bytes_of_cut", "dimacs_bytes_of_flow", "FlowState",
]
