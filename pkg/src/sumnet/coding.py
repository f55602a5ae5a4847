"""Linear network codes for sum-networks built from 2-(v,k,1) designs.

Two code families are synthesized, chosen by whether the field
characteristic divides k-1:

* characteristic divides k-1: a scalar (1,1) code where each bottleneck
  carries the partial sum of its own neighborhood and every terminal adds
  what it sees;
* characteristic does not divide k-1: a fractional (m,n) code with
  m = v - (v mod k).  Each bottleneck carries its partial sum plus one
  width-(m/k) slice of every block source in its neighborhood, placed by a
  coloring of the incidence matrix so that the k bottlenecks of a block
  jointly expose the whole block source.  Block terminals use those slices
  to cancel the k-fold overcount of their own block.

Codes are materialized as global maps: ``encoders[i]`` sends the stacked
source vector to the n symbols on bottleneck i, and each terminal decoder
maps the concatenation of its in-edge values to the m decoded symbols.
Relay edges carry their input unchanged and are not stored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .designs import (
    Design,
    ParseError,
    color_incidence,
    incidence_matrix,
)
from .field import FieldMatrix, PrimeField, vstack
from .network import (
    EDGE_HEAD_TO_TERMINAL,
    SOURCE_BLOCK,
    SOURCE_POINT,
    TERMINAL_BLOCK,
    Edge,
    NodeId,
    SumNetwork,
    parse_node_label,
)

REGIME_DIVIDES = "char-divides"
REGIME_NOT_DIVIDES = "char-not-divides"


class CharMismatchError(ValueError):
    """The field characteristic does not fit the requested code family."""


class UnsupportedLambdaError(ValueError):
    """Code synthesis requires pair coverage lambda = 1."""


class DegenerateLengthError(ValueError):
    """The fractional construction produced an empty message block."""


@dataclass(frozen=True)
class CodeParams:
    """Message block length m and channel block length n of a code."""

    m: int
    n: int
    regime: str

    @property
    def rate(self) -> tuple[int, int]:
        return (self.m, self.n)


@dataclass(frozen=True)
class SelectorSpec:
    """Which slice of which block source a bottleneck carries.

    ``point`` owns the bottleneck, ``rank`` is the 1-based position of the
    block among the point's blocks in increasing block order, ``block`` is
    the resolved block index, and ``color`` (1-based) picks the slice of the
    block source: coordinates (color-1)*w+1 .. color*w of width w = m/k.
    """

    point: int
    rank: int
    block: int
    color: int


@dataclass(frozen=True)
class TerminalDecoder:
    """A terminal's in-edges in canonical order and its decoding matrix.

    The matrix has m rows and one column per incoming symbol: n columns for
    each head edge, m for each direct edge, in ``in_edges`` order.
    """

    in_edges: tuple[Edge, ...]
    matrix: FieldMatrix


@dataclass(frozen=True)
class NetworkCode:
    design: Design
    field: PrimeField
    params: CodeParams
    encoders: tuple[FieldMatrix, ...]
    decoders: dict[NodeId, TerminalDecoder]


def stacked_width(d: Design, m: int) -> int:
    """Width of the stacked source vector: one m-block per source."""
    return (d.v + d.b) * m


def source_column(d: Design, source: NodeId, m: int) -> int:
    """First column of a source's block in the stacked layout (points
    first, then blocks, each of width m)."""
    if source.kind == SOURCE_POINT:
        return source.index * m
    if source.kind == SOURCE_BLOCK:
        return (d.v + source.index) * m
    raise ValueError(f"{source.label()} is not a source")


def source_projection(d: Design, source: NodeId, m: int, f: PrimeField) -> FieldMatrix:
    """The m x (v+b)m map extracting one source from the stacked vector."""
    proj = np.zeros((m, stacked_width(d, m)), dtype=np.int64)
    lo = source_column(d, source, m)
    proj[:, lo : lo + m] = np.eye(m, dtype=np.int64)
    return FieldMatrix(f, proj)


def sum_map(d: Design, m: int, f: PrimeField) -> FieldMatrix:
    """The map sending stacked sources to their sum: [I I ... I]."""
    return FieldMatrix(f, np.tile(np.eye(m, dtype=np.int64), (1, d.v + d.b)))


def partial_sum_row(d: Design, point: int, m: int, f: PrimeField) -> FieldMatrix:
    """The m x (v+b)m map computing a point's partial sum: the point's own
    source plus every block source whose block contains the point."""
    width = stacked_width(d, m)
    mat = np.zeros((m, width), dtype=np.int64)
    eye = np.eye(m, dtype=np.int64)
    lo = source_column(d, NodeId(SOURCE_POINT, point), m)
    mat[:, lo : lo + m] = eye
    for j in d.blocks_through(point):
        lo = source_column(d, NodeId(SOURCE_BLOCK, j), m)
        mat[:, lo : lo + m] = eye
    return FieldMatrix(f, mat)


def point_selector_specs(a: np.ndarray, ac: np.ndarray, point: int) -> tuple[SelectorSpec, ...]:
    """The r selector specs of a point, rank 1..r in increasing block order."""
    specs = []
    rank = 0
    for j in range(a.shape[1]):
        if a[point, j]:
            rank += 1
            specs.append(SelectorSpec(point=point, rank=rank, block=j, color=int(ac[point, j])))
    return tuple(specs)


def block_selector_specs(a: np.ndarray, ac: np.ndarray, j: int) -> tuple[SelectorSpec, ...]:
    """For each color 1..k, the spec of the bottleneck carrying that slice
    of block j's source.  Stacking the slices in color order reassembles
    the whole block source."""
    specs = []
    for color in range(1, int(a[:, j].sum()) + 1):
        rows = np.nonzero(ac[:, j] == color)[0]
        assert len(rows) == 1
        point = int(rows[0])
        rank = int(a[point, : j + 1].sum())
        specs.append(SelectorSpec(point=point, rank=rank, block=j, color=color))
    return tuple(specs)


def selector_matrix(d: Design, spec: SelectorSpec, m: int, f: PrimeField) -> FieldMatrix:
    """The (m/k) x (v+b)m map extracting the spec's slice of its block source."""
    if m % d.k:
        raise DegenerateLengthError(f"message length {m} not divisible by k={d.k}")
    w = m // d.k
    if not 1 <= spec.color <= d.k:
        raise ValueError(f"color {spec.color} outside 1..{d.k}")
    mat = np.zeros((w, stacked_width(d, m)), dtype=np.int64)
    lo = source_column(d, NodeId(SOURCE_BLOCK, spec.block), m) + (spec.color - 1) * w
    mat[:, lo : lo + w] = np.eye(w, dtype=np.int64)
    return FieldMatrix(f, mat)


def code_params_for(d: Design, f: PrimeField) -> CodeParams:
    """Pick the code family and block lengths for a design and field."""
    if d.lambda_ != 1:
        raise UnsupportedLambdaError(f"code synthesis needs lambda=1, got {d.lambda_}")
    if (d.k - 1) % f.p == 0:
        return CodeParams(m=1, n=1, regime=REGIME_DIVIDES)
    m = d.v - d.v % d.k
    if m == 0:
        raise DegenerateLengthError(f"v={d.v} leaves no full width-{d.k} message block")
    n = m + d.r * (m // d.k)
    return CodeParams(m=m, n=n, regime=REGIME_NOT_DIVIDES)


def _decoders_char_divides(net: SumNetwork, f: PrimeField) -> dict[NodeId, TerminalDecoder]:
    decoders = {}
    for t in net.terminals():
        in_edges = net.terminal_in_edges(t)
        ones = np.ones((1, len(in_edges)), dtype=np.int64)
        decoders[t] = TerminalDecoder(in_edges=in_edges, matrix=FieldMatrix(f, ones))
    return decoders


def build_code_char_divides(net: SumNetwork, f: PrimeField) -> NetworkCode:
    """The scalar (1,1) code, valid when the characteristic divides k-1.

    Each bottleneck carries its point's partial sum; every terminal simply
    adds all of its in-edge symbols.  A block terminal then sees its own
    block source k times, but k = 1 in the field, so the sum comes out
    right.
    """
    d = net.design
    if d.lambda_ != 1:
        raise UnsupportedLambdaError(f"code synthesis needs lambda=1, got {d.lambda_}")
    if (d.k - 1) % f.p != 0:
        raise CharMismatchError(f"characteristic {f.p} does not divide k-1 = {d.k - 1}")
    params = CodeParams(m=1, n=1, regime=REGIME_DIVIDES)
    encoders = tuple(partial_sum_row(d, i, 1, f) for i in range(d.v))
    return NetworkCode(
        design=d,
        field=f,
        params=params,
        encoders=encoders,
        decoders=_decoders_char_divides(net, f),
    )


def _identity_part(m: int, n: int) -> np.ndarray:
    """[I_m | 0] of shape m x n: reads the partial sum off a head edge."""
    part = np.zeros((m, n), dtype=np.int64)
    part[:, :m] = np.eye(m, dtype=np.int64)
    return part


def _slice_reader(m: int, n: int, k: int, color: int, rank: int) -> np.ndarray:
    """The m x n map reading one selector slice off a head edge into the
    slice's home rows.  Row block ``color``, column block ``rank`` of the
    selector region, both 1-based, each of width m/k."""
    w = m // k
    part = np.zeros((m, n), dtype=np.int64)
    rows = slice((color - 1) * w, color * w)
    cols = slice(m + (rank - 1) * w, m + rank * w)
    part[rows, cols] = np.eye(w, dtype=np.int64)
    return part


def block_source_extractor(code: NetworkCode, net: SumNetwork, j: int) -> FieldMatrix:
    """The map reassembling block j's source from terminal t_Bj's in-edges.

    Reads the k selector slices off the k head edges and stacks them in
    color order; composing with the in-edge global maps must reproduce the
    plain projection of the block source.
    """
    d = code.design
    a = incidence_matrix(d)
    ac = color_incidence(a)
    in_edges = net.terminal_in_edges(NodeId(TERMINAL_BLOCK, j))
    return _extractor(d, a, ac, code.params, code.field, in_edges, j)


def _extractor(
    d: Design,
    a: np.ndarray,
    ac: np.ndarray,
    params: CodeParams,
    f: PrimeField,
    in_edges: tuple[Edge, ...],
    j: int,
) -> FieldMatrix:
    m, n = params.m, params.n
    by_point = {spec.point: spec for spec in block_selector_specs(a, ac, j)}
    blocks = []
    for e in in_edges:
        if e.kind == EDGE_HEAD_TO_TERMINAL:
            spec = by_point[e.tail.index]
            blocks.append(_slice_reader(m, n, d.k, spec.color, spec.rank))
        else:
            blocks.append(np.zeros((m, m), dtype=np.int64))
    return FieldMatrix(f, np.hstack(blocks))


def build_code_char_not_divides(net: SumNetwork, f: PrimeField) -> NetworkCode:
    """The fractional (m, n) code for characteristics not dividing k-1.

    Bottleneck i stacks its partial sum over the r selector slices of the
    blocks through point i.  Point terminals read the partial sum off their
    head edge and add their direct edges.  Block terminals additionally
    reassemble their own block source from the selector slices and subtract
    it k-1 times, cancelling the overcount in the sum of partial sums.
    """
    d = net.design
    if d.lambda_ != 1:
        raise UnsupportedLambdaError(f"code synthesis needs lambda=1, got {d.lambda_}")
    if (d.k - 1) % f.p == 0:
        raise CharMismatchError(f"characteristic {f.p} divides k-1 = {d.k - 1}")
    params = code_params_for(d, f)
    m, n = params.m, params.n
    a = incidence_matrix(d)
    ac = color_incidence(a)

    encoders = []
    for i in range(d.v):
        parts = [partial_sum_row(d, i, m, f)]
        parts += [selector_matrix(d, spec, m, f) for spec in point_selector_specs(a, ac, i)]
        encoders.append(vstack(parts))

    read_partial = _identity_part(m, n)
    decoders: dict[NodeId, TerminalDecoder] = {}
    for t in net.terminals():
        in_edges = net.terminal_in_edges(t)
        blocks = []
        for e in in_edges:
            if e.kind == EDGE_HEAD_TO_TERMINAL:
                blocks.append(read_partial)
            else:
                blocks.append(np.eye(m, dtype=np.int64))
        matrix = FieldMatrix(f, np.hstack(blocks))
        if t.kind == TERMINAL_BLOCK:
            correction = _extractor(d, a, ac, params, f, in_edges, t.index)
            matrix = matrix - (d.k - 1) * correction
        decoders[t] = TerminalDecoder(in_edges=in_edges, matrix=matrix)

    return NetworkCode(
        design=d, field=f, params=params, encoders=tuple(encoders), decoders=decoders
    )


def build_code(net: SumNetwork, f: PrimeField) -> NetworkCode:
    """Synthesize the code family matching the field characteristic."""
    if (net.design.k - 1) % f.p == 0:
        return build_code_char_divides(net, f)
    return build_code_char_not_divides(net, f)


def reconstruct_block_source(code: NetworkCode, j: int) -> FieldMatrix:
    """Stack block j's selector slices in color order as a global map.

    For a correctly colored code this equals the plain projection of the
    block source out of the stacked source vector.
    """
    d = code.design
    a = incidence_matrix(d)
    ac = color_incidence(a)
    specs = block_selector_specs(a, ac, j)
    return vstack([selector_matrix(d, spec, code.params.m, code.field) for spec in specs])


def code_to_json(code: NetworkCode) -> str:
    data = {
        "schema": "sumnet.code/1",
        "p": code.field.p,
        "params": {"m": code.params.m, "n": code.params.n, "regime": code.params.regime},
        "design": code.design.to_dict(),
        "encoders": [enc.tolist() for enc in code.encoders],
        "decoders": {
            t.label(): {
                "in_edges": [[e.tail.label(), e.head.label(), e.kind] for e in dec.in_edges],
                "matrix": dec.matrix.tolist(),
            }
            for t, dec in sorted(code.decoders.items(), key=lambda kv: kv[0].sort_key)
        },
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def code_from_json(text: str) -> NetworkCode:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema") != "sumnet.code/1":
        raise ParseError("not a sumnet.code/1 document")
    try:
        f = PrimeField(data["p"])
        d = Design.from_dict(data["design"])
        raw_params = data["params"]
        params = CodeParams(m=raw_params["m"], n=raw_params["n"], regime=raw_params["regime"])
        encoders = tuple(FieldMatrix(f, rows) for rows in data["encoders"])
        decoders = {}
        for label, entry in data["decoders"].items():
            t = parse_node_label(label)
            in_edges = tuple(
                Edge(parse_node_label(tail), parse_node_label(head), kind)
                for tail, head, kind in entry["in_edges"]
            )
            decoders[t] = TerminalDecoder(in_edges=in_edges, matrix=FieldMatrix(f, entry["matrix"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed code document: {exc}") from exc
    return NetworkCode(design=d, field=f, params=params, encoders=encoders, decoders=decoders)
