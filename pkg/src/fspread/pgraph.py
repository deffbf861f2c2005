"""Finite Poincare graphs P_q(gamma), scheme relations on Omega, and spectra.

Adjacency rows are kept bit-packed (``numpy.packbits`` along each row, big
endian within a byte), which is also the on-disk cache layout.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    IndexOutOfRange,
    MathPreconditionError,
    NonUnitClass,
    SchemeViolation,
)
from .ffield import FieldElement, FieldSpec, primitive_element
from .projective import SQUARE, OmegaSet
from .trig import gram_codes, proj_quadrance

__all__ = [
    "SpreadGraph",
    "SpectrumReport",
    "SchemeReport",
    "square_gammas",
    "pair_square_codes",
    "build_poincare",
    "build_relation",
    "relation_count",
    "relation_value",
    "relation_gamma",
    "spectrum",
    "is_regular",
    "edge_count",
    "verify_scheme",
]

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class SpreadGraph:
    omega: OmegaSet
    gamma: FieldElement
    kind: str  # "poincare" or "relation"
    rows: np.ndarray = dc_field(repr=False)  # (n, ceil(n/8)) uint8, packed
    index: int | None = None  # relation index for kind == "relation"

    @property
    def n(self) -> int:
        return self.omega.n

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense boolean adjacency matrix."""
        return np.unpackbits(self.rows, axis=1, count=self.n).astype(bool)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bitwise_count(self.rows).sum(axis=1, dtype=np.int64)

    @property
    def degree(self) -> int | None:
        return is_regular(self)

    @property
    def edges(self) -> int:
        return edge_count(self)

    def neighbours(self, a: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[a])

    def same_edges(self, other: "SpreadGraph") -> bool:
        return self.n == other.n and np.array_equal(self.rows, other.rows)

    # cache file: one JSON header line, then one lowercase hex line per row
    def to_text(self) -> str:
        header = {
            "format_version": FORMAT_VERSION,
            "omega": self.omega.digest,
            "gamma": _elem_json(self.gamma),
            "kind": self.kind,
            "index": self.index,
            "n": self.n,
            "degree": self.degree,
        }
        lines = [json.dumps(header, sort_keys=True)]
        lines.extend(row.tobytes().hex() for row in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, omega: OmegaSet) -> "SpreadGraph":
        lines = text.splitlines()
        header = json.loads(lines[0])
        if header.get("format_version") != FORMAT_VERSION:
            raise ValueError("unknown graph cache format")
        if header["omega"] != omega.digest or header["n"] != omega.n:
            raise ValueError("graph cache belongs to a different Omega")
        width = (omega.n + 7) // 8
        body = lines[1:]
        if len(body) != omega.n:
            raise ValueError("graph cache truncated")
        rows = np.empty((omega.n, width), dtype=np.uint8)
        for i, line in enumerate(body):
            raw = bytes.fromhex(line)
            if len(raw) != width:
                raise ValueError(f"graph cache row {i} has wrong width")
            rows[i] = np.frombuffer(raw, dtype=np.uint8)
        g = cls(omega, _elem_from_json(omega.field, header["gamma"]), header["kind"], rows,
                header["index"])
        if g.degree != header["degree"]:
            raise ValueError("graph cache degree does not match its rows")
        return g


def _elem_json(a: FieldElement):
    return a.code if a.field.k == 1 else a.coeffs


def _elem_from_json(field: FieldSpec, value) -> FieldElement:
    return field(value)


def _pack(adj: np.ndarray) -> np.ndarray:
    return np.packbits(adj, axis=1)


def square_gammas(field: FieldSpec) -> list[FieldElement]:
    """All gamma in F_q with 1 - gamma a square (0 included)."""
    return [g for g in field.elements() if field.square_table[(1 - g).code]]


@lru_cache(maxsize=2)
def pair_square_codes(omega: OmegaSet) -> np.ndarray:
    """Codes of (U.V)^2 over all pairs of fixed-norm representatives."""
    reps = omega.unit_reps
    dots = gram_codes(reps, reps, omega.form)
    return omega.field.mul_table[dots, dots]


def build_poincare(omega: OmegaSet, gamma, method: str = "fast") -> SpreadGraph:
    """P_q(gamma): Omega with an edge wherever the projective quadrance is gamma.

    ``method="fast"`` compares (U.V)^2 with (1-gamma) sigma^2 on fixed-norm
    representatives; ``method="definition"`` evaluates the projective
    quadrance pair by pair.  Both give the same edge set.
    """
    field = omega.field
    gamma = field(gamma)
    n = omega.n
    if method == "fast":
        target = ((1 - gamma) * omega.sigma * omega.sigma).code
        adj = pair_square_codes(omega) == target
        np.fill_diagonal(adj, False)
    elif method == "definition":
        adj = np.zeros((n, n), dtype=bool)
        pts = omega.points
        for a in range(n):
            for b in range(a + 1, n):
                if proj_quadrance(pts[a], pts[b], omega.form) == gamma:
                    adj[a, b] = adj[b, a] = True
    else:
        raise MathPreconditionError(f"unknown method {method!r}")
    return SpreadGraph(omega, gamma, "poincare", _pack(adj))


def relation_count(q: int) -> int:
    return (q + 1) // 2


def relation_value(field: FieldSpec, i: int) -> FieldElement:
    """The value of (U.V)^2 that defines relation R_i, for unit-norm U, V."""
    top = relation_count(field.q)
    if not 1 <= i <= top:
        raise IndexOutOfRange(f"relation index {i} outside 1..{top}")
    if i == top:
        return field.zero
    nu = primitive_element(field)
    return nu ** (2 - 2 * i)


def relation_gamma(field: FieldSpec, i: int) -> FieldElement:
    """The spread gamma with P_q(gamma) = R_i."""
    return 1 - relation_value(field, i)


def build_relation(omega: OmegaSet, i: int) -> SpreadGraph:
    """Relation R_i of the scheme on the unit-norm square class.

    (U+V).(U+V) = 2 + 2 U.V depends on the sign of the representatives, so
    membership is decided on (U.V)^2: 1 for R_1, nu^(2-2i) for the middle
    relations and 0 (perpendicular) for the last one.  The diagonal is never
    included.
    """
    if omega.norm_class != SQUARE or omega.sigma != 1:
        raise NonUnitClass("scheme relations need the square class with U.U = 1")
    t = relation_value(omega.field, i)
    adj = pair_square_codes(omega) == t.code
    np.fill_diagonal(adj, False)
    return SpreadGraph(omega, 1 - t, "relation", _pack(adj), index=i)


def is_regular(g: SpreadGraph) -> int | None:
    """Common vertex degree, or None when degrees differ."""
    d = g.degrees
    if d.size == 0:
        return 0
    return int(d[0]) if np.all(d == d[0]) else None


def edge_count(g: SpreadGraph) -> int:
    return int(g.degrees.sum()) // 2


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    valency: float | None
    second: float
    ratio_to_sqrt_q: float
    tolerance: float
    q: int
    n: int
    regular: bool

    @property
    def largest(self) -> float:
        return float(self.eigenvalues[-1]) if len(self.eigenvalues) else 0.0

    def to_json(self, with_eigenvalues: bool = True) -> dict:
        out = {
            "valency": self.valency,
            "second": self.second,
            "ratio": self.ratio_to_sqrt_q,
            "tolerance": self.tolerance,
            "regular": self.regular,
            "q": self.q,
            "n": self.n,
        }
        if with_eigenvalues:
            out["eigenvalues"] = [float(x) for x in self.eigenvalues]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SpectrumReport":
        return cls(
            eigenvalues=np.asarray(data["eigenvalues"], dtype=float),
            valency=data["valency"],
            second=data["second"],
            ratio_to_sqrt_q=data["ratio"],
            tolerance=data["tolerance"],
            q=data["q"],
            n=data["n"],
            regular=data["regular"],
        )


def spectrum(g: SpreadGraph) -> SpectrumReport:
    """Full spectrum of the adjacency matrix via a dense symmetric eigensolver.

    ``second`` is the largest absolute eigenvalue once one copy of the top
    eigenvalue (the valency, for a regular graph) has been removed.
    """
    n = g.n
    if n < 1:
        raise MathPreconditionError("spectrum of an empty vertex set")
    eig = np.linalg.eigvalsh(g.adjacency.astype(np.float64))
    tol = 1e-8 * n
    degree = is_regular(g)
    if degree is None:
        log.warning("graph %s(%r) is not regular", g.kind, g.gamma)
    rest = eig[:-1]
    second = float(np.max(np.abs(rest))) if rest.size else 0.0
    return SpectrumReport(
        eigenvalues=eig,
        valency=None if degree is None else float(degree),
        second=second,
        ratio_to_sqrt_q=second / math.sqrt(g.omega.q),
        tolerance=tol,
        q=g.omega.q,
        n=n,
        regular=degree is not None,
    )


@dataclass
class SchemeReport:
    q: int
    n: int
    relation_count: int
    valencies: list[int]
    gammas: list
    symmetric: bool
    disjoint: bool
    covers: bool
    pairs_checked: int = 0
    intersection_numbers: np.ndarray | None = dc_field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.symmetric and self.disjoint and self.covers

    def to_json(self) -> dict:
        out = {
            "q": self.q,
            "n": self.n,
            "relation_count": self.relation_count,
            "valencies": self.valencies,
            "gammas": self.gammas,
            "symmetric": self.symmetric,
            "disjoint": self.disjoint,
            "covers": self.covers,
            "intersection_pairs_checked": self.pairs_checked,
        }
        if self.intersection_numbers is not None:
            out["intersection_numbers"] = self.intersection_numbers.tolist()
        return out


def _first_pair(mask: np.ndarray) -> tuple[int, int]:
    a, b = np.argwhere(mask)[0]
    return int(a), int(b)


def verify_scheme(
    omega: OmegaSet,
    intersection_samples: int = 0,
    full: bool = False,
    seed: int = 0,
) -> SchemeReport:
    """Check that R_1..R_{(q+1)/2} form a symmetric association scheme on Omega.

    Symmetry, disjointness and covering are always checked exhaustively.
    Constancy of the intersection numbers p^k_ij is spot-checked on
    ``intersection_samples`` random pairs per relation, or on every pair with
    ``full=True`` (cubic in n).  The first violation raises SchemeViolation.
    """
    field = omega.field
    n = omega.n
    d = relation_count(field.q)
    graphs = [build_relation(omega, i) for i in range(1, d + 1)]

    cls = np.zeros((n, n), dtype=np.int16)
    hits = np.zeros((n, n), dtype=np.int16)
    for i, g in enumerate(graphs, start=1):
        adj = g.adjacency
        if not np.array_equal(adj, adj.T):
            a, b = _first_pair(adj != adj.T)
            raise SchemeViolation(f"R_{i} is not symmetric at pair ({a}, {b})")
        hits += adj
        cls[adj] = i
    if np.any(hits > 1):
        a, b = _first_pair(hits > 1)
        raise SchemeViolation(f"pair ({a}, {b}) lies in more than one relation")
    off = ~np.eye(n, dtype=bool)
    if np.any((hits == 0) & off):
        a, b = _first_pair((hits == 0) & off)
        raise SchemeViolation(f"pair ({a}, {b}) lies in no relation")

    valencies = []
    for i, g in enumerate(graphs, start=1):
        deg = is_regular(g)
        if deg is None:
            raise SchemeViolation(f"R_{i} is not regular")
        valencies.append(deg)

    report = SchemeReport(
        q=field.q,
        n=n,
        relation_count=d,
        valencies=valencies,
        gammas=[_elem_json(g.gamma) for g in graphs],
        symmetric=True,
        disjoint=True,
        covers=True,
    )
    if full or intersection_samples:
        report.intersection_numbers, report.pairs_checked = _intersection_numbers(
            cls, d, intersection_samples, full, seed
        )
    return report


def _intersection_numbers(cls, d, samples, full, seed):
    """p^k_ij for the class matrix ``cls`` (0 = diagonal), checked for constancy."""
    rng = np.random.default_rng(seed)
    table = np.zeros((d + 1, d + 1, d + 1), dtype=np.int64)
    checked = 0
    for k in range(d + 1):
        pairs = np.argwhere(cls == k)
        if not full and len(pairs) > samples:
            pairs = pairs[np.sort(rng.choice(len(pairs), samples, replace=False))]
        ref = None
        for x, y in pairs:
            h = np.zeros((d + 1) ** 2, dtype=np.int64)
            np.add.at(h, cls[x].astype(np.int64) * (d + 1) + cls[:, y], 1)
            h = h.reshape(d + 1, d + 1)
            checked += 1
            if ref is None:
                ref = h
            elif not np.array_equal(h, ref):
                raise SchemeViolation(
                    f"intersection numbers differ for relation {k} at pair ({x}, {y})"
                )
        if ref is not None:
            table[k] = ref
    return table, checked
