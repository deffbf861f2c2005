"""Rational trigonometry in F_q^3: quadrance, spread and their projective forms.

All quantities are exact field elements.  Degenerate inputs (null lines,
null projective points, vanishing projections) raise instead of returning a
sentinel, since every formula here divides by the offending norm.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateForm,
    DegenerateLine,
    FieldMismatch,
    MathPreconditionError,
    NullLine,
    NullProjection,
    NullProjectivePoint,
)
from .ffield import FieldElement, FieldSpec

__all__ = [
    "Vec3",
    "BilinearForm",
    "dot",
    "quadrance",
    "is_null_point",
    "is_null_line",
    "spread",
    "proj_quadrance",
    "proj_spread",
    "gram_codes",
    "norm_codes",
]


@dataclass(frozen=True)
class Vec3:
    x: FieldElement
    y: FieldElement
    z: FieldElement

    def __post_init__(self):
        if not (self.x.field == self.y.field == self.z.field):
            raise FieldMismatch("coordinates of a Vec3 must share one field")

    @classmethod
    def of(cls, field: FieldSpec, coords: Sequence) -> "Vec3":
        x, y, z = (field(c) for c in coords)
        return cls(x, y, z)

    @classmethod
    def zero(cls, field: FieldSpec) -> "Vec3":
        return cls(field.zero, field.zero, field.zero)

    @property
    def field(self) -> FieldSpec:
        return self.x.field

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self.x, -self.y, -self.z)

    def scale(self, c) -> "Vec3":
        return Vec3(self.x * c, self.y * c, self.z * c)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not (self.x or self.y or self.z)

    def codes(self) -> tuple[int, int, int]:
        return (self.x.code, self.y.code, self.z.code)

    def to_json(self) -> list:
        """``[x, y, z]`` as integers (prime field) or coefficient lists."""
        if self.field.k == 1:
            return [c.code for c in self]
        return [c.coeffs for c in self]

    def __repr__(self) -> str:
        return f"Vec3{tuple(self.to_json())}"


class BilinearForm:
    """A symmetric non-degenerate bilinear form on F_q^3, given by its Gram matrix."""

    def __init__(self, field: FieldSpec, matrix: Sequence[Sequence]):
        rows = [[field(c) for c in row] for row in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise MathPreconditionError("a bilinear form on F_q^3 needs a 3x3 matrix")
        for i in range(3):
            for j in range(i + 1, 3):
                if rows[i][j] != rows[j][i]:
                    raise MathPreconditionError("bilinear form matrix is not symmetric")
        self.field = field
        self.matrix = tuple(tuple(r) for r in rows)
        if not self.det:
            raise DegenerateForm("bilinear form is degenerate (det = 0)")

    @classmethod
    def identity(cls, field: FieldSpec) -> "BilinearForm":
        return cls(field, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @cached_property
    def det(self) -> FieldElement:
        m = self.matrix
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    @cached_property
    def codes(self) -> np.ndarray:
        return np.array([[c.code for c in row] for row in self.matrix], dtype=np.int64)

    def is_identity(self) -> bool:
        return np.array_equal(self.codes, np.eye(3, dtype=np.int64))

    def to_json(self) -> list:
        if self.field.k == 1:
            return [[c.code for c in row] for row in self.matrix]
        return [[c.coeffs for c in row] for row in self.matrix]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    def __eq__(self, other):
        return (
            isinstance(other, BilinearForm)
            and self.field == other.field
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.field, self.matrix))

    def __repr__(self) -> str:
        return f"BilinearForm({self.to_json()} over {self.field!r})"

    def __call__(self, u: Vec3, v: Vec3) -> FieldElement:
        return dot(u, v, self)


def _form_for(u: Vec3, form: BilinearForm | None) -> BilinearForm:
    if form is None:
        return BilinearForm.identity(u.field)
    if form.field != u.field:
        raise FieldMismatch(f"form over {form.field!r}, vector over {u.field!r}")
    return form


def dot(u: Vec3, v: Vec3, form: BilinearForm | None = None) -> FieldElement:
    """``u^T G v``."""
    if u.field != v.field:
        raise FieldMismatch(f"{u.field!r} vs {v.field!r}")
    g = _form_for(u, form).matrix
    uc, vc = tuple(u), tuple(v)
    total = u.field.zero
    for i in range(3):
        if not uc[i]:
            continue
        row = g[i][0] * vc[0] + g[i][1] * vc[1] + g[i][2] * vc[2]
        total = total + uc[i] * row
    return total


def quadrance(u: Vec3, v: Vec3, form: BilinearForm | None = None) -> FieldElement:
    d = v - u
    return dot(d, d, form)


def is_null_point(u: Vec3, form: BilinearForm | None = None) -> bool:
    return not dot(u, u, form)


def is_null_line(u: Vec3, v: Vec3, form: BilinearForm | None = None) -> bool:
    if u == v:
        raise DegenerateLine("a line needs two distinct points")
    return not quadrance(u, v, form)


def spread(u: Vec3, w: Vec3, v: Vec3, z: Vec3, form: BilinearForm | None = None) -> FieldElement:
    """Spread between the lines UW and VZ."""
    if u == w or v == z:
        raise DegenerateLine("a line needs two distinct points")
    q1 = quadrance(u, w, form)
    q2 = quadrance(v, z, form)
    if not q1 or not q2:
        raise NullLine("spread is undefined for a null line")
    d = dot(w - u, z - v, form)
    return 1 - d * d / (q1 * q2)


def _rep(p) -> Vec3:
    # accepts a ProjPoint or a bare representative vector
    return getattr(p, "rep", p)


def proj_quadrance(u, v, form: BilinearForm | None = None) -> FieldElement:
    """Projective quadrance ``1 - (U.V)^2 / ((U.U)(V.V))`` of two projective points."""
    uu, vv = _rep(u), _rep(v)
    if uu.is_zero() or vv.is_zero():
        raise NullProjectivePoint("the zero vector spans no projective point")
    nu = dot(uu, uu, form)
    nv = dot(vv, vv, form)
    if not nu or not nv:
        raise NullProjectivePoint("projective quadrance is undefined at a null point")
    d = dot(uu, vv, form)
    return 1 - d * d / (nu * nv)


def proj_spread(w, u, v, form: BilinearForm | None = None) -> FieldElement:
    """Projective spread between the projective lines wu and wv.

    U and V are first projected onto the plane perpendicular to W and the
    spread of the projections is returned.
    """
    ww, uu, vv = _rep(w), _rep(u), _rep(v)
    nw = dot(ww, ww, form)
    if not nw:
        raise NullProjection("W.W")
    pu = uu - ww.scale(dot(uu, ww, form) / nw)
    pv = vv - ww.scale(dot(vv, ww, form) / nw)
    nu = dot(pu, pu, form)
    if not nu:
        raise NullProjection("U'.U'")
    nv = dot(pv, pv, form)
    if not nv:
        raise NullProjection("V'.V'")
    d = dot(pu, pv, form)
    return 1 - d * d / (nu * nv)


# --- vectorised Gram matrices over code arrays ------------------------------

_CHUNK = 512


def _matmul_codes_tables(field: FieldSpec, a: np.ndarray, g: np.ndarray) -> np.ndarray:
    add, mul = field.add_table, field.mul_table
    out = np.zeros((a.shape[0], g.shape[1]), dtype=field.dtype)
    for j in range(g.shape[1]):
        acc = np.zeros(a.shape[0], dtype=field.dtype)
        for i in range(a.shape[1]):
            acc = add[acc, mul[a[:, i], g[i, j]]]
        out[:, j] = acc
    return out


def gram_codes(
    a: np.ndarray,
    b: np.ndarray,
    form: BilinearForm,
    method: str = "auto",
) -> np.ndarray:
    """Matrix of codes of ``a_i . b_j`` for rows of two code arrays.

    ``method`` is ``"int"`` (integer matmul reduced mod p, prime fields only),
    ``"table"`` (lookup tables, any field) or ``"auto"``.
    """
    field = form.field
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if method == "auto":
        method = "int" if field.k == 1 else "table"
    if method == "int":
        if field.k != 1:
            raise MathPreconditionError("integer route needs a prime field")
        ag = (a @ form.codes) % field.p
        out = np.empty((a.shape[0], b.shape[0]), dtype=field.dtype)
        for s in range(0, a.shape[0], _CHUNK):
            out[s : s + _CHUNK] = (ag[s : s + _CHUNK] @ b.T) % field.p
        return out
    add, mul = field.add_table, field.mul_table
    ag = _matmul_codes_tables(field, a, form.codes).astype(np.int64)
    out = np.empty((a.shape[0], b.shape[0]), dtype=field.dtype)
    for s in range(0, a.shape[0], _CHUNK):
        block = ag[s : s + _CHUNK]
        acc = mul[block[:, 0][:, None], b[:, 0][None, :]]
        for j in (1, 2):
            acc = add[acc, mul[block[:, j][:, None], b[:, j][None, :]]]
        out[s : s + _CHUNK] = acc
    return out


def norm_codes(a: np.ndarray, form: BilinearForm) -> np.ndarray:
    """Codes of ``a_i . a_i`` for every row."""
    field = form.field
    a = np.asarray(a, dtype=np.int64)
    add, mul = field.add_table, field.mul_table
    ag = _matmul_codes_tables(field, a, form.codes).astype(np.int64)
    acc = mul[ag[:, 0], a[:, 0]]
    for j in (1, 2):
        acc = add[acc, mul[ag[:, j], a[:, j]]]
    return acc
