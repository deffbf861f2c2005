"""Projective points of F_q^3 and the vertex set Omega.

A projective point is stored by its canonical representative, the vector on
the line whose first nonzero coordinate is 1.  Points are always listed in
lexicographic order of the codes of that representative, so vertex indices
(and every adjacency matrix built on them) are reproducible.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .errors import MathPreconditionError, NeitherClassMatches, NullProjectivePoint
from .ffield import FieldElement, FieldSpec, is_square, primitive_element, sqrt
from .trig import BilinearForm, Vec3, dot, norm_codes

__all__ = [
    "ISOTROPIC",
    "SQUARE",
    "NONSQUARE",
    "ProjPoint",
    "OmegaSet",
    "canonical_point",
    "canonical_rep_codes",
    "enumerate_proj_points",
    "class_counts",
    "build_omega",
    "fixed_norm_rep",
]

ISOTROPIC = "isotropic"
SQUARE = "square"
NONSQUARE = "nonsquare"
SELECTORS = (SQUARE, NONSQUARE, "paper")


@dataclass(frozen=True)
class ProjPoint:
    rep: Vec3
    norm_class: str

    def __post_init__(self):
        first = next((c for c in self.rep if c), None)
        if first is None:
            raise NullProjectivePoint("the zero vector spans no projective point")
        if first != 1:
            raise MathPreconditionError(f"{self.rep!r} is not a canonical representative")

    def __repr__(self) -> str:
        return f"[{self.rep.to_json()}]:{self.norm_class}"


def _classify(n: FieldElement) -> str:
    if not n:
        return ISOTROPIC
    return SQUARE if is_square(n) else NONSQUARE


def canonical_point(v: Vec3, form: BilinearForm | None = None) -> ProjPoint:
    """The projective point [v], with its norm class under ``form``."""
    first = next((c for c in v if c), None)
    if first is None:
        raise NullProjectivePoint("the zero vector spans no projective point")
    rep = v.scale(first.inv())
    return ProjPoint(rep, _classify(dot(rep, rep, form)))


def canonical_rep_codes(field: FieldSpec) -> np.ndarray:
    """All q^2+q+1 canonical representatives as a sorted (N, 3) code array."""
    q = field.q
    r = np.arange(q, dtype=np.int64)
    a, b = np.meshgrid(r, r, indexing="ij")
    blocks = [
        np.array([[0, 0, 1]], dtype=np.int64),
        np.stack([np.zeros(q, np.int64), np.ones(q, np.int64), r], axis=1),
        np.stack([np.ones(q * q, np.int64), a.ravel(), b.ravel()], axis=1),
    ]
    # the three blocks are already in lexicographic order, one after another
    return np.concatenate(blocks)


def _class_of_codes(field: FieldSpec, norms: np.ndarray) -> np.ndarray:
    cls = np.where(field.square_table[norms], SQUARE, NONSQUARE).astype(object)
    cls[norms == 0] = ISOTROPIC
    return cls


def enumerate_proj_points(field: FieldSpec, form: BilinearForm | None = None) -> list[ProjPoint]:
    form = form or BilinearForm.identity(field)
    codes = canonical_rep_codes(field)
    classes = _class_of_codes(field, norm_codes(codes, form))
    return [
        ProjPoint(Vec3(*(FieldElement(field, int(c)) for c in row)), cls)
        for row, cls in zip(codes, classes)
    ]


def class_counts(field: FieldSpec, form: BilinearForm | None = None) -> dict[str, int]:
    form = form or BilinearForm.identity(field)
    norms = norm_codes(canonical_rep_codes(field), form)
    counts = Counter(_class_of_codes(field, norms))
    return {c: counts.get(c, 0) for c in (ISOTROPIC, SQUARE, NONSQUARE)}


def paper_class(counts: dict[str, int], q: int) -> str:
    target = q * (q + 1) // 2
    matches = [c for c in (SQUARE, NONSQUARE) if counts[c] == target]
    if len(matches) != 1:
        raise NeitherClassMatches(
            f"no unique non-isotropic class of size q(q+1)/2 = {target}: {counts}"
        )
    return matches[0]


@dataclass(frozen=True, eq=False)
class OmegaSet:
    """One norm class of non-isotropic projective points, in canonical order."""

    field: FieldSpec
    form: BilinearForm
    class_selector: str
    norm_class: str
    points: tuple[ProjPoint, ...] = dc_field(repr=False)
    sigma: FieldElement = None

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> ProjPoint:
        return self.points[i]

    @cached_property
    def reps(self) -> np.ndarray:
        """Canonical representatives as an (n, 3) code array."""
        return np.array([p.rep.codes() for p in self.points], dtype=np.int64).reshape(-1, 3)

    @cached_property
    def unit_reps(self) -> np.ndarray:
        """Fixed-norm representatives (norm sigma) as an (n, 3) code array."""
        return np.array(
            [fixed_norm_rep(p, self).codes() for p in self.points], dtype=np.int64
        ).reshape(-1, 3)

    @cached_property
    def index(self) -> dict[tuple[int, int, int], int]:
        return {p.rep.codes(): i for i, p in enumerate(self.points)}

    def index_of(self, p: ProjPoint | Vec3) -> int:
        rep = p.rep if isinstance(p, ProjPoint) else canonical_point(p, self.form).rep
        return self.index[rep.codes()]

    def to_json(self) -> dict:
        sigma = self.sigma.code if self.field.k == 1 else self.sigma.coeffs
        return {
            "q": self.q,
            "field": self.field.to_json(),
            "form": self.form.to_json(),
            "class": self.norm_class,
            "sigma": sigma,
            "points": [p.rep.to_json() for p in self.points],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def build_omega(
    field: FieldSpec,
    form: BilinearForm | None = None,
    class_selector: str = "paper",
) -> OmegaSet:
    """Collect one non-isotropic class of projective points.

    ``class_selector`` is ``"square"``, ``"nonsquare"`` or ``"paper"``; the
    last picks whichever class has exactly q(q+1)/2 points.
    """
    if class_selector not in SELECTORS:
        raise MathPreconditionError(f"class selector must be one of {SELECTORS}")
    form = form or BilinearForm.identity(field)
    codes = canonical_rep_codes(field)
    classes = _class_of_codes(field, norm_codes(codes, form))
    if class_selector == "paper":
        counts = Counter(classes)
        counts = {c: counts.get(c, 0) for c in (ISOTROPIC, SQUARE, NONSQUARE)}
        chosen = paper_class(counts, field.q)
    else:
        chosen = class_selector
    sigma = field.one if chosen == SQUARE else primitive_element(field)
    points = tuple(
        ProjPoint(Vec3(*(FieldElement(field, int(c)) for c in row)), chosen)
        for row in codes[classes == chosen]
    )
    return OmegaSet(field, form, class_selector, chosen, points, sigma)


def fixed_norm_rep(p: ProjPoint, omega: OmegaSet) -> Vec3:
    """The vector V on ``p`` with V.V = sigma, the smaller of the pair +-V."""
    if p.norm_class == ISOTROPIC:
        raise NullProjectivePoint(f"{p!r} is isotropic")
    if p.norm_class != omega.norm_class:
        raise MathPreconditionError(f"{p!r} is not in the {omega.norm_class} class")
    norm = dot(p.rep, p.rep, omega.form)
    v = p.rep.scale(sqrt(omega.sigma / norm))
    w = -v
    return v if v.codes() <= w.codes() else w
