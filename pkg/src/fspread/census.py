"""Counting a fixed spread among a set of directions.

f_gamma(E) is the number of edges of P_q(gamma) induced on E.  The expander
mixing inequality

    |e(B) - d |B|^2 / (2n)| <= lambda |B| / 2

turns the spectrum of P_q(gamma) into an explicit two-sided estimate, and
:func:`theorem1_experiment` checks sampled direction sets against it.

Sampling is uniform without replacement: ``Generator.permutation(n)[:m]``
on a generator seeded with ``SeedSequence([seed, trial])``, sorted.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import (
    ExponentOutOfRange,
    FalsifiedCheck,
    MathPreconditionError,
    MTooLarge,
    NotRegular,
    TooLarge,
)
from .ffield import FieldElement, FieldSpec, make_field, prime_power
from .pgraph import SpectrumReport, SpreadGraph, build_poincare, is_regular, spectrum
from .projective import OmegaSet, build_omega
from .trig import BilinearForm, proj_quadrance

__all__ = [
    "DirectionSet",
    "CheckResult",
    "CensusReport",
    "induced_edges",
    "f_gamma",
    "count_pairs",
    "spread_census",
    "mixing_check",
    "sample_directions",
    "random_subset",
    "theorem1_experiment",
    "CSV_COLUMNS",
]

MIXING_TOL = 1e-6
CSV_COLUMNS = (
    "q", "gamma", "m", "f", "expected_num", "expected_den",
    "lambda2", "bound", "epsilon", "ratio", "seed", "trial",
)


@dataclass(frozen=True, eq=False)
class DirectionSet:
    omega: OmegaSet
    members: tuple[int, ...]

    def __post_init__(self):
        members = tuple(sorted(int(i) for i in self.members))
        if len(set(members)) != len(members):
            raise MathPreconditionError("direction set has repeated members")
        if members and (members[0] < 0 or members[-1] >= self.omega.n):
            raise MathPreconditionError("direction set index out of range")
        object.__setattr__(self, "members", members)

    @property
    def m(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def indices(self) -> np.ndarray:
        return np.asarray(self.members, dtype=np.int64)


def induced_edges(g: SpreadGraph, members: Iterable[int]) -> int:
    """Edges of ``g`` inside ``members``, by AND-ing packed rows with a packed mask."""
    idx = np.asarray(list(members), dtype=np.int64)
    if idx.size < 2:
        return 0
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    packed = np.packbits(mask)
    return int(np.bitwise_count(g.rows[idx] & packed).sum()) // 2


def f_gamma(E: DirectionSet, gamma, graph: SpreadGraph | None = None) -> int:
    """Unordered pairs of E at projective quadrance (spread) gamma."""
    gamma = E.omega.field(gamma)
    if graph is None:
        graph = build_poincare(E.omega, gamma)
    elif graph.omega is not E.omega or graph.gamma != gamma:
        raise MathPreconditionError("graph does not match the direction set and gamma")
    return induced_edges(graph, E.members)


def count_pairs(E: DirectionSet, gamma) -> int:
    """Pair-loop count of f_gamma(E) straight from the projective quadrance."""
    gamma = E.omega.field(gamma)
    pts = [E.omega.points[i] for i in E.members]
    form = E.omega.form
    total = 0
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            if proj_quadrance(pts[a], pts[b], form) == gamma:
                total += 1
    return total


def spread_census(E: DirectionSet) -> dict[int, int]:
    """f_gamma(E) for every gamma, keyed by the code of gamma."""
    return {g.code: f_gamma(E, g) for g in E.omega.field.elements()}


@dataclass
class CheckResult:
    size: int
    edges: int
    expected: Fraction
    lhs: Fraction
    rhs: float
    passed: bool

    @property
    def slack(self) -> float:
        return self.rhs + MIXING_TOL * self.size - float(self.lhs)


def mixing_check(g: SpreadGraph, B: DirectionSet | Iterable[int], lambda2: float) -> CheckResult:
    """Evaluate both sides of the mixing inequality on the vertex set B."""
    d = is_regular(g)
    if d is None:
        raise NotRegular("the mixing inequality needs a regular graph")
    members = B.members if isinstance(B, DirectionSet) else tuple(B)
    size = len(members)
    e = induced_edges(g, members)
    expected = Fraction(d * size * size, 2 * g.n)
    lhs = abs(e - expected)
    rhs = 0.5 * lambda2 * size
    return CheckResult(size, e, expected, lhs, rhs, float(lhs) <= rhs + MIXING_TOL * size)


def _rng(seed: int, trial: int | None) -> np.random.Generator:
    entropy = [seed] if trial is None else [seed, trial]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def sample_directions(omega: OmegaSet, m: int, seed: int, trial: int | None = None) -> DirectionSet:
    """Uniform random m-subset of Omega, fixed by (seed, trial)."""
    if m > omega.n:
        raise TooLarge(f"cannot sample {m} of {omega.n} directions")
    if m < 0:
        raise MathPreconditionError("sample size must be non-negative")
    perm = _rng(seed, trial).permutation(omega.n)
    return DirectionSet(omega, tuple(perm[:m]))


def random_subset(omega: OmegaSet, seed: int, trial: int | None = None) -> DirectionSet:
    """Random subset whose size is uniform on 0..n, then uniform given the size."""
    rng = _rng(seed, trial)
    size = int(rng.integers(0, omega.n + 1))
    return DirectionSet(omega, tuple(rng.permutation(omega.n)[:size]))


@dataclass
class CensusReport:
    q: int
    gamma: int | list
    m: int
    f: int
    expected: Fraction
    lambda2: float
    bound: float
    deviation: float
    theta_ratio: float
    epsilon: float | None
    ratio: float | None
    seed: int
    trial: int
    degree: int
    n: int

    def row(self) -> dict:
        return {
            "q": self.q,
            "gamma": self.gamma,
            "m": self.m,
            "f": self.f,
            "expected_num": self.expected.numerator,
            "expected_den": self.expected.denominator,
            "lambda2": self.lambda2,
            "bound": self.bound,
            "epsilon": self.epsilon,
            "ratio": self.ratio,
            "seed": self.seed,
            "trial": self.trial,
        }

    def to_json(self) -> dict:
        out = asdict(self)
        out["expected"] = [self.expected.numerator, self.expected.denominator]
        return out

    @property
    def inside_certificate(self) -> bool:
        if self.epsilon is None:
            return self.f == 0
        return abs(self.ratio - 1) <= self.epsilon + 1e-9


def _field(field_or_q) -> FieldSpec:
    if isinstance(field_or_q, FieldSpec):
        return field_or_q
    return make_field(*prime_power(int(field_or_q)))


def theorem1_experiment(
    field_or_q,
    gamma,
    exponent: float = 1.75,
    trials: int = 100,
    seed: int = 0,
    *,
    form: BilinearForm | None = None,
    omega: OmegaSet | None = None,
    graph: SpreadGraph | None = None,
    report: SpectrumReport | None = None,
    m: int | None = None,
) -> list[CensusReport]:
    """Sample ``trials`` direction sets of size ceil(q^exponent) and count spread gamma.

    Each trial checks the mixing inequality and that f / (d m^2 / 2n) lies in
    [1 - eps, 1 + eps] with eps = lambda2 n / (d m); when 1 - gamma is a
    nonsquare it checks f = 0 instead.  A failed check raises FalsifiedCheck.
    Passing ``m`` fixes the sample size directly; ``exponent`` is then
    recomputed from it and must still lie in (1.5, 2).
    """
    field = _field(field_or_q)
    q = field.q
    if m is not None:
        exponent = math.log(m) / math.log(q)
    if not 1.5 < exponent < 2:
        raise ExponentOutOfRange(f"exponent must lie in (1.5, 2), got {exponent}")
    omega = omega or build_omega(field, form, "paper")
    gamma = field(gamma)
    if m is None:
        m = math.ceil(q**exponent)
    if m > omega.n:
        raise MTooLarge(f"m = ceil({q}^{exponent}) = {m} exceeds |Omega| = {omega.n}")
    graph = graph or build_poincare(omega, gamma)
    d = is_regular(graph)
    if d is None:
        raise NotRegular(f"P_{q}({gamma!r}) is not regular")
    report = report or spectrum(graph)
    lam = report.second
    n = omega.n
    gamma_json = gamma.code if field.k == 1 else gamma.coeffs

    out = []
    for trial in range(trials):
        E = sample_directions(omega, m, seed, trial)
        f = f_gamma(E, gamma, graph)
        expected = Fraction(d * m * m, 2 * n)
        bound = 0.5 * lam * m
        deviation = float(abs(f - expected))
        if deviation > bound + MIXING_TOL * m:
            raise FalsifiedCheck(f"mixing inequality fails in trial {trial}")
        if d == 0:
            eps = ratio = None
        else:
            eps = lam * n / (d * m)
            ratio = float(Fraction(f) / expected)
        rep = CensusReport(
            q=q, gamma=gamma_json, m=m, f=f, expected=expected, lambda2=lam,
            bound=bound, deviation=deviation, theta_ratio=f / (m * m / q),
            epsilon=eps, ratio=ratio, seed=seed, trial=trial, degree=d, n=n,
        )
        if not rep.inside_certificate:
            raise FalsifiedCheck(f"trial {trial}: f = {f} outside the certificate")
        out.append(rep)
    return out
