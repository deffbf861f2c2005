"""Command line front end.

    fspread --q 5 omega
    fspread --q 13 --gamma 1 spectrum
    fspread --q 29 --gamma 1 --exponent 1.75 --trials 100 --seed 42 experiment

Exit codes: 0 ok, 1 usage, 2 mathematical precondition, 3 a theorem check
failed.  Structured results go to ``--out`` (or stdout); a one-line summary
goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .census import CSV_COLUMNS, mixing_check, random_subset, theorem1_experiment
from .errors import FalsifiedCheck, FspreadError, NotRegular, UsageError
from .ffield import FieldSpec, make_field, prime_power
from .pgraph import (
    FORMAT_VERSION,
    SpectrumReport,
    SpreadGraph,
    build_poincare,
    is_regular,
    spectrum,
    verify_scheme,
)
from .projective import ISOTROPIC, NONSQUARE, SQUARE, build_omega, class_counts, paper_class
from .trig import BilinearForm

log = logging.getLogger("fspread")

COMMANDS = ("omega", "graph", "spectrum", "scheme", "census", "experiment")
DEFAULT_FORMAT = {"census": "csv", "experiment": "csv"}


@dataclass
class RunConfig:
    command: str
    p: int
    k: int
    modulus: list[int]
    form: list[list[int]]
    class_selector: str = "paper"
    gamma: int | list[int] | None = None
    m: int | None = None
    exponent: float = 1.75
    trials: int | None = None
    seed: int = 0
    format: str = "json"
    cache_dir: str | None = ".fspread-cache"
    samples: int = 3
    full: bool = False

    @property
    def q(self) -> int:
        return self.p**self.k

    def field(self) -> FieldSpec:
        return make_field(self.p, self.k, self.modulus if self.k > 1 else None)

    def to_json(self) -> dict:
        out = asdict(self)
        out["q"] = self.q
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if text.startswith("["):
        data = json.loads(text)
    else:
        data = [int(t) for t in text.split(",") if t.strip()]
    return data


def _add_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    kw = {"default": argparse.SUPPRESS} if suppress else {}

    def opt(*names, **kwargs):
        if suppress:
            kwargs.pop("default", None)
        parser.add_argument(*names, **kwargs, **kw)

    opt("--p", type=int, default=None, help="characteristic")
    opt("--k", type=int, default=None, help="extension degree")
    opt("--modulus", default=None, help="comma separated coefficients, constant term first")
    opt("--q", type=int, default=None, help="field size (prime or prime power)")
    opt("--form", default=None, help="3x3 symmetric Gram matrix, 9 comma separated ints")
    opt("--class", dest="class_selector", default="paper", choices=("square", "nonsquare", "paper"))
    opt("--gamma", default=None, help="the fixed spread (int, or coefficient list)")
    opt("--m", type=int, default=None)
    opt("--exponent", type=float, default=1.75)
    opt("--trials", type=int, default=None)
    opt("--seed", type=int, default=0)
    opt("--format", choices=("json", "csv"), default=None)
    opt("--cache-dir", default=".fspread-cache")
    opt("--no-cache", action="store_true", default=False)
    opt("--out", default=None)
    opt("--samples", type=int, default=3, help="scheme: pairs per relation for intersection numbers")
    opt("--full", action="store_true", default=False, help="scheme: check every pair (cubic)")
    opt("-v", "--verbose", action="store_true", default=False)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fspread", description="Finite Poincare graphs and spread census.")
    parser.add_argument("--version", action="version", version=__version__)
    _add_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        _add_options(sub.add_parser(name), suppress=True)
    return parser


def resolve_config(ns: argparse.Namespace) -> tuple[RunConfig, str | None]:
    if ns.q is not None and ns.p is not None:
        raise UsageError("give either --q or --p/--k, not both")
    if ns.q is not None:
        if ns.k is not None:
            raise UsageError("--k is implied by --q")
        p, k = prime_power(ns.q)
    elif ns.p is not None:
        p, k = ns.p, ns.k or 1
    else:
        raise UsageError("a field is required: --q or --p")
    modulus = _int_list(ns.modulus) if ns.modulus else None
    field = make_field(p, k, modulus)

    form = _int_list(ns.form) if ns.form else [1, 0, 0, 0, 1, 0, 0, 0, 1]
    if form and not isinstance(form[0], list):
        if len(form) != 9:
            raise UsageError("--form needs 9 entries")
        form = [form[0:3], form[3:6], form[6:9]]

    gamma = None
    if ns.gamma is not None:
        g = _int_list(ns.gamma)
        gamma = g[0] % p if (len(g) == 1 and k == 1) else [c % p for c in g]
    if ns.command in ("graph", "spectrum", "census", "experiment") and gamma is None:
        raise UsageError(f"{ns.command} needs --gamma")

    trials = ns.trials
    if trials is None:
        trials = {"census": 1000, "experiment": 100}.get(ns.command)
    fmt = ns.format or DEFAULT_FORMAT.get(ns.command, "json")
    if fmt == "csv" and ns.command not in ("census", "experiment"):
        raise UsageError(f"{ns.command} writes JSON only")
    cfg = RunConfig(
        command=ns.command,
        p=p,
        k=k,
        modulus=list(field.modulus),
        form=form,
        class_selector=ns.class_selector,
        gamma=gamma,
        m=ns.m,
        exponent=ns.exponent,
        trials=trials,
        seed=ns.seed,
        format=fmt,
        cache_dir=None if ns.no_cache else ns.cache_dir,
        samples=ns.samples,
        full=ns.full,
    )
    return cfg, ns.out


# --- cache ------------------------------------------------------------------

def _key(*parts: str) -> str:
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:20]


def load_graph(cfg: RunConfig, omega, gamma) -> tuple[SpreadGraph, str]:
    name = f"graph-{_key(omega.dumps(), json.dumps(cfg.gamma))}.txt"
    path = Path(cfg.cache_dir) / name if cfg.cache_dir else None
    if path is not None and path.exists():
        try:
            g = SpreadGraph.from_text(path.read_text(), omega)
            if g.gamma == gamma:
                return g, name
            raise ValueError("gamma mismatch")
        except (ValueError, KeyError, IndexError, json.JSONDecodeError) as exc:
            log.warning("corrupt graph cache %s (%s); recomputing", path, exc)
    g = build_poincare(omega, gamma)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(g.to_text())
    return g, name


def load_spectrum(cfg: RunConfig, g: SpreadGraph) -> SpectrumReport:
    name = f"spectrum-{_key(g.to_text())}.json"
    path = Path(cfg.cache_dir) / name if cfg.cache_dir else None
    if path is not None and path.exists():
        try:
            return SpectrumReport.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("corrupt spectrum cache %s (%s); recomputing", path, exc)
    rep = spectrum(g)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(rep.to_json(), sort_keys=True))
    return rep


# --- commands ---------------------------------------------------------------

def _setup(cfg: RunConfig):
    field = cfg.field()
    form = BilinearForm(field, cfg.form)
    return field, form


def cmd_omega(cfg: RunConfig):
    field, form = _setup(cfg)
    counts = class_counts(field, form)
    result = dict(counts)
    result["q"] = field.q
    result["total"] = sum(counts.values())
    result["paper_class"] = paper_class(counts, field.q)
    chosen = result["paper_class"] if cfg.class_selector == "paper" else cfg.class_selector
    result["class"] = chosen
    result["size"] = counts[chosen]
    summary = (
        f"q={field.q}: isotropic {counts[ISOTROPIC]}, square {counts[SQUARE]}, "
        f"nonsquare {counts[NONSQUARE]}; paper class {result['paper_class']}"
    )
    return result, summary


def cmd_graph(cfg: RunConfig):
    field, form = _setup(cfg)
    omega = build_omega(field, form, cfg.class_selector)
    g, name = load_graph(cfg, omega, field(cfg.gamma))
    result = {
        "n": g.n,
        "gamma": cfg.gamma,
        "class": omega.norm_class,
        "degree": g.degree,
        "edges": g.edges,
        "omega_digest": omega.digest,
        "cache_file": name if cfg.cache_dir else None,
    }
    summary = f"P_{field.q}({cfg.gamma}): n={g.n}, degree={g.degree}, edges={g.edges}"
    return result, summary


def cmd_spectrum(cfg: RunConfig):
    field, form = _setup(cfg)
    omega = build_omega(field, form, cfg.class_selector)
    g, _ = load_graph(cfg, omega, field(cfg.gamma))
    rep = load_spectrum(cfg, g)
    result = rep.to_json()
    result["gamma"] = cfg.gamma
    result["within_sqrt_q_plus_1"] = rep.second <= math.sqrt(field.q) + 1
    summary = f"second/sqrt(q) = {rep.ratio_to_sqrt_q:.2f} (second = {rep.second:.4f}, valency = {rep.valency})"
    return result, summary


def cmd_scheme(cfg: RunConfig):
    field, form = _setup(cfg)
    omega = build_omega(field, form, cfg.class_selector)
    rep = verify_scheme(omega, intersection_samples=cfg.samples, full=cfg.full, seed=cfg.seed)
    result = rep.to_json()
    summary = (
        f"scheme q={field.q}: {rep.relation_count} relations, partition/symmetry "
        f"{'pass' if rep.ok else 'FAIL'}, valencies {rep.valencies}"
    )
    return result, summary


def cmd_census(cfg: RunConfig):
    field, form = _setup(cfg)
    omega = build_omega(field, form, cfg.class_selector)
    g, _ = load_graph(cfg, omega, field(cfg.gamma))
    if is_regular(g) is None:
        raise NotRegular("mixing check needs a regular graph")
    lam = load_spectrum(cfg, g).second
    rows = []
    passed = 0
    for trial in range(cfg.trials):
        B = random_subset(omega, cfg.seed, trial)
        res = mixing_check(g, B, lam)
        passed += res.passed
        rows.append({
            "q": field.q,
            "gamma": cfg.gamma,
            "trial": trial,
            "size": res.size,
            "edges": res.edges,
            "expected_num": res.expected.numerator,
            "expected_den": res.expected.denominator,
            "lhs": float(res.lhs),
            "rhs": res.rhs,
            "passed": res.passed,
            "seed": cfg.seed,
        })
    summary = f"mixing: {passed}/{cfg.trials} pass (lambda2 = {lam:.4f})"
    if passed != cfg.trials:
        return rows, summary, FalsifiedCheck(summary)
    return rows, summary


def cmd_experiment(cfg: RunConfig):
    field, form = _setup(cfg)
    omega = build_omega(field, form, cfg.class_selector)
    gamma = field(cfg.gamma)
    g, _ = load_graph(cfg, omega, gamma)
    rep = load_spectrum(cfg, g) if is_regular(g) is not None else None
    reports = theorem1_experiment(
        field, gamma, cfg.exponent, cfg.trials, cfg.seed,
        omega=omega, graph=g, report=rep, m=cfg.m,
    )
    rows = [r.row() for r in reports]
    if reports and reports[0].epsilon is not None:
        ratios = [r.ratio for r in reports]
        summary = (
            f"experiment q={field.q} gamma={cfg.gamma} m={reports[0].m}: "
            f"{len(reports)}/{len(reports)} inside certificate eps = {reports[0].epsilon:.4f}; "
            f"ratio range [{min(ratios):.4f}, {max(ratios):.4f}]"
        )
    else:
        summary = f"experiment q={field.q} gamma={cfg.gamma}: 1-gamma nonsquare, f = 0 in all {len(reports)} trials"
    return rows, summary


HANDLERS = {
    "omega": cmd_omega,
    "graph": cmd_graph,
    "spectrum": cmd_spectrum,
    "scheme": cmd_scheme,
    "census": cmd_census,
    "experiment": cmd_experiment,
}


# --- output -----------------------------------------------------------------

def render(cfg: RunConfig, result) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write(f"# format_version: {FORMAT_VERSION}\n")
        buf.write(f"# config: {json.dumps(cfg.to_json(), sort_keys=True)}\n")
        columns = list(CSV_COLUMNS) if cfg.command == "experiment" else list(result[0]) if result else []
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in result:
            writer.writerow({k: json.dumps(v) if isinstance(v, list) else v for k, v in row.items()})
        return buf.getvalue()
    doc = {"format_version": FORMAT_VERSION, "config": cfg.to_json(), "result": result}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.INFO if ns.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        cfg, out = resolve_config(ns)
        outcome = HANDLERS[cfg.command](cfg)
        result, summary = outcome[0], outcome[1]
        failure = outcome[2] if len(outcome) > 2 else None
        text = render(cfg, result)
        if out:
            Path(out).parent.mkdir(parents=True, exist_ok=True)
            Path(out).write_text(text)
        else:
            sys.stdout.write(text)
        print(summary, file=sys.stderr)
        if failure is not None:
            raise failure
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return exc.exit_code
    except FspreadError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
