"""Command-line front end: JSON in, deterministic JSON reports out.

Exit status is 0 whenever a verdict was produced, including a negative one.
Usage errors exit 2, unreadable files 3, malformed input 4.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .exactmat import ExactMatrix, ShapeError, tl_scalar
from .heckeforge import (
    IrrationalBranchError,
    NotProportionalError,
    braid_defect_q,
    braid_verdict,
    braided_standard_r,
    hecke_defect,
    hecke_defect_quadratic,
    hecke_from_tl,
    projection_r,
    special_q_constraints,
    standard_r,
    tl_from_b,
    tl_generator,
)
from .quiverlab import (
    CENSUS_LIMIT,
    Quiver,
    QuiverError,
    census_check,
    classify,
    groupoid_quiver,
    kronecker_square,
    satisfies_qybe,
)
from .rttgen import (
    diagonal_names,
    frt_relations,
    full_names,
    generator_matrix,
    leavitt_presentation,
    rtt_relations,
)
from .scalarring import PoleError, ScalarSyntaxError

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INPUT = 0, 2, 3, 4
DEFAULT_Q0 = (Fraction(2), Fraction(3), Fraction(1, 2))


class InputError(Exception):
    """Malformed input; message already carries file position when known."""


class _Source:
    """A JSON file kept with its raw text so scalar errors can be located."""

    def __init__(self, path: str):
        self.path = path
        self.raw = Path(path).read_text(encoding="utf-8")
        try:
            self.data = json.loads(self.raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc

    def locate(self, err: ScalarSyntaxError) -> str:
        needle = json.dumps(err.text)
        at = self.raw.find(needle)
        if at < 0:
            return f"{self.path}: {err}"
        offset = at + 1 + err.position
        line = self.raw.count("\n", 0, offset) + 1
        col = offset - self.raw.rfind("\n", 0, offset)
        return f"{self.path}:{line}:{col}: bad scalar {err.text!r}: {err.args[0].splitlines()[0]}"

    def parse(self, builder):
        try:
            return builder(self.data)
        except ScalarSyntaxError as exc:
            raise InputError(self.locate(exc)) from exc
        except (KeyError, TypeError, ValueError, ShapeError, QuiverError) as exc:
            raise InputError(f"{self.path}: schema error: {exc}") from exc


def _matrix(path: str) -> ExactMatrix:
    def build(data):
        if isinstance(data, list):
            return ExactMatrix([[v if isinstance(v, str) else str(v) for v in row] for row in data])
        if "matrix" in data and isinstance(data["matrix"], dict):
            return ExactMatrix.from_json(data["matrix"])
        return ExactMatrix.from_json(data)

    return _Source(path).parse(build)


def _quiver(path: str) -> Quiver:
    return _Source(path).parse(Quiver.from_json)


def _residual(m: ExactMatrix, samples: Sequence[Fraction]) -> dict:
    pos = m.first_nonzero()
    numeric = {}
    for q0 in samples:
        try:
            numeric[str(q0)] = "zero" if m.evaluate_at(q0).is_zero() else "nonzero"
        except PoleError:
            numeric[str(q0)] = "pole"
    symbolic_zero = pos is None
    agree = all((v == "zero") == symbolic_zero for v in numeric.values() if v != "pole")
    return {
        "zero": symbolic_zero,
        "witness": None if pos is None else list(pos),
        "witness_value": None if pos is None else str(m[pos]),
        "verdict": braid_verdict(m).to_json(),
        "numeric": numeric,
        "numeric_agrees": agree,
    }


# -- commands --------------------------------------------------------------------

def cmd_check_qybe(args) -> dict:
    q = _quiver(args.input)
    report = satisfies_qybe(q).to_json()
    report["command"] = "check-qybe"
    return report


def cmd_classify(args) -> dict:
    c = classify(_quiver(args.input))
    return {"command": "classify", **c.to_json()}


def cmd_kron_square(args) -> dict:
    return {"command": "kron-square", "quiver": kronecker_square(_quiver(args.input)).to_json()}


def cmd_census(args) -> dict:
    if args.n > CENSUS_LIMIT:
        raise InputError(f"--n must be at most {CENSUS_LIMIT}")
    report = census_check(args.n, args.mode, args.max_multiplicity)
    return {"command": "census", **report.to_json()}


def _parse_components(items: Sequence[str]) -> list[list[int]]:
    try:
        return [[int(x) for x in item.split(",") if x.strip()] for item in items]
    except ValueError as exc:
        raise InputError(f"components must be comma-separated integers: {exc}") from exc


def cmd_groupoid(args) -> dict:
    comps = _parse_components(args.components)
    try:
        q = groupoid_quiver(comps)
    except QuiverError as exc:
        raise InputError(str(exc)) from exc
    adj = q.adjacency()
    blocks, start = [], 0
    for sizes in comps:
        idx = list(range(start, start + len(sizes)))
        block = adj.submatrix(idx)
        mu = sum(sizes)
        blocks.append({"sizes": sizes, "mu": str(mu),
                       "block_tl": (block @ block) == block.scale(mu)})
        start += len(sizes)
    mu = tl_scalar(adj)
    return {"command": "groupoid", "quiver": q.to_json(), "adjacency": adj.to_json(),
            "blocks": blocks, "global_mu": None if mu is None else str(mu)}


def _special_q(x) -> dict:
    try:
        return {"constraints": [str(p) for p in special_q_constraints(x)]}
    except IrrationalBranchError as exc:
        return {"irrational": True, "c": str(exc.c), "quartic": str(exc.quartic)}
    except (NotProportionalError, ValueError) as exc:
        return {"error": str(exc)}


def cmd_build_tl(args) -> dict:
    b = _matrix(args.input)
    try:
        x = tl_from_b(b)
    except (ZeroDivisionError, ShapeError) as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    return {"command": "build-tl", "tl": x.to_json(), "special_q": _special_q(x),
            "hecke": hecke_from_tl(x).to_json()}


def cmd_build_hecke(args) -> dict:
    m = _matrix(args.input)
    try:
        x = tl_from_b(m) if args.source == "b" else tl_generator(m)
    except (ZeroDivisionError, ShapeError, ValueError) as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    return {"command": "build-hecke", "tl": x.to_json(), "candidate": hecke_from_tl(x).to_json()}


def cmd_standard_r(args) -> dict:
    cand = braided_standard_r(args.n) if args.braided else standard_r(args.n)
    return {"command": "standard-r", "n": args.n, "braided": args.braided, **cand.to_json()}


def cmd_projection_r(args) -> dict:
    p = _matrix(args.input)
    try:
        cand = projection_r(p)
    except ValueError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    return {"command": "projection-r", **cand.to_json()}


def _samples(args) -> list[Fraction]:
    samples = list(args.q0) if args.q0 else list(DEFAULT_Q0)
    if args.random_samples:
        rng = random.Random(args.seed)
        for _ in range(args.random_samples):
            samples.append(Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9)))
    return samples


def cmd_verify(args) -> dict:
    r = _matrix(args.input)
    checks = {"hecke": args.hecke, "braid": args.braid}
    if not any(checks.values()):
        checks = {"hecke": True, "braid": True}
    samples = _samples(args)
    report: dict = {"command": "verify", "q0": [str(s) for s in samples], "seed": args.seed}
    try:
        if checks["hecke"]:
            report["hecke"] = _residual(hecke_defect(r), samples)
            report["hecke_quadratic"] = _residual(hecke_defect_quadratic(r), samples)
        if checks["braid"]:
            report["braid"] = _residual(braid_defect_q(r, args.n), samples)
    except ShapeError as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    return report


def _gens(text: Optional[str]) -> Optional[list[str]]:
    if not text:
        return None
    return [g.strip() for g in text.split(",") if g.strip()]


def cmd_rtt(args) -> dict:
    r = _matrix(args.r)
    size = r.rows
    n = int(round(size ** 0.5))
    if n * n != size or not r.is_square():
        raise InputError(f"{args.r}: R must be square of size n^2, got {r.shape}")
    gens = _gens(args.gens)
    if args.layout == "diag":
        gens = gens or [f"t{i + 1}" for i in range(n)]
        if len(gens) != n:
            raise InputError(f"diag layout needs {n} generators, got {len(gens)}")
        names = diagonal_names(gens)
    else:
        if gens is None:
            names = full_names(n)
        elif len(gens) == n * n:
            names = [gens[i * n:(i + 1) * n] for i in range(n)]
        else:
            raise InputError(f"full layout needs {n * n} generators, got {len(gens)}")
    try:
        rels = rtt_relations(r, generator_matrix(names))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {"command": "rtt", "layout": args.layout, **rels.to_json()}


def cmd_frt(args) -> dict:
    return {"command": "frt", "n": args.n, **frt_relations(args.n).to_json()}


def _pairs(items: Optional[Sequence[str]], what: str) -> dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise InputError(f"{what} must look like VERTEX=VALUE, got {item!r}")
        out[key] = value
    return out


def cmd_leavitt(args) -> dict:
    q = _quiver(args.input)
    r_paths = _pairs(args.r, "--r")
    layouts = _pairs(args.vertex_layout, "--vertex-layout")
    rs = {v: _matrix(p) for v, p in r_paths.items()}
    try:
        pres = leavitt_presentation(q, rs, layouts, args.ck2_at)
    except (QuiverError, ShapeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return {"command": "leavitt", **pres.to_json(), "text": pres.text().splitlines()}


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quiverqybe",
        description="Exact QYBE, Hecke and RTT computations for quivers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized extras")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="text prints relation lines where available")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("check-qybe", cmd_check_qybe, "QYBE verdict for a quiver's Kronecker square").add_argument("input")
    add("classify", cmd_classify, "block decomposition of a symmetric quiver").add_argument("input")
    add("kron-square", cmd_kron_square, "Kronecker square quiver").add_argument("input")

    p = add("census", cmd_census, "exhaustive check over small graphs")
    p.add_argument("--n", type=int, required=True, help="maximum number of vertices")
    p.add_argument("--mode", choices=("simple", "loops", "multi"), default="simple")
    p.add_argument("--max-multiplicity", type=int, default=2)

    p = add("groupoid", cmd_groupoid, "groupoid quiver from automorphism-group sizes")
    p.add_argument("components", nargs="+", help="one comma-separated size list per component")

    add("build-tl", cmd_build_tl, "rank-one TL generator from an invertible b").add_argument("input")

    p = add("build-hecke", cmd_build_hecke, "Hecke candidate qI + X")
    p.add_argument("input")
    p.add_argument("--source", choices=("b", "x"), default="b",
                   help="input is the matrix b, or an already rank-one X")

    p = add("standard-r", cmd_standard_r, "GL_q(n) R-matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--braided", action="store_true", help="emit F @ R instead")

    add("projection-r", cmd_projection_r, "qP - q^-1(I - P) for an idempotent P").add_argument("input")

    p = add("verify", cmd_verify, "Hecke and braid residuals of an R-matrix")
    p.add_argument("input")
    p.add_argument("--hecke", action="store_true")
    p.add_argument("--braid", action="store_true")
    p.add_argument("--n", type=int, default=None, help="base dimension (default: sqrt of size)")
    p.add_argument("--q0", type=Fraction, action="append", help="rational sample point, repeatable")
    p.add_argument("--random-samples", type=int, default=0,
                   help="extra seeded rational samples")

    p = add("rtt", cmd_rtt, "relations from R X1 X2 = X2 X1 R")
    p.add_argument("--r", required=True, help="R-matrix JSON")
    p.add_argument("--layout", choices=("full", "diag"), default="full")
    p.add_argument("--gens", help="comma-separated generator names, row-major")

    p = add("frt", cmd_frt, "FRT relations of O_q(M_n)")
    p.add_argument("--n", type=int, required=True)

    p = add("leavitt", cmd_leavitt, "Leavitt path algebra presentation with RTT relations")
    p.add_argument("input")
    p.add_argument("--r", action="append", metavar="VERTEX=PATH")
    p.add_argument("--vertex-layout", action="append", metavar="VERTEX=full|diag")
    p.add_argument("--ck2-at", action="append", metavar="VERTEX")
    return parser


def _render(report: dict, fmt: str) -> str:
    if fmt == "text" and "text" in report:
        return "\n".join(report["text"]) + "\n"
    return json.dumps(report, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    try:
        report = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = _render(report, args.format)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
