"""Command line: ``g2gz {polytope,edges,width,sample,verify,report} [options]``.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 model construction failure.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, TextIO

import numpy as np

from .exact_field import SQRT3, FieldDomainError, FieldElement, format_field, parse_field
from .lie_data import Lattice, gz_weight_lattice, thimm_gz, verify_interlacing, weight_lattice_L
from .polytope import (
    CertificateError,
    HPolytope,
    VRep,
    affine_dimension,
    build_width_certificate,
    enumerate_edges,
    enumerate_vertices,
    gromov_width_report,
    gz_halfspaces,
    in_chamber,
    smooth_chamber_vertices,
)
from .published import compare_with_published
from .recheck import halfspaces_to_text, lattice_to_text, recheck_certificate

__all__ = ["RunConfig", "UsageError", "main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_MODEL = 3

SEED_ENV = "GZ_WIDTH_SEED"
DEFAULT_LAMBDA = "0/1+1/1*sqrt3"
_DEFAULT_FORMAT = {
    "polytope": "plain",
    "edges": "plain",
    "width": "plain",
    "sample": "csv",
    "verify": "plain",
    "report": "json",
}
LATTICES: dict[str, Callable[[], Lattice]] = {
    "glued": gz_weight_lattice,
    "printed": weight_lattice_L,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    command: str
    lam: FieldElement
    seed: int
    samples: int
    steps: int
    tolerance: float
    fmt: str
    verify_table1: bool = False
    recheck: str | None = None
    lattice: str = "glued"

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace, environ=None) -> RunConfig:
        environ = os.environ if environ is None else environ
        try:
            lam = parse_field(ns.lam)
        except ValueError as exc:
            raise UsageError(f"--lambda: {exc}") from None
        if lam.sign() <= 0:
            raise UsageError("--lambda must be positive")
        seed_text = ns.seed if ns.seed is not None else environ.get(SEED_ENV, "0")
        try:
            seed = int(seed_text)
        except ValueError:
            raise UsageError(f"seed {seed_text!r} is not an integer") from None
        if not 0 <= seed < 2**64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if not 0 < ns.tolerance <= 1e-3:
            raise UsageError("--tolerance must lie in (0, 1e-3]")
        if ns.samples < 1 or ns.steps < 1:
            raise UsageError("--samples and --steps must be positive")
        return cls(
            command=ns.command,
            lam=lam,
            seed=seed,
            samples=ns.samples,
            steps=ns.steps,
            tolerance=ns.tolerance,
            fmt=ns.format or _DEFAULT_FORMAT[ns.command],
            verify_table1=ns.verify_table1,
            recheck=ns.recheck,
            lattice=ns.lattice,
        )

    @property
    def lattice_obj(self) -> Lattice:
        return LATTICES[self.lattice]()


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--lambda", dest="lam", default=DEFAULT_LAMBDA, metavar="L",
                        help="orbit parameter in field text format, e.g. 2/1+1/1*sqrt3")
    common.add_argument("--seed", default=None,
                        help=f"unsigned 64-bit sampling seed (fallback: ${SEED_ENV}, then 0)")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--steps", type=int, default=20)
    common.add_argument("--tolerance", type=float, default=1e-7,
                        help="relative slack for numerical checks, in (0, 1e-3]")
    common.add_argument("--format", choices=("json", "csv", "plain"), default=None)
    common.add_argument("--verify-table1", action="store_true",
                        help="compare vertices with the published 13-row table")
    common.add_argument("--recheck", metavar="FILE", default=None,
                        help="re-verify a serialized certificate or report")
    common.add_argument("--lattice", choices=sorted(LATTICES), default="glued",
                        help="weight lattice for lengths and smoothness")
    parser = _Parser(prog="g2gz", description="Gelfand-Zeitlin polytope and width certificate for G2 orbits")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("polytope", "vertices, edges and f-vector"),
        ("edges", "edge list with lattice directions and lengths"),
        ("width", "width certificate and lower/upper bounds"),
        ("sample", "sample the orbit and check image inclusion"),
        ("verify", "run every property group"),
        ("report", "full JSON report"),
    ):
        sub.add_parser(name, parents=[common], help=text)
    return parser


# -- shared helpers ---------------------------------------------------------


def _fmt(x) -> str:
    return format_field(x)


def _vec(v) -> list[str]:
    return [_fmt(c) for c in v]


def _geometry(cfg: RunConfig) -> tuple[HPolytope, VRep, list]:
    P = gz_halfspaces(cfg.lam, cfg.lattice_obj)
    V = enumerate_vertices(P)
    return P, V, enumerate_edges(P, V)


def _edge_dict(V: VRep, e) -> dict:
    return {
        "v0": _vec(V.vertices[e.v0]),
        "v1": _vec(V.vertices[e.v1]),
        "direction": list(e.direction),
        "length": _fmt(e.length),
    }


def _recheck_polytope(P: HPolytope, cert: dict) -> dict[str, bool]:
    return recheck_certificate(
        cert,
        halfspaces_to_text(P.halfspaces),
        halfspaces_to_text(P.chamber),
        lattice_to_text(P.lattice.basis),
    )


def _dump(obj, out: TextIO) -> None:
    json.dump(obj, out, indent=2, ensure_ascii=False)
    out.write("\n")


# -- commands ---------------------------------------------------------------


def cmd_polytope(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    P, V, edges = _geometry(cfg)
    dim = affine_dimension(V.vertices)
    if cfg.fmt == "json":
        _dump(
            {
                "lambda": _fmt(cfg.lam),
                "vertices": [_vec(v) for v in V.vertices],
                "edges": [_edge_dict(V, e) for e in edges],
                "f_vector": {"vertices": len(V), "edges": len(edges)},
                "dimension": dim,
            },
            out,
        )
    elif cfg.fmt == "csv":
        out.write("x1,x2,x3,x4,x5\n")
        for v in V.vertices:
            out.write(",".join(repr(float(c)) for c in v) + "\n")
    else:
        out.write(f"lambda = {_fmt(cfg.lam)}\n")
        out.write(f"dimension = {dim}\n")
        out.write(f"vertices = {len(V)}, edges = {len(edges)}\n")
        for i, v in enumerate(V.vertices):
            tag = " [chamber]" if in_chamber(P, v) else ""
            out.write(f"  v{i:<2d} ({', '.join(_vec(v))}){tag}\n")
    if cfg.verify_table1:
        cmp = compare_with_published(V.vertices, cfg.lam)
        err.write(
            f"published table: {len(cmp.matched)}/13 rows are vertices; "
            f"missing rows {list(cmp.missing)}; {len(cmp.extra)} unlisted vertices\n"
        )
        if not cmp.ok:
            return EXIT_VERIFY
    return EXIT_OK


def cmd_edges(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    P, V, edges = _geometry(cfg)
    if cfg.fmt == "json":
        _dump([_edge_dict(V, e) for e in edges], out)
    elif cfg.fmt == "csv":
        out.write("v0,v1,d1,d2,d3,d4,d5,length,x1_0,x2_0,x3_0,x4_0,x1_1,x2_1,x3_1,x4_1\n")
        for e in edges:
            a, b = V.vertices[e.v0], V.vertices[e.v1]
            row = [str(e.v0), str(e.v1), *map(str, e.direction), repr(float(e.length))]
            row += [repr(float(c)) for c in a[:4]] + [repr(float(c)) for c in b[:4]]
            out.write(",".join(row) + "\n")
    else:
        for e in edges:
            out.write(f"v{e.v0} -- v{e.v1}  dir {list(e.direction)}  length {_fmt(e.length)}\n")
        out.write(f"{len(edges)} edges\n")
    return EXIT_OK


def _width_payload(cfg: RunConfig) -> tuple[dict, bool]:
    report = gromov_width_report(cfg.lam, cfg.lattice_obj)
    d = report.to_dict()
    d["recheck"] = _recheck_polytope(report.polytope, d["certificate"])
    ok = report.certificate.valid and all(d["recheck"].values()) and report.tight
    return d, ok


def _recheck_file(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    try:
        with open(cfg.recheck, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {cfg.recheck}: {exc}") from None
    except json.JSONDecodeError as exc:
        err.write(f"recheck: not valid JSON ({exc})\n")
        return EXIT_VERIFY
    if not isinstance(data, dict):
        err.write("recheck: expected a JSON object\n")
        return EXIT_VERIFY
    cert = data.get("certificate", data)
    lam = cfg.lam
    if "lambda" in data:
        try:
            lam = parse_field(data["lambda"])
            P = gz_halfspaces(lam, cfg.lattice_obj)
        except (ValueError, FieldDomainError) as exc:
            err.write(f"recheck: bad lambda ({exc})\n")
            return EXIT_VERIFY
    else:
        P = gz_halfspaces(lam, cfg.lattice_obj)
    checks = _recheck_polytope(P, cert)
    ok = all(checks.values())
    if cfg.fmt == "json":
        _dump({"lambda": _fmt(lam), "checks": checks, "accepted": ok}, out)
    else:
        for name, v in checks.items():
            out.write(f"{'PASS' if v else 'FAIL'} {name}\n")
        out.write("certificate accepted\n" if ok else "certificate REJECTED\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_width(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if cfg.recheck:
        return _recheck_file(cfg, out, err)
    try:
        d, ok = _width_payload(cfg)
    except CertificateError as exc:
        err.write(f"certificate failure: {exc}\n")
        return EXIT_VERIFY
    if cfg.fmt == "json":
        _dump(d, out)
    else:
        c = d["certificate"]
        out.write(f"lambda       = {d['lambda']}\n")
        out.write(f"lower bound  = {d['lower_bound']}  (certified)\n")
        out.write(f"upper bound  = {d['upper_bound']}  (quoted: {d['upper_bound_citation']})\n")
        out.write(f"verdict      = {'tight' if d['tight'] else 'not tight'}\n")
        out.write(f"vertex       = ({', '.join(c['vertex'])})\n")
        out.write(f"directions   = {c['directions']}\n")
        out.write(f"l            = {c['l']}\n")
        for name, v in c["checks"].items():
            out.write(f"  {'PASS' if v else 'FAIL'} {name}\n")
        out.write(f"independent recheck: {'accepted' if all(d['recheck'].values()) else 'REJECTED'}\n")
        out.write(f"note: {d['note']}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_report(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    if cfg.recheck:
        return _recheck_file(cfg, out, err)
    try:
        d, ok = _width_payload(cfg)
    except CertificateError as exc:
        err.write(f"certificate failure: {exc}\n")
        return EXIT_VERIFY
    verts = [tuple(parse_field(t) for t in v) for v in d["vertices"]]
    cmp = compare_with_published(verts, cfg.lam)
    d["dimension"] = affine_dimension(verts)
    d["f_vector"] = {"vertices": len(verts), "edges": len(d["edges"])}
    d["published_table"] = {"matched_rows": list(cmp.matched), "missing_rows": list(cmp.missing)}
    if cfg.fmt == "plain":
        for k in ("lambda", "lower_bound", "upper_bound", "tight", "dimension", "f_vector"):
            out.write(f"{k}: {d[k]}\n")
    else:
        _dump(d, out)
    return EXIT_OK if ok else EXIT_VERIFY


def _sample_summary(cfg: RunConfig, gz: np.ndarray, casimir: np.ndarray, cas0: float) -> dict:
    P = gz_halfspaces(cfg.lam)
    lamf = float(cfg.lam)
    viol = np.stack([-h.float_slack(gz) for h in P.halfspaces], axis=-1)
    slack = cfg.tolerance * lamf
    kirwan_ok = np.all(viol[:, :3] <= slack, axis=-1)
    return {
        "samples": int(len(gz)),
        "max_violation": float(viol.max()),
        "allowed_violation": slack,
        "kirwan_fraction": float(np.mean(kirwan_ok)),
        "interlacing_fraction": float(np.mean(verify_interlacing(gz, slack))),
        "max_casimir_drift": float(np.max(np.abs(casimir / cas0 - 1.0))),
    }


def cmd_sample(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    from .g2_model import (
        ModelConstructionError,
        build_model,
        gz_value,
        orbit_seed,
        sample_orbits,
        write_samples_csv,
    )

    try:
        model = build_model()
    except ModelConstructionError as exc:
        err.write(f"model construction failed: {exc}\n")
        return EXIT_MODEL
    seed_point = orbit_seed(model, float(cfg.lam))
    pts = sample_orbits(model, seed_point, cfg.seed, cfg.samples, cfg.steps)
    gz = gz_value(model, pts)
    summary = _sample_summary(cfg, gz, np.asarray(pts.casimir), float(seed_point.casimir))
    if cfg.fmt == "csv":
        write_samples_csv(out, gz, pts.casimir)
    elif cfg.fmt == "json":
        _dump({"lambda": _fmt(cfg.lam), "seed": cfg.seed, "steps": cfg.steps, **summary}, out)
    for k, v in summary.items():
        (out if cfg.fmt == "plain" else err).write(f"{k}: {v}\n")
    ok = summary["max_violation"] <= summary["allowed_violation"]
    return EXIT_OK if ok else EXIT_VERIFY


# -- verify -------------------------------------------------------------------

GroupResult = tuple[bool, str]


def _group_field(cfg: RunConfig) -> GroupResult:
    rng = random.Random(cfg.seed)

    def rand() -> FieldElement:
        return FieldElement(
            Fraction(rng.randint(-50, 50), rng.randint(1, 20)),
            Fraction(rng.randint(-50, 50), rng.randint(1, 20)),
        )

    n = 300
    for _ in range(n):
        x, y, z = rand(), rand(), rand()
        if (x + y) + z != x + (y + z) or (x * y) * z != x * (y * z):
            return False, "associativity"
        if x * (y + z) != x * y + x * z:
            return False, "distributivity"
        if x and x * x.inverse() != 1:
            return False, "inverse"
        if parse_field(format_field(x)) != x:
            return False, "text round trip"
        d = float(x) - float(y)
        if abs(d) > 1e-9 and (x < y) != (d < 0):
            return False, "ordering disagrees with floating point"
    return True, f"{n} random triples"


def _group_interlacing(cfg: RunConfig) -> GroupResult:
    rng = np.random.default_rng(cfg.seed)
    n = 10_000
    A = rng.normal(size=(n, 3, 3)) + 1j * rng.normal(size=(n, 3, 3))
    H = A + np.conj(np.swapaxes(A, -1, -2))
    H -= np.trace(H, axis1=-2, axis2=-1).real[:, None, None] * np.eye(3) / 3
    norms = np.linalg.norm(H, axis=(-2, -1))
    from .lie_data import interlacing_slacks

    s = interlacing_slacks(thimm_gz(H))
    worst = float(np.max(-s.min(axis=-1) / norms))
    return worst <= 1e-10, f"{n} matrices, worst relative violation {max(worst, 0.0):.1e}"


def _group_table1(cfg: RunConfig, geo) -> GroupResult:
    P, V, _ = geo
    cmp = compare_with_published(V.vertices, cfg.lam)
    return cmp.ok, f"{len(cmp.matched)}/13 published rows are vertices, missing {list(cmp.missing)}"


def _group_edges(cfg: RunConfig, geo) -> GroupResult:
    P, V, edges = geo
    target = cfg.lam / SQRT3
    lmin = min(e.length for e in edges)
    degrees = [sum(1 for e in edges if i in (e.v0, e.v1)) for i in range(len(V))]
    dim = affine_dimension(V.vertices)
    ok = lmin == target and min(degrees) >= 5 and dim == 5
    return ok, f"dimension {dim}, min length {_fmt(lmin)} (expected {_fmt(target)}), min degree {min(degrees)}"


def _group_smoothness(cfg: RunConfig, geo) -> GroupResult:
    P, V, edges = geo
    sm = smooth_chamber_vertices(P, V, edges)
    chamber = [i for i, v in enumerate(V.vertices) if in_chamber(P, v)]
    return bool(sm), f"{len(sm)} of {len(chamber)} chamber vertices smooth"


def _group_certificate(cfg: RunConfig, geo) -> GroupResult:
    P, V, edges = geo
    try:
        l, cert = build_width_certificate(P, V, edges)
    except CertificateError as exc:
        return False, str(exc)
    rc = _recheck_polytope(P, cert.to_dict())
    ok = cert.valid and all(rc.values()) and l == cfg.lam / SQRT3
    return ok, f"l = {_fmt(l)}, builder checks {cert.valid}, recheck {all(rc.values())}"


def _group_model(cfg: RunConfig) -> GroupResult:
    from .g2_model import (
        ModelConstructionError,
        bracket_closure_residual,
        build_model,
        gz_value,
        jacobi_residual,
        orbit_dimension,
        orbit_seed,
        root_alignment_error,
        sample_orbits,
    )

    try:
        model = build_model()
    except ModelConstructionError as exc:
        return False, f"construction failed: {exc}"
    dims = model.dims
    xi = orbit_seed(model, float(cfg.lam))
    odim = orbit_dimension(model, xi.xi)
    align = root_alignment_error(model)
    closure = bracket_closure_residual(model)
    jac = jacobi_residual(model)
    pts = sample_orbits(model, xi, cfg.seed, 200, cfg.steps)
    summary = _sample_summary(cfg, gz_value(model, pts), np.asarray(pts.casimir), float(xi.casimir))
    ok = (
        dims == {"g2": 14, "su3": 8, "cartan": 2}
        and odim == 10
        and align <= 1e-8
        and closure <= 1e-9
        and jac <= 1e-8
        and summary["max_violation"] <= summary["allowed_violation"]
    )
    return ok, (
        f"dims {dims['g2']}/{dims['su3']}/{dims['cartan']}, orbit dim {odim}, "
        f"root alignment {align:.1e}, 200 samples max violation {summary['max_violation']:.1e}"
    )


def cmd_verify(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    geo = _geometry(cfg)
    groups: list[tuple[str, Callable[[], GroupResult]]] = [
        ("field", lambda: _group_field(cfg)),
        ("interlacing", lambda: _group_interlacing(cfg)),
        ("table1", lambda: _group_table1(cfg, geo)),
        ("edges", lambda: _group_edges(cfg, geo)),
        ("smoothness", lambda: _group_smoothness(cfg, geo)),
        ("certificate", lambda: _group_certificate(cfg, geo)),
        ("model", lambda: _group_model(cfg)),
    ]
    results = {}
    for name, fn in groups:
        ok, detail = fn()
        results[name] = {"pass": ok, "detail": detail}
        if cfg.fmt != "json":
            out.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
    if cfg.fmt == "json":
        _dump(results, out)
    failed = [name for name, r in results.items() if not r["pass"]]
    if failed:
        err.write(f"first failing group: {failed[0]}\n")
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS: dict[str, Callable[[RunConfig, TextIO, TextIO], int]] = {
    "polytope": cmd_polytope,
    "edges": cmd_edges,
    "width": cmd_width,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(
    argv: Sequence[str] | None = None,
    out: TextIO | None = None,
    err: TextIO | None = None,
    environ=None,
) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    args = list(sys.argv[1:] if argv is None else argv)
    # "--lambda -1/1": argparse would take the value for an option
    for i in range(len(args) - 1):
        if args[i] == "--lambda" and args[i + 1].startswith("-"):
            args[i : i + 2] = [f"--lambda={args[i + 1]}", ""]
    args = [a for a in args if a != ""]
    try:
        ns = parser.parse_args(args)
        cfg = RunConfig.from_namespace(ns, environ)
    except UsageError as exc:
        err.write(f"g2gz: usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return COMMANDS[cfg.command](cfg, out, err)
    except UsageError as exc:
        err.write(f"g2gz: usage error: {exc}\n")
        return EXIT_USAGE


def run() -> None:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    sys.exit(main())
