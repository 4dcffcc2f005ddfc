"""Command-line entry point: ``cokernels {bn,prob,verify,simulate,enumerate,rerun}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from . import formulas as fm
from .errors import ContextMismatchError, GuardExceededError, TruncationError
from .fields import make_field, prime_power
from .oracle import (
    CokerTypeIs,
    CokerVanishes,
    CorankIs,
    EventSpec,
    PPartIs,
    enumerate_event,
    mc_estimate,
)
from .partitions import parse_partition
from .poly import Poly
from .qseries import RationalInterval, bn_coeffs, limit_product
from .rings import RingCtx
from .verify import DEFAULT_SAMPLES, DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"command": self.command, "params": dict(sorted(self.params.items()))}


# -- value encoding ----------------------------------------------------------------------

def frac(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def encode(value):
    if isinstance(value, RationalInterval):
        return value.to_json()
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return frac(value)
    raise TypeError(f"cannot encode {type(value).__name__}")


def _flatten(prefix: str, obj, rows: list):
    if isinstance(obj, dict):
        for k in obj:
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, obj))


def render(config: RunConfig, result: dict, fmt: str) -> str:
    doc = {"config": config.to_json(), "version": __version__, "result": result}
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    rows: list = []
    _flatten("", json.loads(json.dumps(doc, sort_keys=True)), rows)
    for k, v in rows:
        w.writerow([k, json.dumps(v) if isinstance(v, bool) or v is None else v])
    return buf.getvalue()


# -- argument parsing helpers ------------------------------------------------------------

def _split_top(text: str) -> list[str]:
    """Split on commas outside brackets."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_poly(text: str, ctx) -> Poly:
    """Little-endian coefficients; '[a,b]' is an extension-field element by its F_p digits."""
    F = ctx.field
    coeffs = []
    for tok in _split_top(text):
        if tok.startswith("["):
            x = F.from_coeffs(int(c) for c in tok.strip("[]").split(","))
            coeffs.append(x if ctx is F else ctx.lift(x))
        else:
            coeffs.append(ctx.from_int(int(tok)))
    return Poly(ctx, tuple(coeffs))


def parse_points(text: str) -> list[tuple[int, tuple]]:
    """'d=1,nu=;d=2,nu=2,1' -> [(1, ()), (2, (2, 1))]."""
    out = []
    for item in filter(None, (s.strip() for s in text.split(";"))):
        if not item.startswith("d=") or ",nu=" not in item:
            raise UsageError(f"bad point spec {item!r}; expected d=<deg>,nu=<partition>")
        d_text, nu_text = item[2:].split(",nu=", 1)
        out.append((int(d_text), tuple(parse_partition(nu_text))))
    return out


def make_ctx(ring: str, q: int | None, p: int | None, e: int, level: int):
    if q is not None:
        p, e = prime_power(q)
    if p is None:
        raise UsageError("give --q or --p")
    if ring == "field":
        return make_field(p, e)
    if ring == "padic":
        if e != 1:
            raise UsageError("padic rings have prime residue field")
        return RingCtx("padic", make_field(p, 1), level)
    if ring == "equalchar":
        return RingCtx("equalchar", make_field(p, e), level)
    if ring == "galois":
        F = make_field(p, e)
        return RingCtx("galois", F, level, F.modulus)
    raise UsageError(f"unknown ring kind {ring!r}")


PREDICATES = {"vanishes", "type", "ppart", "corank"}


def parse_condition(text: str, ctx):
    """'POLY:PRED[:ARG]' with PRED in vanishes, type, ppart, corank."""
    bits = text.split(":")
    if len(bits) not in (2, 3) or bits[1] not in PREDICATES:
        raise UsageError(f"bad condition {text!r}; expected POLY:{{{','.join(sorted(PREDICATES))}}}[:ARG]")
    P = parse_poly(bits[0], ctx)
    arg = bits[2] if len(bits) == 3 else ""
    kind = bits[1]
    if kind == "vanishes":
        return P, CokerVanishes()
    if kind == "type":
        return P, CokerTypeIs(parse_partition(arg))
    if kind == "ppart":
        return P, PPartIs(parse_partition(arg))
    return P, CorankIs(int(arg))


# -- commands --------------------------------------------------------------------------

def cmd_bn(a) -> tuple[dict, bool]:
    _check_q(a.q)
    coeffs = bn_coeffs(a.q, a.d, a.n_max)
    tol = Fraction(a.tol)
    num = limit_product(a.q, a.d, tol / 2)
    den = limit_product(a.q, 1, tol / 2)
    limit = RationalInterval(num.lo / den.hi, num.hi / den.lo)
    rows = [{"n": n, "b": frac(b)} for n, b in enumerate(coeffs)]
    return {"rows": rows, "limit": limit.to_json()}, True


def _check_q(q):
    try:
        prime_power(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError(f"--id {a.id} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def cmd_prob(a) -> tuple[dict, bool]:
    fid = a.id
    if fid not in fm.REGISTRY:
        raise UsageError(f"unknown formula id {fid!r}; known: {', '.join(sorted(fm.REGISTRY))}")
    _need(a, "q")
    _check_q(a.q)
    lam = parse_partition(a.partition or "")
    tol = Fraction(a.tol)
    if fid == "prop-fw":
        _need(a, "n")
        value = fm.prop_fw_prob(a.q, a.n, lam)
    elif fid == "thm-main1":
        _need(a, "n", "d")
        value = fm.thm_main1_prob(a.q, a.d, a.n, lam)
    elif fid == "lemma-count":
        _need(a, "n", "N", "l")
        value = fm.fw_lift_count(a.q, a.N, a.n, lam, a.l)
    elif fid == "boreico":
        _need(a, "n", "points")
        value = fm.boreico_transfer(a.q, a.n, parse_points(a.points))
    elif fid == "cl2":
        _need(a, "l")
        value = fm.cl2_corank_prob(a.q, a.l, tol)
    elif fid == "corank":
        _need(a, "n", "l")
        value = fm.corank_count(a.q, a.n, a.l)
    elif fid == "conj-limit":
        value = fm.conj_limit(fm.LimitSpec(a.q, tuple(parse_points(a.points or ""))), tol)
    elif fid == "thm-main3x":
        value = fm.thm_main3x_limit(a.q, _degrees(a.degrees), lam, tol)
    elif fid == "thm-main3x-finite":
        _need(a, "n")
        value = fm.thm_main3x_finite(a.q, a.n, _degrees(a.degrees), lam)
    elif fid == "cl-finite":
        _need(a, "m")
        value = fm.cl_finite_level_prob(a.q, a.m, lam)
    else:  # bn
        _need(a, "n", "d")
        value = bn_coeffs(a.q, a.d, a.n)[a.n]
    return {"id": fid, "provenance": fm.provenance(fid), "value": encode(value)}, True


def _degrees(text):
    return [int(x) for x in (text or "").split(",") if x.strip()]


def _spec(a) -> EventSpec:
    ctx = make_ctx(a.ring, a.q, a.p, a.e, a.level)
    conds = tuple(parse_condition(c, ctx) for c in (a.cond or []))
    return EventSpec(ctx, a.n, conds)


def cmd_enumerate(a) -> tuple[dict, bool]:
    spec = _spec(a)
    hits, total = enumerate_event(spec, a.guard, a.workers)
    return {"spec": spec.to_json(), "method": "enumerate", "hits": hits, "total": total,
            "estimate": frac(Fraction(hits, total))}, True


def cmd_simulate(a) -> tuple[dict, bool]:
    spec = _spec(a)
    res = mc_estimate(spec, a.samples, a.seed, a.chunk_size, a.workers)
    return {"spec": spec.to_json(), "method": "mc", **res.to_json()}, True


def cmd_verify(a) -> tuple[dict, bool]:
    names = [s.strip() for s in a.suite.split(",")]
    results, passed = {}, True
    for name in names:
        if name != "all" and name not in SUITES:
            raise UsageError(f"unknown suite {name!r}; known: all, {', '.join(SUITES)}")
        rep = run_suite(name, a.guard, a.samples, a.seed, a.workers)
        results.update(rep["suites"])
        passed &= rep["passed"]
    summary = {s: {"checks": len(c), "failed": sum(not x["ok"] for x in c)} for s, c in results.items()}
    return {"passed": passed, "summary": summary, "suites": results}, passed


COMMANDS = {"bn": cmd_bn, "prob": cmd_prob, "verify": cmd_verify,
            "simulate": cmd_simulate, "enumerate": cmd_enumerate}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cokernels", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--guard", type=int, default=None,
                       help="enumeration size guard (env COKERNELS_ENUM_GUARD)")

    p = sub.add_parser("bn", help="coefficients b_n(d) and their limit")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--tol", default="1/1000000000")
    common(p)

    p = sub.add_parser("prob", help="evaluate a closed-form formula")
    p.add_argument("--id", required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--partition")
    p.add_argument("--points", help="'d=1,nu=;d=2,nu=1'")
    p.add_argument("--degrees", help="comma-separated degrees of P_1..P_{r-1}")
    p.add_argument("--tol", default="1/1000000000")
    common(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common(p)

    for name in ("simulate", "enumerate"):
        p = sub.add_parser(name, help=f"{name} a joint cokernel event")
        p.add_argument("--ring", choices=("field", "padic", "equalchar", "galois"), default="field")
        p.add_argument("--q", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--e", type=int, default=1)
        p.add_argument("--level", type=int, default=1)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--cond", action="append", help="POLY:PRED[:ARG], repeatable")
        if name == "simulate":
            p.add_argument("--samples", type=int, required=True)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
            p.add_argument("--chunk-size", type=int, default=4096)
        common(p)

    p = sub.add_parser("rerun", help="re-run the config embedded in a JSON output")
    p.add_argument("path")
    return ap


def _config_from(ns: argparse.Namespace) -> RunConfig:
    params = {k: v for k, v in vars(ns).items() if k not in ("command", "workers")}
    return RunConfig(ns.command, params)


def _namespace_from(config: dict) -> argparse.Namespace:
    ns = argparse.Namespace(command=config["command"], workers=1, **config["params"])
    return ns


def execute(ns: argparse.Namespace) -> tuple[str, int]:
    config = _config_from(ns)
    result, ok = COMMANDS[ns.command](ns)
    return render(config, result, ns.format), EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.command == "rerun":
            with open(ns.path) as fh:
                doc = json.load(fh)
            ns = _namespace_from(doc.get("config", doc))
        if getattr(ns, "guard", None) is None and os.environ.get("COKERNELS_ENUM_GUARD"):
            ns.guard = int(os.environ["COKERNELS_ENUM_GUARD"])
        text, code = execute(ns)
    except (UsageError, ValueError, KeyError, TypeError, ContextMismatchError,
            TruncationError, GuardExceededError) as exc:
        print(f"cokernels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
