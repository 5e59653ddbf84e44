"""Command-line front end.

Exit status: 0 when the queried claim holds (or the command succeeded),
1 when it is refuted, 2 on errors and exhausted resource caps.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import constructions as cons
from .errors import CapExceeded
from .io import dumps, load, load_certificate, load_latin, load_tensor
from .latin import LatinHypercube, cyclic, lab_square, linear_hypercube, p_of_h
from .permanent import count_transversals, mixed_transversal_exists, permanent1, permanent_s
from .polytope import birkhoff_decompose, is_vertex, transversal_cover
from .repro import REGISTRY, run_check
from .species import canonical_form, species_equivalent
from .tensor import format_fraction, permutation_violation, polystochastic_violation

OK, REFUTED, ERROR = 0, 1, 2


class Output:
    """Collects a human line and a machine dict; prints one of them."""

    def __init__(self, as_json: bool, path: str | None = None):
        self.as_json = as_json
        self.path = path

    def emit(self, text: str, data) -> None:
        out = json.dumps(data, separators=(",", ":")) + "\n" if self.as_json else text.rstrip("\n") + "\n"
        if self.path:
            Path(self.path).write_text(out)
        else:
            sys.stdout.write(out)


def _frac(x: Fraction) -> str:
    return format_fraction(x)


# ---------------------------------------------------------------------------
# subcommands


def cmd_permanent(args, out: Output) -> int:
    A = load_tensor(args.file)
    if args.s is None or args.s == 1:
        res = permanent1(A, args.threads)
    else:
        res = permanent_s(A, args.s)
    data = {"value": _frac(res.value), "diagonal_count": res.diagonal_count,
            "witness": res.witness.to_json() if res.witness else None}
    out.emit(_frac(res.value), data)
    return OK


def cmd_transversals(args, out: Output) -> int:
    H = load_latin(args.file)
    count, found = count_transversals(H, enumerate=args.list)
    data = {"count": count}
    text = str(count)
    if found is not None:
        data["transversals"] = [t.to_json() for t in found]
        text += "".join("\n" + " ".join(str(tuple(c)) for c in t.cells) for t in found)
    out.emit(text, data)
    return OK


def cmd_mixed(args, out: Output) -> int:
    Hs = [load_latin(f) for f in args.files]
    w = mixed_transversal_exists(Hs)
    out.emit("none" if w is None else " ".join(str(tuple(c)) for c in w.cells),
             {"exists": w is not None, "witness": w.to_json() if w else None})
    return OK


def cmd_verify(args, out: Output) -> int:
    what = args.what
    if what == "certificate":
        cert = load_certificate(args.file)
        why = cert.violation()
        extra = {"terms": len(cert.terms), "s": cert.s, "scale": _frac(cert.scale)}
    else:
        A = load_tensor(args.file)
        if what == "polystochastic":
            why = polystochastic_violation(A, args.s)
            extra = {"s": args.s}
        elif what == "permutation":
            why = permutation_violation(A, args.s)
            extra = {"s": args.s}
        else:
            rep = is_vertex(A)
            why = None if rep.is_vertex else f"not a vertex: freedom dimension {rep.freedom_dim}"
            extra = {"freedom_dim": rep.freedom_dim}
    verdict = "pass" if why is None else "fail"
    out.emit(verdict if why is None else f"fail: {why}",
             {"check": what, "pass": why is None, "reason": why, **extra})
    return OK if why is None else REFUTED


def cmd_construct(args, out: Output) -> int:
    kind = args.kind
    a = args.args
    try:
        if kind == "cyclic":
            k, n = map(int, a)
            obj = cyclic(k, n)
        elif kind == "linear":
            k, n, s, *coeffs = map(int, a)
            obj = linear_hypercube(k, n, s, coeffs)
        elif kind == "lab":
            n, i, j = map(int, a)
            obj = lab_square(n, i, j)
        elif kind == "a6":
            obj = cons.a6_certificate() if args.certificate else cons.a6()
        elif kind == "mols":
            (n,) = map(int, a)
            L1, L2 = cons.mols_pair(n)
            return _emit_many(out, [L1, L2], args.format)
        elif kind == "hull-witness":
            d, n = map(int, a)
            obj = cons.hull_witness(d, n)
        else:  # zero-family
            d, n = map(int, a)
            spec = cons.ZeroFamilySpec(d, n, args.r, args.window, args.axis)
            mode = "sample" if args.sample else "enumerate"
            fam = cons.zero_family(spec, mode, args.sample or 0, args.seed)
            return _emit_many(out, fam, args.format)
    except ValueError as e:
        if "unpack" in str(e) or "invalid literal" in str(e):
            raise ValueError(f"construct {kind}: bad arguments {a}") from e
        raise
    if args.permutation and isinstance(obj, LatinHypercube):
        obj = p_of_h(obj)
    out.emit(dumps(obj, args.format) if args.format == "text" else dumps(obj), obj.to_json())
    return OK


def _emit_many(out: Output, items, fmt: str) -> int:
    if fmt == "text":
        text = "\n\n\n".join(h.to_text().rstrip("\n") for h in items)
    else:
        text = "\n".join(json.dumps(h.to_json(), separators=(",", ":")) for h in items)
    out.emit(text, [h.to_json() for h in items])
    return OK


def cmd_decompose(args, out: Output) -> int:
    A = load_tensor(args.file)
    if args.method == "birkhoff":
        cert = birkhoff_decompose(A)
        out.emit(json.dumps(cert.to_json()), cert.to_json())
        return OK
    cover = transversal_cover(A)
    if cover is None:
        out.emit("none", {"cover": None})
        return REFUTED
    data = {"parts": [Q.to_json() for Q in cover.parts], "mate": cover.mate.to_json()}
    out.emit(cover.mate.to_text(), data)
    return OK


def cmd_scan(args, out: Output) -> int:
    V = load_tensor(args.file)
    eps = [Fraction(e) for e in args.eps.split(",")] if args.eps else cons.DEFAULT_EPSILONS
    res = cons.perturbation_scan(V, eps, args.threads)
    rows = [f"{_frac(e)}\t{_frac(v)}\t{'<' if s < 0 else '>' if s > 0 else '='}"
            for e, v, s in zip(res.epsilons, res.values, res.signs())]
    text = f"baseline\t{_frac(res.baseline)}\n" + "\n".join(rows)
    out.emit(text, {"baseline": _frac(res.baseline),
                    "epsilons": [_frac(e) for e in res.epsilons],
                    "values": [_frac(v) for v in res.values],
                    "signs": res.signs()})
    return OK


def cmd_species(args, out: Output) -> int:
    if args.action == "equiv":
        if len(args.args) != 2:
            raise ValueError("species equiv needs two files")
        X1, X2 = (load(f) for f in args.args)
        same = species_equivalent(X1, X2)
        out.emit("equivalent" if same else "inequivalent", {"equivalent": same})
        return OK if same else REFUTED
    if args.action == "canonical":
        (f,) = args.args
        H = canonical_form(load(f))
        out.emit(H.to_text(), H.to_json())
        return OK
    n, d = map(int, args.args)
    count = cons.count_zero_species(n, d)
    out.emit(str(count), {"n": n, "d": d, "species": count})
    return OK


def cmd_repro(args, out: Output) -> int:
    if args.claim == "list":
        rows = [f"{c.criterion:>2}  {c.claim:<22} {c.title}" for c in REGISTRY.values()]
        out.emit("\n".join(rows), [{"claim": c.claim, "criterion": c.criterion, "title": c.title}
                                   for c in REGISTRY.values()])
        return OK
    claims = list(REGISTRY) if args.claim == "all" else [args.claim]
    results = [run_check(c, args.threads) for c in claims]
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.claim}: {r.summary}" for r in results]
    out.emit("\n".join(lines), [{"claim": r.claim, "pass": r.passed, "summary": r.summary}
                                for r in results])
    return OK if all(r.passed for r in results) else REFUTED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="worker processes for the permanent")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS,
                        help="write the result to this file")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="polystoch", description=__doc__.splitlines()[0],
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    s = sub.add_parser("permanent", help="exact s-permanent of a tensor")
    s.add_argument("--s", type=int, default=None)
    s.add_argument("file")
    s.set_defaults(func=cmd_permanent)

    s = sub.add_parser("transversals", help="count transversals of a Latin hypercube")
    s.add_argument("--list", action="store_true", help="also list them")
    s.add_argument("file")
    s.set_defaults(func=cmd_transversals)

    s = sub.add_parser("mixed", help="search for a mixed transversal")
    s.add_argument("files", nargs="+")
    s.set_defaults(func=cmd_mixed)

    s = sub.add_parser("verify", help="check a predicate or a hull certificate")
    s.add_argument("what", choices=["polystochastic", "permutation", "vertex", "certificate"])
    s.add_argument("file")
    s.add_argument("--s", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("construct", help="build a named object")
    s.add_argument("kind", choices=["cyclic", "linear", "zero-family", "lab", "a6", "mols",
                                    "hull-witness"])
    s.add_argument("args", nargs="*")
    s.add_argument("--format", choices=["json", "text"], default="json")
    s.add_argument("--permutation", action="store_true",
                   help="emit the permutation matrix of a Latin hypercube")
    s.add_argument("--certificate", action="store_true", help="a6: emit the hull certificate")
    s.add_argument("--r", type=int, default=None)
    s.add_argument("--window", type=int, default=None)
    s.add_argument("--axis", type=int, default=0)
    s.add_argument("--sample", type=int, default=None, help="draw this many random members")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("decompose", help="Birkhoff or transversal-cover decomposition")
    s.add_argument("method", choices=["birkhoff", "transversal-cover"])
    s.add_argument("file")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("scan", help="permanents along a segment from the uniform matrix")
    s.add_argument("--eps", default=None, help="comma-separated rationals, e.g. 1/100,1/10")
    s.add_argument("file")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("species", help="species equivalence, canonical form, zero-family count")
    s.add_argument("action", choices=["equiv", "canonical", "count"])
    s.add_argument("args", nargs="+")
    s.set_defaults(func=cmd_species)

    s = sub.add_parser("repro", help="run a named acceptance check ('list', 'all' or a claim id)")
    s.add_argument("claim", choices=["list", "all", *REGISTRY])
    s.set_defaults(func=cmd_repro)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("json", False), ("threads", None), ("output", None), ("verbose", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Output(args.json, args.output)
    try:
        return args.func(args, out)
    except CapExceeded as e:
        print(f"polystoch: {e}", file=sys.stderr)
        return ERROR
    except (ValueError, KeyError, OSError, json.JSONDecodeError, ArithmeticError) as e:
        print(f"polystoch: error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
