"""Command-line front end: ``lgsing <command> [problem-file] [options]``.

Every invocation prints one JSON report and exits with 0 (success), 1 (an
identity or invariant fails), 2 (malformed input) or 3 (resource cap reached).
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import (ContextMismatch, ContractionInvalid, IdentityViolation, LGError, NotClosed,
                     ParseError, ResourceCapExceeded, VariableCollision, WindowTooSmall)
from .koszul import KoszulModule, rhom_trivial_dims, u_cone_check
from .mf import (GradedHom, MatrixFactorization, box_product, hom_cohomology_dims, identity_hom,
                 is_null_homotopic)
from .orlov import contraction_witness, fold, fold_monoidality_report, stabilize
from .poly import INFINITE, RingCtx, resource_caps
from .problem import ProblemFile, Workspace, load_problem
from .sing import (is_perfect, milnor_number, point_case_report, stable_hom_dims,
                   thom_sebastiani_check, u_torsion_order_point)

SCHEMA = "lgsing-report/1"
COMMANDS = ("validate", "hom", "stable-hom", "null-homotopy", "box", "fold", "monoidality",
            "contraction", "stabilize", "perfect", "u-torsion", "rhom-point", "u-cone",
            "milnor", "ts-check", "point-report")
EXIT = {"ok": 0, "violation": 1, "parse-error": 2, "resource-cap": 3}


class CommandFailed(Exception):
    def __init__(self, status, message, **extra):
        super().__init__(message)
        self.status = status
        self.extra = extra


def _num(x):
    return "INFINITE" if x is INFINITE else x


def _dims(sd):
    return {"even": _num(sd.even), "odd": _num(sd.odd)}


def _graded(d):
    return [[k, _num(v)] for k, v in sorted(d.items())]


def _mf_json(E: MatrixFactorization):
    return {"ranks": [E.rank0, E.rank1], "f": str(E.lg.f),
            "d0": E.d0.to_strings(), "d1": E.d1.to_strings()}


def _koszul_json(M: KoszulModule):
    return {"lo": M.lo, "ranks": list(M.ranks), "f": str(M.lg.f),
            "d": [m.to_strings() for m in M.d], "h": [m.to_strings() for m in M.h]}


def build_parser():
    p = argparse.ArgumentParser(prog="lgsing", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="problem file (TOML)")
    p.add_argument("--field", help="Q or F<p>")
    p.add_argument("--modulus", type=int)
    p.add_argument("--vars", help="comma-separated variable names")
    p.add_argument("--order", choices=("degrevlex", "deglex", "lex"))
    p.add_argument("--window", type=int, help="point-case window N (degrees within [-2N, 2N])")
    p.add_argument("--cap", type=int, help="Groebner pair budget; resolution steps for stabilize")
    p.add_argument("--seed", type=int, help="recorded in the report; the core is deterministic")
    p.add_argument("--f", dest="f", help="potential (overrides the file)")
    p.add_argument("--g", dest="g", help="second potential for ts-check")
    p.add_argument("--object", help="object name")
    p.add_argument("--source", help="source object name")
    p.add_argument("--target", help="target object name")
    p.add_argument("--left", help="left factor")
    p.add_argument("--right", help="right factor")
    p.add_argument("--morphism", help="morphism object name")
    return p


class _ArgParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgParseError(message)


def _workspace(args) -> Workspace:
    if args.file:
        try:
            pf = load_problem(args.file)
        except OSError as exc:
            raise ParseError(f"cannot read {args.file}: {exc.strerror}") from None
    else:
        pf = ProblemFile({}, "0")
    if args.f is not None:
        pf = ProblemFile(pf.ring, args.f, pf.objects, pf.params)
    overrides = {"field": args.field, "modulus": args.modulus, "order": args.order,
                 "vars": None if args.vars is None else [v.strip() for v in args.vars.split(",") if v.strip()]}
    return Workspace(pf, overrides)


def _param(args, ws, name, default=None):
    value = getattr(args, name, None)
    if value is None and ws is not None:
        value = ws.pf.params.get(name)
    return default if value is None else value


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ParseError(f"--{n} is required for {args.command}")
    return [getattr(args, n) for n in names]


def _as_mf(obj, name):
    if isinstance(obj, KoszulModule):
        return fold(obj)
    if isinstance(obj, MatrixFactorization):
        return obj
    raise ParseError(f"object {name!r} is not a factorization or koszul module")


def _as_koszul(obj, name):
    if not isinstance(obj, KoszulModule):
        raise ParseError(f"object {name!r} is not a koszul module")
    return obj


def _run(args, report):
    cmd = args.command
    if cmd == "point-report":
        field = args.field or "Q"
        from .poly import Field
        try:
            fld = Field.parse(field, args.modulus)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        r = point_case_report(fld, args.window or 5)
        report.update(dims=_dims(r.stable_dims), perfect=r.perfect.perfect,
                      rhom=_graded(r.rhom_dims), u_torsion=r.u_torsion.verdict)
        report["notes"] += r.notes
        if not r.consistent():
            raise CommandFailed("violation", "inconsistent point-case report")
        return
    if cmd == "milnor":
        ws = _workspace(args)
        f = ws.lg.f
        try:
            mu = milnor_number(f)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        report["milnor"] = _num(mu)
        return
    if cmd == "ts-check":
        ws = _workspace(args)
        f = ws.lg.f
        if args.g is None:
            raise ParseError("--g is required for ts-check")
        g = ws._poly(args.g, "--g")
        fv, gv = f.support_vars(), g.support_vars()
        if set(fv) & set(gv):
            raise ParseError("f and g share variables")
        cf = RingCtx(ws.ctx.field, tuple(v for v in ws.ctx.vars if v in fv), ws.ctx.order)
        cg = RingCtx(ws.ctx.field, tuple(v for v in ws.ctx.vars if v not in fv), ws.ctx.order)
        facs = None
        if args.left and args.right:
            facs = (_as_mf(ws.get(args.left), args.left), _as_mf(ws.get(args.right), args.right))
        fr, gr = cf.parse(str(f)), cg.parse(str(g))
        if milnor_number(fr) is INFINITE or milnor_number(gr) is INFINITE:
            raise CommandFailed("violation", "Thom-Sebastiani check needs isolated singularities")
        r = thom_sebastiani_check(fr, gr, facs)
        report.update(milnor={"f": r.mu_f, "g": r.mu_g, "sum": r.mu_sum}, multiplicative=r.multiplicative)
        if r.kunneth:
            report["dims"] = _dims(r.kunneth[0])
            report["kunneth_dims"] = _dims(r.kunneth[1])
        if not r.passed:
            raise CommandFailed("violation", "Thom-Sebastiani check failed")
        return

    ws = _workspace(args)
    if cmd == "validate":
        objs = {}
        for name in ws.names():
            try:
                obj = ws.get(name)
            except IdentityViolation as exc:
                raise CommandFailed("violation", f"object {name!r}: {exc}", object=name,
                                    identity=exc.where, degree=exc.degree,
                                    entry=[exc.entry[0], exc.entry[1], str(exc.entry[2])])
            objs[name] = type(obj).__name__
        report["objects"] = objs
        return
    if cmd in ("hom", "stable-hom"):
        src, tgt = _need(args, "source", "target")
        a, b = ws.get(src), ws.get(tgt)
        dims = (stable_hom_dims(a, b) if cmd == "stable-hom"
                else hom_cohomology_dims(_as_mf(a, src), _as_mf(b, tgt)))
        report["dims"] = _dims(dims)
        return
    if cmd == "null-homotopy":
        if args.morphism:
            t = ws.get(args.morphism)
            if not isinstance(t, GradedHom):
                raise ParseError(f"object {args.morphism!r} is not a morphism")
        else:
            (name,) = _need(args, "object")
            t = identity_hom(_as_mf(ws.get(name), name))
        ok, s = is_null_homotopic(t)
        report["witness_present"] = ok
        if ok:
            report["witness"] = {"c0": s.c0.to_strings(), "c1": s.c1.to_strings()}
        return
    if cmd == "box":
        l, r = _need(args, "left", "right")
        report["object"] = _mf_json(box_product(_as_mf(ws.get(l), l), _as_mf(ws.get(r), r)))
        return
    if cmd == "fold":
        (name,) = _need(args, "object")
        report["object"] = _mf_json(fold(_as_koszul(ws.get(name), name)))
        return
    if cmd == "monoidality":
        l, r = _need(args, "left", "right")
        rep = fold_monoidality_report(_as_koszul(ws.get(l), l), _as_koszul(ws.get(r), r))
        report["equal"] = rep.equal
        if not rep.equal:
            raise CommandFailed("violation", "fold of the convolution differs from the box product",
                                entry=None if rep.first_difference is None else
                                [rep.first_difference[0], rep.first_difference[1], str(rep.first_difference[2])])
        return
    if cmd == "contraction":
        (name,) = _need(args, "object")
        M = _as_koszul(ws.get(name), name)
        if name not in ws.contractions:
            raise ParseError(f"object {name!r} carries no contraction k")
        w = contraction_witness(M, ws.contractions[name])
        report.update(witness_present=True, order=w.nilpotence,
                      witness={"c0": w.homotopy.c0.to_strings(), "c1": w.homotopy.c1.to_strings()})
        return
    if cmd == "stabilize":
        (name,) = _need(args, "object")
        P = ws.get(name)
        from .poly import PolyMatrix
        if not isinstance(P, PolyMatrix):
            raise ParseError(f"object {name!r} is not a matrix")
        E = stabilize(P, ws.lg, _param(args, ws, "cap"))
        report["object"] = _mf_json(E)
        report["dims"] = _dims(hom_cohomology_dims(E, E))
        return
    if cmd == "perfect":
        (name,) = _need(args, "object")
        v = is_perfect(ws.get(name))
        report.update(perfect=v.perfect, witness_present=v.witness is not None)
        if v.refutation is not None:
            report["refutation"] = [str(c) for c in v.refutation]
        return
    window = _param(args, ws, "window", 5)
    if cmd == "u-torsion":
        (name,) = _need(args, "object")
        r = u_torsion_order_point(_as_koszul(ws.get(name), name), window)
        report.update(verdict=r.verdict, order=r.order)
        report["notes"] += r.notes
        return
    if cmd == "rhom-point":
        (name,) = _need(args, "object")
        report["dims"] = _graded(rhom_trivial_dims(_as_koszul(ws.get(name), name), window))
        return
    if cmd == "u-cone":
        (name,) = _need(args, "object")
        r = u_cone_check(_as_koszul(ws.get(name), name), window)
        report.update(window=list(r.window), dims=_graded(r.cone_dims),
                      pull_push_dims=_graded(r.pull_push_dims), passed=r.passed)
        if not r.passed:
            raise CommandFailed("violation", "cone of u differs from the pull-push side")
        return
    raise ParseError(f"unknown command {cmd}")  # pragma: no cover


def run_command(argv) -> tuple[int, dict]:
    """Run one command; returns the exit code and the report."""
    parser = build_parser()
    parser.__class__ = _Parser
    report = {"schema": SCHEMA, "command": None, "status": "ok", "notes": []}
    try:
        args = parser.parse_intermixed_args(argv)
    except _ArgParseError as exc:
        report.update(status="parse-error", error=str(exc))
        return 2, report
    report["command"] = args.command
    if args.seed is not None:
        report["notes"].append(f"seed {args.seed}")
    pair_cap = args.cap if args.command != "stabilize" else None
    try:
        with resource_caps(max_pairs=pair_cap):
            _run(args, report)
    except CommandFailed as exc:
        report.update(status=exc.status, error=str(exc), **exc.extra)
    except ResourceCapExceeded as exc:
        report.update(status="resource-cap", error=str(exc))
    except (IdentityViolation, NotClosed, ContractionInvalid) as exc:
        report.update(status="violation", error=str(exc))
        if isinstance(exc, IdentityViolation):
            report.update(identity=exc.where, degree=exc.degree,
                          entry=[exc.entry[0], exc.entry[1], str(exc.entry[2])])
    except (ParseError, ContextMismatch, VariableCollision, WindowTooSmall) as exc:
        report.update(status="parse-error", error=str(exc))
        if getattr(exc, "position", None) is not None:
            report["position"] = exc.position
    except LGError as exc:  # pragma: no cover - every subclass is mapped above
        report.update(status="violation", error=str(exc))
    return EXIT[report["status"]], report


def main(argv=None) -> int:
    code, report = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
