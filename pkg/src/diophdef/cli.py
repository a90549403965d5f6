"""Command-line front end.

Values are JSON: inline text, or @path to read a file. Rings are fixture
names (zz, zi, zsqrt2, zzeta8) or {"minpoly": [...], "name": ...}.
Exit codes: 64 parse, 65 validation, 66 search exhausted, 67 certificate
invalid, 70 internal.
"""
from __future__ import annotations

import argparse
import sys
from typing import Any, Sequence

from . import jsonio as J
from .errors import INTERNAL, DiophError, ParseError, SearchExhausted

SELFTEST_QUICK_SCALE = 0.02


def _value(text: str) -> Any:
    if text.startswith("@"):
        return J.load_file(text[1:])
    return J.loads(text)


def _ring(text: str):
    if text.startswith("{") or text.startswith("@"):
        return J.ring_from_json(_value(text))
    return J.ring_from_json(text)


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError as e:
        raise ParseError(f"expected an integer, got {text!r}") from e


class _Out:
    def __init__(self, path: str | None):
        self.path = path
        self.chunks: list[str] = []

    def json(self, obj: Any):
        self.text(J.dumps(obj).rstrip("\n"))

    def text(self, s: str):
        self.chunks.append(s + "\n")

    def flush(self, stream):
        data = "".join(self.chunks)
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            stream.write(data)


# field and ideal

def cmd_field(a, out: _Out):
    from .numfield import fundamental_unit_real_quadratic
    from .numfield.embed import approximate
    ring = _ring(a.ring)
    if a.action == "info":
        out.json({"minpoly": list(ring.minpoly), "degree": ring.degree, "discriminant": int(ring.discriminant),
                  "signature": [int(x) for x in ring.signature], "totally_real": bool(ring.is_totally_real)})
    elif a.action == "unit":
        out.json({"unit": J.element_to_json(fundamental_unit_real_quadratic(ring))})
    elif a.action == "norm":
        x = J.element_from_json(ring, _value(a.x))
        out.json({"norm": x.norm(), "trace": x.trace()})
    elif a.action == "embed":
        x = J.element_from_json(ring, _value(a.x))
        out.json({"approximations": [{"value": v, "error_radius": r} for v, r in approximate(x, a.digits)],
                  "note": "floating approximations with certified error radii"})


def cmd_ideal(a, out: _Out):
    from .numfield import factor_ideal
    ring = _ring(a.ring)
    ideal = J.ideal_from_json(ring, _value(a.ideal))
    if a.action == "hnf":
        out.json({"hnf": J.ideal_to_json(ideal)["hnf"], "norm": ideal.norm()})
    elif a.action == "factor":
        out.json({"factors": [{"p": pr.p, "kind": pr.kind, "residue_degree": pr.residue_degree,
                               "hnf": J.ideal_to_json(pr.ideal)["hnf"], "exponent": e}
                              for pr, e in factor_ideal(ideal)]})
    elif a.action in ("contains", "reduce"):
        if a.x is None:
            raise ParseError("--x is required")
        x = J.element_from_json(ring, _value(a.x))
        if a.action == "contains":
            out.json({"contains": ideal.contains(x)})
        else:
            out.json({"residue": J.element_to_json(ideal.reduce(x))})


# poly

def cmd_poly(a, out: _Out):
    from .polysys import (brute_force_solutions, combine_to_single, find_rootless_quadratic, intersect_definitions,
                          nonzero_gadget, total_positivity_system, transport, unit_gadget)
    if a.action == "combine":
        system = J.system_from_json(_value(a.system))
        out.json(J.system_to_json(combine_to_single(system, find_rootless_quadratic(system.ring))))
    elif a.action == "gadget":
        ring = _ring(a.ring)
        build = {"nonzero": nonzero_gadget, "unit": unit_gadget, "totpos": total_positivity_system}[a.kind]
        out.json(J.system_to_json(build(ring)))
    elif a.action == "transport":
        from .fixtures import extension
        from .numfield import integers_into
        system = J.system_from_json(_value(a.system))
        defn = J.definition_from_json(_value(a.definition))
        inc = None
        if system.ring != defn.ring:
            inc = extension(a.extension).inclusion if a.extension else integers_into(defn.ring)
        out.json(J.system_to_json(transport(system, defn, inc)))
    elif a.action == "intersect":
        d1 = J.definition_from_json(_value(a.definition[0]))
        d2 = J.definition_from_json(_value(a.definition[1]))
        out.json(J.definition_to_json(intersect_definitions(d1, d2)))
    elif a.action == "solve":
        system = J.system_from_json(_value(a.system))
        fixed = J.assignment_from_json(system.ring, _value(a.fixed)) if a.fixed else None
        sols = brute_force_solutions(system, a.box, fixed=fixed, limit=a.limit)
        out.json({"box": a.box, "count": len(sols), "solutions": [J.assignment_to_json(s) for s in sols]})


# bounds

def cmd_bounds(a, out: _Out):
    from .bounds import c_of_m, capture, d_of, four_squares_cert, search_certificate
    if a.action == "c-of-m":
        out.text(str(c_of_m(_int(a.m))))
    elif a.action == "d-alpha":
        ring = _ring(a.ring)
        alpha = J.element_from_json(ring, _value(a.alpha))
        out.json({"D": J.element_to_json(d_of(a.m, alpha))})
    elif a.action == "capture":
        cert, ext, torus = J.certificate_from_json(_value(a.cert))
        if a.variant and J.variant_name(a.variant) != cert.variant:
            raise ParseError(f"certificate is {cert.variant}, not {a.variant}")
        got = capture(cert, ext, torus)
        out.text(f"alpha ∈ O_K: {J.element_to_json(got)}")
    elif a.action == "four-squares":
        ring = _ring(a.ring)
        x = J.element_from_json(ring, _value(a.x))
        z = J.element_from_json(ring, _value(a.z))
        c = four_squares_cert(x, z)
        out.json({"x": J.element_to_json(c.x), "z": J.element_to_json(c.z),
                  "ys": [J.element_to_json(y) for y in c.ys], "y5": J.element_to_json(c.y5)})
    elif a.action == "search":
        from .fixtures import extension, group
        ext = extension(a.extension)
        variant = J.variant_name(a.variant)
        torus = group(a.torus).torus if a.torus else None
        alpha = J.element_from_json(ext.big, _value(a.alpha))
        cert = search_certificate(variant, alpha, ext, torus)
        if cert is None:
            raise SearchExhausted("no certificate: the congruence has no solution in the subring")
        out.json(J.certificate_to_json(cert, a.extension, a.torus))


# group

def _point(text: str):
    return J.point_from_json(_value(text))


def _instance_id(text: str):
    # bare fixture names need no JSON quoting
    if text[:1] in "{@\"":
        return _value(text)
    return text


def cmd_group(a, out: _Out):
    from . import groups as G
    if a.action == "make":
        iid = _instance_id(a.instance)
        g = J.instance_from_json(iid)
        if a.coords:
            p = G.point_from_coords(g, [J.element_from_json(g.ring, c) for c in _value(a.coords)])
        elif a.value:
            vals = _value(a.value)
            if g.kind == "Gm":
                p = G.gm_point(g, J.element_from_json(g.ring, vals))
            elif g.kind == "NormOneTorus":
                p = G.torus_point(g, *(J.element_from_json(g.ring, v) for v in vals))
            else:
                p = G.curve_point(g, *(J.element_from_json(g.ring, v) for v in vals))
        else:
            p = G.identity(g)
        out.json(J.point_to_json(p, iid))
    elif a.action in ("add", "pow"):
        p = _point(a.p)
        iid = _value(a.p)["instance"]
        if a.action == "add":
            q = J.point_from_json(_value(a.q), p.instance)
            r = G.compose(p.instance, p, q)
        else:
            r = G.power(p.instance, p, a.n)
        out.json(J.point_to_json(r, iid))
    elif a.action == "kernel":
        p = _point(a.p)
        ideal = J.ideal_from_json(p.instance.ring, _value(a.ideal))
        res = {"in_kernel": G.in_congruence_kernel(p, ideal)}
        if a.order:
            res["kernel_multiple"] = G.kernel_multiple(p, ideal, method=a.method)
        out.json(res)
    elif a.action == "partial":
        p = _point(a.p)
        vd = G.vanishing_data(p)
        out.json({"z": J.ideal_to_json(vd.z), "c": J.ideal_to_json(vd.c),
                  "partial": [J.element_to_json(x) for x in vd.partial]})
    elif a.action == "stability-check":
        from .fixtures import group
        from .numfield.units import free_unit_generators
        fx = group(a.fixture)
        if fx.ext is None or fx.exponent is None:
            raise ParseError(f"fixture {a.fixture} has no stability data")
        units = free_unit_generators(fx.group.ring)
        if not units:
            raise SearchExhausted("no free unit to sample from")
        rep = G.check_stability_exponent(fx.group, fx.ext, fx.exponent, G.unit_sample(fx.group, units, a.k))
        out.json({"sampled": rep.sampled, "in_kernel": rep.in_kernel, "passed": rep.passed, "failed": rep.failed,
                  "ok": rep.ok})
    elif a.action == "bset":
        from .fixtures import group
        fx = group(a.fixture)
        if fx.torus is None:
            raise ParseError(f"fixture {a.fixture} has no torus")
        pairs = G.b_set_sample(fx.torus, fx.ext, 3, a.count)
        out.json({"pairs": [{"coords": [J.element_to_json(c) for c in p.point.coords], "i": p.i, "j": p.j,
                             "ratio": J.field_to_json(fx.ext.inclusion.preimage_field(p.ratio()))}
                            for p in pairs]})


# capture

def cmd_capture(a, out: _Out):
    from . import capture as C
    if a.action == "emit":
        problem = C.problem_from_fixture(a.fixture, J.variant_name(a.variant) if a.variant else None)
        out.json(J.emitted_to_json(C.emit_definition(problem)))
    elif a.action == "witness":
        problem = C.problem_from_fixture(a.fixture, J.variant_name(a.variant) if a.variant else None)
        w = C.construct_witness_for_natural(problem, a.alpha)
        out.json(J.witness_to_json(problem, w))
    elif a.action == "assign":
        em = J.emitted_from_json(_value(a.definition))
        problem, w = J.witness_from_json(_value(a.witness))
        if problem != em.problem:
            raise ParseError("witness and definition belong to different problems")
        out.json(J.assignment_to_json(C.witness_assignment(em, w)))
    elif a.action == "verify":
        if a.witness:
            problem, w = J.witness_from_json(_value(a.witness))
            got = C.verify_capture(problem, w)
        elif a.definition and a.assignment:
            em = J.emitted_from_json(_value(a.definition))
            assignment = J.assignment_from_json(em.definition.ring, _value(a.assignment))
            got, _ = C.verify_emitted_solution(em, assignment)
        else:
            raise ParseError("verify needs --witness, or --def with --assignment")
        out.text(f"alpha ∈ O_K: {J.element_to_json(got)}")


# selftest

def cmd_selftest(a, out: _Out):
    from .acceptance import run_all
    scale = 1.0 if a.level == "full" else SELFTEST_QUICK_SCALE
    results = run_all(a.seed, scale)
    for r in results:
        out.text(r.line())
    failed = [r.number for r in results if not r.passed]
    out.text(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diophdef", description="Exact diophantine-definition toolkit.")
    p.add_argument("--seed", type=int, default=0, help="seed for every randomized step")
    p.add_argument("--out", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)
    # --out is also accepted after the subcommand
    leaf = argparse.ArgumentParser(add_help=False)
    leaf.add_argument("--out", dest="sub_out", help="write output to this file instead of stdout")

    f = sub.add_parser("field", help="ring information", parents=[leaf])
    f.add_argument("action", choices=("info", "unit", "norm", "embed"))
    f.add_argument("--ring", required=True)
    f.add_argument("--x", default="0")
    f.add_argument("--digits", type=int, default=20)
    f.set_defaults(fn=cmd_field)

    i = sub.add_parser("ideal", help="ideal arithmetic", parents=[leaf])
    i.add_argument("action", choices=("hnf", "factor", "contains", "reduce"))
    i.add_argument("--ring", required=True)
    i.add_argument("--ideal", required=True)
    i.add_argument("--x")
    i.set_defaults(fn=cmd_ideal)

    q = sub.add_parser("poly", help="polynomial systems")
    qs = q.add_subparsers(dest="action", required=True)
    c = qs.add_parser("combine", parents=[leaf])
    c.add_argument("--system", required=True)
    g = qs.add_parser("gadget", parents=[leaf])
    g.add_argument("kind", choices=("nonzero", "unit", "totpos"))
    g.add_argument("--ring", required=True)
    t = qs.add_parser("transport", parents=[leaf])
    t.add_argument("--system", required=True)
    t.add_argument("--def", dest="definition", required=True)
    t.add_argument("--extension", help="extension fixture supplying the inclusion")
    n = qs.add_parser("intersect", parents=[leaf])
    n.add_argument("--def", dest="definition", action="append", required=True)
    s = qs.add_parser("solve", parents=[leaf])
    s.add_argument("--system", required=True)
    s.add_argument("--box", type=int, required=True)
    s.add_argument("--fixed")
    s.add_argument("--limit", type=int)
    q.set_defaults(fn=cmd_poly)

    b = sub.add_parser("bounds", help="norm bounds and congruence capture")
    bs = b.add_subparsers(dest="action", required=True)
    cm = bs.add_parser("c-of-m", parents=[leaf])
    cm.add_argument("m")
    da = bs.add_parser("d-alpha", parents=[leaf])
    da.add_argument("--m", type=int, required=True)
    da.add_argument("--ring", required=True)
    da.add_argument("--alpha", required=True)
    ca = bs.add_parser("capture", parents=[leaf])
    ca.add_argument("--variant", choices=tuple(J.VARIANT_ALIASES))
    ca.add_argument("--cert", required=True)
    fs = bs.add_parser("four-squares", parents=[leaf])
    fs.add_argument("--ring", required=True)
    fs.add_argument("--x", required=True)
    fs.add_argument("--z", default="0")
    se = bs.add_parser("search", parents=[leaf])
    se.add_argument("--variant", choices=tuple(J.VARIANT_ALIASES), required=True)
    se.add_argument("--extension", required=True)
    se.add_argument("--alpha", required=True)
    se.add_argument("--torus", help="group fixture supplying the torus (quadratic variant)")
    b.set_defaults(fn=cmd_bounds)

    gr = sub.add_parser("group", help="group instances and points")
    gs = gr.add_subparsers(dest="action", required=True)
    mk = gs.add_parser("make", parents=[leaf])
    mk.add_argument("--instance", required=True)
    mk.add_argument("--coords")
    mk.add_argument("--value", help="Gm: u; torus: [a, b]; curve: [x, y]")
    ad = gs.add_parser("add", parents=[leaf])
    ad.add_argument("--p", required=True)
    ad.add_argument("--q", required=True)
    pw = gs.add_parser("pow", parents=[leaf])
    pw.add_argument("--p", required=True)
    pw.add_argument("--n", type=int, required=True)
    ke = gs.add_parser("kernel", parents=[leaf])
    ke.add_argument("--p", required=True)
    ke.add_argument("--ideal", required=True)
    ke.add_argument("--order", action="store_true", help="also compute a kernel multiple")
    ke.add_argument("--method", choices=("auto", "iterate", "group"), default="auto")
    pa = gs.add_parser("partial", parents=[leaf])
    pa.add_argument("--p", required=True)
    sc = gs.add_parser("stability-check", parents=[leaf])
    sc.add_argument("--fixture", required=True)
    sc.add_argument("--k", type=int, default=6)
    bb = gs.add_parser("bset", parents=[leaf])
    bb.add_argument("--fixture", required=True)
    bb.add_argument("--count", type=int, default=2)
    gr.set_defaults(fn=cmd_group)

    cp = sub.add_parser("capture", help="witnesses and emitted definitions")
    cs = cp.add_subparsers(dest="action", required=True)
    em = cs.add_parser("emit", parents=[leaf])
    em.add_argument("--fixture", default="cm-sqrt2")
    em.add_argument("--variant", choices=tuple(J.VARIANT_ALIASES))
    wi = cs.add_parser("witness", parents=[leaf])
    wi.add_argument("--fixture", default="cm-sqrt2")
    wi.add_argument("--variant", choices=tuple(J.VARIANT_ALIASES))
    wi.add_argument("--alpha", type=int, required=True)
    asg = cs.add_parser("assign", parents=[leaf])
    asg.add_argument("--def", dest="definition", required=True)
    asg.add_argument("--witness", required=True)
    ve = cs.add_parser("verify", parents=[leaf])
    ve.add_argument("--witness")
    ve.add_argument("--def", dest="definition")
    ve.add_argument("--assignment")
    cp.set_defaults(fn=cmd_capture)

    st = sub.add_parser("selftest", help="run the acceptance suite", parents=[leaf])
    st.add_argument("level", choices=("quick", "full"), nargs="?", default="quick")
    st.set_defaults(fn=cmd_selftest)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 64 if e.code else 0
    out = _Out(getattr(a, "sub_out", None) or a.out)
    try:
        status = a.fn(a, out) or 0
    except DiophError as e:
        sys.stderr.write(f"error ({type(e).__name__}): {e}\n")
        return e.exit_code
    except KeyError as e:
        sys.stderr.write(f"error: {e.args[0] if e.args else e}\n")
        return 65
    except (ValueError, TypeError, ZeroDivisionError) as e:
        sys.stderr.write(f"error (invalid input): {e}\n")
        return 65
    except Exception as e:  # noqa: BLE001
        sys.stderr.write(f"internal error ({type(e).__name__}): {e}\n")
        return INTERNAL
    out.flush(sys.stdout)
    return status


if __name__ == "__main__":
    sys.exit(main())
