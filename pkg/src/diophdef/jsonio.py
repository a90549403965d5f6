"""JSON encoding of rings, elements, ideals, systems, points, certificates,
witnesses and emitted definitions. Output is deterministic: keys are sorted
and integers are written exactly."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ParseError, PreconditionFailed
from .numfield import (FieldElement, IntegralIdeal, NumberRing, RingElement, from_generators, make_field)
from .numfield.ideal import _from_rows
from .polysys import DiophDefinition, Poly, PolySystem, Var


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"malformed JSON: {e}") from e


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e


def _need(obj: Any, key: str, kind: type | tuple = object):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return val


def _ints(xs: Any, what: str) -> list[int]:
    if not isinstance(xs, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in xs):
        raise ParseError(f"{what} must be a list of integers")
    return xs


# rings

def ring_to_json(ring: NumberRing) -> dict:
    return {"minpoly": list(ring.minpoly), "name": ring.name}


def ring_from_json(obj: Any) -> NumberRing:
    from .fixtures import RINGS
    if isinstance(obj, str):
        if obj not in RINGS:
            raise ParseError(f"unknown ring {obj!r}; choose from {sorted(RINGS)}")
        return RINGS[obj]
    coeffs = tuple(_ints(_need(obj, "minpoly", list), "minpoly"))
    for r in RINGS.values():
        if r.minpoly == coeffs:
            return r
    name = obj.get("name", "") if isinstance(obj, dict) else ""
    return make_field(coeffs, name=str(name))


# elements and ideals

def element_to_json(x: RingElement) -> list[int]:
    return list(x.coords)


def element_from_json(ring: NumberRing, obj: Any) -> RingElement:
    if isinstance(obj, int) and not isinstance(obj, bool):
        return ring.element(obj)
    xs = _ints(obj, "element")
    if len(xs) != ring.degree:
        raise ParseError(f"element needs {ring.degree} coordinates, got {len(xs)}")
    return ring.element(xs)


def field_to_json(x: FieldElement) -> list[str]:
    return [str(c) for c in x.coords]


def field_from_json(ring: NumberRing, obj: Any) -> FieldElement:
    if not isinstance(obj, list) or len(obj) != ring.degree:
        raise ParseError("field element needs one rational per coordinate")
    try:
        return FieldElement(ring, tuple(Fraction(c) for c in obj))
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise ParseError(f"bad rational: {e}") from e


def ideal_to_json(ideal: IntegralIdeal) -> dict:
    return {"hnf": [list(r) for r in ideal.hnf]}


def ideal_from_json(ring: NumberRing, obj: Any) -> IntegralIdeal:
    if isinstance(obj, dict) and "gens" in obj:
        gens = _need(obj, "gens", list)
        return from_generators(ring, [element_from_json(ring, g) for g in gens])
    if isinstance(obj, dict) and "hnf" in obj:
        rows = _need(obj, "hnf", list)
        if len(rows) != ring.degree:
            raise ParseError("hnf needs one row per basis element")
        return _from_rows(ring, [_ints(r, "hnf row") for r in rows])
    raise ParseError("ideal needs 'gens' or 'hnf'")


# polynomial systems

def poly_to_json(p: Poly) -> list[dict]:
    return [{"exps": list(e), "coef": list(c.coords)} for e, c in p.terms]


def poly_from_json(ring: NumberRing, nvars: int, obj: Any) -> Poly:
    if not isinstance(obj, list):
        raise ParseError("polynomial must be a list of terms")
    terms: dict = {}
    for t in obj:
        e = tuple(_ints(_need(t, "exps", list), "exps"))
        if len(e) > nvars or any(x < 0 for x in e):
            raise ParseError("exponent vector does not match the variables")
        e = e + (0,) * (nvars - len(e))
        c = element_from_json(ring, _need(t, "coef"))
        terms[e] = terms.get(e, ring.zero()) + c
    return Poly(ring, nvars, terms)


def system_to_json(s: PolySystem) -> dict:
    return {"ring": ring_to_json(s.ring),
            "vars": [{"name": v.name, "class": v.cls} for v in s.variables],
            "polys": [poly_to_json(p) for p in s.polys],
            "labels": list(s.labels)}


def system_from_json(obj: Any) -> PolySystem:
    ring = ring_from_json(_need(obj, "ring"))
    vs = _need(obj, "vars", list)
    try:
        variables = tuple(Var(str(_need(v, "name", str)), str(v.get("class", "plain"))) for v in vs)
    except ValueError as e:
        raise ParseError(str(e)) from e
    polys = tuple(poly_from_json(ring, len(variables), p) for p in _need(obj, "polys", list))
    labels = obj.get("labels") or ()
    try:
        return PolySystem(ring, variables, polys, tuple(str(x) for x in labels))
    except ValueError as e:
        raise ParseError(str(e)) from e


def definition_to_json(d: DiophDefinition) -> dict:
    return {"system": system_to_json(d.system), "t": d.t, "descriptor": d.descriptor}


def definition_from_json(obj: Any) -> DiophDefinition:
    system = system_from_json(_need(obj, "system"))
    t = _need(obj, "t", str)
    try:
        return DiophDefinition(system, t, str(obj.get("descriptor", "")))
    except ValueError as e:
        raise ParseError(str(e)) from e


def assignment_to_json(a: dict) -> dict:
    return {k: element_to_json(v) for k, v in a.items()}


def assignment_from_json(ring: NumberRing, obj: Any) -> dict[str, RingElement]:
    if not isinstance(obj, dict):
        raise ParseError("assignment must be an object of name -> element")
    return {str(k): element_from_json(ring, v) for k, v in obj.items()}


# group instances and points

def instance_to_json(g) -> dict | str:
    out = {"kind": g.kind, "ring": ring_to_json(g.ring), "name": g.name}
    if g.kind == "NormOneTorus":
        out["twist"] = element_to_json(g.twist)
    if g.kind == "EllipticCurve":
        out["a"] = [element_to_json(x) for x in g.a]
    return out


def instance_from_json(obj: Any):
    from .fixtures import groups
    from .groups import elliptic_curve, gm, norm_one_torus
    if isinstance(obj, str):
        table = groups()
        if obj not in table:
            raise ParseError(f"unknown group fixture {obj!r}; choose from {sorted(table)}")
        return table[obj].group
    kind = _need(obj, "kind", str)
    ring = ring_from_json(_need(obj, "ring"))
    name = str(obj.get("name", ""))
    if kind == "Gm":
        return gm(ring, name)
    if kind == "NormOneTorus":
        return norm_one_torus(ring, element_from_json(ring, _need(obj, "twist")), name)
    if kind == "EllipticCurve":
        a = _need(obj, "a", list)
        if len(a) != 5:
            raise ParseError("a curve needs five coefficients a1 a2 a3 a4 a6")
        return elliptic_curve(ring, [element_from_json(ring, x) for x in a], name)
    raise ParseError(f"unknown group kind {kind!r}")


def point_to_json(p, instance_id: Any = None) -> dict:
    return {"instance": instance_id if instance_id is not None else instance_to_json(p.instance),
            "coords": [element_to_json(c) for c in p.coords]}


def point_from_json(obj: Any, instance=None):
    from .groups import point_from_coords
    g = instance if instance is not None else instance_from_json(_need(obj, "instance"))
    coords = _need(obj, "coords", list)
    return point_from_coords(g, [element_from_json(g.ring, c) for c in coords])


# certificates

VARIANT_ALIASES = {"finite": "finite", "totally_real": "totally_real", "totreal": "totally_real",
                   "quadratic": "quadratic", "quad": "quadratic"}


def variant_name(v: str) -> str:
    if v not in VARIANT_ALIASES:
        raise ParseError(f"unknown variant {v!r}")
    return VARIANT_ALIASES[v]


def _pairs_to_json(pairs) -> list[dict]:
    return [{"coords": [element_to_json(c) for c in p.point.coords], "i": p.i, "j": p.j} for p in pairs]


def _pairs_from_json(obj: Any, torus_big) -> tuple:
    from .groups import BPair, GroupPoint
    out = []
    for item in obj:
        coords = tuple(element_from_json(torus_big.ring, c) for c in _need(item, "coords", list))
        if len(coords) != 3:
            raise ParseError("torus points have three coordinates")
        out.append(BPair(GroupPoint(torus_big, coords), int(_need(item, "i", int)), int(_need(item, "j", int))))
    return tuple(out)


def _side_to_json(side: dict) -> dict:
    out: dict = {}
    for k, v in side.items():
        if k == "u":
            out["u"] = [element_to_json(x) for x in v]
        elif k in ("X1", "X2"):
            out[k] = element_to_json(v)
        elif k == "pairs":
            out["pairs"] = _pairs_to_json(v)
        elif k == "m":
            out["m"] = v
    return out


def _side_from_json(obj: Any, big: NumberRing, torus_big) -> dict:
    if not isinstance(obj, dict):
        raise ParseError("side data must be an object")
    out: dict = {}
    if "u" in obj:
        out["u"] = tuple(element_from_json(big, x) for x in _need(obj, "u", list))
    for k in ("X1", "X2"):
        if k in obj:
            out[k] = element_from_json(big, obj[k])
    if "pairs" in obj:
        if torus_big is None:
            raise ParseError("pairs need a torus")
        out["pairs"] = _pairs_from_json(_need(obj, "pairs", list), torus_big)
    if "m" in obj:
        out["m"] = int(_need(obj, "m", int))
    return out


def certificate_to_json(cert, extension: str, torus: str | None = None) -> dict:
    out = {"variant": cert.variant, "extension": extension, "alpha": element_to_json(cert.alpha),
           "b": element_to_json(cert.b), "ideal_I": ideal_to_json(cert.ideal_I),
           "extras": _side_to_json(cert.extras)}
    if torus:
        out["torus"] = torus
    return out


def certificate_from_json(obj: Any):
    """(certificate, extension, torus over the subring or None)."""
    from .bounds import CaptureCertificate
    from .fixtures import extensions, groups
    from .groups import base_change
    name = _need(obj, "extension", str)
    table = extensions()
    if name not in table:
        raise ParseError(f"unknown extension {name!r}; choose from {sorted(table)}")
    ext = table[name]
    torus = None
    if "torus" in obj:
        tname = _need(obj, "torus", str)
        if tname not in groups() or groups()[tname].torus is None:
            raise ParseError(f"fixture {tname!r} carries no torus")
        torus = groups()[tname].torus
    variant = variant_name(_need(obj, "variant", str))
    tb = base_change(torus, ext.inclusion) if torus is not None else None
    cert = CaptureCertificate(variant, element_from_json(ext.big, _need(obj, "alpha")),
                              element_from_json(ext.sub, _need(obj, "b")),
                              ideal_from_json(ext.sub, _need(obj, "ideal_I")),
                              _side_from_json(obj.get("extras", {}), ext.big, tb))
    return cert, ext, torus


# capture witnesses and emitted definitions

def _power_to_json(pw) -> dict | None:
    if pw is None:
        return None
    return {"point": [element_to_json(c) for c in pw.point.coords],
            "root": [element_to_json(c) for c in pw.root.coords], "r": pw.r}


def witness_to_json(problem, w) -> dict:
    return {"fixture": problem.name, "variant": problem.variant, "alpha": element_to_json(w.alpha),
            "bypass": w.bypass, "P": _power_to_json(w.P), "Q": _power_to_json(w.Q),
            "side": _side_to_json({k: v for k, v in w.side.items() if k != "m"})}


def _torus_big(problem):
    from .groups import base_change
    return base_change(problem.torus, problem.ext.inclusion) if problem.torus is not None else None


def witness_from_json(obj: Any):
    """(problem, witness) rebuilt from the fixture name and the stored coordinates."""
    from .capture import CaptureWitness, problem_from_fixture
    from .numfield import extend
    from .groups import GroupPoint, PowerWitness
    problem = problem_from_fixture(_need(obj, "fixture", str), variant_name(_need(obj, "variant", str)))
    big = problem.ext.big
    alpha = element_from_json(big, _need(obj, "alpha"))
    side = _side_from_json(obj.get("side", {}), big, _torus_big(problem))
    if obj.get("bypass"):
        return problem, CaptureWitness(alpha, None, None, side, bypass=True)
    g = problem.group

    def pw(key):
        item = _need(obj, key, dict)
        pt = GroupPoint(g, tuple(element_from_json(big, c) for c in _need(item, "point", list)))
        root = GroupPoint(g, tuple(element_from_json(big, c) for c in _need(item, "root", list)))
        if len(pt.coords) != g.n + 1 or len(root.coords) != g.n + 1:
            raise ParseError(f"{key} has the wrong number of coordinates")
        return PowerWitness(pt, root, int(_need(item, "r", int)), extend(problem.exponent.ideal, problem.ext.inclusion))

    return problem, CaptureWitness(alpha, pw("P"), pw("Q"), side)


def emitted_to_json(em) -> dict:
    lay = {k: (list(map(list, v)) if k == "pattern" else v) for k, v in em.layout.items()}
    return {"fixture": em.problem.name, "variant": em.problem.variant,
            "definition": definition_to_json(em.definition),
            "bindings": {k: element_to_json(v) for k, v in em.bindings},
            "blocks": [{"block": b, "source": s} for b, s in em.blocks],
            "layout": lay}


def emitted_from_json(obj: Any):
    from .capture import EmittedDefinition, problem_from_fixture
    problem = problem_from_fixture(_need(obj, "fixture", str), variant_name(_need(obj, "variant", str)))
    defn = definition_from_json(_need(obj, "definition"))
    if defn.ring != problem.ext.big:
        raise PreconditionFailed("definition ring does not match the fixture")
    bindings = tuple((k, element_from_json(defn.ring, v)) for k, v in _need(obj, "bindings", dict).items())
    blocks = tuple((str(b["block"]), str(b["source"])) for b in _need(obj, "blocks", list))
    lay = dict(_need(obj, "layout", dict))
    if "pattern" in lay:
        lay["pattern"] = tuple(tuple(x) for x in lay["pattern"])
    return EmittedDefinition(defn, bindings, blocks, lay, problem)
