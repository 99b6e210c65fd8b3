"""Instance and shape files, plane strings, and JSON reports.

Both file kinds are JSON documents; see ``docs/formats.md`` for the grammar.
Numbers are read exactly: ``"3/4"`` and ``"0.1"`` strings as well as bare
JSON numbers become ``Fraction`` values by their decimal digits, never via
binary floating point.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal
from fractions import Fraction

from .bisection import AtomicMeasure
from .discrete import Instance
from .errors import ParseError
from .geometry import Hyperplane, canonicalize, format_plane
from .shapes import Ball, Box, ShapeSpec

_WS = re.compile(r"[ \t\n\r]*")


# -- position index -----------------------------------------------------------

def _index(text, i=0):
    """(start, children) tree mirroring a valid JSON document."""
    i = _WS.match(text, i).end()
    ch = text[i]
    if ch == "{":
        start, i, kids = i, i + 1, {}
        while True:
            i = _WS.match(text, i).end()
            if text[i] == "}":
                return (start, kids), i + 1
            if text[i] == ",":
                i = _WS.match(text, i + 1).end()
            key, i = json.decoder.scanstring(text, i + 1)
            i = _WS.match(text, i).end() + 1  # ':'
            kids[key], i = _index(text, i)
    if ch == "[":
        start, i, kids = i, i + 1, []
        while True:
            i = _WS.match(text, i).end()
            if text[i] == "]":
                return (start, kids), i + 1
            if text[i] == ",":
                i += 1
            child, i = _index(text, i)
            kids.append(child)
    if ch == '"':
        _, end = json.decoder.scanstring(text, i + 1)
        return (i, None), end
    _, end = json.JSONDecoder().raw_decode(text, i)
    return (i, None), end


class _Doc:
    def __init__(self, text):
        self.text = text
        try:
            self.data = json.loads(text, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        self.tree, _ = _index(text)

    def error(self, path, message):
        node = self.tree
        for key in path:
            kids = node[1]
            try:
                node = kids[key]
            except (KeyError, IndexError, TypeError):
                break
        pos = node[0]
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        where = "".join(f"[{k}]" if isinstance(k, int) else f".{k}" for k in path)
        return ParseError(f"{where or '<root>'}: {message}", line, col)

    def get(self, obj, key, path, kind=None):
        if not isinstance(obj, dict) or key not in obj:
            raise self.error(path, f"missing key {key!r}")
        value = obj[key]
        if kind is not None and not isinstance(value, kind):
            raise self.error(path + [key], f"expected {kind.__name__}")
        return value

    def scalar(self, value, path):
        if isinstance(value, bool) or not isinstance(value, (int, str, Decimal)):
            raise self.error(path, "expected a number or a number string")
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise self.error(path, f"not a rational number: {value!r}") from None

    def vector(self, value, path, n=None):
        if not isinstance(value, list) or not value:
            raise self.error(path, "expected a nonempty coordinate array")
        if n is not None and len(value) != n:
            raise self.error(path, f"expected {n} coordinates, got {len(value)}")
        return tuple(self.scalar(v, path + [k]) for k, v in enumerate(value))


def _dimension(doc):
    n = doc.get(doc.data, "dimension", [], int)
    if n < 1:
        raise doc.error(["dimension"], "dimension must be positive")
    return n


def document_kind(text) -> str:
    """``"instance"`` or ``"shapes"``, judged by the top-level keys."""
    doc = _Doc(text)
    if isinstance(doc.data, dict) and "sets" in doc.data:
        return "instance"
    if isinstance(doc.data, dict) and "shapes" in doc.data:
        return "shapes"
    raise doc.error([], "expected a 'sets' (instance) or 'shapes' document")


def load_instance(text) -> Instance:
    doc = _Doc(text)
    n = _dimension(doc)
    sets = doc.get(doc.data, "sets", [], list)
    if len(sets) != n:
        raise doc.error(["sets"], f"{len(sets)} sets given for dimension {n}; need {n}")
    measures = []
    for i, s in enumerate(sets):
        path = ["sets", i]
        atoms = doc.get(s, "atoms", path, list)
        if not atoms:
            raise doc.error(path + ["atoms"], "a set needs at least one atom")
        pts, masses = [], []
        for j, atom in enumerate(atoms):
            apath = path + ["atoms", j]
            if isinstance(atom, list):
                pts.append(doc.vector(atom, apath, n))
                masses.append(Fraction(1))
                continue
            pts.append(doc.vector(doc.get(atom, "point", apath), apath + ["point"], n))
            m = doc.scalar(atom.get("mass", 1), apath + ["mass"])
            if m <= 0:
                raise doc.error(apath + ["mass"], "mass must be positive")
            masses.append(m)
        name = s.get("name", chr(ord("A") + i))
        try:
            measures.append(AtomicMeasure(tuple(pts), tuple(masses), str(name)))
        except ValueError as exc:
            raise doc.error(path, str(exc)) from None
    return Instance(tuple(measures))


def load_shapes(text) -> list:
    doc = _Doc(text)
    n = _dimension(doc)
    shapes = doc.get(doc.data, "shapes", [], list)
    out = []
    for i, s in enumerate(shapes):
        path = ["shapes", i]
        comps = doc.get(s, "components", path, list)
        parts = []
        for j, comp in enumerate(comps):
            cpath = path + ["components", j]
            kind = doc.get(comp, "type", cpath, str)
            density = float(doc.scalar(comp.get("density", 1), cpath + ["density"]))
            try:
                if kind in ("disk", "ball"):
                    center = doc.vector(doc.get(comp, "center", cpath), cpath + ["center"], n)
                    radius = float(doc.scalar(doc.get(comp, "radius", cpath), cpath + ["radius"]))
                    parts.append(Ball(tuple(float(c) for c in center), radius, density))
                elif kind == "box":
                    lo = doc.vector(doc.get(comp, "min", cpath), cpath + ["min"], n)
                    hi = doc.vector(doc.get(comp, "max", cpath), cpath + ["max"], n)
                    parts.append(Box(tuple(map(float, lo)), tuple(map(float, hi)), density))
                else:
                    raise doc.error(cpath + ["type"], f"unknown component type {kind!r}")
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise doc.error(cpath, str(exc)) from None
        try:
            out.append(ShapeSpec(tuple(parts), str(s.get("name", chr(ord("A") + i)))))
        except ValueError as exc:
            raise doc.error(path, str(exc)) from None
    return out


# -- writing ------------------------------------------------------------------

def fmt_scalar(v):
    if isinstance(v, (Fraction, int)):
        v = Fraction(v)
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return float(v)


def fmt_point(p):
    return [fmt_scalar(v) for v in p] if p is not None else None


def dump_instance(inst: Instance) -> str:
    """Instance file text, one atom per line."""
    lines = ["{", f' "dimension": {inst.dim},', ' "sets": [']
    for k, mu in enumerate(inst.measures):
        lines.append(f'  {{"name": {json.dumps(mu.name)}, "atoms": [')
        atoms = [json.dumps({"point": [fmt_scalar(Fraction(v)) for v in p],
                             "mass": fmt_scalar(Fraction(m))})
                 for p, m in mu.atoms]
        lines.append(",\n".join("   " + a for a in atoms))
        lines.append("  ]}" + ("," if k < len(inst.measures) - 1 else ""))
    lines += [" ]", "}"]
    return "\n".join(lines) + "\n"


def dump_shapes(shapes, dimension=None) -> str:
    def comp(c):
        if isinstance(c, Ball):
            return {"type": "disk" if c.dim == 2 else "ball", "center": list(c.center),
                    "radius": c.radius, "density": c.density}
        return {"type": "box", "min": list(c.lo), "max": list(c.hi), "density": c.density}

    doc = {"dimension": dimension or shapes[0].dim,
           "shapes": [{"name": s.name, "components": [comp(c) for c in s.components]}
                      for s in shapes]}
    return json.dumps(doc, indent=1) + "\n"


def parse_plane(text) -> Hyperplane:
    """Read ``"u=a,b,...;c=v"`` into a canonical exact hyperplane."""
    m = re.fullmatch(r"\s*u\s*=\s*([^;]+);\s*c\s*=\s*(\S+)\s*", text)
    if not m:
        raise ParseError(f"plane must look like 'u=1,0;c=0', got {text!r}", 1, 1)
    try:
        normal = tuple(Fraction(v.strip()) for v in m.group(1).split(","))
        offset = Fraction(m.group(2))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"plane has a non-numeric component: {text!r}", 1, 1) from None
    try:
        return canonicalize(Hyperplane(normal, offset))
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None


def plane_dict(H: Hyperplane):
    return {"normal": [fmt_scalar(v) for v in H.normal], "offset": fmt_scalar(H.offset),
            "plane": format_plane(H)}


def cut_report_dict(report):
    return {
        "hyperplane": plane_dict(report.hyperplane),
        "tol": report.tol,
        "all_bisected": report.all_bisected,
        "all_touched": report.all_touched,
        "measures": [{
            "name": m.name, "total": fmt_scalar(m.total),
            "mass_minus": fmt_scalar(m.mass_minus), "mass_on": fmt_scalar(m.mass_on),
            "mass_plus": fmt_scalar(m.mass_plus),
            "touch_witness": fmt_point(m.touch_witness), "witness_index": m.witness_index,
            "support_distance": m.support_distance,
            "bisected": m.bisected, "touched": m.touched,
        } for m in report.measures],
    }


def solution_dict(sol):
    d = sol.diagnostics
    return {
        "hyperplane": plane_dict(sol.hyperplane),
        "report": cut_report_dict(sol.report),
        "witness_tuple": list(sol.witness_tuple) if sol.witness_tuple is not None else None,
        "diagnostics": {"candidates": d.candidates, "completions": d.completions,
                        "perturbation_retries": d.perturbation_retries, "stage": d.stage},
    }


def trace_dict(trace):
    return {
        "converged": trace.converged,
        "angle_residual": trace.angle_residual,
        "offset_residual": trace.offset_residual,
        "hyperplane": plane_dict(trace.hyperplane) if trace.hyperplane else None,
        "levels": [{
            "eps": L.eps, "h": L.h, "strategy": L.strategy,
            "hyperplane": plane_dict(L.hyperplane),
            "totals": L.totals,
            "side_masses": [list(s) for s in L.side_masses],
            "atom_side_masses": [list(s) for s in L.atom_side_masses],
            "slab_masses": L.slab_masses,
            "support_distances": L.support_distances,
            "centroid_distances": L.centroid_distances,
            "incidence": L.incidence, "touch_ok": L.touch_ok, "bisect_ok": L.bisect_ok,
        } for L in trace.levels],
    }


def verify_dict(rep):
    return {
        "hyperplane": plane_dict(rep.hyperplane),
        "verdict": rep.verdict,
        "bisected": rep.bisected,
        "touched": rep.touched,
        "measures": [{
            "name": m.name, "total": fmt_scalar(m.total),
            "mass_minus": fmt_scalar(m.mass_minus), "mass_on": fmt_scalar(m.mass_on),
            "mass_plus": fmt_scalar(m.mass_plus), "bisected": m.bisected,
            "touched": m.touched, "witness": fmt_point(m.witness),
            "nearest_distance": m.nearest_distance,
        } for m in rep.measures],
    }
