"""JSON encodings of scalars, complexes, formal objects, morphisms and functors."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict

from .complexes import FreeComplex, ModuleComplex
from .decomp import INF, FormalObject, format_index, parse_index
from .endofunctors import CoeffAssignment
from .homspace import HomDescriptor, SymMorphism
from .linalg import DualMatrix, DualScalar, Field, zeros
from .stability import HNFactor, StabilityCondition


class FormatError(ValueError):
    """Malformed input document."""


def _req(d: Dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{where}: missing key {key!r}")
    return d[key]


# scalars -------------------------------------------------------------------


def scalar_to_json(field: Field, x) -> str:
    return field.fmt(x)


def scalar_from_json(field: Field, s) -> Any:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise FormatError(f"scalar must be a string, got {s!r}")
    try:
        return field(Fraction(s) if isinstance(s, str) else s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"bad scalar {s!r}: {e}") from None


def dual_to_json(x: DualScalar) -> Dict[str, str]:
    return {"a": x.field.fmt(x.a), "b": x.field.fmt(x.b)}


def dual_from_json(field: Field, d) -> DualScalar:
    return DualScalar(field, scalar_from_json(field, _req(d, "a", "dual scalar")),
                      scalar_from_json(field, _req(d, "b", "dual scalar")))


def _dual_matrix_to_json(M: DualMatrix):
    return [[dual_to_json(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def _dual_matrix_from_json(field: Field, rows, shape, where: str) -> DualMatrix:
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
        raise FormatError(f"{where}: expected a {r}x{c} matrix")
    M = DualMatrix(field, r, c)
    for i in range(r):
        for j in range(c):
            M[i, j] = dual_from_json(field, rows[i][j])
    return M


def _matrix_to_json(field: Field, M):
    return [[field.fmt(x) for x in row] for row in M]


def _matrix_from_json(field: Field, rows, shape, where: str):
    r, c = shape
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
        raise FormatError(f"{where}: expected a {r}x{c} matrix")
    return [[scalar_from_json(field, x) for x in row] for row in rows]


# complexes -----------------------------------------------------------------


def _degree_map(d, where: str) -> Dict[int, Any]:
    if not isinstance(d, dict):
        raise FormatError(f"{where}: expected an object keyed by degree")
    try:
        return {int(k): v for k, v in d.items()}
    except ValueError:
        raise FormatError(f"{where}: degree keys must be integers") from None


def complex_to_json(C) -> Dict:
    if isinstance(C, ModuleComplex):
        F = C.field
        diffs = {}
        for n, (AA, AK, KA, KK) in sorted(C.diffs.items()):
            diffs[str(n)] = {
                "aa": _dual_matrix_to_json(AA),
                "ak": _matrix_to_json(F, AK),
                "ka": _matrix_to_json(F, KA),
                "kk": _matrix_to_json(F, KK),
            }
        return {
            "ranks": {str(n): f for n, (f, t) in sorted(C.terms.items()) if f},
            "kterms": {str(n): t for n, (f, t) in sorted(C.terms.items()) if t},
            "diffs": diffs,
        }
    return {
        "ranks": {str(n): r for n, r in sorted(C.ranks.items())},
        "diffs": {str(n): _dual_matrix_to_json(M) for n, M in sorted(C.diffs.items())},
    }


def complex_from_json(field: Field, doc) -> FreeComplex | ModuleComplex:
    ranks = _degree_map(_req(doc, "ranks", "complex"), "ranks")
    for n, r in ranks.items():
        if not isinstance(r, int) or r < 0:
            raise FormatError(f"rank in degree {n} must be a nonnegative integer")
    diffs = _degree_map(doc.get("diffs", {}), "diffs")
    if "kterms" in doc:
        kt = _degree_map(doc["kterms"], "kterms")
        terms = {n: (ranks.get(n, 0), kt.get(n, 0)) for n in set(ranks) | set(kt)}
        C0 = ModuleComplex(field, terms)
        blocks = {}
        for n, d in diffs.items():
            f0, t0 = C0.term(n)
            f1, t1 = C0.term(n + 1)
            w = f"diffs[{n}]"
            if not isinstance(d, dict):
                raise FormatError(f"{w}: expected an object with aa/ak/ka/kk blocks")
            aa = (_dual_matrix_from_json(field, d["aa"], (f1, f0), w + ".aa")
                  if "aa" in d else DualMatrix(field, f1, f0))
            typed = []
            for key, shape in (("ak", (t1, f0)), ("ka", (f1, t0)), ("kk", (t1, t0))):
                if key in d:
                    typed.append(_matrix_from_json(field, d[key], shape, f"{w}.{key}"))
                else:
                    typed.append(zeros(*shape, field))
            blocks[n] = (aa, *typed)
        return ModuleComplex(field, terms, blocks)
    mats = {}
    for n, rows in diffs.items():
        shape = (ranks.get(n + 1, 0), ranks.get(n, 0))
        mats[n] = _dual_matrix_from_json(field, rows, shape, f"diffs[{n}]")
    return FreeComplex(field, ranks, mats)


# formal objects and morphisms ------------------------------------------------


def index_to_json(i):
    return format_index(i) if i == INF else int(i)


def formal_to_json(F: FormalObject) -> Dict:
    out = []
    for i, h, m in F.summands:
        out.append({"i": index_to_json(i), "h": h, "m": m})
    return {"summands": out}


def formal_from_json(doc) -> FormalObject:
    items = _req(doc, "summands", "formal object")
    if not isinstance(items, list):
        raise FormatError("summands must be a list")
    try:
        return FormalObject.of(
            [(parse_index(_req(s, "i", "summand")), int(_req(s, "h", "summand")), int(s.get("m", 1)))
             for s in items])
    except (TypeError, ValueError) as e:
        raise FormatError(f"bad summand: {e}") from None


def parse_formal(text: str) -> FormalObject:
    """Compact form ``"3:0,inf:2,1:-1x2"``: index:shift, optional ``xM`` multiplicity."""
    items = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        m = 1
        if "x" in tok:
            tok, mm = tok.split("x", 1)
            m = int(mm)
        if ":" in tok:
            i, h = tok.split(":", 1)
        else:
            i, h = tok, "0"
        try:
            items.append((parse_index(i), int(h), m))
        except ValueError as e:
            raise FormatError(f"bad object token {tok!r}: {e}") from None
    return FormalObject.of(items)


def sym_to_json(f: SymMorphism) -> Dict:
    F = f.field
    blocks = [
        {"from": s, "to": t, "a": F.fmt(a), "b": F.fmt(b)}
        for (s, t), (a, b) in sorted(f.blocks.items())
    ]
    return {"source": formal_to_json(f.source), "target": formal_to_json(f.target), "blocks": blocks}


def sym_from_json(field: Field, doc) -> SymMorphism:
    src = formal_from_json(_req(doc, "source", "morphism"))
    tgt = formal_from_json(_req(doc, "target", "morphism"))
    blocks = {}
    for b in doc.get("blocks", []):
        key = (int(_req(b, "from", "block")), int(_req(b, "to", "block")))
        blocks[key] = (scalar_from_json(field, b.get("a", "0")), scalar_from_json(field, b.get("b", "0")))
    try:
        return SymMorphism(field, src, tgt, blocks)
    except ValueError as e:
        raise FormatError(str(e)) from None


def hom_to_json(i, j, alpha: int, d: HomDescriptor) -> Dict:
    return {"i": index_to_json(i), "j": index_to_json(j), "alpha": alpha, "dim": d.dim,
            "one_type": d.has_one_type, "eps_type": d.has_eps_type}


# functors ------------------------------------------------------------------


def coeffs_to_json(c: CoeffAssignment) -> Dict:
    F = c.field
    return {
        "shift": c.shift,
        "window": {"imax": c.imax, "amax": c.amax},
        "coeffs": [{"i": i, "j": j, "alpha": a, "value": F.fmt(v)} for (i, j, a), v in sorted(c.coeffs.items())],
    }


def coeffs_from_json(field: Field, doc) -> CoeffAssignment:
    win = _req(doc, "window", "assignment")
    imax = int(_req(win, "imax", "window"))
    amax = int(win.get("amax", imax))
    coeffs = {}
    for e in _req(doc, "coeffs", "assignment"):
        key = (int(_req(e, "i", "coeff")), int(_req(e, "j", "coeff")), int(_req(e, "alpha", "coeff")))
        coeffs[key] = scalar_from_json(field, _req(e, "value", "coeff"))
    try:
        return CoeffAssignment(field, imax, amax, coeffs, int(doc.get("shift", 0)))
    except ValueError as e:
        raise FormatError(str(e)) from None


# stability -----------------------------------------------------------------


def sigma_to_json(s: StabilityCondition) -> Dict:
    return {"h": s.h, "mass": s.mass, "phi": s.phi}


def sigma_from_json(doc) -> StabilityCondition:
    try:
        return StabilityCondition(int(_req(doc, "h", "sigma")), float(_req(doc, "mass", "sigma")),
                                  float(_req(doc, "phi", "sigma")))
    except (TypeError, ValueError) as e:
        raise FormatError(str(e)) from None


def parse_sigma(text: str) -> StabilityCondition:
    """``"h,mass,phi"``, e.g. ``"0,1,0.5"``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise FormatError(f"expected h,mass,phi, got {text!r}")
    try:
        return StabilityCondition(int(parts[0]), float(parts[1]), float(Fraction(parts[2].strip())))
    except ValueError as e:
        raise FormatError(str(e)) from None


def chart_to_json(z: complex) -> Dict:
    return {"re": z.real, "im": z.imag}


def hn_to_json(factors) -> list:
    return [{"phase": f.phase, "object": formal_to_json(f.object)} for f in factors]


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
