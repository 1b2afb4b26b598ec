"""The dk/1 JSON document schema and the polynomial text grammar.

Documents are self-describing: {"schema": "dk/1", "kind": ..., ...}.
Matrices serialize as triplet lists [row, col, "num/den"]; polynomials as
strings in the grammar

    poly     := term ( ('+'|'-') term )*
    term     := rational ( '*' gen ( '^' nat )? )*
    rational := '-'? digits ( '/' digits )?

Emission is canonical (sorted keys, sorted triplets, canonical term
order), so equal values produce byte-identical documents.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .errors import ParseError, PreconditionError
from .cdga import FreeCDGA, GeneratorSpec, GradedPolynomial
from .linalg import ChainComplex, GradedVectorSpace, Matrix
from .simplicial import SimplicialVectorSpace

SCHEMA = "dk/1"


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def parse_scalar(s: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.match(s):
        raise ParseError(f"bad rational literal {s!r}")
    return Fraction(s)


def format_scalar(x: Fraction) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# polynomial grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<rat>-?\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[*+^-]))"
)

#: parsed term: (coefficient, [(generator name, exponent), ...])
Term = tuple[Fraction, list[tuple[str, int]]]


def _tokenize(s: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            if s[pos:].strip():
                raise ParseError(f"cannot tokenize polynomial at {s[pos:]!r}")
            break
        pos = m.end()
        for kind in ("rat", "name", "op"):
            if m.group(kind) is not None:
                out.append((kind, m.group(kind)))
                break
    return out


def parse_poly_terms(s: str) -> list[Term]:
    """Parse the grammar into signed terms; '0' gives the empty list."""
    toks = _tokenize(s)
    if not toks:
        raise ParseError("empty polynomial string")
    terms: list[Term] = []
    i = 0
    sign = Fraction(1)
    first = True
    while i < len(toks):
        if not first:
            kind, val = toks[i]
            if kind != "op" or val not in "+-":
                raise ParseError(f"expected '+' or '-' before a term, got {val!r}")
            sign = Fraction(1) if val == "+" else Fraction(-1)
            i += 1
        kind, val = toks[i]
        if kind != "rat":
            raise ParseError(f"each term must open with a rational, got {val!r}")
        coef = sign * Fraction(val)
        i += 1
        factors: list[tuple[str, int]] = []
        while i < len(toks) and toks[i] == ("op", "*"):
            i += 1
            kind, val = toks[i]
            if kind != "name":
                raise ParseError(f"expected a generator name after '*', got {val!r}")
            name = val
            exp = 1
            i += 1
            if i < len(toks) and toks[i] == ("op", "^"):
                i += 1
                kind, val = toks[i]
                if kind != "rat" or "/" in val or val.startswith("-"):
                    raise ParseError(f"exponent must be a natural number, got {val!r}")
                exp = int(val)
                i += 1
            factors.append((name, exp))
        terms.append((coef, factors))
        first = False
        sign = Fraction(1)
    return [t for t in terms if t[0]]


def parse_graded_poly(s: str, algebra: FreeCDGA) -> GradedPolynomial:
    """Bind a polynomial string in an algebra, normalizing signs through
    the algebra's product."""
    total = GradedPolynomial.zero()
    for coef, factors in parse_poly_terms(s):
        acc = GradedPolynomial.unit()
        for name, exp in factors:
            if name not in algebra.by_name:
                raise ParseError(f"unknown generator {name!r}")
            for _ in range(exp):
                acc = algebra.mul(acc, GradedPolynomial.generator(name))
        total = total + acc.scale(coef)
    return total


def format_graded_poly(p: GradedPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m in sorted(p.terms):
        coef = p.terms[m]
        factors = []
        for name in dict.fromkeys(m):
            e = m.count(name)
            factors.append(f"{name}^{e}" if e > 1 else name)
        body = "*".join([format_scalar(abs(coef))] + factors)
        parts.append((coef < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


# ---------------------------------------------------------------------------
# matrices and complexes
# ---------------------------------------------------------------------------

def matrix_to_json(m: Matrix) -> list:
    return [[r, c, format_scalar(x)] for r, c, x in m.triplets()]


def matrix_from_json(data, rows: int, cols: int) -> Matrix:
    entries = {}
    if not isinstance(data, list):
        raise ParseError("matrix must be a triplet list")
    for item in data:
        if not (isinstance(item, list) and len(item) == 3):
            raise ParseError(f"bad matrix triplet {item!r}")
        r, c, x = item
        if not isinstance(r, int) or not isinstance(c, int):
            raise ParseError(f"bad matrix indices in {item!r}")
        entries[(r, c)] = parse_scalar(x)
    try:
        return Matrix(rows, cols, entries)
    except PreconditionError as e:
        raise ParseError(str(e)) from e


def chain_complex_to_json(c: ChainComplex) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "chain_complex",
        "dims": list(c.dims),
        "differentials": {
            str(k): matrix_to_json(c.boundary(k)) for k in range(1, c.top + 1)
        },
    }


def chain_complex_from_json(doc: dict) -> ChainComplex:
    dims = doc.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 0 for d in dims):
        raise ParseError("chain complex needs a list of non-negative dims")
    raw = doc.get("differentials", {})
    diffs = []
    for k in range(1, len(dims)):
        data = raw.get(str(k), [])
        diffs.append(matrix_from_json(data, dims[k - 1], dims[k]))
    try:
        return ChainComplex(GradedVectorSpace(tuple(dims)), tuple(diffs))
    except PreconditionError as e:
        raise ParseError(f"invalid chain complex: {e}") from e


def simplicial_space_to_json(v: SimplicialVectorSpace) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "simplicial_vector_space",
        "dims": list(v.dims),
        "faces": {
            str(n): [matrix_to_json(v.face(n, i)) for i in range(n + 1)]
            for n in range(1, v.top + 1)
        },
        "degeneracies": {
            str(n): [matrix_to_json(v.degeneracy(n, j)) for j in range(n + 1)]
            for n in range(0, v.top)
        },
    }


def simplicial_space_from_json(doc: dict) -> SimplicialVectorSpace:
    dims = doc.get("dims")
    if not isinstance(dims, list) or not all(isinstance(d, int) and d >= 0 for d in dims):
        raise ParseError("simplicial space needs a list of non-negative dims")
    top = len(dims) - 1
    faces = {}
    for n in range(1, top + 1):
        data = doc.get("faces", {}).get(str(n))
        if not isinstance(data, list) or len(data) != n + 1:
            raise ParseError(f"level {n} needs faces d_0..d_{n}")
        faces[n] = tuple(matrix_from_json(d, dims[n - 1], dims[n]) for d in data)
    degens = {}
    for n in range(0, top):
        data = doc.get("degeneracies", {}).get(str(n))
        if not isinstance(data, list) or len(data) != n + 1:
            raise ParseError(f"level {n} needs degeneracies s_0..s_{n}")
        degens[n] = tuple(matrix_from_json(d, dims[n + 1], dims[n]) for d in data)
    try:
        return SimplicialVectorSpace(GradedVectorSpace(tuple(dims)), faces, degens)
    except PreconditionError as e:
        raise ParseError(f"invalid simplicial vector space: {e}") from e


# ---------------------------------------------------------------------------
# algebras, maps, points
# ---------------------------------------------------------------------------

def cdga_to_json(a: FreeCDGA) -> dict:
    gens = []
    for g in a.generators:
        entry = {"name": g.name, "degree": g.degree}
        if g.weight is not None:
            entry["weight"] = g.weight
        gens.append(entry)
    return {
        "schema": SCHEMA,
        "kind": "cdga",
        "generators": gens,
        "differential": {
            name: format_graded_poly(p)
            for name, p in sorted(a.differential.items())
            if not p.is_zero()
        },
    }


def cdga_from_json(doc: dict) -> FreeCDGA:
    gens_doc = doc.get("generators")
    if not isinstance(gens_doc, list):
        raise ParseError("cdga needs a generator list")
    gens = []
    for g in gens_doc:
        try:
            gens.append(GeneratorSpec(g["name"], g["degree"], g.get("weight")))
        except (KeyError, TypeError, PreconditionError) as e:
            raise ParseError(f"bad generator entry {g!r}: {e}") from e
    skeleton = FreeCDGA(gens)
    raw = doc.get("differential", {})
    if not isinstance(raw, dict):
        raise ParseError("differential must map generator names to polynomials")
    diff = {}
    for name, s in raw.items():
        if name not in skeleton.by_name:
            raise ParseError(f"differential on unknown generator {name!r}")
        diff[name] = parse_graded_poly(s, skeleton)
    try:
        return FreeCDGA(gens, diff)
    except PreconditionError as e:
        raise ParseError(f"invalid cdga: {e}") from e


def point_to_json(p: dict[str, Fraction]) -> dict:
    return {name: format_scalar(v) for name, v in sorted(p.items())}


def point_from_json(doc) -> dict[str, Fraction]:
    if not isinstance(doc, dict):
        raise ParseError("a point must be an object of generator -> rational")
    return {name: parse_scalar(v) for name, v in doc.items()}


def cdga_map_from_json(doc: dict):
    from .cdga import CDGAMorphism

    try:
        domain = cdga_from_json(doc["domain"])
        codomain = cdga_from_json(doc["codomain"])
        images_doc = doc["images"]
    except KeyError as e:
        raise ParseError(f"cdga map needs {e.args[0]!r}") from e
    images = {}
    if not isinstance(images_doc, dict):
        raise ParseError("map images must be an object")
    for name, s in images_doc.items():
        images[name] = parse_graded_poly(s, codomain)
    for g in domain.generators:
        images.setdefault(g.name, GradedPolynomial.zero())
    try:
        return CDGAMorphism(domain, codomain, images)
    except PreconditionError as e:
        raise ParseError(f"invalid algebra map: {e}") from e


def cdga_map_to_json(f) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "cdga_map",
        "domain": cdga_to_json(f.source),
        "codomain": cdga_to_json(f.target),
        "images": {
            name: format_graded_poly(p) for name, p in sorted(f.images.items())
        },
    }


# ---------------------------------------------------------------------------
# envelope helpers
# ---------------------------------------------------------------------------

def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise ParseError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
