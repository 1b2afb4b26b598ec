"""Batch front door: parse dk/1 documents, dispatch computations, emit
deterministic reports.

Exit codes: 0 success, 1 false verdict, 2 parse error, 3 precondition
violation. Reports are emitted as canonical JSON (sorted keys) or as a
plain-text table; two runs over the same input are byte-identical.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import serialize as ser
from .errors import DKError, ParseError, PreconditionError
from .cdga import (
    FreeCDGA,
    GeneratorSpec,
    GradedPolynomial,
    koszul_complex,
    tor_dimensions,
)
from .cartesian import (
    DerivedCartesianSpace,
    differential_forms_generators,
    is_classical_point,
    is_fibration_at,
    is_weak_equivalence,
    tangent_complex,
)
from .linalg import homology
from .simplicial import (
    enumerate_shuffles,
    gamma,
    homotopy_moore,
    homotopy_normalized,
    normalized_chains,
    reduced_disk_chains,
    reduced_sphere_chains,
)
from .simplicial_algebra import (
    beta,
    connectivity_check,
    face_kernel_ideal_check,
    free_simplicial_algebra,
    induced_theta,
    lp_gen,
    q_functor,
)

DEFAULT_T = 4
DEFAULT_W = 4


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def _thread_cap() -> int:
    raw = os.environ.get("DK_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise PreconditionError(f"DK_THREADS must be a positive integer, got {raw!r}")
    if cap < 1:
        raise PreconditionError("DK_THREADS must be >= 1")
    return cap


def _read_input(args) -> dict:
    if not args.infile:
        raise ParseError("this command requires --in")
    try:
        with open(args.infile, "r", encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as e:
        raise ParseError(f"cannot read input: {e}") from e


def _expect_kind(doc: dict, kind: str) -> dict:
    if doc.get("kind") != kind:
        raise ParseError(f"expected a {kind!r} document, got {doc.get('kind')!r}")
    return doc


def _report(command: str, data: dict, verdict=None) -> dict:
    doc = {"schema": ser.SCHEMA, "kind": "report", "command": command, "data": data}
    if verdict is not None:
        doc["verdict"] = verdict
    return doc


def _render_table(doc: dict, lines=None, prefix="") -> str:
    if lines is None:
        lines = []
        _render_table(doc, lines)
        return "\n".join(lines) + "\n"
    for key in sorted(doc):
        value = doc[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            _render_table(value, lines, prefix + "  ")
        elif isinstance(value, list) and value and all(isinstance(r, list) for r in value):
            lines.append(f"{prefix}{key}:")
            widths = [max(len(str(r[i])) for r in value) for i in range(len(value[0]))]
            for r in value:
                cells = "  ".join(str(c).rjust(w) for c, w in zip(r, widths))
                lines.append(f"{prefix}  {cells}")
        else:
            lines.append(f"{prefix}{key}: {value}")
    return ""


def _emit(args, doc: dict) -> None:
    if args.format == "table" and doc.get("kind") == "report":
        text = _render_table(doc)
    else:
        text = ser.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _format_monomial(m) -> str:
    if not m:
        return "1"
    out = []
    for name in dict.fromkeys(m):
        e = m.count(name)
        out.append(f"{name}^{e}" if e > 1 else name)
    return "*".join(out)


# ---------------------------------------------------------------------------
# command handlers (each returns (report doc or raw doc, verdict or None))
# ---------------------------------------------------------------------------

def cmd_homology(args):
    alg = ser.cdga_from_json(_expect_kind(_read_input(args), "cdga"))
    max_degree = args.degree if args.degree is not None else args.max_degree
    table = [
        [n, w, alg.homology_bigraded(n, w).dimension]
        for n in range(max_degree + 1)
        for w in range(args.max_weight + 1)
    ]
    return _report("homology", {"max_degree": max_degree,
                                "max_weight": args.max_weight,
                                "table": table}), None


def cmd_homotopy(args):
    space = ser.simplicial_space_from_json(
        _expect_kind(_read_input(args), "simplicial_vector_space"))
    rows = []
    for k in range(min(space.top - 1, args.max_degree) + 1):
        moore = homotopy_moore(space, k)
        normal = homotopy_normalized(space, k)
        rows.append([k, moore, normal.dimension])
    agree = all(r[1] == r[2] for r in rows)
    return _report("homotopy", {"reliable_through": space.top - 1, "table": rows},
                   agree), agree


def cmd_normalize(args):
    space = ser.simplicial_space_from_json(
        _expect_kind(_read_input(args), "simplicial_vector_space"))
    return ser.chain_complex_to_json(normalized_chains(space).complex), None


def cmd_gamma(args):
    cx = ser.chain_complex_from_json(_expect_kind(_read_input(args), "chain_complex"))
    top = min(cx.top, args.max_degree)
    return ser.simplicial_space_to_json(gamma(cx, top).space), None


def cmd_ez_table(args):
    shuffles = enumerate_shuffles(args.p, args.q)
    rows = [[list(s.p_set), list(s.q_set), s.sign] for s in shuffles]
    return _report("ez-table", {"p": args.p, "q": args.q, "count": len(rows),
                                "table": rows}), None


def cmd_attach(args):
    doc = _expect_kind(_read_input(args), "attach_request")
    alg = ser.cdga_from_json(doc.get("algebra", {}))
    cell = doc.get("cell")
    if not isinstance(cell, dict):
        raise ParseError("attach_request needs a cell object")
    try:
        spec = GeneratorSpec(cell["name"], cell["degree"], cell.get("weight"))
        boundary = ser.parse_graded_poly(cell.get("boundary", "0"), alg)
    except KeyError as e:
        raise ParseError(f"cell needs {e.args[0]!r}") from e
    return ser.cdga_to_json(alg.attach_cell(spec, boundary)), None


def cmd_koszul(args):
    complexes = koszul_complex(args.generators, args.max_weight)
    rows = []
    ok = True
    for w in sorted(complexes):
        cx = complexes[w]
        dims = [homology(cx, k).dimension for k in range(cx.top + 1)]
        expected = [1 if (w == 0 and k == 0) else 0 for k in range(cx.top + 1)]
        rows.append([w, dims])
        ok = ok and dims == expected
    return _report("koszul", {"generators": args.generators, "table": rows}, ok), ok


def cmd_tor(args):
    dims = tor_dimensions(args.generators)
    expected = [_binomial(args.generators, j) for j in range(args.generators + 1)]
    ok = dims == expected
    return _report("tor", {"generators": args.generators, "dims": dims,
                           "expected": expected}, ok), ok


def cmd_q_functor(args):
    alg = ser.cdga_from_json(_expect_kind(_read_input(args), "cdga"))
    qa = q_functor(alg, args.max_degree, args.max_weight)
    table = [
        [n, w, qa.quotient_dimension(n, w)]
        for n in range(qa.top + 1)
        for w in range(qa.max_weight + 1)
    ]
    legend = {
        str(n): [f"{lab}: {leg}" for lab, leg in zip(qa.gen_labels[n], qa.legends[n])]
        for n in range(qa.top + 1)
    }
    return _report("q-functor", {"table": table, "legend": legend}), None


def cmd_beta_check(args):
    alg = ser.cdga_from_json(_expect_kind(_read_input(args), "cdga"))
    cert = beta(alg, args.max_degree, args.max_weight)
    rows = [list(r) for r in cert.rows]
    return _report("beta-check", {"max_degree": cert.top,
                                  "max_weight": cert.max_weight,
                                  "rows": rows}, cert.verdict), cert.verdict


def cmd_theta(args):
    doc = _expect_kind(_read_input(args), "theta_request")
    alg = ser.cdga_from_json(doc.get("algebra", {}))
    phi_doc = doc.get("phi")
    T, W = args.max_degree, args.max_weight
    qa = q_functor(alg, T, W)
    monos = []
    for k in range(T + 1):
        for w in range(1, W + 1):
            monos.extend(m for m in alg.basis(k, w) if m)
    if phi_doc == "beta":
        target = qa
        phi = {m: lp_gen(qa.gamma_generator(m)[1]) for m in monos}
    elif phi_doc == "augmentation":
        from .simplicial import SimplicialVectorSpace
        from .linalg import GradedVectorSpace, Matrix
        zero_space = SimplicialVectorSpace(
            GradedVectorSpace((0,) * (T + 1)),
            {n: tuple(Matrix.zero(0, 0) for _ in range(n + 1)) for n in range(1, T + 1)},
            {n: tuple(Matrix.zero(0, 0) for _ in range(n + 1)) for n in range(0, T)},
        )
        target = free_simplicial_algebra(zero_space, W)
        phi = {m: {} for m in monos}
    elif isinstance(phi_doc, dict):
        target_alg = ser.cdga_from_json(phi_doc.get("target", {}))
        target = q_functor(target_alg, T, W)
        images_doc = phi_doc.get("images", {})
        name_to_gen = {}
        for n in range(target.top + 1):
            for i, lab in enumerate(target.gen_labels[n]):
                name_to_gen[lab] = (n, i)
        phi = {}
        for m in monos:
            key = _format_monomial(m)
            if key not in images_doc:
                raise ParseError(f"phi misses the basis monomial {key!r}")
            level = alg.monomial_degree(m)
            img = {}
            for coef, factors in ser.parse_poly_terms(images_doc[key]):
                mono = []
                for name, exp in factors:
                    if name not in name_to_gen:
                        raise ParseError(f"unknown target generator {name!r}")
                    lvl, gi = name_to_gen[name]
                    if lvl != level:
                        raise ParseError(
                            f"generator {name!r} lives at level {lvl}, not {level}")
                    mono.extend([gi] * exp)
                key2 = tuple(sorted(mono))
                img[key2] = img.get(key2, Fraction(0)) + coef
            phi[m] = {k: v for k, v in img.items() if v}
    else:
        raise ParseError("phi must be 'beta', 'augmentation', or an images object")
    theta = induced_theta(qa, target, phi)
    images = {
        str(n): [
            f"{qa.gen_labels[n][i]} -> "
            + _format_level_poly(theta.generator_images[n][i], target.gen_labels[n])
            for i in range(qa.n_gens(n))
        ]
        for n in range(qa.top + 1)
    }
    identity = all(
        theta.matrices[(n, w)] == _identity_like(theta.matrices[(n, w)])
        for (n, w) in theta.matrices
    ) if target is qa else False
    return _report("theta", {"images": images, "is_identity_on_quotients": identity},
                   True), True


def _identity_like(m):
    from .linalg import Matrix
    if m.rows != m.cols:
        return None
    return Matrix.identity(m.rows)


def _format_level_poly(p, labels) -> str:
    if not p:
        return "0"
    parts = []
    for mono in sorted(p):
        coef = p[mono]
        factors = []
        for gi in dict.fromkeys(mono):
            e = mono.count(gi)
            factors.append(f"{labels[gi]}^{e}" if e > 1 else labels[gi])
        body = "*".join([ser.format_scalar(abs(coef))] + factors)
        parts.append((coef < 0, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _build_simplicial_base(doc: dict, T: int, W: int):
    base = doc.get("base")
    if not isinstance(base, dict):
        raise ParseError("request needs a base object")
    kind = base.get("type")
    if kind == "sphere-algebra":
        space, _ = reduced_sphere_chains(base.get("n", 1), T)
        return free_simplicial_algebra(space, W)
    if kind == "disk-algebra":
        space, _ = reduced_disk_chains(base.get("k", 1), T)
        return free_simplicial_algebra(space, W)
    if kind == "q-of":
        alg = ser.cdga_from_json(base.get("algebra", {}))
        return q_functor(alg, T, W)
    raise ParseError(f"unknown base type {kind!r}")


def cmd_connectivity(args):
    doc = _expect_kind(_read_input(args), "connectivity_request")
    power = doc.get("power")
    if not isinstance(power, int):
        raise ParseError("connectivity_request needs an integer power")
    algebra = _build_simplicial_base(doc, args.max_degree, args.max_weight)
    report = connectivity_check(algebra, power, args.max_weight)
    rows = [list(r) for r in report.rows]
    return _report("connectivity", {"power": power, "rows": rows},
                   report.verdict), report.verdict


def cmd_kernel_ideal(args):
    report = face_kernel_ideal_check(args.sphere, args.level, args.face,
                                     args.max_weight)
    rows = [list(r) for r in report.rows]
    return _report("kernel-ideal-check",
                   {"sphere": args.sphere, "level": args.level, "face": args.face,
                    "rows": rows}, report.verdict), report.verdict


def cmd_classical_point(args):
    doc = _read_input(args)
    alg = ser.cdga_from_json(doc.get("algebra", {}))
    point = ser.point_from_json(doc.get("point", {}))
    verdict = is_classical_point(DerivedCartesianSpace(alg), point)
    return _report("classical-point", {"point": ser.point_to_json(point)},
                   verdict), verdict


def cmd_tangent(args):
    doc = _read_input(args)
    alg = ser.cdga_from_json(doc.get("algebra", {}))
    point = ser.point_from_json(doc.get("point", {}))
    tc = tangent_complex(DerivedCartesianSpace(alg), point)
    data = {
        "bases": {str(j): list(b) for j, b in enumerate(tc.bases)},
        "maps": {str(j): ser.matrix_to_json(m) for j, m in enumerate(tc.maps)},
        "cohomology": [[j, tc.cohomology_dimension(j)] for j in range(tc.amplitude + 1)],
    }
    return _report("tangent", data), None


def cmd_weq_check(args):
    doc = _expect_kind(_read_input(args), "weq_request")
    f = ser.cdga_map_from_json(doc.get("map", {}))
    source_points = [ser.point_from_json(p) for p in doc.get("source_points", [])]
    target_points = [ser.point_from_json(p) for p in doc.get("target_points", [])]
    report = is_weak_equivalence(f, source_points, target_points)
    data = {
        "point_bijection": report.point_bijection,
        "pairs": [list(p) for p in report.pairs],
        "tangent": {
            str(i): [list(r) for r in rows] for i, rows in report.tangent_rows
        },
        "points_asserted_complete": report.points_asserted_complete,
    }
    return _report("weq-check", data, report.verdict), report.verdict


def cmd_fibration_check(args):
    doc = _read_input(args)
    f = ser.cdga_map_from_json(doc.get("map", {}))
    point = ser.point_from_json(doc.get("point", {}))
    verdict = is_fibration_at(f, point)
    return _report("fibration-check", {"point": ser.point_to_json(point)},
                   verdict), verdict


def cmd_forms(args):
    doc = _read_input(args)
    alg = ser.cdga_from_json(doc.get("algebra", {}))
    origin = ser.point_from_json(doc["origin"]) if "origin" in doc else None
    rep = differential_forms_generators(
        DerivedCartesianSpace(alg), origin,
        max_degree=args.max_degree, max_weight=args.max_weight)
    data = {
        "generators": [
            {"name": g.name, "degree": g.degree, "weight": g.weight}
            for g in rep.generators
        ],
        "dims": [[n, w, rep.dims[(n, w)]] for (n, w) in sorted(rep.dims)],
    }
    return _report("forms", data), None


COMMANDS = {
    "homology": cmd_homology,
    "homotopy": cmd_homotopy,
    "normalize": cmd_normalize,
    "gamma": cmd_gamma,
    "ez-table": cmd_ez_table,
    "attach": cmd_attach,
    "koszul": cmd_koszul,
    "tor": cmd_tor,
    "q-functor": cmd_q_functor,
    "beta-check": cmd_beta_check,
    "theta": cmd_theta,
    "connectivity": cmd_connectivity,
    "kernel-ideal-check": cmd_kernel_ideal,
    "classical-point": cmd_classical_point,
    "tangent": cmd_tangent,
    "weq-check": cmd_weq_check,
    "fibration-check": cmd_fibration_check,
    "forms": cmd_forms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dk",
        description="Exact computations around the Dold-Kan correspondence "
                    "for commutative algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--in", dest="infile", default=None,
                       help="input dk/1 JSON document")
        p.add_argument("--out", dest="out", default=None,
                       help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("-T", "--max-degree", type=int, default=DEFAULT_T)
        p.add_argument("-W", "--max-weight", type=int, default=DEFAULT_W)
        if name == "homology":
            p.add_argument("--degree", type=int, default=None,
                           help="largest chain degree to report")
        if name == "ez-table":
            p.add_argument("--p", type=int, required=True)
            p.add_argument("--q", type=int, required=True)
        if name in ("koszul", "tor"):
            p.add_argument("--generators", type=int, required=True)
        if name == "kernel-ideal-check":
            p.add_argument("--sphere", type=int, required=True)
            p.add_argument("--level", type=int, required=True)
            p.add_argument("--face", type=int, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.max_degree < 1 or args.max_weight < 0:
            raise PreconditionError("need max degree >= 1 and max weight >= 0")
        _thread_cap()
        doc, verdict = COMMANDS[args.command](args)
        _emit(args, doc)
    except ParseError as e:
        print(f"dk: parse error: {e}", file=sys.stderr)
        return 2
    except PreconditionError as e:
        print(f"dk: precondition violated: {e}", file=sys.stderr)
        return 3
    except DKError as e:
        print(f"dk: error: {e}", file=sys.stderr)
        return 3
    if verdict is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
