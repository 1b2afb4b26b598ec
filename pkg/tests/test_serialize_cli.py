"""Document round-trips, the polynomial grammar, CLI behaviour and exit codes."""

import json
from fractions import Fraction

import pytest

from conftest import critical_x2_algebra, disk_algebra, random_chain_complex
from doldkan import serialize as ser
from doldkan.cli import main
from doldkan.errors import ParseError
from doldkan.cdga import FreeCDGA, GeneratorSpec, GradedPolynomial
from doldkan.simplicial import gamma
from doldkan.linalg import sphere_complex


# -- grammar -------------------------------------------------------------------

def test_scalar_parsing():
    assert ser.parse_scalar("-3/6") == Fraction(-1, 2)
    assert ser.format_scalar(Fraction(4, 2)) == "2"
    for bad in ("1.5", "x", "--3", "1/-2", ""):
        with pytest.raises(ParseError):
            ser.parse_scalar(bad)


def test_poly_grammar_roundtrip():
    crit = critical_x2_algebra()
    p = ser.parse_graded_poly("1*x^2*xi - 2/3*x + 5", crit)
    assert p.terms[("x", "x", "xi")] == Fraction(1)
    assert p.terms[("x",)] == Fraction(-2, 3)
    assert p.terms[()] == Fraction(5)
    printed = ser.format_graded_poly(p)
    assert ser.parse_graded_poly(printed, crit) == p
    assert ser.parse_graded_poly("0", crit).is_zero()
    assert ser.format_graded_poly(GradedPolynomial.zero()) == "0"


def test_poly_grammar_normalizes_odd_signs():
    A = FreeCDGA([GeneratorSpec("a", 1, 1), GeneratorSpec("b", 1, 1)])
    p = ser.parse_graded_poly("1*b*a", A)
    q = ser.parse_graded_poly("-1*a*b", A)
    assert p == q
    assert ser.parse_graded_poly("1*a*a", A).is_zero()


def test_poly_grammar_rejects_garbage():
    crit = critical_x2_algebra()
    for bad in ("x", "1**x", "1*x^-1", "1*x^1/2", "1*unknown", "1 2", "+", ""):
        with pytest.raises(ParseError):
            ser.parse_graded_poly(bad, crit)


# -- document round-trips ---------------------------------------------------------

def test_chain_complex_roundtrip(rng):
    for _ in range(10):
        cx = random_chain_complex(rng, top=3)
        doc = ser.chain_complex_to_json(cx)
        text = ser.dumps(doc)
        back = ser.chain_complex_from_json(ser.loads(text))
        assert back == cx
        assert ser.dumps(ser.chain_complex_to_json(back)) == text


def test_simplicial_space_roundtrip():
    g = gamma(sphere_complex(1, 3))
    doc = ser.simplicial_space_to_json(g.space)
    text = ser.dumps(doc)
    back = ser.simplicial_space_from_json(ser.loads(text))
    assert back.dims == g.space.dims
    assert all(back.face(n, i) == g.space.face(n, i)
               for n in range(1, 4) for i in range(n + 1))
    assert ser.dumps(ser.simplicial_space_to_json(back)) == text


def test_cdga_roundtrip():
    for alg in (critical_x2_algebra(), disk_algebra(2), FreeCDGA([])):
        doc = ser.cdga_to_json(alg)
        text = ser.dumps(doc)
        back = ser.cdga_from_json(ser.loads(text))
        assert [g.name for g in back.generators] == [g.name for g in alg.generators]
        assert back.differential == alg.differential
        assert ser.dumps(ser.cdga_to_json(back)) == text


def test_invalid_documents_raise_parse_errors():
    with pytest.raises(ParseError):
        ser.loads("not json")
    with pytest.raises(ParseError):
        ser.loads('{"schema": "other/1"}')
    with pytest.raises(ParseError):
        ser.chain_complex_from_json({"dims": [1, "x"]})
    with pytest.raises(ParseError):
        ser.cdga_from_json({"generators": [{"name": "x"}]})
    # d without d^2 = 0 must be rejected at parse boundary
    bad = {
        "schema": "dk/1", "kind": "cdga",
        "generators": [{"name": "x", "degree": 0, "weight": 1},
                       {"name": "y", "degree": 1, "weight": 1},
                       {"name": "z", "degree": 2, "weight": 1}],
        "differential": {"y": "1*x", "z": "1*y"},
    }
    with pytest.raises(ParseError):
        ser.cdga_from_json(bad)


# -- CLI ---------------------------------------------------------------------------

S1_DOC = {
    "schema": "dk/1", "kind": "cdga",
    "generators": [{"name": "xi", "degree": 1, "weight": 1}],
    "differential": {},
}

D1_DOC = {
    "schema": "dk/1", "kind": "cdga",
    "generators": [{"name": "x", "degree": 0, "weight": 1},
                   {"name": "y", "degree": 1, "weight": 1}],
    "differential": {"y": "1*x"},
}

CRIT_DOC = {
    "schema": "dk/1", "kind": "cdga",
    "generators": [{"name": "x", "degree": 0}, {"name": "xi", "degree": 1}],
    "differential": {"xi": "1*x^2"},
}


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_cli_homology_table(tmp_path, capsys):
    path = write(tmp_path, "s1.json", S1_DOC)
    code, out = run(["homology", "--in", path, "--degree", "1", "-W", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    table = {(n, w): d for n, w, d in doc["data"]["table"]}
    assert table == {(0, 0): 1, (0, 1): 0, (1, 0): 0, (1, 1): 1}


def test_cli_beta_check_exit_codes(tmp_path, capsys):
    path = write(tmp_path, "d1.json", D1_DOC)
    code, out = run(["beta-check", "--in", path, "-T", "3", "-W", "3"], capsys)
    assert code == 0
    assert json.loads(out)["verdict"] is True


def test_cli_tangent(tmp_path, capsys):
    req = {"schema": "dk/1", "kind": "tangent_request",
           "algebra": CRIT_DOC, "point": {"x": "0"}}
    path = write(tmp_path, "t.json", req)
    code, out = run(["tangent", "--in", path], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["data"]["cohomology"] == [[0, 1], [1, 1]]


def test_cli_classical_point_false_verdict_exit_one(tmp_path, capsys):
    req = {"schema": "dk/1", "kind": "classical_point_request",
           "algebra": CRIT_DOC, "point": {"x": "1"}}
    path = write(tmp_path, "p.json", req)
    code, out = run(["classical-point", "--in", path], capsys)
    assert code == 1
    assert json.loads(out)["verdict"] is False


def test_cli_parse_error_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    code = main(["homology", "--in", str(path)])
    assert code == 2
    code = main(["homology"])  # missing --in
    assert code == 2


def test_cli_precondition_exit_three(tmp_path, capsys):
    # weights are required by the q-functor: unweighted input violates a
    # precondition rather than the document grammar
    path = write(tmp_path, "crit.json", CRIT_DOC)
    code = main(["q-functor", "--in", path, "-T", "2", "-W", "2"])
    assert code == 3


def test_cli_normalize_gamma_roundtrip(tmp_path, capsys):
    cx = sphere_complex(1, 3)
    path = write(tmp_path, "s1cx.json", ser.chain_complex_to_json(cx))
    code, out = run(["gamma", "--in", path, "-T", "3"], capsys)
    assert code == 0
    gdoc = tmp_path / "gamma.json"
    gdoc.write_text(out, encoding="utf-8")
    code, out2 = run(["normalize", "--in", str(gdoc)], capsys)
    assert code == 0
    back = ser.chain_complex_from_json(ser.loads(out2))
    assert back == cx


def test_cli_koszul_tor_connectivity(tmp_path, capsys):
    code, out = run(["koszul", "--generators", "2", "-W", "3"], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True
    code, out = run(["tor", "--generators", "3"], capsys)
    assert code == 0 and json.loads(out)["data"]["dims"] == [1, 3, 3, 1]
    req = {"schema": "dk/1", "kind": "connectivity_request",
           "base": {"type": "sphere-algebra", "n": 1}, "power": 2}
    path = write(tmp_path, "conn.json", req)
    code, out = run(["connectivity", "--in", path, "-T", "3", "-W", "3"], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True


def test_cli_kernel_ideal_and_ez(tmp_path, capsys):
    code, out = run(["kernel-ideal-check", "--sphere", "1", "--level", "2",
                     "--face", "1", "-W", "2"], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True
    code, out = run(["ez-table", "--p", "2", "--q", "1"], capsys)
    assert code == 0 and json.loads(out)["data"]["count"] == 3


def test_cli_weq_and_fibration(tmp_path, capsys):
    req = {
        "schema": "dk/1", "kind": "weq_request",
        "map": {"domain": {"schema": "dk/1", "kind": "cdga", "generators": [],
                           "differential": {}},
                "codomain": CRIT_DOC, "images": {}},
        "source_points": [{"x": "0"}],
        "target_points": [{}],
    }
    path = write(tmp_path, "weq.json", req)
    code, out = run(["weq-check", "--in", path], capsys)
    assert code == 1
    assert json.loads(out)["verdict"] is False
    fib = {
        "schema": "dk/1", "kind": "fibration_request",
        "map": {"domain": {"schema": "dk/1", "kind": "cdga",
                           "generators": [{"name": "u", "degree": 0}],
                           "differential": {}},
                "codomain": {"schema": "dk/1", "kind": "cdga",
                             "generators": [{"name": "x", "degree": 0},
                                            {"name": "y", "degree": 0}],
                             "differential": {}},
                "images": {"u": "1*x"}},
        "point": {"x": "1", "y": "2"},
    }
    path = write(tmp_path, "fib.json", fib)
    code, out = run(["fibration-check", "--in", path], capsys)
    assert code == 0 and json.loads(out)["verdict"] is True


def test_cli_attach_emits_reparseable_document(tmp_path, capsys):
    req = {"schema": "dk/1", "kind": "attach_request",
           "algebra": S1_DOC,
           "cell": {"name": "y", "degree": 2, "weight": 1, "boundary": "1*xi"}}
    path = write(tmp_path, "attach.json", req)
    code, out = run(["attach", "--in", path], capsys)
    assert code == 0
    back = ser.cdga_from_json(ser.loads(out))
    assert [g.name for g in back.generators] == ["xi", "y"]
    assert back.differential["y"] == GradedPolynomial.generator("xi")


def test_cli_theta_beta_mate(tmp_path, capsys):
    req = {"schema": "dk/1", "kind": "theta_request",
           "algebra": S1_DOC, "phi": "beta"}
    path = write(tmp_path, "theta.json", req)
    code, out = run(["theta", "--in", path, "-T", "2", "-W", "2"], capsys)
    assert code == 0
    assert json.loads(out)["data"]["is_identity_on_quotients"] is True


def test_cli_forms(tmp_path, capsys):
    req = {"schema": "dk/1", "kind": "forms_request",
           "algebra": {"schema": "dk/1", "kind": "cdga",
                       "generators": [{"name": "x", "degree": 0, "weight": 1},
                                      {"name": "xi", "degree": 1, "weight": 2}],
                       "differential": {"xi": "1*x^2"}}}
    path = write(tmp_path, "forms.json", req)
    code, out = run(["forms", "--in", path, "-T", "2", "-W", "2"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert [g["name"] for g in doc["data"]["generators"]] == ["x", "xi"]


def test_cli_determinism_byte_identical(tmp_path, capsys):
    path = write(tmp_path, "d1.json", D1_DOC)
    outputs = []
    for _ in range(2):
        code, out = run(["beta-check", "--in", path, "-T", "3", "-W", "2"], capsys)
        assert code == 0
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_cli_dk_threads_validation(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "s1.json", S1_DOC)
    monkeypatch.setenv("DK_THREADS", "2")
    code, _ = run(["homology", "--in", path, "-W", "1"], capsys)
    assert code == 0
    monkeypatch.setenv("DK_THREADS", "zero")
    assert main(["homology", "--in", path, "-W", "1"]) == 3
