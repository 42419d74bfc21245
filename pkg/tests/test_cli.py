"""Command-line interface: exit codes, file formats, JSON output."""

import json

import pytest

from ihcalc.cli import main

# suspension of a triangle circle: a 2-sphere with the poles (3 and 4)
# marked as the 0-skeleton
SUSP_S1 = {
    "dimension": 2,
    "maximal_simplices": [
        [0, 1, 3], [1, 2, 3], [0, 2, 3],
        [0, 1, 4], [1, 2, 4], [0, 2, 4],
    ],
    "skeleta": {"0": [[3], [4]]},
}

# a triangle with a free edge: not a pseudomanifold
BAD_SPACE = {
    "dimension": 2,
    "maximal_simplices": [[0, 1, 2], [2, 3, 4], [4, 5]],
}


@pytest.fixture
def space_file(tmp_path):
    p = tmp_path / "susp.json"
    p.write_text(json.dumps(SUSP_S1))
    return str(p)


@pytest.fixture
def bad_space_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(BAD_SPACE))
    return str(p)


def gram_file(tmp_path, doc, name="gram.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


class TestExitCodes:
    def test_success(self, capsys):
        assert main(["compute", "--catalog", "S2"]) == 0

    def test_unknown_catalog(self, capsys):
        assert main(["compute", "--catalog", "nope"]) == 2

    def test_bad_coefficients(self, capsys):
        assert main(["compute", "--catalog", "S2", "--coeff", "Zp:4"]) == 2
        assert main(["compute", "--catalog", "S2", "--coeff", "R"]) == 2

    def test_invalid_perversity(self, capsys):
        r = main(["compute", "--catalog", "cone_RP2", "--perversity", "p:0,2"])
        assert r == 3

    def test_strict_non_pseudomanifold(self, bad_space_file, capsys):
        r = main(["compute", "--space", bad_space_file, "--strict"])
        assert r == 4
        # without --strict the computation proceeds
        assert main(["compute", "--space", bad_space_file]) == 0

    def test_degenerate_matrix(self, tmp_path, capsys):
        f = gram_file(tmp_path, {"dimension": 1, "entries": ["0"]})
        r = main(["witt-class", "--matrix", f, "--field", "Zp:3"])
        assert r == 5

    def test_missing_space_file(self, capsys):
        assert main(["compute", "--space", "/does/not/exist.json"]) == 2


class TestCompute:
    def test_space_file_table(self, space_file, capsys):
        assert main(["compute", "--space", space_file, "--coeff", "Q",
                     "--perversity", "m", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        degrees = doc["table"]["degrees"]
        assert [degrees[str(i)]["dimension"] for i in range(3)] == [1, 0, 1]

    def test_integral_catalog(self, capsys):
        assert main(["compute", "--catalog", "cone_RP2", "--coeff", "Z",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["table"]["degrees"]["1"]["group"] == "Z/2"

    def test_formula_entry(self, capsys):
        assert main(["compute", "--catalog", "Uhat_S2", "--coeff", "Zp:3",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        degrees = doc["table"]["degrees"]
        assert [degrees[str(i)]["dimension"] for i in range(5)] == [1, 0, 0, 0, 1]

    def test_formula_entry_rejects_integral(self, capsys):
        assert main(["compute", "--catalog", "Uhat_S2", "--coeff", "Z"]) == 2

    def test_normalize_triangulation(self, space_file, capsys):
        assert main(["compute", "--space", space_file,
                     "--normalize-triangulation", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        degrees = doc["table"]["degrees"]
        assert [degrees[str(i)]["dimension"] for i in range(3)] == [1, 0, 1]

    def test_json_deterministic(self, capsys):
        main(["compute", "--catalog", "S_RP2", "--coeff", "Zp:2", "--json"])
        first = capsys.readouterr().out
        main(["compute", "--catalog", "S_RP2", "--coeff", "Zp:2", "--json"])
        second = capsys.readouterr().out
        assert first == second

    def test_text_output_lists_groups(self, capsys):
        main(["compute", "--catalog", "T2", "--coeff", "Z"])
        out = capsys.readouterr().out
        assert "H_1 = Z^2" in out


class TestWittCheck:
    def test_multiple_coefficients(self, capsys):
        assert main(["witt-check", "--catalog", "S_RP2",
                     "--coeff", "Q,Zp:2,Zp:3", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        verdicts = {r["coefficients"]: r["passes"] for r in doc["results"]}
        assert verdicts == {"Q": True, "Z2": False, "Z3": True}
        assert all(not r["oriented"] for r in doc["results"])

    def test_check_all_links_same_verdict(self, capsys):
        main(["witt-check", "--catalog", "S_RP2", "--coeff", "Zp:2", "--json"])
        base = json.loads(capsys.readouterr().out)
        main(["witt-check", "--catalog", "S_RP2", "--coeff", "Zp:2",
              "--check-all-links", "--json"])
        alt = json.loads(capsys.readouterr().out)
        assert base["results"][0]["passes"] == alt["results"][0]["passes"]
        assert all(c["all_links_agree"] for c in alt["results"][0]["checks"])

    def test_integral_rejected(self, capsys):
        assert main(["witt-check", "--catalog", "S_RP2", "--coeff", "Z"]) == 2

    def test_manifold_vacuous(self, capsys):
        assert main(["witt-check", "--catalog", "T2", "--coeff", "Q"]) == 0
        out = capsys.readouterr().out
        assert "no odd-codimension strata" in out


class TestWittClass:
    def test_identity_shorthand(self, capsys):
        assert main(["witt-class", "--matrix", "I2", "--field", "Zp:3",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["class"]["dim0"] == 0
        assert doc["class"]["dpm"] == "nonsquare"

    def test_rational_signature(self, tmp_path, capsys):
        f = gram_file(tmp_path, {
            "dimension": 2,
            "entries": ["1", "0", "0", "-1/2"],
        })
        assert main(["witt-class", "--matrix", f, "--field", "Q",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["class"]["signature"] == 0
        assert doc["class"]["identity"]

    def test_poly_entries(self, tmp_path, capsys):
        # the generator of F9 is a square there
        f = gram_file(tmp_path, {"dimension": 1, "entries": ["poly:0,1"]})
        assert main(["witt-class", "--matrix", f, "--field", "Fq:3:2",
                     "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["class"]["dim0"] == 1
        assert doc["class"]["dpm"] == "square"

    def test_poly_needs_extension_field(self, tmp_path, capsys):
        f = gram_file(tmp_path, {"dimension": 1, "entries": ["poly:0,1"]})
        assert main(["witt-class", "--matrix", f, "--field", "Zp:3"]) == 2

    def test_wrong_entry_count(self, tmp_path, capsys):
        f = gram_file(tmp_path, {"dimension": 2, "entries": ["1", "0", "0"]})
        assert main(["witt-class", "--matrix", f, "--field", "Zp:3"]) == 2


class TestBordism:
    def test_point_groups(self, capsys):
        assert main(["bordism", "--n", "4", "--p", "3", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["group"]["torsion"] == [4]
        main(["bordism", "--n", "4", "--p", "5", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["group"]["torsion"] == [2, 2]
        main(["bordism", "--n", "6", "--p", "3", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["group"]["description"] == "0"

    def test_composite_prime_rejected(self, capsys):
        assert main(["bordism", "--n", "4", "--p", "6"]) == 2

    def test_splitting_from_space(self, tmp_path, capsys):
        circle = {"dimension": 1,
                  "maximal_simplices": [[0, 1], [1, 2], [0, 2]]}
        p = tmp_path / "s1.json"
        p.write_text(json.dumps(circle))
        assert main(["bordism", "--n", "5", "--p", "3",
                     "--space", str(p), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["group"]["torsion"] == [4]


class TestCatalogCommand:
    def test_lists_all_entries(self, capsys):
        assert main(["catalog", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        names = {e["name"] for e in doc["entries"]}
        assert {"S2", "CP2", "L3_1", "SJ_L3", "X8_SY"} <= names
        assert all(e["kind"] in ("triangulated", "formula")
                   for e in doc["entries"])

    def test_text_listing(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        assert "L3_1" in out and "dim 3" in out
