import json
import pathlib

import pytest

import pdagrta

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def ex_a():
    return (FIXTURES / "ex_a.json").read_text()


@pytest.fixture
def ex_b():
    return (FIXTURES / "ex_b.json").read_text()


def test_validate(ex_a):
    assert pdagrta.validate(ex_a) == {"ok": True, "violations": []}
    bad = json.loads(ex_a)
    bad["structures"][0]["branches"][1]["prob"] = 0.6
    report = pdagrta.validate(json.dumps(bad))
    assert not report["ok"]
    assert report["violations"][0][0] == "ProbabilitySum"


def test_analyze_example_a(ex_a):
    r = pdagrta.analyze(ex_a, cores=2)
    assert r["delta"] == 8
    assert [p["nodes"] for p in r["paths"]] == [[1, 2, 3, 5, 6], [1, 2, 4, 5, 6], [1, 7, 6]]
    assert [p["probability"] for p in r["paths"]] == pytest.approx([0.3, 0.7, 0.0])
    assert [p["response"] for p in r["paths"]] == pytest.approx([13, 10, 11.5])
    assert [p["placed_at"] for p in r["paths"]] == pytest.approx([13, 11.5, 11.5])
    assert r["paths"][2]["clamp"] == "terminated"
    assert r["distribution"] == pytest.approx([(11.5, 0.7), (13, 0.3)])


def test_enumeration_and_noar(ex_a):
    exact = pdagrta.enumerate_distribution(ex_a, cores=2)
    assert exact == pytest.approx([(10, 0.7), (13, 0.3)])
    report = pdagrta.compare(ex_a, 2)
    assert report["dominance"]
    assert report["noar"] == pytest.approx(0.5)
    assert pdagrta.noar(exact, exact) == 0.0


def test_example_b_probabilities(ex_b):
    r = pdagrta.analyze(ex_b, cores=2)
    assert [p["probability"] for p in r["paths"]] == pytest.approx([0.25] * 4)
    assert sum(m for _, m in r["distribution"]) == pytest.approx(1.0)


def test_min_cores(ex_a):
    assert pdagrta.min_cores(ex_a, 0.7) == 2
    assert pdagrta.min_cores(ex_a, 1.0) == 4
    assert pdagrta.min_cores(ex_a, 0.7, method="enumeration") == 1
    assert pdagrta.min_cores(ex_a, 1.0, method="graham") == 4
    with pytest.raises(pdagrta.ConfigError):
        pdagrta.min_cores(ex_a, 0.7, method="magic")
    with pytest.raises(pdagrta.InfeasibleError):
        pdagrta.min_cores(ex_a, 1.0, deadline=5)


def test_errors_share_a_base(ex_a):
    with pytest.raises(pdagrta.ParseError):
        pdagrta.analyze("{not json")
    cyclic = (FIXTURES / "cyclic.json").read_text()
    with pytest.raises(pdagrta.Error):
        pdagrta.analyze(cyclic)
    with pytest.raises(pdagrta.ZeroAreaError):
        pdagrta.noar([(1.0, 1.0)], [(2.0, 1.0)])


def test_generate_is_deterministic():
    a = pdagrta.generate(7)
    assert a == pdagrta.generate(7)
    assert a != pdagrta.generate(8)
    assert pdagrta.validate(a)["ok"]
    assert len(json.loads(pdagrta.generate(7, structures=2))["structures"]) == 2


def test_run_cli(ex_a):
    path = str(FIXTURES / "ex_a.json")
    code, out, err = pdagrta.run_cli(["analyze", path, "-m", "2"])
    assert code == 0, err
    assert "13" in out
    code, _, _ = pdagrta.run_cli(["analyze", str(FIXTURES / "missing.json")])
    assert code == 2
