import pytest

from sigmarho import cli, kernel_modulator
from sigmarho.domination import CAP_ENV_VAR
from sigmarho.graph import parse_graph, parse_weighted_graph
from sigmarho.poly import Polynomial, RootCspInstance, parse_csp

P3 = "p edge 3 2\ne 1 2\ne 2 3\n"
C4 = "p edge 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in (("p3", P3), ("c4", C4), ("bad", "p edge 3 2\ne 1 2\ne 2 7\n")):
        paths[name] = tmp_path / f"{name}.gr"
        paths[name].write_text(text)
    return paths


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_yes(files, capsys):
    code, out, _ = run(capsys, "solve", "--graph", files["p3"], "--problem", "efficient-dominating")
    assert code == 0 and out.strip() == "YES size=1 witness=2"


def test_solve_no(files, capsys):
    code, out, _ = run(capsys, "solve", "--graph", files["c4"], "--problem", "efficient-dominating")
    assert code == 1 and out.strip() == "NO"


def test_solve_parse_error(files, capsys):
    code, _, err = run(capsys, "solve", "--graph", files["bad"], "--problem", "efficient-dominating")
    assert code == 2 and "line 3" in err


def test_solve_cap(files, capsys, monkeypatch):
    monkeypatch.setenv(CAP_ENV_VAR, "2")
    code, _, err = run(capsys, "solve", "--graph", files["c4"], "--sigma", "0", "--rho", "1")
    assert code == 3 and "cap" in err


@pytest.mark.parametrize("method", ["brute", "nd", "modular"])
def test_solve_methods_agree(files, capsys, method):
    code, out, _ = run(capsys, "solve", "--graph", files["c4"], "--problem", "total-perfect-dominating", "--method", method)
    assert code == 0 and out.startswith("YES size=2")


def test_solve_weighted(tmp_path, capsys):
    path = tmp_path / "w.gr"
    path.write_text("p edge 3 2\nw 1 5\nw 3 5\ne 1 2\ne 2 3\n")
    code, out, _ = run(capsys, "solve", "--graph", path, "--problem", "perfect-dominating")
    assert code == 0 and out.strip() == "YES size=1 weight=1 witness=2"


def test_spec_argument_errors(files, capsys):
    assert run(capsys, "solve", "--graph", files["p3"])[0] == 2
    assert run(capsys, "solve", "--graph", files["p3"], "--problem", "efficient-dominating", "--rho", "1")[0] == 2
    assert run(capsys, "solve", "--graph", files["p3"], "--problem", "perfect-dominating", "--method", "modular")[0] == 2


def test_kernelize_writes_csp_and_sidecar(files, tmp_path, capsys):
    out = tmp_path / "k.csp"
    code, stdout, _ = run(
        capsys, "kernelize", "--graph", files["p3"], "--problem", "efficient-dominating",
        "--modulator-degree", "0", "--out", out, "--no-shortcut", "--solve",
    )
    assert code == 0 and stdout.strip() == "YES size=1 witness=2"
    inst = parse_csp(out.read_text())
    assert inst.variable_count == 1
    sidecar = (tmp_path / "k.csp.map").read_text().splitlines()
    assert "var 0 2" in sidecar
    assert "elim 1: 1 -1; 2" in sidecar


def test_kernelize_guard_refusal(files, capsys):
    code, _, err = run(capsys, "kernelize", "--graph", files["p3"], "--problem", "total-perfect-dominating")
    assert code == 2 and "guard" in err


def test_kernelize_given_and_approx_modulator(files, capsys):
    code, out, _ = run(capsys, "kernelize", "--graph", files["c4"], "--problem", "efficient-dominating", "--modulator", "1,3", "--solve")
    assert code == 1 and out.splitlines()[-1] == "NO"
    code, _, err = run(capsys, "kernelize", "--graph", files["c4"], "--problem", "efficient-dominating", "--modulator", "1")
    assert code == 2 and "modulator" in err
    code, out, _ = run(capsys, "kernelize", "--graph", files["p3"], "--problem", "efficient-dominating", "--approx", "--solve")
    assert code == 0


def test_kernelize_nd(files, capsys):
    code, out, _ = run(capsys, "kernelize-nd", "--graph", files["c4"], "--problem", "perfect-dominating", "--k", "2", "--variant", "rho-finite")
    assert code == 0
    assert parse_weighted_graph(out).graph == parse_graph(C4)


def test_generate_and_solve_modular(tmp_path, capsys):
    g, t = tmp_path / "g.gr", tmp_path / "t.txt"
    assert run(capsys, "generate", "--n", "7", "--cograph", "--seed", "4", "--out", g, "--tree-out", t)[0] == 0
    code, out, _ = run(capsys, "solve-modular", "--graph", g, "--tree", t, "--problem", "efficient-dominating")
    assert code in (0, 1) and "mw=" in out
    first = g.read_text()
    run(capsys, "generate", "--n", "7", "--cograph", "--seed", "4", "--out", g)
    assert g.read_text() == first


def test_verify(files, capsys):
    code, out, _ = run(capsys, "verify", "--graph", files["p3"], "--problem", "efficient-dominating", "--witness", "2")
    assert code == 0 and out.startswith("VALID")
    code, out, _ = run(capsys, "verify", "--graph", files["p3"], "--problem", "efficient-dominating", "--witness", "1,3")
    assert code == 1 and out.startswith("INVALID")
    code, _, _ = run(capsys, "verify", "--graph", files["p3"], "--problem", "efficient-dominating", "--witness", "2", "--budget", "0")
    assert code == 1
    assert run(capsys, "verify", "--graph", files["p3"], "--problem", "efficient-dominating", "--witness", "9")[0] == 2


SWEEP = ["sweep", "--count", "12", "--n-max", "8", "--seed", "3"]


def test_sweep_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.tsv", tmp_path / "b.tsv"
    assert run(capsys, *SWEEP, "--out", a)[0] == 0
    assert run(capsys, *SWEEP, "--out", b, "--no-shortcut")[0] == 0
    assert run(capsys, *SWEEP, "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert tuple(lines[0].split("\t")) == cli.SWEEP_COLUMNS
    rows = [ln.split("\t") for ln in lines[1:-1]]
    assert [int(r[0]) for r in rows] == list(range(len(rows)))
    assert lines[-1].startswith(f"# instances={len(rows)} agree={len(rows)} disagree=0")


def test_sweep_custom_specs(capsys):
    code, out, _ = run(capsys, *SWEEP, "--spec", "0;2", "--spec", "3;1", "--d", "1", "--no-shortcut")
    assert code == 0 and "instances=24" in out


def test_sweep_detects_broken_kernelizer(monkeypatch, capsys):
    real = kernel_modulator.kernelize

    def broken(g, s, spec, shortcut=True):
        kr = real(g, s, spec, shortcut=shortcut)
        # drop every constraint: the kernel then claims YES everywhere
        kr.csp = RootCspInstance(kr.csp.variable_count, (), 0)
        return kr

    monkeypatch.setattr(kernel_modulator, "kernelize", broken)
    code, out, _ = run(capsys, *SWEEP)
    assert code == 1
    assert "disagree=0" not in out


def test_sweep_counts_lift_errors(monkeypatch, capsys):
    real = kernel_modulator.kernelize

    def pinned(g, s, spec, shortcut=True):
        kr = real(g, s, spec, shortcut=shortcut)
        # claim the all-zero assignment over S whenever the graph is NO
        kr.csp = RootCspInstance(kr.k, tuple(Polynomial.var(i) for i in range(kr.k)), 1)
        return kr

    monkeypatch.setattr(kernel_modulator, "kernelize", pinned)
    code, out, _ = run(capsys, *SWEEP)
    assert code == 1
    assert "lift_errors=0" not in out
