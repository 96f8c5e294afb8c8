import subprocess
import sys

from platonic_census.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_enumerate_tally(capsys, tmp_path):
    code, out, _ = run(["enumerate", "--schlafli", "3,4,4", "--max-solids", "2",
                        "--orientable", "yes", "--out", str(tmp_path)], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "{3,4,4} orientable 1:2 2:27"
    path = tmp_path / "344-o-2.census"
    assert path.exists()
    first = path.read_bytes()
    run(["enumerate", "--schlafli", "3,4,4", "--max-solids", "2", "--orientable", "yes",
         "--threads", "3", "--out", str(tmp_path)], capsys)
    assert path.read_bytes() == first


def test_self_dual_tally(capsys):
    code, out, _ = run(["enumerate", "--schlafli", "{3,5,3}", "--max-solids", "1",
                        "--orientable", "both"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("{3,5,3} orientable 1:")
    assert "(up to duality 1:" in lines[0]
    assert lines[1].startswith("{3,5,3} non-orientable")


def test_invalid_inputs(capsys):
    assert run(["enumerate", "--schlafli", "4,4,4", "--max-solids", "1"], capsys)[0] == EXIT_INPUT
    assert run(["enumerate", "--schlafli", "3,3,6", "--max-solids", "0"], capsys)[0] == EXIT_INPUT
    assert run(["enumerate", "--schlafli", "3,3,6", "--max-solids", "1", "--threads", "0"],
               capsys)[0] == EXIT_INPUT
    code, _, err = run(["properties", "ptsig1:3,3,6:24:1,2"], capsys)
    assert code == EXIT_INPUT and "malformed signature" in err
    assert run(["properties", "/no/such/file"], capsys)[0] == EXIT_INPUT
    assert run(["augktg", "-1"], capsys)[0] == EXIT_INPUT


def test_threads_environment(capsys, monkeypatch):
    monkeypatch.setenv("PLATONIC_THREADS", "x")
    assert run(["enumerate", "--schlafli", "3,3,6", "--max-solids", "2"], capsys)[0] == EXIT_INPUT
    monkeypatch.setenv("PLATONIC_THREADS", "2")
    code, out, _ = run(["enumerate", "--schlafli", "3,3,6", "--max-solids", "2",
                        "--orientable", "yes"], capsys)
    assert code == EXIT_OK and out.startswith("{3,3,6} orientable 2:2")


def test_memory_budget_exit(capsys):
    code, _, err = run(["enumerate", "--schlafli", "3,4,4", "--max-solids", "2",
                        "--memory-budget", "1000"], capsys)
    assert code == EXIT_BUDGET and "memory budget" in err


def test_properties_and_group(capsys, tmp_path):
    run(["enumerate", "--schlafli", "3,4,4", "--max-solids", "1", "--orientable", "yes",
         "--out", str(tmp_path)], capsys)
    census = str(tmp_path / "344-o-1.census")
    code, out, _ = run(["properties", census], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 2
    for line in lines:
        fields = dict(x.split("=") for x in line.split()[1:])
        assert set(fields) == {"self_dual", "regular", "chiral", "aut", "h1", "cusps", "homology_link"}
        assert fields["h1"] == "2;" and fields["homology_link"] == "yes"
    code, out, _ = run(["group", census, "--out", str(tmp_path / "groups.txt")], capsys)
    assert out.startswith("2 tessellations, 2 groups")
    assert "~ooct01_00000" in (tmp_path / "groups.txt").read_text()


def test_subdivide(capsys, tmp_path):
    run(["enumerate", "--schlafli", "4,3,6", "--max-solids", "1", "--orientable", "no",
         "--out", str(tmp_path)], capsys)
    census = str(tmp_path / "436-n-1.census")
    code, out, _ = run(["subdivide", census, "--mode", "appendix",
                        "--out", str(tmp_path / "a.txt")], capsys)
    assert code == EXIT_OK and out.startswith("passed 8 failed 0")
    assert (tmp_path / "a.txt").read_text().count("gtrig v1 6") == 8
    code, out, _ = run(["subdivide", census, "--mode", "two-coloring"], capsys)
    assert code == EXIT_OK and out.startswith("outputs per tessellation:")
    run(["enumerate", "--schlafli", "3,4,4", "--max-solids", "1", "--orientable", "yes",
         "--out", str(tmp_path)], capsys)
    code, _, err = run(["subdivide", str(tmp_path / "344-o-1.census"), "--mode", "appendix"], capsys)
    assert code == EXIT_INPUT and "not cubical" in err


def test_augktg(capsys, tmp_path):
    code, out, _ = run(["augktg", "0", "--out", str(tmp_path / "k.txt")], capsys)
    assert code == EXIT_OK
    assert out.splitlines()[0] == "a_moves 0 unzips 2 octahedra 2 diagrams 12"
    assert len((tmp_path / "k.txt").read_text().splitlines()) == 13


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "platonic_census.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "enumerate" in proc.stdout
