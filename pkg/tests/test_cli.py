import io
import os
import subprocess
import sys
from pathlib import Path

from paranil.cli import execute, format_group, parse_file, parse_text

GRP = Path(__file__).resolve().parent.parent / "grp"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = execute([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_tau_heisenberg():
    assert run("tau", GRP / "heis.grp") == (0, "tau = {}\n", "")


def test_tau_with_torsion():
    assert run("tau", GRP / "c2_h.grp")[1] == "tau = {2, 3}\n"
    assert run("tau", GRP / "c3_heis.grp")[1] == "tau = {3}\n"


def test_hirsch_and_abelianization():
    assert run("hirsch", GRP / "h_p3.grp")[1] == "h = 3\n"
    assert run("abelianization", GRP / "h_p3.grp")[1] == "abelianization = C3 x Z\n"


def test_consistency():
    code, out, _ = run("consistency", GRP / "heis.grp")
    assert code == 0 and out.startswith("consistent")
    code, out, _ = run("consistency", GRP / "bad25.grp")
    assert code == 1 and out.startswith("inconsistent: overlap g2^(g1^2)")


def test_lcs_output():
    code, out, _ = run("lcs", GRP / "h_p3.grp", "--depth", 3)
    assert code == 0
    lines = out.splitlines()
    assert "gamma_1/gamma_2: C3 x Z" in lines and "gamma_2/gamma_3: C3" in lines
    assert "stabilized: k=2" in lines


def test_free_class2_layers():
    code, out, _ = run("lcs", GRP / "free2_r4.grp", "--depth", 2)
    assert "gamma_1/gamma_2: Z x Z x Z x Z" in out
    assert "gamma_2/gamma_3: " + " x ".join(["Z"] * 6) in out


def test_isolator():
    code, out, _ = run("isolator", GRP / "h_p3.grp", "--k", 2, "--primes", "3")
    assert code == 0 and "<x1, x2>" in out and "index over gamma_2: 3" in out


def test_check_para_and_tau():
    code, out, _ = run("check-para", GRP / "pair_p3.grp", "--depth", 8)
    assert code == 0 and out.splitlines()[0] == "pass (depth 8, stabilized at k=2), n_i = 2"
    code, out, _ = run("check-tau", GRP / "pair_p3.grp", "--tau", "3", "--depth", 4)
    assert code == 0
    code, out, _ = run("check-tau", GRP / "pair_p3.grp", "--tau", "2,3", "--depth", 4)
    assert code == 1 and out.startswith("fail at i = 2")


def test_other_checks():
    code, out, _ = run("check-cor23", GRP / "pair_p3.grp")
    assert code == 0 and out.startswith("pass with n = 2")
    code, out, _ = run("check-thm34", GRP / "pair_p3.grp", "--mode", "i")
    assert code == 0 and out.startswith("pass: h(G) = h(H) = 3")
    code, out, _ = run("check-extension", GRP / "heis.grp", "--images", "a c; b; c")
    assert code == 0
    code, out, _ = run("annihilator", GRP / "h_p3.grp", "--subgroup", "x1,x2", "--element", "t")
    assert code == 0 and out.startswith("alpha(t) = t^2 + t + 1, beta(t) = t^2 + t + 1")
    code, out, _ = run("power-exponent", GRP / "heis.grp", "--subgroup", "a^2,b^2,c", "--m", 2)
    assert code == 0 and out.splitlines()[:2] == ["n = 2", "n_2 = 4"]


def test_parse_error_location(tmp_path):
    bad = tmp_path / "bad.grp"
    bad.write_text("[group]\nname = g\ngenerators = a b\norders = 0 0\nb^a = b q\n")
    code, out, err = run("tau", bad)
    assert code == 2 and out == ""
    assert err == f"error: {bad}:5:9: undeclared generator 'q'\n"


def test_argument_errors(tmp_path):
    assert run("lcs", GRP / "heis.grp", "--depth", 0)[0] == 2
    assert run("tau", tmp_path / "missing.grp")[0] == 2
    assert run("no-such-command")[0] == 2


def test_precondition_error_exit():
    code, _, err = run("power-exponent", GRP / "heis.grp", "--subgroup", "a^3,b,c", "--m", 2)
    assert code == 2 and "witness a^2" in err


def test_build_roundtrip(tmp_path):
    out_file = tmp_path / "pair.grp"
    code, _, _ = run("build", GRP / "pair_p3.grp", "--out", out_file)
    assert code == 0
    doc1 = parse_file(str(GRP / "pair_p3.grp"))
    doc2 = parse_file(str(out_file))
    for name in ("H", "G"):
        g1, g2 = doc1.groups[name], doc2.groups[name]
        assert g1.orders == g2.orders and g1.names == g2.names
        assert format_group(g1) == format_group(g2)
    # plain presentations carry no construction metadata, so compare the verdicts
    a = run("check-para", out_file, "--depth", 4)
    b = run("check-para", GRP / "pair_p3.grp", "--depth", 4)
    assert a[0] == b[0] == 0 and a[1].splitlines()[0] == b[1].splitlines()[0]
    assert "unverified" in a[1] and "certified-by-construction" in b[1]


def test_parse_text_group():
    doc = parse_text("[group]\nname = z\ngenerators = x\norders = 5\n")
    P = doc.groups["z"]
    assert P.orders == (5,)


def test_selftest_deterministic():
    a = run("selftest", "--count", 30, "--seed", 7)
    b = run("selftest", "--count", 30, "--seed", 7)
    assert a == b and a[0] == 0


def test_entry_point_bytes_identical():
    cmd = [sys.executable, "-m", "paranil", "check-para", str(GRP / "pair_p3.grp"), "--depth", "4"]
    env = dict(os.environ)
    r1 = subprocess.run(cmd, capture_output=True, env=env)
    r2 = subprocess.run(cmd, capture_output=True, env=env)
    assert r1.returncode == 0 and r1.stdout == r2.stdout
