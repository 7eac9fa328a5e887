import csv
import io

import pytest

from walshnet import cli
from walshnet.f2net import BitMatrix, DigitalNet
from walshnet.ingest import load_net, save_net

from test_ingest import JOE_KUO


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def toy_net(tmp_path):
    p = tmp_path / "toy.net"
    p.write_text(save_net(DigitalNet.perp([BitMatrix.from_strings(["101"])])))
    return p


def test_wafom_command(capsys, toy_net):
    code, out, _ = run(capsys, "wafom", str(toy_net), "--tvalue")
    assert code == 0
    vals = dict(line.split() for line in out.splitlines())
    assert vals["wafom"] == "0.0625"
    assert vals["wafom_rms"] == "0.0625"
    assert vals["t_value"] == "0"
    code, out2, _ = run(capsys, "wafom", str(toy_net), "--dual")
    assert code == 0 and out2.splitlines()[0] == "wafom 0.0625"


def test_tvalue_command(capsys, tmp_path):
    p = tmp_path / "bad.net"
    p.write_text(save_net(DigitalNet.perp([BitMatrix.from_strings(["100"])])))
    code, out, _ = run(capsys, "tvalue", str(p))
    assert code == 0
    assert out.splitlines() == ["m 2", "t 2", "witness 1"]


def test_search_is_deterministic(capsys, tmp_path):
    best = tmp_path / "best.net"
    args = ["search", "--s", "2", "--n", "12", "--d", "5", "--trials", "30", "--keep-k", "3",
            "--seed", "9"]
    code, a, _ = run(capsys, *args, "--best-net", str(best))
    assert code == 0
    code, b, _ = run(capsys, *args)
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 3 and rows[0]["rank"] == "1"
    assert load_net(best.read_text()).d == 5


def test_integrate_and_convergence(capsys, tmp_path, toy_net):
    net = tmp_path / "r.net"
    code, _, _ = run(capsys, "random", "--s", "2", "--n", "10", "--d", "6", "--out", str(net))
    assert code == 0
    code, out, _ = run(capsys, "integrate", str(net), "--functions", "exp_neg2sum,oscillatory",
                       "--shifts", "4", "--format", "tsv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split("\t") == cli.RECORD_FIELDS and len(lines) == 3

    netdir = tmp_path / "nets"
    netdir.mkdir()
    for d in (3, 4):
        run(capsys, "random", "--s", "2", "--n", "10", "--d", str(d), "--out", str(netdir / f"{d}.net"))
    jk = tmp_path / "jk.txt"
    jk.write_text(JOE_KUO)
    slopes = tmp_path / "slopes.csv"
    code, out, err = run(capsys, "convergence", "--s", "2", "--n", "10", "--d-range", "3:4",
                         "--functions", "exp_neg2sum", "--methods", "wafom-best,mc,mine,sobol",
                         "--nets", f"mine={netdir}", "--direction-numbers", str(jk),
                         "--trials", "10", "--keep-k", "2", "--shifts", "4",
                         "--slopes-out", str(slopes))
    assert code == 0, err
    assert len(list(csv.DictReader(io.StringIO(out)))) == 8
    assert slopes.read_text().splitlines()[0] == ",".join(cli.SLOPE_FIELDS)


def test_grading_command(capsys):
    code, out, _ = run(capsys, "grading", "--d", "5", "--count", "20",
                       "--functions", "hellekalek,hamukazu")
    assert code == 0
    assert out.splitlines()[0].startswith("category,t,size,function")


def test_sobol_and_convert(capsys, tmp_path):
    jk = tmp_path / "jk.txt"
    jk.write_text(JOE_KUO)
    code, out, _ = run(capsys, "sobol", "--direction-numbers", str(jk), "--s", "2", "--m", "3")
    assert code == 0 and out.startswith("2 3 3\n")
    mats = tmp_path / "m.txt"
    mats.write_text("10\n01\n\n11\n01\n")
    code, out, _ = run(capsys, "convert", "--matrices", str(mats), "--s", "2", "--n", "2", "--m", "2")
    assert code == 0 and out.startswith("2 2 2\n")


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "wafom", str(tmp_path / "missing.net"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.net"
    bad.write_text("1 3 1\nzz\n")
    assert run(capsys, "tvalue", str(bad))[0] == 2
    big = tmp_path / "big.net"
    code, _, _ = run(capsys, "random", "--s", "4", "--n", "30", "--d", "8", "--out", str(big))
    code, _, err = run(capsys, "wafom", str(big), "--dual")
    assert code == 3 and "refused" in err
    assert run(capsys, "convergence", "--d-range", "x", "--functions", "hellekalek")[0] == 2
    assert run(capsys, "integrate", str(big), "--functions", "x^2")[0] == 2
    assert run(capsys, "random", "--s", "1", "--n", "3", "--d", "4")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["search"])
    assert exc.value.code == 2
