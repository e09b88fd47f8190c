import json
import math

import numpy as np
import pytest

from bures_geom.cli import format_float, main
from bures_geom.exact import ExactValue
from bures_geom.states import DensityMatrix, dump_state, maximally_mixed, qubit_from_bloch, random_hs_state


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, rho in {
        "mixed": maximally_mixed(2),
        "up": qubit_from_bloch((0, 0, 1)),
        "down": qubit_from_bloch((0, 0, -1)),
    }.items():
        paths[name] = str(tmp_path / f"{name}.json")
        dump_state(rho, paths[name])
    return paths


class TestFormatting:
    def test_integral_floats(self):
        assert format_float(1.0) == "1"
        assert format_float(-3.0) == "-3"

    def test_round_trip(self):
        for x in (math.pi, 1 / 3, 1e-20, 1.2337005501361697):
            assert float(format_float(x)) == x


class TestConstants:
    def test_exact_strings(self, capsys):
        assert run(capsys, "constants", "--n", "3", "--alpha", "1", "--beta", "2", "--exact")[1] == "35/pi"
        assert run(capsys, "constants", "--n", "4", "--alpha", "1", "--beta", "2", "--exact")[1] == "71680/pi^2"

    def test_trivial(self, capsys):
        assert run(capsys, "constants", "--n", "1", "--alpha", "1", "--beta", "2")[1] == "1"

    def test_json_record_consistent(self, capsys):
        code, out, _ = run(capsys, "constants", "--n", "3", "--alpha", "3/2", "--beta", "1", "--format", "json")
        rec = json.loads(out)
        assert code == 0 and rec["alpha"] == 1.5
        assert float(ExactValue.parse(rec["exact"])) == pytest.approx(rec["value"], rel=1e-12)

    def test_csv(self, capsys):
        out = run(capsys, "constants", "--n", "2", "--format", "csv")[1].splitlines()
        assert out[0].split(",")[:2] == ["command", "n"]
        assert len(out) == 2

    def test_domain_error_exit_2(self, capsys):
        code, _, err = run(capsys, "constants", "--n", "2", "--alpha", "0.2", "--beta", "1")
        assert code == 2 and "Gamma" in err

    def test_usage_error_exit_2(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["constants"])
        assert info.value.code == 2


class TestVolume:
    def test_qubit(self, capsys):
        assert run(capsys, "volume", "--n", "2", "--beta", "2")[1] == format_float(math.pi**2 / 8)
        assert run(capsys, "volume", "--n", "2", "--beta", "2", "--exact")[1] == "pi^2/8"
        assert run(capsys, "volume", "--n", "2", "--beta", "2", "--rank-defect", "1", "--exact")[1] == "pi"

    def test_table(self, capsys):
        lines = run(capsys, "volume", "--table-max", "4", "--beta", "2")[1].splitlines()
        assert lines[0] == "N,k,d_k,exact,float"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 10
        assert {(int(r[0]), int(r[1])) for r in rows} == {(n, k) for n in range(1, 5) for k in range(n)}
        for n, k, d, exact, value in rows:
            assert int(d) == int(n) ** 2 - int(k) ** 2 - 1
            assert float(ExactValue.parse(exact)) == pytest.approx(float(value), rel=1e-12)

    def test_table_json(self, capsys):
        rows = json.loads(run(capsys, "volume", "--table-max", "2", "--beta", "1", "--format", "json")[1])
        assert len(rows) == 3

    def test_needs_n(self, capsys):
        assert run(capsys, "volume")[0] == 2

    def test_conjectural_beta_rejected(self, capsys):
        assert run(capsys, "volume", "--n", "2", "--beta", "4")[0] == 2


class TestDistance:
    def test_self_distance(self, capsys, files):
        assert run(capsys, "distance", "--metric", "bures", "--a", files["mixed"], "--b", files["mixed"])[1] == "0"

    def test_mixed_vs_pure(self, capsys, files):
        out = run(capsys, "distance", "--metric", "bures", "--a", files["mixed"], "--b", files["up"])[1]
        assert float(out) == pytest.approx(math.sqrt(2 - math.sqrt(2)), abs=1e-12)

    def test_orthogonal_trace(self, capsys, files):
        assert run(capsys, "distance", "--metric", "trace", "--a", files["up"], "--b", files["down"])[1] == "2"

    def test_fs_needs_pure(self, capsys, files):
        assert run(capsys, "distance", "--metric", "fs", "--a", files["mixed"], "--b", files["up"])[0] == 2
        out = run(capsys, "distance", "--metric", "fs", "--a", files["up"], "--b", files["down"])[1]
        assert float(out) == pytest.approx(math.pi)

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "distance", "--metric", "hs", "--a", str(tmp_path / "x"), "--b", str(tmp_path / "y"))[0] == 2

    def test_invalid_state_file(self, capsys, tmp_path, files):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"n": 2, "beta": 1, "re": [[1, 0], [0, 1]]}))
        code, _, err = run(capsys, "distance", "--metric", "hs", "--a", str(bad), "--b", files["up"])
        assert code == 2 and "trace" in err


class TestEmbed:
    def test_pole(self, capsys, files):
        assert run(capsys, "embed", "--state", files["mixed"])[1] == "0 0 0 0.5"

    def test_pure(self, capsys, files):
        rec = json.loads(run(capsys, "embed", "--state", files["up"], "--format", "json")[1])
        assert (rec["x"], rec["y"], rec["z"], rec["u"]) == (0, 0, 0.5, 0)

    def test_norm(self, capsys, tmp_path, rng):
        path = tmp_path / "r.json"
        for _ in range(5):
            dump_state(random_hs_state(2, 2, rng), path)
            vals = [float(v) for v in run(capsys, "embed", "--state", str(path))[1].split()]
            assert math.hypot(*vals) == pytest.approx(0.5, abs=1e-12)


class TestSample:
    def test_files_and_manifest(self, capsys, tmp_path):
        out = tmp_path / "s.jsonl"
        code, _, _ = run(capsys, "sample", "--n", "3", "--beta", "2", "--count", "40", "--seed", "7", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 40
        rho = DensityMatrix.from_json(json.loads(lines[0]))
        assert rho.n == 3
        manifest = json.loads((tmp_path / "s.jsonl.manifest.json").read_text())
        assert set(manifest) == {"seed", "n", "beta", "count", "acceptance_rate", "gelman_rubin"}
        assert manifest["seed"] == 7 and manifest["count"] == 40

    def test_deterministic_across_workers(self, capsys, tmp_path, monkeypatch):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(capsys, "sample", "--n", "2", "--count", "30", "--seed", "1", "--out", str(a))
        monkeypatch.setenv("BURES_GEOM_WORKERS", "4")
        run(capsys, "sample", "--n", "2", "--count", "30", "--seed", "1", "--out", str(b))
        assert a.read_text() == b.read_text()

    def test_bad_count(self, capsys, tmp_path):
        assert run(capsys, "sample", "--n", "2", "--count", "0", "--out", str(tmp_path / "x"))[0] == 2


class TestVerify:
    def test_passing_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--test", "volume-identity", "--n", "4", "--beta", "1")
        assert code == 0
        assert all(line.startswith("[PASS]") for line in out.splitlines()[:-1])

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "verify", "--test", "normalization", "--n", "2", "--samples", "20000", "--format", "json")
        rep = json.loads(out)
        assert code == 0 and rep["passed"] and rep["checks"][0]["band"]

    def test_failure_exit_1(self, capsys, monkeypatch):
        from bures_geom import verify

        monkeypatch.setattr(verify, "run", lambda *a: [verify.Check("forced", "none", 1.0, False)])
        code, out, _ = run(capsys, "verify", "--test", "metric")
        assert code == 1 and "[FAIL] forced" in out

    def test_marginal_needs_n2(self, capsys):
        assert run(capsys, "verify", "--test", "marginal", "--n", "3")[0] == 2
