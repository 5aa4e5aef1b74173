import json
import os

import pytest
from hypothesis import given

from conftest import seeds
from totalcoh.cli import main
from totalcoh.coherence import apply_channel
from totalcoh.matrixlab import DensityMatrix, Rng, random_density, trace_norm_distance
from totalcoh.statefile import (
    StateFileError,
    read_channel,
    read_state,
    read_state_matrix,
    state_to_json,
    write_state,
)


def write(tmp_path, name, rho, dims=None):
    path = tmp_path / name
    write_state(path, rho, dims)
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def field(out: str, key: str) -> float:
    for line in out.splitlines():
        if line.startswith(key + ":"):
            return float(line.split(":", 1)[1])
    raise KeyError(key)


class TestStateFile:
    @given(seed=seeds)
    def test_round_trip_exact(self, seed):
        rng = Rng(seed)
        d = rng.integer(1, 6)
        rho = random_density(d, rng.integer(1, d), rng)
        path = f"/tmp/totalcoh_rt_{os.getpid()}.json"
        write_state(path, rho, [d])
        back, dims = read_state(path)
        assert dims == [d]
        assert back.matrix.tobytes() == rho.matrix.tobytes()

    def test_schema(self, tmp_path):
        obj = json.loads(state_to_json(DensityMatrix.diagonal([0.75, 0.25]), [2, 1]))
        assert obj == {"version": "1", "dim": 2, "re": [[0.75, 0.0], [0.0, 0.25]], "im": [[0.0, 0.0], [0.0, 0.0]], "dims": [2, 1]}

    @pytest.mark.parametrize(
        "text",
        [
            "not json",
            '{"version": "2", "dim": 1, "re": [[1]], "im": [[0]]}',
            '{"version": "1", "dim": 2, "re": [[1]], "im": [[0]]}',
            '{"version": "1", "dim": 2, "re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]], "dims": [3]}',
        ],
    )
    def test_malformed(self, tmp_path, text):
        path = tmp_path / "bad.json"
        path.write_text(text)
        with pytest.raises(StateFileError):
            read_state_matrix(path)


class TestAnalyze:
    def test_maximally_mixed_qutrit(self, tmp_path, capsys):
        code, out, _ = run(capsys, "analyze", write(tmp_path, "s.json", DensityMatrix.maximally_mixed(3)))
        assert code == 0
        assert field(out, "total_coherence_bits") == pytest.approx(0.0, abs=1e-12)
        assert "incoherent: true" in out

    def test_pure_qubit(self, tmp_path, capsys):
        code, out, _ = run(capsys, "analyze", write(tmp_path, "s.json", DensityMatrix.from_ket([1, 1j])))
        assert code == 0
        assert field(out, "total_coherence_bits") == pytest.approx(1.0, abs=1e-12)

    def test_diagonal(self, tmp_path, capsys):
        code, out, _ = run(capsys, "analyze", write(tmp_path, "s.json", DensityMatrix.diagonal([0.75, 0.25])))
        assert field(out, "total_coherence_bits") == pytest.approx(0.1887218755, abs=1e-9)
        assert field(out, "entropy_bits") == pytest.approx(0.8112781245, abs=1e-9)

    def test_malformed_exit_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert run(capsys, "analyze", path)[0] == 2

    def test_missing_exit_2(self, tmp_path, capsys):
        assert run(capsys, "analyze", tmp_path / "nope.json")[0] == 2

    def test_invalid_state_exit_3(self, tmp_path, capsys):
        path = tmp_path / "neg.json"
        path.write_text(json.dumps({"version": "1", "dim": 2, "re": [[1.5, 0], [0, -0.5]], "im": [[0, 0], [0, 0]]}))
        assert run(capsys, "analyze", path)[0] == 3


class TestConvertCheck:
    def test_convertible_with_synthesis(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", DensityMatrix.diagonal([0.7, 0.3]))
        b = write(tmp_path, "b.json", DensityMatrix.diagonal([0.6, 0.4]))
        out_path = tmp_path / "ch.json"
        code, out, _ = run(capsys, "convert-check", a, b, "--synthesize", out_path)
        assert code == 0
        assert out.startswith("CONVERTIBLE")
        assert field(out, "reconstruction_error") <= 1e-8
        ch = read_channel(out_path)
        got = apply_channel(ch, DensityMatrix.diagonal([0.7, 0.3]))
        assert trace_norm_distance(got, DensityMatrix.diagonal([0.6, 0.4])) <= 1e-8

    def test_not_convertible(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", DensityMatrix.maximally_mixed(2))
        b = write(tmp_path, "b.json", DensityMatrix.from_ket([1, 0]))
        out_path = tmp_path / "ch.json"
        code, out, _ = run(capsys, "convert-check", a, b, "--synthesize", out_path)
        assert code == 1
        assert out.startswith("NOT CONVERTIBLE")
        assert not out_path.exists()

    def test_self(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", random_density(3, 3, Rng(1)))
        code, out, _ = run(capsys, "convert-check", a, a, "--synthesize", tmp_path / "ch.json")
        assert code == 0
        assert field(out, "terms") == 1

    def test_dim_mismatch(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", DensityMatrix.maximally_mixed(2))
        b = write(tmp_path, "b.json", DensityMatrix.maximally_mixed(3))
        assert run(capsys, "convert-check", a, b)[0] == 2


class TestRate:
    def read_csv(self, path):
        lines = path.read_text().splitlines()
        assert lines[0] == "n,m,rate,epsilon,mode"
        return [line.split(",") for line in lines[1:]]

    def test_pure_distill(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        code, stdout, _ = run(capsys, "rate", "--spectrum", "1,0", "--mode", "distill", "--n-list", "1,7,30", "--out", out)
        assert code == 0
        assert [float(r[2]) for r in self.read_csv(out)] == [1.0, 1.0, 1.0]
        assert field(stdout, "target total_coherence_bits") == 1.0

    def test_binary_distill(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        run(capsys, "rate", "--spectrum", "0.9,0.1", "--eps", "0.01", "--n-list", "100,500,5000", "--mode", "distill", "--out", out)
        rates = [float(r[2]) for r in self.read_csv(out)]
        gaps = [abs(r - 0.5310044064) for r in rates]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_uniform_cost(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        run(capsys, "rate", "--spectrum", "0.5,0.5", "--mode", "cost", "--n-max", "50", "--out", out)
        rows = self.read_csv(out)
        assert [int(r[0]) for r in rows] == [1, 2, 5, 10, 20, 50]
        assert all(float(r[2]) == 0.0 for r in rows)
        assert all(r[4] == "cost" for r in rows)

    @pytest.mark.parametrize("spec", ["0.5,0.6", "a,b", "-0.5,1.5"])
    def test_bad_spectrum(self, tmp_path, capsys, spec):
        out = tmp_path / "r.csv"
        assert run(capsys, "rate", "--spectrum", spec, "--n-list", "3", "--out", out)[0] == 2
        assert not out.exists()

    def test_stdout(self, capsys):
        code, out, err = run(capsys, "rate", "--spectrum", "0.5,0.5", "--n-list", "2")
        assert code == 0
        assert out == "n,m,rate,epsilon,mode\n2,0,0.0,0.01,distill\n"
        assert "target" in err


class TestCorrelate:
    def test_pure_qubit(self, tmp_path, capsys):
        code, out, _ = run(capsys, "correlate", write(tmp_path, "s.json", DensityMatrix.from_ket([0.6, 0.8j])), "--ancilla-dim", 2)
        assert code == 0
        assert field(out, "mutual_information_bits") == pytest.approx(1.0, abs=1e-9)
        assert abs(field(out, "equality_slack_bits")) <= 1e-9

    def test_maximally_mixed(self, tmp_path, capsys):
        code, out, _ = run(capsys, "correlate", write(tmp_path, "s.json", DensityMatrix.maximally_mixed(2)), "--ancilla-dim", 2)
        assert code == 0
        assert field(out, "mutual_information_bits") == pytest.approx(0.0, abs=1e-12)

    def test_diagonal(self, tmp_path, capsys):
        code, out, _ = run(capsys, "correlate", write(tmp_path, "s.json", DensityMatrix.diagonal([0.75, 0.25])), "--ancilla-dim", 2)
        assert code == 0
        assert field(out, "mutual_information_bits") == pytest.approx(0.1887218755, abs=1e-9)

    def test_small_ancilla(self, tmp_path, capsys):
        code, out, _ = run(capsys, "correlate", write(tmp_path, "s.json", random_density(4, 4, Rng(3))), "--ancilla-dim", 2)
        assert code == 1
        assert "equality not guaranteed" in out

    def test_io_error(self, tmp_path, capsys):
        assert run(capsys, "correlate", tmp_path / "missing.json", "--ancilla-dim", 2)[0] == 2


class TestFuzz:
    @pytest.mark.parametrize("suite", ["identity14", "monotone"])
    def test_suites_clean(self, capsys, suite):
        code, out, _ = run(capsys, "fuzz", "--suite", suite, "--trials", 1000, "--seed", 7)
        report = json.loads(out)
        assert code == 0
        assert report["failures"] == []
        assert report["worst_slack"] >= -1e-9

    def test_zero_trials(self, capsys):
        assert run(capsys, "fuzz", "--suite", "ssa", "--trials", 0)[0] == 2

    def test_unknown_suite(self, capsys):
        assert run(capsys, "fuzz", "--suite", "nope", "--trials", 3)[0] == 2

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("COH_SEED", "99")
        code, out, _ = run(capsys, "fuzz", "--suite", "ssa", "--trials", 5)
        assert json.loads(out)["seed"] == 99

    def test_default_seed_printed(self, capsys, monkeypatch):
        monkeypatch.delenv("COH_SEED", raising=False)
        _, _, err = run(capsys, "fuzz", "--suite", "ssa", "--trials", 2)
        assert "fixed seed" in err


class TestDeterminism:
    def test_fuzz_json(self, capsys):
        first = run(capsys, "fuzz", "--suite", "bound11", "--trials", 50, "--seed", 3)[1]
        second = run(capsys, "fuzz", "--suite", "bound11", "--trials", 50, "--seed", 3)[1]
        assert first == second

    def test_rate_csv(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            run(capsys, "rate", "--spectrum", "0.7,0.2,0.1", "--mode", "cost", "--n-max", "200", "--out", out)
        assert a.read_bytes() == b.read_bytes()

    def test_random_state(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            assert run(capsys, "random-state", "--dim", 4, "--rank", 2, "--seed", 11, "--out", out)[0] == 0
        assert a.read_bytes() == b.read_bytes()


def test_usage_error(capsys):
    assert run(capsys, "analyze")[0] == 2
