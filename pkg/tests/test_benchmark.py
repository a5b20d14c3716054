import csv
import json

import numpy as np
import pytest

from dmdd.benchmark import BenchmarkConfig, run_benchmark
from dmdd.cli import main
from dmdd.dataio import Dataset, save_csv
from dmdd.embedding import Trajectory
from dmdd.errors import InputError
from dmdd.metrics import PredictionPair, mse
from dmdd.dmd import fit_delayed, forecast_delayed
from dmdd.synth import generate, quasi_periodic_spec


def qp_dataset(name="qp", frames=300, seed=0, noise=0.0):
    spec = quasi_periodic_spec(frames=frames, seed=seed, noise_std=noise)
    return {"name": name, "synthetic": spec.to_dict()}


def config(**over):
    doc = {
        "datasets": [qp_dataset()],
        "input_lens": [100],
        "horizons": [5, 10, 20],
        "delays": [0, 10, 40],
    }
    doc.update(over)
    return doc


def write_config(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_reconstruction_decreases_across_delays():
    report, _ = run_benchmark(BenchmarkConfig.from_dict(config()))
    rec = [c["mse"] for c in report["reconstruction"]]
    assert all(c["status"] == "ok" for c in report["reconstruction"])
    assert rec[0] > rec[1] > rec[2]


def test_grid_is_complete_and_marks_infeasible_cells():
    cfg = BenchmarkConfig.from_dict(config(input_lens=[50, 100], delays=[10, 80]))
    report, _ = run_benchmark(cfg)
    assert len(report["anticipation"]) == 2 * 2 * 3
    assert len(report["reconstruction"]) == 2 * 2
    bad = [c for c in report["anticipation"] if c["input_len"] == 50 and c["delays"] == 80]
    assert len(bad) == 3
    assert all(c["status"] == "infeasible: d ≤ 47" for c in bad)
    ok = [c for c in report["anticipation"] if c["status"] == "ok"]
    assert len(ok) == 9


def test_harness_mse_equals_pooled_metric():
    doc = config(delays=[20], horizons=[10])
    report, _ = run_benchmark(BenchmarkConfig.from_dict(doc))
    cell = report["anticipation"][0]
    traj, _ = generate(quasi_periodic_spec(frames=300, seed=0))
    pairs = []
    for k in range(300 // 110):
        start = k * 110
        model = fit_delayed(Trajectory(traj.values[:, start:start + 100], 50.0), 20)
        pairs.append(PredictionPair(traj.values[:, start + 100:start + 110],
                                    forecast_delayed(model, 10)))
    assert cell["count_K"] == 2
    assert abs(cell["mse"] - mse(pairs)) <= 1e-12


def test_total_len_and_windows():
    report, _ = run_benchmark(BenchmarkConfig.from_dict(config(total_len=150, horizons=[20])))
    assert report["anticipation"][0]["count_K"] == 2
    report, _ = run_benchmark(BenchmarkConfig.from_dict(config(total_len=110, input_lens=[100])))
    assert report["anticipation"][0]["status"].startswith("infeasible")


def test_config_validation():
    with pytest.raises(InputError):
        BenchmarkConfig.from_dict(config(delays=[]))
    with pytest.raises(InputError):
        BenchmarkConfig.from_dict(config(transform="fourier"))
    with pytest.raises(InputError):
        BenchmarkConfig.from_dict({"datasets": []})
    with pytest.raises(InputError):
        BenchmarkConfig.from_dict(config(datasets=[{"name": "x"}]))


def test_empty_delay_list_exit_code(tmp_path):
    assert main(["benchmark", write_config(tmp_path, config(delays=[]))]) == 2


def test_all_failed_exit_code(tmp_path):
    doc = config(datasets=[{"name": "gone", "path": "does-not-exist.csv"}])
    assert main(["benchmark", "--config", write_config(tmp_path, doc), "-o", str(tmp_path / "o")]) == 4
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert all(c["status"].startswith("failed") for c in report["anticipation"])


def test_csv_dataset_and_outputs(tmp_path):
    traj, _ = generate(quasi_periodic_spec(frames=240, seed=2))
    save_csv(Dataset.from_trajectory("walk", traj), tmp_path / "walk.csv")
    doc = config(datasets=[{"name": "walk", "path": "walk.csv", "sample_rate_hz": 50}],
                 input_lens=[50, 100], delays=[10, 20])
    out = tmp_path / "out"
    assert main(["benchmark", write_config(tmp_path, doc), "--output", str(out)]) == 0
    for name in ("report.json", "timings.json", "reconstruction_vs_delay.csv",
                 "anticipation_vs_delay.csv", "error_vs_input_length.csv"):
        assert (out / name).exists()
    rows = list(csv.DictReader(open(out / "error_vs_input_length.csv")))
    assert len(rows) == 2 * 3 * 2
    timings = json.loads((out / "timings.json").read_text())
    assert len(timings["cells"]) == 4


def test_spatial_context_and_transform(tmp_path):
    rng = np.random.default_rng(0)
    X = rng.standard_normal((6, 8)) @ generate(quasi_periodic_spec(channels=8, frames=200, seed=1))[0].values
    labels = [f"{mk}_{ax}" for mk in ("RHand", "LHand") for ax in "xyz"]
    save_csv(Dataset.from_trajectory("m", Trajectory(X, 50.0), labels), tmp_path / "m.csv")
    doc = config(
        datasets=[{"name": "m", "path": "m.csv", "sample_rate_hz": 50}],
        delays=[20], transform="second_difference",
        spatial_context={"target": {"markers": ["RHand"]},
                         "subsets": {"M1": {"markers": ["RHand"]}, "M2": {"markers": [0, 1]},
                                     "bad": {"markers": ["LHand"]}}},
    )
    out = tmp_path / "o"
    assert main(["benchmark", write_config(tmp_path, doc), "-o", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    cells = report["spatial_context"]
    assert len(cells) == 3 * 3
    assert all(c["status"] == "ok" for c in cells if c["subset"] != "bad")
    assert all("lacks target" in c["status"] for c in cells if c["subset"] == "bad")
    assert (out / "spatial_context.csv").exists()


def test_parallel_matches_serial():
    cfg = BenchmarkConfig.from_dict(config(delays=[0, 10, 20, 40]))
    a, _ = run_benchmark(cfg, jobs=1)
    b, _ = run_benchmark(cfg, jobs=4)
    assert json.dumps(a) == json.dumps(b)


def test_report_is_byte_identical(tmp_path):
    path = write_config(tmp_path, config())
    main(["benchmark", path, "-o", str(tmp_path / "a")])
    main(["benchmark", path, "-o", str(tmp_path / "b")])
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert "runtime" not in json.dumps(report)
