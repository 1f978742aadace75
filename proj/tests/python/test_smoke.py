import json
import math

import dlap


def test_flop_counts():
    assert dlap.flop_count("dgemm", [1000, 1000, 1000], "NN") == 2_000_000_000
    assert dlap.flop_count("dtrsm", [256, 256], "LLNN") == 256**3
    assert dlap.flop_count("dpotrf", [800], "L") == 170_986_800
    assert dlap.flop_count("dcopy", [5000]) == 0


def test_data_movement_and_intensity():
    assert dlap.min_data_movement("ddot", [1000]) == 2000
    assert dlap.min_data_movement("dgemm", [700, 700, 700], "NN") == 4 * 700 * 700
    assert abs(dlap.arithmetic_intensity("ddot", [123]) - 1 / 8) < 1e-15
    assert abs(dlap.arithmetic_intensity("dgemm", [320, 320, 320], "NN") - 20.0) < 1e-12


SANDY = {
    "name": "SandyBridge",
    "base_frequency_hz": 2.6e9,
    "flops_per_cycle_per_core": 8,
    "cores": 8,
    "peak_bandwidth_bytes_per_s": 16.25e9,
}


def test_roofline():
    assert dlap.roofline_limit(SANDY, 0.0) == 0.0
    assert abs(dlap.roofline_limit(SANDY, 62.5) - 20.8e9) < 1e3


def test_summarize():
    s = dlap.summarize([1.0, 2.0, 3.0])
    assert s["median"] == 2.0
    assert abs(s["std"] - math.sqrt(2.0 / 3.0)) < 1e-15


def test_call_sequence():
    seq = dlap.call_sequence("trinv1", 800, 300)
    assert len(seq) == 9
    assert seq[2]["kernel"] == "dtrti2"
    assert seq[6]["sizes"] == [200, 600]
    assert "chol3" in dlap.algorithms()
    assert dlap.algorithm_cost("dpotrf", 800) == 170_986_800


def test_prediction_formulas():
    runtime = {"min": 16.18e-3, "median": 16.22e-3, "max": 16.46e-3, "mean": 16.25e-3,
               "std": 95.88e-6}
    perf = dlap.predict_performance(runtime, 170_986_800)
    assert abs(perf["median"] - 10.54e9) / 10.54e9 < 0.005
    eff = dlap.predict_efficiency(perf, {**SANDY, "peak_bandwidth_bytes_per_s": 51.2e9})
    assert abs(eff["median"] - 0.5068) < 0.003


def test_tensor_generation():
    names = dlap.tensor_algorithms("C[a,b,c] = A[a,i] * B[i,b,c]")
    assert len(names) == 36
    assert "ca-gemv" in names
    assert len(dlap.tensor_algorithms("C[a] = A[i,a,j] * B[j,i]")) == 8
    assert len(dlap.tensor_algorithms("C[a,b,c] = A[i,j,a] * B[j,b,i,c]")) == 176

    d = dlap.tensor_access_distances(
        "C[a,b,c] = A[a,i] * B[i,b,c]; a=400 b=400 c=400 i=8", "ca-gemv")
    assert d == {"A": 166_400, "B": 0, "C": 65_283_200}

    w = dict(dlap.tensor_benchmark_weights(
        "C[a,b,c] = A[a,i] * B[i,b,c]; a=400 b=400 c=400 i=8", "ca-gemv"))
    assert abs(w["base"] - 7 / 8) < 1e-12
    assert abs(w["prefetch-failure"] - 1 / 8) < 1e-12


def test_model_generation_round_trip():
    text = dlap.generate_model("dpotf2", "L", [(24, 136)], seed=7)
    doc = json.loads(text)
    assert doc["format_version"] == 1
    assert doc["models"][0]["kernel"] == "dpotf2"
    assert dlap.generate_model("dpotf2", "L", [(24, 136)], seed=7) == text


def test_cache_model():
    assert dlap.smoothing_f(0.0) == 0.0
    assert abs(dlap.smoothing_f(0.5) - math.tanh(2.0)) < 1e-15
    assert dlap.initial_estimate(3.0, 1.0, 1.0, 5.0) == 2.0
