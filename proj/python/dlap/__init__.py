"""Dense linear algebra performance modeling and prediction."""

from _dlap import (
    algorithm_cost,
    algorithms,
    arithmetic_intensity,
    call_sequence,
    flop_count,
    generate_model,
    initial_estimate,
    kernels,
    min_data_movement,
    min_data_volume,
    predict_efficiency,
    predict_performance,
    roofline_limit,
    smoothing_f,
    summarize,
    tensor_access_distances,
    tensor_algorithms,
    tensor_benchmark_weights,
)

__all__ = [
    "algorithm_cost",
    "algorithms",
    "arithmetic_intensity",
    "call_sequence",
    "flop_count",
    "generate_model",
    "initial_estimate",
    "kernels",
    "min_data_movement",
    "min_data_volume",
    "predict_efficiency",
    "predict_performance",
    "roofline_limit",
    "smoothing_f",
    "summarize",
    "tensor_access_distances",
    "tensor_algorithms",
    "tensor_benchmark_weights",
]
