from ._qlue import (
    Params,
    QlueError,
    cluster,
    generate,
    grover_iterations,
    grover_success_probability,
    run_experiment,
    scores,
)

__all__ = [
    "Params",
    "QlueError",
    "cluster",
    "generate",
    "grover_iterations",
    "grover_success_probability",
    "run_experiment",
    "scores",
]
