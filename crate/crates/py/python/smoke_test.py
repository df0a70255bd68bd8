"""Smoke test for the qge_py extension module.

Build and run from the repository root:

    cargo build --release -p qge-py --features extension-module
    cp target/release/libqge_py.so crates/py/python/qge_py.so
    python3 crates/py/python/smoke_test.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import qge_py  # noqa: E402


def main() -> None:
    game = qge_py.Game([2, 2], [[270, 126, 0, 270], [270, 126, 0, 270]])
    assert game.num_players == 2
    assert game.utility(0, [0, 1]) == 126

    p = [1 / 3, 1 / 6, 1 / 6, 1 / 3]
    assert game.correlated_regret(p) < 1e-9
    rho = qge_py.DensityMatrix.lift(p, [2, 2], kind="pure")
    assert abs(qge_py.quantum_utility(game, rho, 0) - 201) < 1e-9
    dev = qge_py.best_quantum_deviation(game, rho, 0)
    assert dev["dual"] >= 206 - 1e-6 and dev["gap"] <= 1e-6
    assert qge_py.quantum_verdict(game, rho) == (False, False)

    coord = qge_py.Game.from_json(
        json.dumps({"players": 2, "strategy_counts": [2, 2], "utilities": [[2, 1, 1, 2], [2, 1, 1, 2]]})
    )
    flat = qge_py.DensityMatrix.lift([0.5, 0, 0, 0.5], [2, 2], kind="random", seed=3)
    assert qge_py.quantum_regret(coord, flat, 0) <= 1e-6

    pennies = qge_py.Game.bimatrix([[1, 0], [0, 1]], [[0, 1], [1, 0]])
    (p1, p2), = pennies.nash_equilibria()
    assert all(abs(x - 0.5) < 1e-12 for x in p1 + p2)
    normalized = qge_py.Game([2, 2], [[1, 0, 0, 1], [0, 1, 1, 0]], positively_normalized=True)
    rep = qge_py.reduce(normalized, 0.1, seed=1, samples=20000)
    assert rep["success"], rep

    sim, closed = qge_py.grover_success(64, 3, [0, 9, 17, 40])
    assert abs(sim - closed) < 1e-9 and sim > 0.9
    check = qge_py.random_circuit_check(32, 4, seed=7)
    assert check["distance"] <= check["bound"] + 1e-9

    passed, report = qge_py.run_repro()
    assert passed, report
    assert any(r["claim_id"] == "skewed.mu1" for r in json.loads(report)["records"])

    try:
        qge_py.Game([2, 2], [[0, 0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("malformed game accepted")

    print("qge_py smoke test passed")


if __name__ == "__main__":
    main()
