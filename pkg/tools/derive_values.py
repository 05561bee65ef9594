"""Regenerate tests/data/derived_values.json from independent routes.

Run from the repository root: ``python3 tools/derive_values.py``. Values are
frozen into the fixture file and the tests compare against them; rerun only
after a deliberate generator change.
"""

import json
from pathlib import Path

import numpy as np

from lucanon.oracle import OracleOptions, brute_force_lu_distance
from lucanon.rng import haar_random_unitary, random_state
from lucanon.tensor import inner, new_state, normalize

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "derived_values.json"


def w_spectrum():
    # Gram matrix of the W unfolding rows: rows are (0,1,1,0)/sqrt3 and (1,0,0,0)/sqrt3
    r0 = np.array([0, 1, 1, 0]) / np.sqrt(3)
    r1 = np.array([1, 0, 0, 0]) / np.sqrt(3)
    gram = np.array([[r0 @ r0, r0 @ r1], [r1 @ r0, r1 @ r1]])
    # closed form for a diagonal 2x2 Gram matrix
    assert gram[0, 1] == 0
    return sorted(np.sqrt(np.diag(gram)).tolist(), reverse=True)


def haar_mean_diag():
    diag = np.zeros(3, dtype=complex)
    for seed in range(1000):
        diag += np.diag(haar_random_unitary(3, seed))
    return np.round(np.abs(diag / 1000), 8).tolist()


def main():
    s2 = 1 / np.sqrt(2)
    ghz = new_state([2, 2, 2], [s2, 0, 0, 0, 0, 0, 0, s2])
    w = normalize(new_state([2, 2, 2], [0, 1, 1, 0, 1, 0, 0, 0]))
    floor, _ = brute_force_lu_distance(ghz, w, OracleOptions(restarts=8, seed=1))
    floor32, _ = brute_force_lu_distance(ghz, w, OracleOptions(restarts=32, seed=1))
    assert abs(floor - floor32) < 1e-9
    values = {
        "w_spectrum": w_spectrum(),
        "w_spectrum_source": "closed-form eigenvalues of the brute-force 2x2 Gram matrix of each W unfolding",
        "random_state_overlap_seeds_11_12_dims_222": abs(
            inner(random_state((2, 2, 2), 11), random_state((2, 2, 2), 12))
        ),
        "haar_mean_diag_modulus_d3_seeds_0_999": haar_mean_diag(),
        "ghz_w_oracle_floor": floor,
        "ghz_w_oracle_floor_source": "brute_force_lu_distance, OracleOptions(restarts=8, seed=1); 32 restarts agree",
    }
    OUT.write_text(json.dumps(values, indent=2) + "\n")
    print(json.dumps(values, indent=2))


if __name__ == "__main__":
    main()
