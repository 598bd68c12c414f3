"""Regenerate the JSON state fixtures in ``fixtures/``."""
import json
from pathlib import Path

import numpy as np

from steerkit.sampling import random_state
from steerkit.state import state_to_json

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    OUT.mkdir(exist_ok=True)
    simple = {
        "bell.json": {"d1": 2, "d2": 2, "re": [1, 0, 0, 1], "im": [0, 0, 0, 0]},
        "product.json": {"d1": 2, "d2": 3, "re": [0, 1, 0, 0, 0, 0], "im": [0, 0, 0, 0, 0, 0]},
        # norm 2 with normalization switched off: must be rejected
        "corrupted_norm.json": {"d1": 2, "d2": 2, "re": [1, 1, 1, 1], "im": [0, 0, 0, 0], "normalize": False},
    }
    for name, data in simple.items():
        (OUT / name).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    for seed, (d1, d2) in [(34, (3, 4)), (45, (4, 5)), (66, (6, 6))]:
        state = random_state(np.random.default_rng(seed), d1, d2)
        (OUT / f"random_{d1}x{d2}.json").write_text(state_to_json(state), encoding="utf-8")
    state = random_state(np.random.default_rng(52), 5, 4, rank=2)
    (OUT / "rank2_5x4.json").write_text(state_to_json(state), encoding="utf-8")


if __name__ == "__main__":
    main()
