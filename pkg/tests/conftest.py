import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

EIGHTEEN_HOURS_S = 18 * 3600


def constant_log(rate: float, qber: float, duration_s: float = EIGHTEEN_HOURS_S, step_s: float = 60.0) -> str:
    """Synthetic key log with a constant rate, sampled every ``step_s`` seconds."""
    n = int(duration_s // step_s)
    rows = ["# synthetic constant-rate log", "t_s,skr_bps,qber"]
    rows += [f"{k * step_s:g},{rate!r},{qber!r}" for k in range(n + 1)]
    return "\n".join(rows) + "\n"


# Unmatched rates reproduce the reported 18 h totals; matched rates sit 21 dB
# (A1) and 14 dB (A2) above them.
PAIR_RATES = {
    "A1B2": 3.41e3,
    "A1B1": 3.41e3 * 10 ** 2.1,
    "A2B1": 2.78e4,
    "A2B2": 2.78e4 * 10 ** 1.4,
}
PAIR_QBER = {"A1B1": 0.03, "A1B2": 0.07, "A2B2": 0.035, "A2B1": 0.06}


@pytest.fixture
def pair_logs(tmp_path):
    paths = {}
    for label, rate in PAIR_RATES.items():
        p = tmp_path / f"{label}.csv"
        p.write_text(constant_log(rate, PAIR_QBER[label]), encoding="utf-8")
        paths[label] = p
    return paths
