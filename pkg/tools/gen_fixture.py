#!/usr/bin/env python3
"""Regenerate tests/data/synthetic_panel.csv.

Deterministic one-factor price panel spanning the bundled window preset:
12 tickers, weekdays from 2006-06-01 to 2011-07-29, factor amplitude
doubled inside the middle (crisis) window, sparse missing cells, a few
designated heavy-holiday dates (>= 30% missing, so alignment drops them)
and one ticker that starts trading five days late.
"""

from __future__ import annotations

import sys
from datetime import date, timedelta
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from rmtcorr.rmt import standard_normals, splitmix64  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "synthetic_panel.csv"

TICKERS = ["ALP", "BRV", "CRX", "DLT", "ECH", "FOX",
           "GMA", "HDR", "IVY", "JUN", "KIL", "LMB"]
BETAS = [0.6, 0.8, 1.0, 1.2, 0.7, 0.9, 1.1, 0.5, 0.8, 1.0, 0.6, 0.9]
START_PRICES = [25.0, 40.0, 55.0, 70.0, 33.0, 48.0,
                63.0, 78.0, 29.0, 44.0, 59.0, 74.0]
CRISIS = (date(2007, 12, 3), date(2009, 6, 30))
LATE_TICKER = "LMB"
LATE_DAYS = 5
HEAVY_HOLIDAYS = ["2006-12-25", "2007-08-15", "2008-01-01",
                  "2008-12-25", "2010-05-03", "2011-01-03"]
SEED_RETURNS = 20080915
SEED_MISSING = 20081115


def weekdays(first: date, last: date) -> list[date]:
    days = []
    d = first
    while d <= last:
        if d.weekday() < 5:
            days.append(d)
        d += timedelta(days=1)
    return days


def main() -> None:
    days = weekdays(date(2006, 6, 1), date(2011, 7, 29))
    n_days, n = len(days), len(TICKERS)

    draws = standard_normals(SEED_RETURNS, n_days * (n + 1)).reshape(n_days, n + 1)
    factor, noise = draws[:, 0], draws[:, 1:]
    scale = np.where([CRISIS[0] <= d <= CRISIS[1] for d in days], 2.0, 1.0)
    rets = 0.01 * (scale[:, None] * factor[:, None] * np.array(BETAS)[None, :]
                   + noise)

    prices = np.empty((n_days, n))
    prices[0] = START_PRICES
    for t in range(1, n_days):
        prices[t] = prices[t - 1] * np.exp(rets[t])

    missing = np.zeros((n_days, n), dtype=bool)
    words = iter(splitmix64(SEED_MISSING, 4 * n_days))
    for t in range(n_days):
        u = int(next(words)) / 2 ** 64
        holes = 1 if u < 0.30 else (2 if u < 0.35 else 0)
        for _ in range(holes):
            missing[t, int(next(words)) % n] = True
    heavy = {date.fromisoformat(s) for s in HEAVY_HOLIDAYS}
    for t, d in enumerate(days):
        if d in heavy:
            count = 4 + int(next(words)) % 3  # 4..6 of 12 -> >= 30%
            start = int(next(words)) % n
            for j in range(count):
                missing[t, (start + j) % n] = True
    late_col = TICKERS.index(LATE_TICKER)
    missing[:LATE_DAYS, late_col] = True

    lines = ["date," + ",".join(TICKERS)]
    for t, d in enumerate(days):
        cells = ["" if missing[t, j] else f"{prices[t, j]:.4f}" for j in range(n)]
        lines.append(d.isoformat() + "," + ",".join(cells))
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({n_days} dates x {n} tickers, "
          f"{int(missing.sum())} missing cells)")


if __name__ == "__main__":
    main()
