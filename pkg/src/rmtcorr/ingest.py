"""Loading, calendar filtering and windowing of daily closing-price panels.

Input format: delimited text (comma), first column ``date`` in ISO-8601
``YYYY-MM-DD``, one column per ticker.  An empty cell or the token ``NA``
marks a missing price; unparseable or non-positive cells are treated the
same way.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import AlignmentError, ConfigError, LoadError, WindowError

DEFAULT_THETA = 0.30
MISSING_TOKEN = "NA"


@dataclass(frozen=True)
class WindowSpec:
    """Named, inclusive date range analyzed as one unit."""

    name: str
    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise WindowError(f"window '{self.name}': start {self.start} after end {self.end}")

    def contains(self, d: date) -> bool:
        return self.start <= d <= self.end


@dataclass
class PricePanel:
    """Raw date x ticker table of closing prices; NaN marks a missing cell."""

    dates: list[date]
    tickers: list[str]
    prices: np.ndarray  # shape (len(dates), len(tickers)), float64

    def __post_init__(self):
        self.prices = np.asarray(self.prices, dtype=float)
        if self.prices.shape != (len(self.dates), len(self.tickers)):
            raise ValueError("price table shape does not match dates x tickers")
        if len(set(self.tickers)) != len(self.tickers):
            raise ValueError("tickers must be unique")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if prev >= cur:
                raise ValueError(f"dates must be strictly increasing (at {cur})")
        present = self.prices[np.isfinite(self.prices)]
        if present.size and present.min() <= 0.0:
            raise ValueError("present prices must be positive")

    @property
    def n_series(self) -> int:
        return len(self.tickers)

    @property
    def n_dates(self) -> int:
        return len(self.dates)


@dataclass
class AlignedPanel:
    """Fully dense price panel after holiday removal and forward filling."""

    dates: list[date]
    tickers: list[str]
    prices: np.ndarray  # shape (len(dates), len(tickers)), no NaN
    fill_log: list[tuple[date, str]] = field(default_factory=list)

    def __post_init__(self):
        self.prices = np.asarray(self.prices, dtype=float)
        if self.prices.shape != (len(self.dates), len(self.tickers)):
            raise ValueError("price table shape does not match dates x tickers")
        if not np.isfinite(self.prices).all():
            raise ValueError("aligned panel contains missing cells")

    @property
    def n_series(self) -> int:
        return len(self.tickers)

    @property
    def n_dates(self) -> int:
        return len(self.dates)


def _parse_price(cell: str) -> float:
    """Missing markers, junk and non-positive values all map to NaN."""
    text = cell.strip()
    if text == "" or text == MISSING_TOKEN:
        return math.nan
    try:
        value = float(text)
    except ValueError:
        return math.nan
    if not math.isfinite(value) or value <= 0.0:
        return math.nan
    return value


def load_prices(source: str | Path) -> PricePanel:
    """Read a wide price table from ``source``.

    Rows are sorted by date on the way in.  Structural problems (bad
    header, short rows, bad dates, duplicate dates) raise LoadError naming
    the offending line; bad price cells merely become missing markers.
    """
    path = Path(source)
    try:
        handle = open(path, encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise LoadError(f"cannot open price table '{path}': {exc}") from exc

    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError(f"{path}: line 1: empty file") from None
        except csv.Error as exc:
            raise LoadError(f"{path}: line 1: {exc}") from exc

        if len(header) < 2 or header[0].strip().lower() != "date":
            raise LoadError(f"{path}: line 1: malformed header (expected 'date,<ticker>,...')")
        tickers = [cell.strip() for cell in header[1:]]
        if any(t == "" for t in tickers):
            raise LoadError(f"{path}: line 1: empty ticker name in header")
        if len(set(tickers)) != len(tickers):
            dupes = sorted({t for t in tickers if tickers.count(t) > 1})
            raise LoadError(f"{path}: line 1: duplicate ticker(s) {dupes}")

        rows: list[tuple[date, list[float]]] = []
        seen: dict[date, int] = {}
        for lineno, cells in enumerate(reader, start=2):
            if not cells or (len(cells) == 1 and cells[0].strip() == ""):
                continue  # blank line
            if len(cells) != len(header):
                raise LoadError(
                    f"{path}: line {lineno}: expected {len(header)} fields, got {len(cells)}"
                )
            try:
                day = date.fromisoformat(cells[0].strip())
            except ValueError:
                raise LoadError(f"{path}: line {lineno}: unparseable date '{cells[0].strip()}'") from None
            if day in seen:
                raise LoadError(
                    f"{path}: line {lineno}: duplicate date {day.isoformat()} "
                    f"(first seen on line {seen[day]})"
                )
            seen[day] = lineno
            rows.append((day, [_parse_price(c) for c in cells[1:]]))

    rows.sort(key=lambda item: item[0])
    dates = [day for day, _ in rows]
    prices = np.array([vals for _, vals in rows], dtype=float).reshape(len(rows), len(tickers))
    return PricePanel(dates=dates, tickers=tickers, prices=prices)


def align(panel: PricePanel, theta: float = DEFAULT_THETA) -> AlignedPanel:
    """Apply the holiday-removal and forward-fill protocol.

    A date is removed when the fraction of missing markets is >= ``theta``
    (inclusive, so the rule is deterministic at the boundary).  Remaining
    missing cells take the ticker's most recent prior present price.
    Leading dates on which some ticker has no prior price yet are dropped
    for the whole panel; back-filling would leak future information.
    """
    if not 0.0 <= theta <= 1.0:
        raise AlignmentError(f"theta must be in [0, 1], got {theta}")
    if panel.n_dates == 0 or panel.n_series == 0:
        raise AlignmentError("cannot align an empty panel")

    present = np.isfinite(panel.prices)
    for j, ticker in enumerate(panel.tickers):
        if not present[:, j].any():
            raise AlignmentError(f"ticker '{ticker}' has no present price on any date")

    # Panel effectively starts once every ticker has traded at least once.
    first_present = present.argmax(axis=0)
    start_row = int(first_present.max())

    n = panel.n_series
    missing_frac = (~present).sum(axis=1) / n
    keep = [
        i for i in range(start_row, panel.n_dates)
        if missing_frac[i] < theta
    ]
    if not keep:
        raise AlignmentError(f"no dates survive alignment with theta={theta}")

    # Forward fill over the raw timeline so removed days still provide the
    # last actual closing price.
    filled = panel.prices.copy()
    last = np.full(n, np.nan)
    for i in range(panel.n_dates):
        row = filled[i]
        gaps = ~np.isfinite(row)
        row[gaps] = last[gaps]
        last = row

    fill_log = [
        (panel.dates[i], panel.tickers[j])
        for i in keep
        for j in np.nonzero(~present[i])[0]
    ]
    dates = [panel.dates[i] for i in keep]
    return AlignedPanel(dates=dates, tickers=list(panel.tickers),
                        prices=filled[keep], fill_log=fill_log)


def slice_window(panel: AlignedPanel, window: WindowSpec) -> AlignedPanel:
    """Restrict the panel to dates with start <= date <= end."""
    idx = [i for i, d in enumerate(panel.dates) if window.contains(d)]
    if not idx:
        raise WindowError(
            f"window '{window.name}' ({window.start}..{window.end}) "
            f"does not intersect the panel"
        )
    dates = [panel.dates[i] for i in idx]
    fill_log = [(d, t) for d, t in panel.fill_log if window.contains(d)]
    return AlignedPanel(dates=dates, tickers=list(panel.tickers),
                        prices=panel.prices[idx], fill_log=fill_log)


def write_panel(panel: PricePanel | AlignedPanel, path: str | Path) -> None:
    """Serialize a panel back to the delimited input format."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["date"] + list(panel.tickers))
        for i, day in enumerate(panel.dates):
            cells = [
                MISSING_TOKEN if not math.isfinite(v) else repr(float(v))
                for v in panel.prices[i]
            ]
            writer.writerow([day.isoformat()] + cells)


def _window_from_obj(obj: dict, where: str) -> WindowSpec:
    try:
        name = obj["name"]
        start = date.fromisoformat(obj["start"])
        end = date.fromisoformat(obj["end"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: bad window entry {obj!r}: {exc}") from exc
    return WindowSpec(name=str(name), start=start, end=end)


def parse_windows(items: list, where: str = "windows") -> list[WindowSpec]:
    """Validate a JSON-style list of {name, start, end} objects."""
    if not isinstance(items, list) or not items:
        raise ConfigError(f"{where}: expected a non-empty list of windows")
    windows = [_window_from_obj(obj, where) for obj in items]
    names = [w.name for w in windows]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ConfigError(f"{where}: duplicate window name(s) {dupes}")
    return windows


def load_windows(path: str | Path) -> list[WindowSpec]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read window configuration '{path}': {exc}") from exc
    if isinstance(data, dict) and "windows" in data:
        data = data["windows"]
    return parse_windows(data, where=str(path))


def default_windows() -> list[WindowSpec]:
    """The bundled ``paper-2008`` preset: before/during/after the 2008 crisis."""
    text = resources.files("rmtcorr").joinpath("data/paper_2008.json").read_text("utf-8")
    return parse_windows(json.loads(text), where="paper_2008.json")
