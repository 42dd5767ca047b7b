"""Symmetric eigendecomposition via cyclic Jacobi rotations.

Written from first principles rather than delegating to a library solver:
plane rotations chosen to zero one off-diagonal pair at a time, applied in
a fixed round-robin ordering (each sweep visits every pair exactly once,
grouped into rounds of disjoint pairs so a whole round can be applied with
vectorized arithmetic).  Disjoint rotations commute, so a round equals the
same rotations applied one by one; the procedure is a cyclic Jacobi method
with a deterministic ordering.

Convergence: off-diagonal Frobenius norm < 1e-12 * N, within a budget of
100 sweeps.  Output ordering is descending by eigenvalue (stable under
ties) and each eigenvector is flipped, if needed, so its largest-magnitude
component (lowest index on ties) is positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .correlation import CorrelationMatrix
from .errors import ConvergenceError

OFF_NORM_SCALE = 1e-12
SWEEP_BUDGET = 100
CONVENTION = "descending eigenvalues; largest-magnitude component positive"


@dataclass
class SpectralDecomposition:
    """Eigenvalues sorted descending with orthonormal, sign-fixed eigenvectors."""

    tickers: list[str]
    eigenvalues: np.ndarray   # shape (N,), descending
    eigenvectors: np.ndarray  # shape (N, N); column k pairs with eigenvalue k
    convention: str = CONVENTION

    @property
    def n_series(self) -> int:
        return len(self.tickers)

    def vector(self, rank: int) -> np.ndarray:
        """Eigenvector for 1-based rank (rank 1 = largest eigenvalue)."""
        if not 1 <= rank <= self.n_series:
            raise IndexError(f"rank {rank} outside 1..{self.n_series}")
        return self.eigenvectors[:, rank - 1]


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule: n-1 rounds (n even) of disjoint index pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:  # index n is the bye when n is odd
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.sqrt((off * off).sum()))


def _rotation(app: np.ndarray, aqq: np.ndarray, apq: np.ndarray):
    """Cosines/sines zeroing each (p,q) entry; the smaller-angle root is used."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tau = np.where(apq != 0.0, (aqq - app) / (2.0 * apq), 0.0)
        root = np.sqrt(1.0 + tau * tau)
        t = np.where(tau >= 0.0, 1.0 / (tau + root), 1.0 / (tau - root))
        # asymptotic form when tau*tau would overflow or lose the 1.0
        t = np.where(np.abs(tau) > 1e8, 0.5 / tau, t)
    t = np.where(apq != 0.0, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def jacobi_eigh(matrix: np.ndarray, tol_scale: float = OFF_NORM_SCALE,
                max_sweeps: int = SWEEP_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (unsorted) and eigenvector columns of a symmetric matrix."""
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 1:
        return a.reshape(1).copy(), np.eye(1)
    v = np.eye(n)
    target = tol_scale * n

    for _ in range(max_sweeps):
        if _off_norm(a) < target:
            return np.diag(a).copy(), v
        for pp, qq in _round_robin(n):
            apq = a[pp, qq]
            c, s = _rotation(a[pp, pp], a[qq, qq], apq)
            ck, sk = c[:, None], s[:, None]

            ap, aq = a[pp, :], a[qq, :]
            a[pp, :] = ck * ap - sk * aq
            a[qq, :] = sk * ap + ck * aq
            bp, bq = a[:, pp], a[:, qq]
            a[:, pp] = bp * c - bq * s
            a[:, qq] = bp * s + bq * c
            # the rotation was built to annihilate these entries exactly
            a[pp, qq] = 0.0
            a[qq, pp] = 0.0

            vp, vq = v[:, pp], v[:, qq]
            v[:, pp] = vp * c - vq * s
            v[:, qq] = vp * s + vq * c

    residual = _off_norm(a)
    if residual < target:
        return np.diag(a).copy(), v
    raise ConvergenceError(
        f"no convergence after {max_sweeps} sweeps: "
        f"off-diagonal norm {residual:.3e} >= {target:.3e}"
    )


def _apply_conventions(values: np.ndarray, vectors: np.ndarray):
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    for k in range(values.size):
        lead = int(np.argmax(np.abs(vectors[:, k])))  # first index wins ties
        if vectors[lead, k] < 0.0:
            vectors[:, k] = -vectors[:, k]
    return values, vectors


def eigendecompose(cm: CorrelationMatrix, tol_scale: float = OFF_NORM_SCALE,
                   max_sweeps: int = SWEEP_BUDGET) -> SpectralDecomposition:
    """Full decomposition of a correlation matrix with deterministic output."""
    values, vectors = jacobi_eigh(cm.values, tol_scale=tol_scale, max_sweeps=max_sweeps)
    values, vectors = _apply_conventions(values, vectors)
    return SpectralDecomposition(tickers=list(cm.tickers),
                                 eigenvalues=values, eigenvectors=vectors)


def market_mode(sd: SpectralDecomposition) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and its eigenvector components in ticker order."""
    return float(sd.eigenvalues[0]), sd.eigenvectors[:, 0].copy()


def decomposition_to_dict(sd: SpectralDecomposition) -> dict:
    """JSON-ready form: eigenvalues plus eigenvectors keyed by rank and ticker."""
    return {
        "convention": sd.convention,
        "tickers": list(sd.tickers),
        "eigenvalues": [float(v) for v in sd.eigenvalues],
        "eigenvectors": {
            str(k + 1): {t: float(c) for t, c in zip(sd.tickers, sd.eigenvectors[:, k])}
            for k in range(sd.n_series)
        },
    }


def decomposition_from_dict(data: dict) -> SpectralDecomposition:
    tickers = list(data["tickers"])
    values = np.array(data["eigenvalues"], dtype=float)
    vectors = np.empty((len(tickers), values.size))
    for key, comps in data["eigenvectors"].items():
        k = int(key) - 1
        vectors[:, k] = [comps[t] for t in tickers]
    return SpectralDecomposition(
        tickers=tickers, eigenvalues=values, eigenvectors=vectors,
        convention=data.get("convention", CONVENTION),
    )
