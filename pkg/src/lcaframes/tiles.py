"""Self-similar planar tiles from 2x2 integer dilations of determinant +-2.

The attractor Q of the map pair x |-> Bx, x |-> B(digit + x), with
B = (A^T)^{-1}, is approximated by the point sets

    Q(0) = {0},   Q(r+1) = B Q(r)  u  B (digit + Q(r)).

Because |det A| = 2, every point of Q(r) is an exact dyadic rational with
denominator 2^r; internally points are kept as integer pairs scaled by 2^r,
so deduplication, set equality and the self-similarity recursion are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import DomainParameterError, ResourceLimitError

MAX_ITERATIONS = 24


@dataclass(frozen=True)
class TileSpec:
    matrix: tuple  # ((a, b), (c, d)) integer entries, |det| = 2, expansive
    digit: tuple  # coset representative of Z^2 / A Z^2, not in A Z^2

    def __post_init__(self):
        m = self.matrix
        if any(not isinstance(x, int) for row in m for x in row):
            raise DomainParameterError("dilation matrix must have integer entries")
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if abs(det) != 2:
            raise DomainParameterError(f"determinant must be +-2, got {det}")
        eigs = np.linalg.eigvals(np.array(m, dtype=float))
        if np.min(np.abs(eigs)) <= 1.0 + 1e-9:
            raise DomainParameterError("all eigenvalues must lie outside the unit circle")
        if not (isinstance(self.digit, tuple) and len(self.digit) == 2):
            raise DomainParameterError("digit must be an integer pair")
        if _in_image(m, self.digit):
            raise DomainParameterError(f"digit {self.digit} lies in A Z^2")

    @property
    def det(self) -> int:
        m = self.matrix
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]

    def doubled_dual_map(self) -> np.ndarray:
        """2B = 2 (A^T)^{-1}, an integer matrix."""
        m, d = self.matrix, self.det
        sign = 2 // d  # +-1
        # inv([[a, c], [b, d]]) = [[d, -c], [-b, a]] / det
        return sign * np.array([[m[1][1], -m[1][0]], [-m[0][1], m[0][0]]], dtype=np.int64)

    def dual_map(self) -> tuple:
        """B = (A^T)^{-1} as exact rational rows."""
        c = self.doubled_dual_map()
        return tuple(tuple(Fraction(int(x), 2) for x in row) for row in c)


def _in_image(m, v) -> bool:
    """v in A Z^2, solved exactly over the rationals."""
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    x = Fraction(m[1][1] * v[0] - m[0][1] * v[1], det)
    y = Fraction(-m[1][0] * v[0] + m[0][0] * v[1], det)
    return x.denominator == 1 and y.denominator == 1


def _check_r(r: int):
    if r < 0:
        raise DomainParameterError("iteration count must be nonnegative")
    if r > MAX_ITERATIONS:
        raise ResourceLimitError(f"iteration count {r} exceeds the cap {MAX_ITERATIONS}")


def _dedup(pts: np.ndarray) -> np.ndarray:
    return np.unique(pts, axis=0)


def scaled_points(spec: TileSpec, r: int) -> np.ndarray:
    """Q(r) * 2^r as deduplicated integer pairs, by the contraction recursion."""
    _check_r(r)
    c = spec.doubled_dual_map()
    eta = np.array(spec.digit, dtype=np.int64)
    pts = np.zeros((1, 2), dtype=np.int64)
    for j in range(r):
        shifted = pts + (eta << j)
        pts = _dedup(np.concatenate([pts, shifted]) @ c.T)
    return pts


def scaled_points_digits(spec: TileSpec, r: int) -> np.ndarray:
    """Q(r) * 2^r through digit expansions, appending the highest digit last.

    Built in the opposite order from scaled_points: translate by
    2^{r-j} (2B)^j digit for j = 1..r.
    """
    _check_r(r)
    c = spec.doubled_dual_map()
    eta = np.array(spec.digit, dtype=np.int64)
    pts = np.zeros((1, 2), dtype=np.int64)
    v = eta.copy()
    for j in range(1, r + 1):
        v = c @ v  # (2B)^j digit, denominator folded into the 2^{r-j} scale
        u = v << (r - j)
        pts = _dedup(np.concatenate([pts, pts + u]))
    return pts


def tile_points(spec: TileSpec, r: int) -> list:
    """The points of Q(r) as exact dyadic rationals, sorted."""
    pts = scaled_points(spec, r)
    scale = Fraction(1, 2**r)
    return [(int(x) * scale, int(y) * scale) for x, y in pts]


def selfsimilarity_holds(spec: TileSpec, r: int, claimed: np.ndarray | None = None) -> bool:
    """Exact set equality Q(r) = B Q(r-1) u B (digit + Q(r-1)).

    One side comes from the digit expansion (or from `claimed`, integer pairs
    scaled by 2^r), the other from one contraction step applied to Q(r-1), so
    the check is not vacuous.
    """
    if r < 1:
        raise DomainParameterError("self-similarity needs r >= 1")
    _check_r(r)
    c = spec.doubled_dual_map()
    eta = np.array(spec.digit, dtype=np.int64)
    prev = scaled_points(spec, r - 1)  # scaled by 2^{r-1}
    step = _dedup(np.concatenate([prev, prev + (eta << (r - 1))]) @ c.T)
    other = scaled_points_digits(spec, r) if claimed is None else _dedup(np.asarray(claimed))
    return step.shape == other.shape and bool(np.array_equal(step, other))


def measure_estimate(spec: TileSpec, r: int, h: Fraction) -> tuple[float, float]:
    """Box-count estimate of the tile area and the tiling-overlap fraction.

    Points are binned into h-cells and the cells folded modulo Z^2.  Returns
    (#distinct folded cells) * h^2 as the area estimate, plus the fraction of
    folded cells claimed by more than one integer translate.
    """
    h = Fraction(h)
    if h <= 0 or h > 1 or (1 / h).denominator != 1:
        raise DomainParameterError(f"cell size must divide 1 exactly, got {h}")
    per_unit = int(1 / h)
    pts = scaled_points(spec, r)
    denom = 2**r
    cells = np.floor_divide(pts * per_unit, denom)
    folded = cells % per_unit
    owners = cells // per_unit
    keyed = {}
    for (fx, fy), (ox, oy) in zip(folded, owners):
        keyed.setdefault((int(fx), int(fy)), set()).add((int(ox), int(oy)))
    estimate = len(keyed) * float(h) ** 2
    overlap = sum(1 for o in keyed.values() if len(o) > 1) / max(len(keyed), 1)
    return estimate, overlap


def point_bound(spec: TileSpec, terms: int = 200) -> float:
    """Numeric radius bound ||digit|| * sum_j ||B^j||, truncated geometrically."""
    b = spec.doubled_dual_map().astype(float) / 2.0
    eta_norm = math.hypot(*spec.digit)
    total, power = 0.0, np.eye(2)
    for _ in range(terms):
        power = power @ b
        total += np.linalg.norm(power, 2)
    return eta_norm * total


def tile_to_csv(points, path, header: str = ""):
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append("x,y")
    for p in points:
        lines.append(f"{float(p[0]):.17g},{float(p[1]):.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
