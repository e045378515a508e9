"""Spline generators on LCA groups and their two-scale filter algebra.

The order-N generator at level k is the N-fold self-convolution of the
indicator of Q_k, scaled by measure(Q_k)^{-N+1/2} so no renormalization is
needed later.  On Z and Z_N the time-domain values come from exact integer
convolution; on T and R^s the generator is available through closed-form
evaluation of its Fourier transform (and a piecewise-polynomial time side).

Consecutive levels are linked by a binomial lowpass mask whenever the chain
has index-2 nesting and the fundamental-domain splitting
Q_k = Q_{k+1} u (eta_k + Q_{k+1}) holds; highpass masks ship for order 1 and
all even orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import domains
from .chains import LatticeChain
from .domains import HalfOpenBox, IntegerInterval
from .exact import cis, radical
from .exceptions import (
    DomainParameterError,
    SplittingError,
    UnsupportedIndexError,
    UnsupportedOrderError,
    UnsupportedRepresentationError,
)
from .filters import SamplingPlan, TrigPolynomial
from .functions import DiscreteFunction
from .groups import CYCLIC, EUCLIDEAN, INTEGERS, TORUS, element_add, pairing_phase


@dataclass(frozen=True)
class BSplineGenerator:
    chain: LatticeChain
    k: int
    order: int
    time: DiscreteFunction | None  # explicit values on Z / Z_N, None otherwise

    def hat(self, gamma) -> complex:
        return bspline_hat(self.chain, self.k, self.order, gamma)

    def time_value(self, x) -> float:
        """Time-domain value; piecewise polynomial on T / R^s."""
        if self.time is not None:
            return self.time.value_at(x)
        return _continuous_time_value(self.chain, self.k, self.order, x)


def _require_index_two(chain: LatticeChain, k: int):
    if chain.index(k) != 2:
        raise UnsupportedIndexError(
            f"spline filters need index-2 lattice nesting, level {k} has d={chain.index(k)}"
        )


def check_refinement_splitting(chain: LatticeChain, k: int):
    """Verify Q_k = Q_{k+1} u (eta_k + Q_{k+1}) exactly; raise with a witness."""
    _require_index_two(chain, k)
    eta = chain.splitter(k)
    qk, qk1 = chain.level(k).domain_q, chain.level(k + 1).domain_q
    if isinstance(qk, IntegerInterval):
        big = set(domains.iter_points(qk, chain.group))
        small = list(domains.iter_points(qk1, chain.group))
        shifted = [element_add(chain.group, x, eta) for x in small]
        union = set(small) | set(shifted)
        if set(small) & set(shifted):
            raise SplittingError(f"overlap witness {sorted(set(small) & set(shifted))[0]}")
        if union != big:
            witness = sorted(big ^ union)[0]
            raise SplittingError(f"splitting fails at point {witness}")
        return
    if isinstance(qk, HalfOpenBox):
        ecs = domains.coords(eta)
        for axis, (lo, hi, lo1, hi1, e) in enumerate(zip(qk.lo, qk.hi, qk1.lo, qk1.hi, ecs)):
            width = Fraction(hi1) - Fraction(lo1)
            if not (Fraction(lo) == Fraction(lo1) and Fraction(e) == width and Fraction(hi) == Fraction(lo1) + 2 * width):
                raise SplittingError(f"splitting fails on axis {axis} at offset {e}")
        return
    raise SplittingError(f"no splitting check for domain {type(qk).__name__}")


def bspline_time(chain: LatticeChain, k: int, order: int) -> BSplineGenerator:
    """Order-`order` generator at level k, with exact values on Z / Z_N."""
    if order < 1:
        raise UnsupportedOrderError(f"order must be >= 1, got {order}")
    group = chain.group
    q = chain.level(k).domain_q
    if group.kind in (INTEGERS, CYCLIC):
        pts = list(domains.iter_points(q, group))
        base = np.ones(len(pts), dtype=np.int64)
        conv = base
        for _ in range(order - 1):
            conv = np.convolve(conv, base)
        scale = float(chain.density(k)) ** (-order + 0.5)
        if group.kind == CYCLIC:
            n = group.modulus
            full = np.zeros(n, dtype=complex)
            for i, v in enumerate(conv):
                full[(pts[0] * order + i) % n] += v
            fn = DiscreteFunction(group, 0, tuple(full * scale))
        else:
            fn = DiscreteFunction(group, pts[0] * order, tuple(conv.astype(complex) * scale))
        return BSplineGenerator(chain, k, order, fn)
    if group.kind in (TORUS, EUCLIDEAN):
        return BSplineGenerator(chain, k, order, None)
    raise UnsupportedRepresentationError(f"no spline representation on {group.describe()}")


def _window_integral(a: Fraction, b: Fraction, gamma) -> complex:
    """integral over [a, b) of e^{-2 pi i x gamma} dx."""
    if gamma == 0:
        return complex(float(b - a))
    g = float(gamma)
    return (cis(-float(a) * g) - cis(-float(b) * g)) / (2j * math.pi * g)


def bspline_hat(chain: LatticeChain, k: int, order: int, gamma) -> complex:
    """Fourier transform of the order-N generator, by closed form.

    measure(Q_k)^{-N+1/2} * (integral over Q_k of (-x, gamma) dx)^N, with the
    integral a finite character sum on Z / Z_N and a closed-form interval
    integral on T / R^s.
    """
    group = chain.group
    q = chain.level(k).domain_q
    mu = chain.density(k)
    if group.kind in (INTEGERS, CYCLIC):
        total = 0j
        for x in domains.iter_points(q, group):
            total += cis(-pairing_phase(group, x, gamma))
        base = total
    elif group.kind == TORUS:
        base = _window_integral(q.lo[0], q.hi[0], gamma)
    else:
        base = 1 + 0j
        for a, b, g in zip(q.lo, q.hi, domains.coords(gamma)):
            base *= _window_integral(a, b, g)
    return float(mu) ** (-order + 0.5) * base**order


def bspline_hat_many(chain: LatticeChain, k: int, order: int, gammas: np.ndarray) -> np.ndarray:
    """Vectorized transform over an array of dual points (scalar duals)."""
    group = chain.group
    q = chain.level(k).domain_q
    mu = float(chain.density(k))
    gammas = np.asarray(gammas, dtype=float)
    if group.kind == INTEGERS:
        xs = np.arange(q.lo, q.hi + 1)
        total = np.zeros(len(gammas), dtype=complex)
        for start in range(0, len(xs), 128):
            chunk = xs[start : start + 128]
            total += np.exp(-2j * np.pi * ((chunk[None, :] * gammas[:, None]) % 1.0)).sum(axis=1)
        return mu ** (-order + 0.5) * total**order
    return np.array([bspline_hat(chain, k, order, g) for g in gammas])


def refinement_filter(chain: LatticeChain, k: int, order: int) -> TrigPolynomial:
    """Binomial lowpass mask 2^{-(N-1/2)} (1 + (-eta_k, .))^N as a trig filter."""
    _require_index_two(chain, k)
    eta = chain.splitter(k)
    coeffs = tuple(
        radical(Fraction(math.comb(order, j), 2**order), 0, 2) for j in range(order + 1)
    )
    return TrigPolynomial(chain.group, eta, tuple(range(order + 1)), coeffs, chain.level(k + 1).annihilator)


def first_order_wavelet_filter(chain: LatticeChain, k: int) -> TrigPolynomial:
    """Highpass mask (1 - (-eta_k, .)) / sqrt(2)."""
    _require_index_two(chain, k)
    eta = chain.splitter(k)
    half_rt2 = radical(Fraction(1, 2), 0, 2)
    return TrigPolynomial(
        chain.group, eta, (0, 1), (half_rt2, -half_rt2), chain.level(k + 1).annihilator
    )


def even_order_wavelet_filters(chain: LatticeChain, k: int, half_order: int) -> list:
    """The 2M highpass masks sqrt(C(2M,m)) 2^{-(2M-1/2)} (1+z)^{2M-m} (1-z)^m."""
    if half_order < 1:
        raise UnsupportedOrderError(f"half order must be >= 1, got {half_order}")
    _require_index_two(chain, k)
    eta = chain.splitter(k)
    n = 2 * half_order
    lattice = chain.level(k + 1).annihilator
    out = []
    for m in range(1, n + 1):
        poly = np.array([1], dtype=object)
        for _ in range(n - m):
            poly = np.convolve(poly, np.array([1, 1], dtype=object))
        for _ in range(m):
            poly = np.convolve(poly, np.array([1, -1], dtype=object))
        rad = 2 * math.comb(n, m)
        coeffs = tuple(radical(Fraction(int(c), 2**n), 0, rad) for c in poly)
        out.append(TrigPolynomial(chain.group, eta, tuple(range(n + 1)), coeffs, lattice))
    return out


def wavelet_filters(chain: LatticeChain, k: int, order: int) -> list:
    """Wavelet masks paired with the order-N lowpass; orders 1 and even only."""
    if order == 1:
        return [first_order_wavelet_filter(chain, k)]
    if order >= 2 and order % 2 == 0:
        return even_order_wavelet_filters(chain, k, order // 2)
    raise UnsupportedOrderError(f"no wavelet masks for odd order {order}")


_CHAR_SUM_CACHE: dict = {}


def _plan_character_sums(chain: LatticeChain, k: int, plan: SamplingPlan) -> np.ndarray:
    """sum over Q_k of (-x, gamma) at the plan points; memoized, order-free.

    Keyed by the identity of the (memoized, immutable) plan point tuple; a
    miss only costs a recomputation.
    """
    key = (chain.kind, repr(sorted(chain.params.items())), k, id(plan.points))
    hit = _CHAR_SUM_CACHE.get(key)
    if hit is None:
        gammas = np.array([float(p) for p in plan.points])
        q = chain.level(k).domain_q
        xs = np.arange(q.lo, q.hi + 1)
        sums = np.zeros(len(gammas), dtype=complex)
        for start in range(0, len(xs), 128):
            chunk = xs[start : start + 128]
            sums += np.exp(-2j * np.pi * ((chunk[None, :] * gammas[:, None]) % 1.0)).sum(axis=1)
        sums.flags.writeable = False
        if len(_CHAR_SUM_CACHE) > 64:
            _CHAR_SUM_CACHE.pop(next(iter(_CHAR_SUM_CACHE)))
        _CHAR_SUM_CACHE[key] = hit = (plan.points, sums)  # keep the keyed tuple alive
    return hit[1]


def refinement_residual(chain: LatticeChain, k: int, order: int, plan: SamplingPlan) -> float:
    """max over the plan of |Phi_k - H_{k+1} Phi_{k+1}| for the spline family."""
    check_refinement_splitting(chain, k)
    h = refinement_filter(chain, k, order)
    if chain.group.kind == INTEGERS:
        pts = np.array([float(p) for p in plan.points])
        mu_k = float(chain.density(k)) ** (-order + 0.5)
        mu_k1 = float(chain.density(k + 1)) ** (-order + 0.5)
        lhs = mu_k * _plan_character_sums(chain, k, plan) ** order
        rhs = h.eval_many(pts) * mu_k1 * _plan_character_sums(chain, k + 1, plan) ** order
        return float(np.max(np.abs(lhs - rhs)))
    worst = 0.0
    for g in plan.points:
        lhs = bspline_hat(chain, k, order, g)
        rhs = h.eval(g) * bspline_hat(chain, k + 1, order, g)
        worst = max(worst, abs(lhs - rhs))
    return worst


def wavelet_time(chain: LatticeChain, k: int, filt: TrigPolynomial, order: int) -> DiscreteFunction:
    """Time-domain wavelet sum_j c_j phi_{k+1,N}(. - j eta_k) on Z / Z_N."""
    if not chain.level(k + 1).lattice.contains(filt.step):
        raise UnsupportedRepresentationError(
            f"mask step {filt.step!r} is not a level-{k + 1} lattice point"
        )
    phi = bspline_time(chain, k + 1, order)
    if phi.time is None:
        raise UnsupportedRepresentationError("time-domain wavelets need Z or Z_N")
    acc = None
    for j, c in zip(filt.shifts, filt.coeffs):
        shifted = phi.time.translate(j * filt.step)
        term = np.asarray(shifted.values, dtype=complex) * complex(c)
        if chain.group.kind == CYCLIC:
            acc = term if acc is None else acc + term
            start = 0
        else:
            if acc is None:
                acc, start = term, shifted.start
            else:
                lo = min(start, shifted.start)
                hi = max(start + len(acc), shifted.start + len(term))
                merged = np.zeros(hi - lo, dtype=complex)
                merged[start - lo : start - lo + len(acc)] = acc
                merged[shifted.start - lo : shifted.start - lo + len(term)] += term
                acc, start = merged, lo
    return DiscreteFunction(chain.group, start, tuple(acc))


def lowpass_flatness_check(
    chain: LatticeChain, k: int, order: int, delta: float, points
) -> tuple[bool, list]:
    """Near-zero character spread on Q_k forces near-unit normalized energy.

    For every sample point where max_{x in Q_k} |(-x, gamma) - 1| <= delta,
    checks |measure(V_k) |Phi(gamma)|^2 - 1| <= 1 - (1 - delta)^{2N}.
    Returns (all such points pass, the points where the hypothesis held).
    """
    if not 0 < delta < 1:
        raise DomainParameterError(f"delta must lie in (0,1), got {delta}")
    group = chain.group
    q = chain.level(k).domain_q
    mu_v = float(chain.dual_cell_measure(k))
    bound = 1 - (1 - delta) ** (2 * order)
    held, ok = [], True
    for g in points:
        if _character_spread(group, q, g) <= delta:
            held.append(g)
            lhs = abs(mu_v * abs(bspline_hat(chain, k, order, g)) ** 2 - 1)
            if lhs > bound + 1e-15:
                ok = False
    return ok, held


def _character_spread(group, q, gamma) -> float:
    """sup over x in Q of |(-x, gamma) - 1|."""
    if isinstance(q, IntegerInterval):
        return max(
            abs(cis(-pairing_phase(group, x, gamma)) - 1) for x in range(q.lo, q.hi + 1)
        )
    # half-open box: phase x.gamma is linear per axis; |e^{2 pi i t}-1| = 2|sin(pi t)|
    worst_t = 0.0
    for a, b, g in zip(q.lo, q.hi, domains.coords(gamma)):
        worst_t += max(abs(float(a) * float(g)), abs(float(b) * float(g)))
    return 2.0 if worst_t > 0.5 else 2 * math.sin(math.pi * worst_t)


def _continuous_time_value(chain: LatticeChain, k: int, order: int, x) -> float:
    """Piecewise-polynomial time value on T / R^s (cardinal spline rescaling)."""
    q = chain.level(k).domain_q
    mu = float(chain.density(k))
    out = mu ** (-order + 0.5)
    for a, b, xr in zip(q.lo, q.hi, domains.coords(x)):
        width = float(b - a)
        if chain.group.kind == TORUS:
            # wrap over the period
            val = sum(
                _cardinal_bspline(order, (float(xr) + m) / width) for m in range(-order - 1, order + 2)
            )
        else:
            val = _cardinal_bspline(order, float(xr) / width)
        out *= width ** (order - 1) * val
    return out


def _cardinal_bspline(n: int, t: float) -> float:
    """The n-fold self-convolution of the indicator of [0,1), supported on [0,n]."""
    if t <= 0 or t >= n:
        return 0.0
    total = 0.0
    for i in range(n + 1):
        if t - i > 0:
            total += (-1) ** i * math.comb(n, i) * (t - i) ** (n - 1)
    return total / math.factorial(n - 1)
