"""Periodic filters on the dual group, the UEP matrix, and its verification.

A filter is a function on the dual group, periodic with respect to the
level-(k+1) annihilator lattice.  Three representations are supported:

* TrigPolynomial  -- gamma |-> sum_j c_j * (-j*eta, gamma), automatically
  periodic when the step eta lies in Lambda_{k+1};
* CosetPiecewise  -- constant on each piece of a fundamental domain, extended
  periodically (first matching piece wins, pieces are listed disjointly);
* TabulatedFilter -- values on an explicit grid, never interpolated.

The UEP matrix P_k stacks the refinement filter over the wavelet filters and
evaluates column l at gamma + nu_{k,l}.  Verification measures the largest
entry of P*P - d_k I over a sampling plan; on finite dual groups the plan is
exhaustive and the arithmetic exact, so a true identity reports residual 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import domains
from .chains import LatticeChain
from .exact import Radical, as_fraction, cis, radical
from .exceptions import (
    EmptySamplingPlanError,
    FilterVariantError,
    InterpolationUnsupportedError,
    LatticeMembershipError,
    PeriodicityMismatchError,
)
from .groups import (
    CYCLIC,
    EUCLIDEAN,
    GroupSpec,
    element_add,
    element_neg,
    element_scale,
    pairing_exact,
    pairing_phase,
)
from .lattices import ScaledLattice

DEFAULT_SEED = 0x5EED


def as_complex(v) -> complex:
    return complex(v)


@dataclass(frozen=True)
class TrigPolynomial:
    group: GroupSpec  # primal group of the step element
    step: object  # eta in Lambda_{k+1}
    shifts: tuple  # integer j's
    coeffs: tuple  # complex or Radical per shift
    lattice: ScaledLattice  # periodicity lattice (annihilator of level k+1)

    def eval(self, gamma) -> complex:
        out = 0j
        for j, c in zip(self.shifts, self.coeffs):
            x = element_scale(self.group, -j, self.step)
            out += as_complex(c) * cis(pairing_phase(self.group, x, gamma))
        return out

    def eval_exact(self, gamma) -> Radical | None:
        total = radical(0)
        for j, c in zip(self.shifts, self.coeffs):
            if not isinstance(c, Radical):
                return None
            x = element_scale(self.group, -j, self.step)
            z = pairing_exact(self.group, x, gamma)
            if z is None:
                return None
            total = total.add(c.mul(z))
            if total is None:
                return None
        return total

    def eval_many(self, gammas: np.ndarray) -> np.ndarray:
        out = np.zeros(gammas.shape[0] if gammas.ndim > 1 else gammas.shape, dtype=complex)
        for j, c in zip(self.shifts, self.coeffs):
            x = element_scale(self.group, -j, self.step)
            out += as_complex(c) * np.exp(2j * np.pi * (_phase_array(self.group, x, gammas) % 1.0))
        return out


def _phase_array(group: GroupSpec, x, gammas: np.ndarray) -> np.ndarray:
    if group.kind == CYCLIC:
        return (float(x) / group.modulus) * gammas
    if group.kind == EUCLIDEAN:
        return gammas @ np.array([float(c) for c in domains.coords(x)])
    return float(x) * gammas


@dataclass(frozen=True)
class CosetPiecewise:
    dual: GroupSpec  # dual group the filter lives on
    pieces: tuple  # ((domain, value), ...); first match wins, uncovered points are 0
    domain: object  # one fundamental domain of the periodicity lattice
    lattice: ScaledLattice

    def _reduce(self, gamma):
        """Representative of gamma modulo the periodicity lattice in `domain`."""
        lat = self.lattice
        if lat.is_finite:
            for w in lat.points():
                p = element_add(self.dual, gamma, element_neg(self.dual, w))
                if domains.contains(self.domain, p, self.dual):
                    return p
            return None
        lo, hi = domains.bounds(self.domain)
        cs = domains.coords(gamma)
        ranges = []
        for x, s, a, b in zip(cs, lat.step, lo, hi):
            s = Fraction(s)
            xf = as_fraction(x)
            if xf is not None:
                jlo = -((b - xf) // s)  # ceil((x-b)/s)
                jhi = (xf - a) // s
                ranges.append(range(int(jlo), int(jhi) + 1))
            else:
                jlo = math.ceil((float(x) - float(b)) / float(s))
                jhi = math.floor((float(x) - float(a)) / float(s))
                ranges.append(range(jlo, jhi + 2))
        for js in itertools.product(*ranges):
            w = [j * Fraction(s) for j, s in zip(js, lat.step)]
            w = [int(v) if v.denominator == 1 else v for v in w]
            w = tuple(w) if len(w) > 1 else w[0]
            p = element_add(self.dual, gamma, element_neg(self.dual, w))
            if domains.contains(self.domain, p, self.dual):
                return p
        return None

    def eval(self, gamma) -> complex:
        v = self._piece_value(gamma)
        return 0j if v is None else as_complex(v)

    def eval_exact(self, gamma) -> Radical | None:
        if not all(as_fraction(c) is not None for c in domains.coords(gamma)):
            return None
        v = self._piece_value(gamma)
        if v is None:
            return radical(0)
        return v if isinstance(v, Radical) else None

    def _piece_value(self, gamma):
        p = self._reduce(gamma)
        if p is None:
            raise FilterVariantError(
                f"point {gamma!r} has no representative in the filter's fundamental domain"
            )
        for dom, value in self.pieces:
            if domains.contains(dom, p, self.dual):
                return value
        return None

    def eval_many(self, gammas) -> np.ndarray:
        return np.array([self.eval(g) for g in gammas], dtype=complex)


@dataclass(frozen=True)
class TabulatedFilter:
    dual: GroupSpec
    points: tuple
    values: tuple
    lattice: ScaledLattice

    def _canon(self, gamma):
        cs = domains.coords(gamma)
        out = []
        for x, s in zip(cs, self.lattice.step):
            s = Fraction(s)
            xf = as_fraction(x)
            out.append(xf % s if xf is not None else float(x) % float(s))
        return tuple(out) if len(out) > 1 else out[0]

    def eval(self, gamma) -> complex:
        key = self._canon(gamma)
        for p, v in zip(self.points, self.values):
            if self._canon(p) == key:
                return as_complex(v)
        raise InterpolationUnsupportedError(f"point {gamma!r} is off the tabulation grid")

    def eval_exact(self, gamma):
        v = self.eval(gamma)
        return None if not isinstance(v, Radical) else v

    def eval_many(self, gammas) -> np.ndarray:
        return np.array([self.eval(g) for g in gammas], dtype=complex)


PeriodicFilter = (TrigPolynomial, CosetPiecewise, TabulatedFilter)


def eval_filter(f, gamma) -> complex:
    """Value of the periodic extension of f at gamma."""
    return f.eval(gamma)


def mask_coefficients(f) -> tuple:
    """(step, shifts, coefficients) of a trigonometric-polynomial filter."""
    if not isinstance(f, TrigPolynomial):
        raise FilterVariantError(f"mask coefficients need a TrigPolynomial, got {type(f).__name__}")
    return f.step, f.shifts, tuple(as_complex(c) for c in f.coeffs)


def scale_filter(f, factor: complex):
    """Same filter with every value scaled; used for corruption controls."""
    if isinstance(f, TrigPolynomial):
        coeffs = tuple(as_complex(c) * factor for c in f.coeffs)
        return TrigPolynomial(f.group, f.step, f.shifts, coeffs, f.lattice)
    if isinstance(f, CosetPiecewise):
        pieces = tuple((d, as_complex(v) * factor) for d, v in f.pieces)
        return CosetPiecewise(f.dual, pieces, f.domain, f.lattice)
    raise FilterVariantError(f"cannot scale {type(f).__name__}")


@dataclass(frozen=True)
class UepMatrix:
    """The (rho_k + 1) x d_k coset-evaluation matrix at one chain level."""

    chain: LatticeChain
    k: int
    rows: tuple  # refinement filter first, wavelet filters after

    @property
    def d(self) -> int:
        return self.chain.index(self.k)

    @property
    def nu(self) -> tuple:
        return self.chain.cosets(self.k)

    @property
    def rho(self) -> int:
        return len(self.rows) - 1

    def value(self, gamma) -> np.ndarray:
        dual = self.chain.dual
        cols = [element_add(dual, gamma, nu) for nu in self.nu]
        return np.array([[f.eval(g) for g in cols] for f in self.rows], dtype=complex)

    def value_exact(self, gamma):
        dual = self.chain.dual
        cols = [element_add(dual, gamma, nu) for nu in self.nu]
        out = []
        for f in self.rows:
            row = []
            for g in cols:
                v = f.eval_exact(g)
                if v is None:
                    return None
                row.append(v)
            out.append(row)
        return out


def assemble_uep(chain: LatticeChain, k: int, h, g_list) -> UepMatrix:
    """Stack the refinement filter over the wavelet filters at level k."""
    if not g_list:
        raise PeriodicityMismatchError("at least one wavelet filter is required")
    target = chain.level(k + 1).annihilator
    for f in (h, *g_list):
        if f.lattice != target:
            raise PeriodicityMismatchError(
                f"filter periodicity {f.lattice} does not match level {k + 1} annihilator"
            )
    return UepMatrix(chain, k, (h, *g_list))


@dataclass(frozen=True)
class SamplingPlan:
    points: tuple
    exact: bool  # exhaustive over a finite dual domain
    label: str

    def __post_init__(self):
        if not self.points:
            raise EmptySamplingPlanError("sampling plan has no points")


_PLAN_CACHE: dict = {}


def dual_sampling_plan(
    chain: LatticeChain,
    k: int,
    grid: int = 4096,
    random: int = 1024,
    seed: int = DEFAULT_SEED,
    domain=None,
) -> SamplingPlan:
    """Sampling plan covering V_k: exhaustive on finite duals, grid+random else.

    Plans are memoized; they are pure functions of the chain parameters.
    """
    key = None
    if domain is None:
        key = (chain.kind, repr(sorted(chain.params.items())), k, grid, random, seed)
        hit = _PLAN_CACHE.get(key)
        if hit is not None:
            return hit
    dom = domain if domain is not None else chain.level(k).domain_v
    if chain.dual.is_discrete:
        pts = tuple(domains.iter_points(dom, chain.dual))
        plan = SamplingPlan(pts, True, f"exhaustive V_{k} ({len(pts)} points)")
    else:
        rng = np.random.default_rng(seed)
        scalar = chain.dual.kind != EUCLIDEAN
        pts = tuple(domains.grid_points(dom, grid, scalar)) + tuple(
            domains.random_points(dom, random, rng, scalar)
        )
        plan = SamplingPlan(pts, False, f"grid+random V_{k} ({len(pts)} points, seed {seed:#x})")
    if key is not None:
        if len(_PLAN_CACHE) > 64:
            _PLAN_CACHE.pop(next(iter(_PLAN_CACHE)))
        _PLAN_CACHE[key] = plan
    return plan


@dataclass(frozen=True)
class UepReport:
    residual: float
    exact: bool
    worst_point: object
    samples: int
    label: str

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "exact": self.exact,
            "worst_point": repr(self.worst_point),
            "samples": self.samples,
            "sampling": self.label,
        }


def _gram_residual_exact(P: UepMatrix, gamma) -> Fraction | None:
    """max |(P*P - d I)_{l,l'}|^2 as an exact rational, or None."""
    vals = P.value_exact(gamma)
    if vals is None:
        return None
    d = P.d
    worst = Fraction(0)
    for l in range(d):
        for lp in range(d):
            acc = radical(0)
            for row in vals:
                acc = acc.add(row[l].conj().mul(row[lp]))
                if acc is None:
                    return None
            target = radical(d if l == lp else 0)
            diff = acc.add(-target)
            if diff is None:
                return None
            worst = max(worst, diff.abs2())
    return worst


def _gram_residual_float(P: UepMatrix, gamma) -> float:
    m = P.value(gamma)
    g = m.conj().T @ m - P.d * np.eye(P.d)
    return float(np.max(np.abs(g)))


def pointwise_residuals(P: UepMatrix, points) -> np.ndarray:
    """Residual of the Gram identity at each sample point."""
    if all(isinstance(f, TrigPolynomial) for f in P.rows) and P.chain.dual.kind != CYCLIC:
        return _residuals_vectorized(P, points)
    return np.array([_gram_residual_float(P, g) for g in points])


def _residuals_vectorized(P: UepMatrix, points) -> np.ndarray:
    dual = P.chain.dual
    if dual.kind == EUCLIDEAN:
        base = np.array([[float(c) for c in domains.coords(p)] for p in points])
        cols = [base + np.array([float(c) for c in domains.coords(nu)]) for nu in P.nu]
    else:
        base = np.array([float(p) for p in points])
        cols = [base + float(nu) for nu in P.nu]
    mat = np.empty((len(points), len(P.rows), P.d), dtype=complex)
    for r, f in enumerate(P.rows):
        for l, col in enumerate(cols):
            mat[:, r, l] = f.eval_many(col)
    gram = np.einsum("nrl,nrm->nlm", mat.conj(), mat) - P.d * np.eye(P.d)
    return np.max(np.abs(gram), axis=(1, 2))


def verify_uep(P: UepMatrix, plan: SamplingPlan) -> UepReport:
    """Largest deviation of P*P from d_k I over the plan.

    Exact sample points are evaluated in exact arithmetic where the filter
    values allow it; the report is flagged exact only if every point was.
    """
    worst, worst_pt, all_exact = 0.0, plan.points[0], True
    float_pts = []
    if plan.exact:
        for g in plan.points:
            w2 = _gram_residual_exact(P, g)
            if w2 is None:
                all_exact = False
                float_pts.append(g)
                continue
            w = math.sqrt(float(w2))
            if w > worst:
                worst, worst_pt = w, g
    else:
        all_exact = False
        float_pts = list(plan.points)
    if float_pts:
        res = pointwise_residuals(P, float_pts)
        i = int(np.argmax(res))
        if res[i] > worst:
            worst, worst_pt = float(res[i]), float_pts[i]
    return UepReport(worst, all_exact, worst_pt, len(plan.points), plan.label)


def gram_entry(P: UepMatrix, gamma, l: int, lp: int) -> complex:
    """Entrywise form of the Gram identity: row-by-row conjugated products."""
    dual = P.chain.dual
    a = element_add(dual, gamma, P.nu[l])
    b = element_add(dual, gamma, P.nu[lp])
    return sum(f.eval(a).conjugate() * f.eval(b) for f in P.rows)


def entrywise_residual(P: UepMatrix, gamma) -> float:
    d = P.d
    return max(
        abs(gram_entry(P, gamma, l, lp) - (d if l == lp else 0))
        for l in range(d)
        for lp in range(d)
    )


def verify_periodic_extension(P: UepMatrix, shifts, plan: SamplingPlan, tol: float = 1e-12) -> bool:
    """Residuals agree at gamma and gamma + shift for level-k annihilator shifts."""
    ann = P.chain.level(P.k).annihilator
    dual = P.chain.dual
    base = pointwise_residuals(P, list(plan.points))
    for shift in shifts:
        if not ann.contains(shift):
            raise LatticeMembershipError(f"shift {shift!r} is not in the level-{P.k} annihilator")
        moved = pointwise_residuals(P, [element_add(dual, g, shift) for g in plan.points])
        if np.max(np.abs(base - moved)) > tol:
            return False
    return True


def _value_json(v) -> dict:
    c = as_complex(v)
    out = {"re": c.real, "im": c.imag}
    if isinstance(v, Radical):
        out["exact"] = {"re": str(v.re), "im": str(v.im), "rad": str(v.rad)}
    return out


def _value_from_json(data) -> object:
    if "exact" in data:
        e = data["exact"]
        return Radical(Fraction(e["re"]), Fraction(e["im"]), int(e["rad"]))
    return complex(data["re"], data["im"])


def filter_to_json(f) -> dict:
    if isinstance(f, TrigPolynomial):
        return {
            "kind": "trig",
            "eta": domains._point_json(f.step),
            "shifts": list(f.shifts),
            "coeffs": [[as_complex(c).real, as_complex(c).imag] for c in f.coeffs],
            "coeffs_exact": [_value_json(c) for c in f.coeffs],
        }
    if isinstance(f, CosetPiecewise):
        return {
            "kind": "piecewise",
            "domain": domains.domain_to_json(f.domain),
            "pieces": [
                {"domain": domains.domain_to_json(d), "value": _value_json(v)} for d, v in f.pieces
            ],
        }
    raise FilterVariantError(f"cannot serialize {type(f).__name__}")


def filter_from_json(data: dict, chain: LatticeChain, k: int):
    """Rebind a serialized filter to level k of the chain (periodicity k+1)."""
    lattice = chain.level(k + 1).annihilator
    if data["kind"] == "trig":
        coeffs = []
        for i, pair in enumerate(data["coeffs"]):
            exact = data.get("coeffs_exact")
            if exact is not None and "exact" in exact[i]:
                coeffs.append(_value_from_json(exact[i]))
            else:
                coeffs.append(complex(pair[0], pair[1]))
        return TrigPolynomial(
            chain.group,
            domains._point_from_json(data["eta"]),
            tuple(data["shifts"]),
            tuple(coeffs),
            lattice,
        )
    if data["kind"] == "piecewise":
        pieces = tuple(
            (domains.domain_from_json(p["domain"]), _value_from_json(p["value"]))
            for p in data["pieces"]
        )
        return CosetPiecewise(chain.dual, pieces, domains.domain_from_json(data["domain"]), lattice)
    raise FilterVariantError(f"unknown filter kind {data['kind']!r}")
