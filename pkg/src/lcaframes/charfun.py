"""Bandlimited generators: scaled indicators of nested dual-side sets.

A band chain attaches to each level k a set Omega_k inside the dual cell V_k,
nested upward, with the top-level set declared as the exhaustion target.  The
generator is measure(V_k)^{-1/2} * indicator(Omega_k); its refinement filter
takes the value sqrt(d_k) on Omega_k and 0 on the rest of the refined cell.

Two wavelet-mask families ship: the compactly-supported family (one filter
per coset, needs Omega_k properly inside V_k) and the orthonormal family
(d_k - 1 filters, needs Omega_k = V_k with nested cells).  Concrete band
chains: dyadic on Z_{2^M}, product on T, boxes and balls on R^s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import domains
from .chains import LatticeChain, cyclic_chain, euclidean_chain, refined_dual_domain, torus_chain
from .domains import Ball, CosetUnion, HalfOpenBox, IntegerInterval
from .exact import Radical, radical, sqrt_rational
from .exceptions import DomainParameterError, ProperSubsetError
from .filters import CosetPiecewise, SamplingPlan
from .functions import DiscreteFunction
from .groups import CYCLIC


@dataclass(frozen=True)
class OmegaChain:
    chain: LatticeChain
    omegas: tuple  # one band set per level, omegas[i] for level k0 + i
    label: str  # construction tag for serialization
    params: dict

    def omega(self, k: int):
        self.chain.level(k)
        return self.omegas[k - self.chain.k0]

    def is_proper(self, k: int) -> bool:
        return self.omega(k) != self.chain.level(k).domain_v

    @property
    def exhaustion_target(self):
        return self.omegas[-1]


def _validate(chain: LatticeChain, omegas, label, params) -> OmegaChain:
    for i, om in enumerate(omegas):
        k = chain.k0 + i
        v = chain.level(k).domain_v
        if not domains.is_subset(om, v, chain.dual):
            raise DomainParameterError(f"band set at level {k} is not inside the dual cell")
        if i + 1 < len(omegas) and not domains.is_subset(om, omegas[i + 1], chain.dual):
            raise DomainParameterError(f"band sets fail to nest between levels {k} and {k + 1}")
    return OmegaChain(chain, tuple(omegas), label, params)


def band_chain_cyclic(M: int, bounds: list[int]) -> OmegaChain:
    """Band sets {0..L_k} on the Z_{2^M} chain.

    Needs nonnegative, non-decreasing L with L_k <= 2^k - 1 and the top level
    exhausting the dual group (L_M = 2^M - 1).
    """
    chain = cyclic_chain(M)
    if len(bounds) != M + 1:
        raise DomainParameterError(f"need {M + 1} band bounds, got {len(bounds)}")
    for k, L in enumerate(bounds):
        if not isinstance(L, int) or L < 0:
            raise DomainParameterError(f"band bound at level {k} must be a nonnegative integer")
        if L > 2**k - 1:
            raise DomainParameterError(f"band bound at level {k} exceeds {2**k - 1}")
        if k and L < bounds[k - 1]:
            raise DomainParameterError(f"band bounds decrease at level {k}")
    if bounds[M] != 2**M - 1:
        raise DomainParameterError(f"top band bound must exhaust the dual group ({2**M - 1})")
    omegas = [IntegerInterval(0, L) for L in bounds]
    return _validate(chain, omegas, "cyclic", {"M": M, "L": list(bounds)})


def band_chain_torus(m_factors: list[int], bounds: list[int]) -> OmegaChain:
    """Symmetric band sets {-L_k..L_k} on the torus chain.

    Needs strictly increasing nonnegative integer L with L_k <= N_k/2 - 1.
    """
    chain = torus_chain(m_factors)
    if len(bounds) != len(m_factors):
        raise DomainParameterError(f"need {len(m_factors)} band bounds, got {len(bounds)}")
    for k, L in enumerate(bounds):
        if not isinstance(L, int) or L < 0:
            raise DomainParameterError(f"band bound at level {k} must be a nonnegative integer")
        half = chain.level(k).domain_v.hi + 1
        if L > half - 1:
            raise DomainParameterError(f"band bound at level {k} exceeds {half - 1}")
        if k and L <= bounds[k - 1]:
            raise DomainParameterError(f"band bounds must strictly increase at level {k}")
    omegas = [IntegerInterval(-L, L) for L in bounds]
    return _validate(chain, omegas, "torus", {"m_factors": list(m_factors), "L": list(bounds)})


def band_chain_boxes(m_table: list[list[int]], bound_table: list[list]) -> OmegaChain:
    """Separable bands prod_r [-L_{k,r}, L_{k,r}) on the R^s chain.

    Per axis: positive, non-decreasing L with L_{k,r} <= N_{k,r}/2.
    """
    chain = euclidean_chain(m_table)
    s, depth = len(m_table), len(m_table[0])
    if len(bound_table) != s or any(len(row) != depth for row in bound_table):
        raise DomainParameterError("band bound table must match the factor table shape")
    for r in range(s):
        for k in range(depth):
            L = Fraction(bound_table[r][k])
            half = -chain.level(k).domain_v.lo[r]
            if L <= 0:
                raise DomainParameterError(f"band bound at level {k} axis {r} must be positive")
            if L > half:
                raise DomainParameterError(f"band bound at level {k} axis {r} exceeds {half}")
            if k and L < Fraction(bound_table[r][k - 1]):
                raise DomainParameterError(f"band bounds decrease at level {k} axis {r}")
    omegas = []
    for k in range(depth):
        lo = tuple(-Fraction(bound_table[r][k]) for r in range(s))
        hi = tuple(Fraction(bound_table[r][k]) for r in range(s))
        omegas.append(HalfOpenBox(lo, hi))
    return _validate(
        chain,
        omegas,
        "boxes",
        {"m_table": [list(r) for r in m_table], "L": [[str(x) for x in r] for r in bound_table]},
    )


def band_chain_balls(m_table: list[list[int]], bounds: list) -> OmegaChain:
    """Euclidean balls ||gamma|| <= L_k; needs L_k < min_r N_{k,r} / 2."""
    chain = euclidean_chain(m_table)
    depth = len(m_table[0])
    if len(bounds) != depth:
        raise DomainParameterError(f"need {depth} ball radii, got {len(bounds)}")
    for k in range(depth):
        L = Fraction(bounds[k])
        half = min(-lo for lo in chain.level(k).domain_v.lo)
        if L < 0:
            raise DomainParameterError(f"ball radius at level {k} must be nonnegative")
        if L >= half:
            raise DomainParameterError(f"ball radius at level {k} must stay below {half}")
        if k and L < Fraction(bounds[k - 1]):
            raise DomainParameterError(f"ball radii decrease at level {k}")
    omegas = [Ball(Fraction(b)) for b in bounds]
    return _validate(
        chain, omegas, "balls", {"m_table": [list(r) for r in m_table], "L": [str(b) for b in bounds]}
    )


def full_band_chain(chain: LatticeChain) -> OmegaChain:
    """Omega_k = V_k at every level (the orthonormal-family setting)."""
    for k in range(chain.k0, chain.k1):
        if not domains.is_subset(chain.level(k).domain_v, chain.level(k + 1).domain_v, chain.dual):
            raise DomainParameterError(f"dual cells fail to nest between levels {k} and {k + 1}")
    omegas = [chain.level(k).domain_v for k in range(chain.k0, chain.k1 + 1)]
    return OmegaChain(chain, tuple(omegas), "full", {"kind": chain.kind, "chain_params": chain.params})


@dataclass(frozen=True)
class IndicatorGenerator:
    band: OmegaChain
    k: int

    @property
    def scale(self) -> Radical:
        return sqrt_rational(1 / Fraction(self.band.chain.dual_cell_measure(self.k)))

    def hat(self, gamma) -> complex:
        if domains.contains(self.band.omega(self.k), gamma, self.band.chain.dual):
            return complex(self.scale)
        return 0j

    def hat_exact(self, gamma) -> Radical:
        if domains.contains(self.band.omega(self.k), gamma, self.band.chain.dual):
            return self.scale
        return radical(0)

    def freq_function(self) -> DiscreteFunction:
        """The generator as a finitely-supported function on a discrete dual."""
        dual = self.band.chain.dual
        if not dual.is_discrete:
            raise DomainParameterError("frequency-side values need a discrete dual")
        value = complex(self.scale)
        pts = list(domains.iter_points(self.band.omega(self.k), dual))
        if dual.kind == CYCLIC:
            vals = np.zeros(dual.modulus, dtype=complex)
            for p in pts:
                vals[p % dual.modulus] = value
            return DiscreteFunction(dual, 0, tuple(vals))
        lo, hi = min(pts), max(pts)
        vals = np.zeros(hi - lo + 1, dtype=complex)
        for p in pts:
            vals[p - lo] = value
        return DiscreteFunction(dual, lo, tuple(vals))


def indicator_generator(band: OmegaChain, k: int) -> IndicatorGenerator:
    band.chain.level(k)
    return IndicatorGenerator(band, k)


def indicator_refinement_filter(band: OmegaChain, k: int) -> CosetPiecewise:
    """sqrt(d_k) on Omega_k, 0 on the rest of the refined dual cell."""
    chain = band.chain
    d = chain.index(k)
    dom = refined_dual_domain(chain, k)
    pieces = ((band.omega(k), sqrt_rational(d)),)
    return CosetPiecewise(chain.dual, pieces, dom, chain.level(k + 1).annihilator)


def bandlimited_wavelet_filters(band: OmegaChain, k: int) -> list:
    """The d_k compactly-supported wavelet masks at a properly banded level.

    Mask m (1 <= m <= d_k - 1) takes sqrt(d_k) on nu_{m+1} + Omega_k and on
    nu_m + (V_k - Omega_k); mask d_k takes sqrt(d_k) on nu_{d_k} + (V_k -
    Omega_k) only.  Together with the refinement filter the coset-evaluation
    matrix has exactly one sqrt(d_k) per column.
    """
    chain = band.chain
    d = chain.index(k)
    if not band.is_proper(k):
        raise ProperSubsetError(f"level {k} band set equals the dual cell; no proper masks")
    nu = chain.cosets(k)
    v = chain.level(k).domain_v
    om = band.omega(k)
    dom = refined_dual_domain(chain, k)
    ann = chain.level(k + 1).annihilator
    rt = sqrt_rational(d)
    zero = radical(0)
    out = []
    for m in range(1, d):
        pieces = (
            (CosetUnion(om, (nu[m],)), rt),
            (CosetUnion(om, (nu[m - 1],)), zero),
            (CosetUnion(v, (nu[m - 1],)), rt),
        )
        out.append(CosetPiecewise(chain.dual, pieces, dom, ann))
    pieces = (
        (CosetUnion(om, (nu[d - 1],)), zero),
        (CosetUnion(v, (nu[d - 1],)), rt),
    )
    out.append(CosetPiecewise(chain.dual, pieces, dom, ann))
    return out


def orthonormal_wavelet_filters(band: OmegaChain, k: int) -> list:
    """The d_k - 1 masks making the coset matrix sqrt(d_k) I (full bands)."""
    chain = band.chain
    d = chain.index(k)
    if band.is_proper(k):
        raise ProperSubsetError(f"level {k} band set must equal the dual cell")
    if not domains.is_subset(chain.level(k).domain_v, chain.level(k + 1).domain_v, chain.dual):
        raise DomainParameterError(f"dual cells fail to nest between levels {k} and {k + 1}")
    nu = chain.cosets(k)
    v = chain.level(k).domain_v
    dom = refined_dual_domain(chain, k)
    ann = chain.level(k + 1).annihilator
    rt = sqrt_rational(d)
    return [
        CosetPiecewise(chain.dual, ((CosetUnion(v, (nu[m],)), rt),), dom, ann)
        for m in range(1, d)
    ]


def indicator_refinement_residual(band: OmegaChain, k: int, plan: SamplingPlan) -> float:
    """max over the plan of |Phi_k - H_{k+1} Phi_{k+1}| for the band family."""
    h = indicator_refinement_filter(band, k)
    gk = indicator_generator(band, k)
    gk1 = indicator_generator(band, k + 1)
    worst = 0.0
    for g in plan.points:
        le = gk.hat_exact(g) if plan.exact else None
        he = h.eval_exact(g) if plan.exact else None
        re = gk1.hat_exact(g) if plan.exact else None
        if le is not None and he is not None and re is not None:
            prod = he.mul(re)
            diff = le.add(-prod)
            if diff is not None:
                worst = max(worst, float(diff.abs2()) ** 0.5)
                continue
        worst = max(worst, abs(gk.hat(g) - h.eval(g) * gk1.hat(g)))
    return worst
