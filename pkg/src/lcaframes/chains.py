"""Nested lattice chains with fundamental domains and coset data.

A chain fixes, per level k in a finite index set {k0..k1}: the lattice
Lambda_k in G with fundamental domain Q_k, its annihilator in the dual group
with fundamental domain V_k, and for consecutive levels the index d_k, the
dual coset representatives nu_{k,l} (nu_{k,1} = 0) and, when d_k = 2, the
group-side splitter eta_k with Q_k = Q_{k+1} u (eta_k + Q_{k+1}).

Four constructions are shipped: the dyadic chain on Z, the dyadic chain on
Z_{2^M}, product chains on T, and diagonally scaled chains on R^s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import domains
from .domains import CosetUnion, HalfOpenBox, IntegerInterval, interval
from .exceptions import DomainParameterError, IndexRangeError
from .groups import (
    GroupSpec,
    cyclic_group,
    dual_group,
    euclidean_group,
    integer_group,
    torus_group,
)
from .lattices import ScaledLattice


@dataclass(frozen=True)
class ChainLevel:
    k: int
    lattice: ScaledLattice  # Lambda_k in G
    annihilator: ScaledLattice  # its annihilator in the dual
    domain_q: object  # fundamental domain of Lambda_k in G
    domain_v: object  # fundamental domain of the annihilator in the dual
    index: int | None = None  # d_k (None at the top level)
    cosets: tuple | None = None  # nu_{k,l}, l = 1..d_k, cosets[0] = 0
    splitter: object | None = None  # eta_k when d_k = 2


@dataclass(frozen=True)
class LatticeChain:
    group: GroupSpec
    dual: GroupSpec
    kind: str
    params: dict
    levels: tuple

    @property
    def k0(self) -> int:
        return self.levels[0].k

    @property
    def k1(self) -> int:
        return self.levels[-1].k

    def level(self, k: int) -> ChainLevel:
        if not self.k0 <= k <= self.k1:
            raise IndexRangeError(f"level {k} outside index set {self.k0}..{self.k1}")
        return self.levels[k - self.k0]

    def index(self, k: int) -> int:
        d = self.level(k).index
        if d is None:
            raise IndexRangeError(f"level {k} has no successor in {self.k0}..{self.k1}")
        return d

    def cosets(self, k: int) -> tuple:
        self.index(k)
        return self.level(k).cosets

    def splitter(self, k: int):
        return self.level(k).splitter

    def density(self, k: int) -> Fraction:
        """s(Lambda_k) = Haar measure of Q_k."""
        return domains.measure(self.level(k).domain_q, self.group)

    def dual_cell_measure(self, k: int) -> Fraction:
        """Haar measure of V_k in the dual group."""
        return domains.measure(self.level(k).domain_v, self.dual)


def integer_chain(M: int) -> LatticeChain:
    """Dyadic chain on Z: Lambda_k = 2^{M-k} Z for k = 0..M."""
    if not isinstance(M, int) or M < 1:
        raise DomainParameterError(f"depth M must be a positive integer, got {M}")
    G, Gd = integer_group(), torus_group()
    levels = []
    for k in range(M + 1):
        step = 2 ** (M - k)
        lat = ScaledLattice(G, (Fraction(step),))
        ann = ScaledLattice(Gd, (Fraction(1, step),), (step,))
        q = IntegerInterval(0, step - 1)
        v = interval(0, Fraction(1, step))
        if k < M:
            d, eta, nu = 2, step // 2, (0, Fraction(1, step))
        else:
            d = eta = nu = None
        levels.append(ChainLevel(k, lat, ann, q, v, d, nu, eta))
    return LatticeChain(G, Gd, "integer", {"M": M}, tuple(levels))


def cyclic_chain(M: int) -> LatticeChain:
    """Dyadic chain on Z_{2^M}: Lambda_k = 2^{M-k} Z_{2^k} for k = 0..M."""
    if not isinstance(M, int) or M < 1:
        raise DomainParameterError(f"depth M must be a positive integer, got {M}")
    n = 2**M
    G = cyclic_group(n)
    Gd = dual_group(G)
    levels = []
    for k in range(M + 1):
        step = 2 ** (M - k)
        lat = ScaledLattice(G, (Fraction(step),), (2**k,))
        ann = ScaledLattice(Gd, (Fraction(2**k),), (step,))
        q = IntegerInterval(0, step - 1)
        v = IntegerInterval(0, 2**k - 1)
        if k < M:
            d, eta, nu = 2, step // 2, (0, 2**k)
        else:
            d = eta = nu = None
        levels.append(ChainLevel(k, lat, ann, q, v, d, nu, eta))
    return LatticeChain(G, Gd, "cyclic", {"M": M}, tuple(levels))


def torus_chain(m_factors: list[int]) -> LatticeChain:
    """Product chain on T: Lambda_k = (1/N_k) Z_{N_k}, N_k = m_0 * ... * m_k.

    m_0 must be even (so the symmetric dual cells have integer endpoints) and
    every factor at least 2.
    """
    if not m_factors or any(not isinstance(m, int) or m < 2 for m in m_factors):
        raise DomainParameterError(f"all chain factors must be integers >= 2, got {m_factors}")
    if m_factors[0] % 2:
        raise DomainParameterError(f"the first chain factor must be even, got {m_factors[0]}")
    G, Gd = torus_group(), integer_group()
    levels = []
    n = 1
    sizes = []
    for m in m_factors:
        n *= m
        sizes.append(n)
    for k, nk in enumerate(sizes):
        lat = ScaledLattice(G, (Fraction(1, nk),), (nk,))
        ann = ScaledLattice(Gd, (Fraction(nk),))
        q = interval(0, Fraction(1, nk))
        v = IntegerInterval(-nk // 2, nk // 2 - 1)
        if k + 1 < len(sizes):
            d = m_factors[k + 1]
            nu = tuple(l * nk for l in range(d))
            eta = Fraction(1, sizes[k + 1]) if d == 2 else None
        else:
            d = nu = eta = None
        levels.append(ChainLevel(k, lat, ann, q, v, d, nu, eta))
    return LatticeChain(G, Gd, "torus", {"m_factors": list(m_factors)}, tuple(levels))


def euclidean_chain(m_table: list[list[int]]) -> LatticeChain:
    """Diagonal chain on R^s: Lambda_k = prod_r (1/N_{k,r}) Z.

    m_table[r] is the factor sequence along axis r; all axes share one depth
    and every factor is at least 2.
    """
    if not m_table or any(not row for row in m_table):
        raise DomainParameterError("factor table must be non-empty per axis")
    depth = len(m_table[0])
    if any(len(row) != depth for row in m_table):
        raise DomainParameterError("all axes need the same number of factors")
    if any(not isinstance(m, int) or m < 2 for row in m_table for m in row):
        raise DomainParameterError(f"all chain factors must be integers >= 2, got {m_table}")
    s = len(m_table)
    G = euclidean_group(s)
    Gd = dual_group(G)
    sizes = []  # sizes[k][r] = N_{k,r}
    acc = [1] * s
    for k in range(depth):
        acc = [acc[r] * m_table[r][k] for r in range(s)]
        sizes.append(tuple(acc))
    levels = []
    for k in range(depth):
        nk = sizes[k]
        lat = ScaledLattice(G, tuple(Fraction(1, n) for n in nk))
        ann = ScaledLattice(Gd, tuple(Fraction(n) for n in nk))
        q = HalfOpenBox(tuple(Fraction(0) for _ in nk), tuple(Fraction(1, n) for n in nk))
        v = HalfOpenBox(
            tuple(Fraction(-n, 2) for n in nk),
            tuple(Fraction(n, 2) for n in nk),
        )
        if k + 1 < depth:
            ms = [m_table[r][k + 1] for r in range(s)]
            d = 1
            for m in ms:
                d *= m
            nu = _digit_products(nk, ms)
            eta = None
            if d == 2:  # only possible for s = 1
                eta = (Fraction(1, sizes[k + 1][0]),)
        else:
            d = nu = eta = None
        levels.append(ChainLevel(k, lat, ann, q, v, d, nu, eta))
    return LatticeChain(G, Gd, "euclidean", {"m_table": [list(r) for r in m_table]}, tuple(levels))


def _digit_products(scales, counts) -> tuple:
    """Coset representatives prod_r scales[r]*{0..counts[r]-1}, zero first."""
    out = [()]
    for n, m in zip(scales, counts):
        out = [p + (int(n) * j,) for p in out for j in range(m)]
    return tuple(out)


def refined_dual_domain(chain: LatticeChain, k: int) -> CosetUnion:
    """The coset-union fundamental domain for the level-(k+1) annihilator.

    Union of nu_{k,l} + V_k over l; pairwise disjoint with total measure
    d_k * measure(V_k).
    """
    lvl = chain.level(k)
    chain.level(k + 1)
    if lvl.index is None:
        raise IndexRangeError(f"no successor level for {k}")
    return CosetUnion(lvl.domain_v, lvl.cosets)


def lattice_points(chain: LatticeChain, k: int, window=None) -> list:
    """All Lambda_k points meeting the window, exact and sorted.

    window may be None for finite lattices (full enumeration).
    """
    return chain.level(k).lattice.points(window)


def chain_to_json(chain: LatticeChain) -> dict:
    group = {"variant": chain.group.kind}
    if chain.group.kind == "cyclic":
        group["params"] = {"modulus": chain.group.modulus}
    elif chain.group.kind == "euclidean":
        group["params"] = {"dimension": chain.group.dimension}
    else:
        group["params"] = {}
    levels = []
    for lvl in chain.levels:
        entry = {
            "k": lvl.k,
            "q": domains.domain_to_json(lvl.domain_q),
            "v": domains.domain_to_json(lvl.domain_v),
        }
        if lvl.index is not None:
            entry["d"] = lvl.index
            entry["nu"] = [domains._point_json(x) for x in lvl.cosets]
            if lvl.splitter is not None:
                entry["eta"] = domains._point_json(lvl.splitter)
        levels.append(entry)
    return {"group": group, "kind": chain.kind, "params": chain.params, "levels": levels}


def chain_from_params(kind: str, params: dict) -> LatticeChain:
    if kind == "integer":
        return integer_chain(params["M"])
    if kind == "cyclic":
        return cyclic_chain(params["M"])
    if kind == "torus":
        return torus_chain(params["m_factors"])
    if kind == "euclidean":
        return euclidean_chain(params["m_table"])
    raise DomainParameterError(f"unknown chain kind {kind!r}")
