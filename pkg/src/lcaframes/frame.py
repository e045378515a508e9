"""Frame systems, analysis coefficients, and the core verification identities.

A frame system bundles one scaling generator per level and the wavelet
generators defined through the level filters.  The system elements are the
lattice translates of the base-level scaling generator plus the lattice
translates of every wavelet (equivalently, on the Fourier side, modulations).

Verification entry points:

* analysis / parseval_residual  -- coefficient energy against the norm;
* frame_operator                -- brute-force N x N operator on Z_N;
* fiber_identity_sides          -- coefficient sum vs dual-cell fiber integral;
* telescoping_residual          -- one-level energy split through the filters;
* energy_bounds_check           -- two-sided energy bound at a deep level.

Z and Z_N systems are verified on the translation side, torus systems on the
modulation side (their dual is discrete); R^s systems are matrix-condition
only and rejected here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bspline as bsp
from . import charfun as cf
from . import domains
from .chains import LatticeChain, chain_from_params
from .exceptions import (
    DomainParameterError,
    ProperSubsetError,
    SchemaError,
    UncertifiedLevelError,
    UnsupportedVerificationError,
)
from .filters import (
    UepMatrix,
    assemble_uep,
    dual_sampling_plan,
    filter_from_json,
    filter_to_json,
    verify_uep,
)
from .functions import DiscreteFunction
from .groups import CYCLIC, INTEGERS, TORUS, pairing_phase


@dataclass(frozen=True)
class Generator:
    label: str
    kind: str  # "scaling" | "wavelet"
    level: int  # lattice level indexing its translates / modulations
    m: int | None
    time: DiscreteFunction | None  # on G, when finitely supported there
    freq: DiscreteFunction | None  # on the dual, when finitely supported there


@dataclass(frozen=True)
class LevelFilters:
    k: int
    h: object
    gs: tuple


@dataclass(frozen=True)
class FrameSystem:
    chain: LatticeChain
    family: dict
    k0: int
    k1: int
    level_filters: tuple
    scalings: tuple  # one scaling generator per level k0..k1
    wavelets: tuple  # wavelet generators, ordered by (level, m)
    band: cf.OmegaChain | None = None

    def scaling(self, k: int) -> Generator:
        return self.scalings[k - self.k0]

    def filters_at(self, k: int) -> LevelFilters:
        return self.level_filters[k - self.k0]

    def system_generators(self) -> list:
        """The generators whose translates form the frame."""
        return [self.scaling(self.k0), *self.wavelets]

    def uep_matrix(self, k: int) -> UepMatrix:
        lf = self.filters_at(k)
        return assemble_uep(self.chain, k, lf.h, lf.gs)

    @property
    def wavelet_counts(self) -> dict:
        out = {}
        for w in self.wavelets:
            out[w.level] = out.get(w.level, 0) + 1
        return out


def _inverse_transform_cyclic(freq: DiscreteFunction, group) -> DiscreteFunction:
    """Inverse Fourier transform Z_N-dual -> Z_N (weight 1/N)."""
    n = group.modulus
    xg = np.outer(np.arange(n), np.arange(n)) % n
    w = np.exp(2j * np.pi * xg / n)
    vals = (w @ freq.array) / n
    return DiscreteFunction(group, 0, tuple(vals))


def build_bspline_system(chain: LatticeChain, order: int, k0=None, k1=None) -> FrameSystem:
    """Spline family: binomial lowpass plus order-matched wavelet masks."""
    k0 = chain.k0 if k0 is None else k0
    k1 = chain.k1 if k1 is None else k1
    if not chain.k0 <= k0 < k1 <= chain.k1:
        raise DomainParameterError(f"need k0 < k1 within {chain.k0}..{chain.k1}")
    discrete = chain.group.kind in (INTEGERS, CYCLIC)
    level_filters, scalings, wavelets = [], [], []
    for k in range(k0, k1 + 1):
        time = bsp.bspline_time(chain, k, order).time if discrete else None
        scalings.append(Generator(f"phi[{k}]", "scaling", k, None, time, None))
        if k < k1:
            bsp.check_refinement_splitting(chain, k)
            h = bsp.refinement_filter(chain, k, order)
            gs = tuple(bsp.wavelet_filters(chain, k, order))
            level_filters.append(LevelFilters(k, h, gs))
            for m, g in enumerate(gs, start=1):
                wt = bsp.wavelet_time(chain, k, g, order) if discrete else None
                wavelets.append(Generator(f"psi[{k}][{m}]", "wavelet", k, m, wt, None))
    family = {"type": "bspline", "order": order}
    return FrameSystem(chain, family, k0, k1, tuple(level_filters), tuple(scalings), tuple(wavelets))


def build_charfun_system(band: cf.OmegaChain, mode: str, k0=None, k1=None) -> FrameSystem:
    """Band family: indicator scaling functions with piecewise wavelet masks."""
    chain = band.chain
    k0 = chain.k0 if k0 is None else k0
    k1 = chain.k1 if k1 is None else k1
    if not chain.k0 <= k0 < k1 <= chain.k1:
        raise DomainParameterError(f"need k0 < k1 within {chain.k0}..{chain.k1}")
    if mode not in ("proper", "shannon"):
        raise DomainParameterError(f"unknown band mode {mode!r}")
    freq_side = chain.dual.is_discrete
    level_filters, scalings, wavelets = [], [], []
    for k in range(k0, k1 + 1):
        gen = cf.indicator_generator(band, k)
        freq = gen.freq_function() if freq_side else None
        time = (
            _inverse_transform_cyclic(freq, chain.group) if chain.group.kind == CYCLIC else None
        )
        scalings.append(Generator(f"phi[{k}]", "scaling", k, None, time, freq))
        if k < k1:
            if mode == "proper" and not band.is_proper(k):
                raise ProperSubsetError(
                    f"level {k} band set equals the dual cell; start the system higher"
                )
            h = cf.indicator_refinement_filter(band, k)
            gs = (
                tuple(cf.bandlimited_wavelet_filters(band, k))
                if mode == "proper"
                else tuple(cf.orthonormal_wavelet_filters(band, k))
            )
            level_filters.append(LevelFilters(k, h, gs))
    family = {"type": "charfun", "mode": mode, "band": band.label, "band_params": band.params}
    system = FrameSystem(
        chain, family, k0, k1, tuple(level_filters), tuple(scalings), tuple(wavelets), band
    )
    wavelets = _charfun_wavelets(system)
    return FrameSystem(
        chain, family, k0, k1, system.level_filters, system.scalings, tuple(wavelets), band
    )


def _charfun_wavelets(system: FrameSystem) -> list:
    """Wavelet generators as filter-times-scaling products on the dual."""
    chain = system.chain
    out = []
    if not chain.dual.is_discrete:
        for lf in system.level_filters:
            for m, _ in enumerate(lf.gs, start=1):
                out.append(Generator(f"psi[{lf.k}][{m}]", "wavelet", lf.k, m, None, None))
        return out
    for lf in system.level_filters:
        phi_next = system.scaling(lf.k + 1).freq
        for m, g in enumerate(lf.gs, start=1):
            vals = np.array(
                [g.eval(x) for x in range(phi_next.start, phi_next.stop)], dtype=complex
            )
            freq = DiscreteFunction(
                chain.dual, phi_next.start, tuple(vals * phi_next.array)
            )
            time = (
                _inverse_transform_cyclic(freq, chain.group)
                if chain.group.kind == CYCLIC
                else None
            )
            out.append(Generator(f"psi[{lf.k}][{m}]", "wavelet", lf.k, m, time, freq))
    return out


def _default_side(system: FrameSystem) -> str:
    kind = system.chain.group.kind
    if kind in (INTEGERS, CYCLIC):
        return "time"
    if kind == TORUS:
        return "freq"
    raise UnsupportedVerificationError(
        "Euclidean systems are certified through the matrix condition only"
    )


def _generator_function(system, gen: Generator, side: str) -> DiscreteFunction:
    fn = gen.time if side == "time" else gen.freq
    if fn is None:
        raise UnsupportedVerificationError(
            f"{gen.label} has no finite {side}-side representation on {system.chain.group.describe()}"
        )
    return fn


def _coefficients(system: FrameSystem, gen: Generator, f: DiscreteFunction, side: str):
    """(lambda, <f, translate/modulate g>) pairs with nonzero overlap."""
    chain = system.chain
    g = _generator_function(system, gen, side)
    lat = chain.level(gen.level).lattice
    if side == "time":
        if chain.group.kind == CYCLIC:
            return [(lam, f.inner(g.translate(lam))) for lam in lat.points()]
        step = int(lat.step[0])
        lo = -((g.stop - 1 - f.start) // step)  # ceil((f.start - g.stop + 1)/step)
        hi = (f.stop - 1 - g.start) // step
        out = []
        for j in range(int(lo), int(hi) + 1):
            lam = j * step
            out.append((lam, f.inner(g.translate(lam))))
        return out
    # modulation side: <F, M_lambda G> over a discrete dual
    out = []
    weight = float(chain.dual.point_mass)
    lo = max(f.start, g.start)
    hi = min(f.stop, g.stop)
    if hi <= lo:
        return [(lam, 0j) for lam in lat.points()]
    fa = f.array[lo - f.start : hi - f.start]
    ga = g.array[lo - g.start : hi - g.start]
    xs = np.arange(lo, hi)
    prod = fa * ga.conj()
    for lam in lat.points():
        phases = np.array([float(pairing_phase(chain.group, lam, int(x))) for x in xs])
        out.append((lam, weight * complex(np.sum(prod * np.exp(-2j * np.pi * (phases % 1.0))))))
    return out


def analysis(system: FrameSystem, f: DiscreteFunction, side: str | None = None) -> dict:
    """All nonzero frame coefficients of f, keyed (generator label, lattice point)."""
    side = side or _default_side(system)
    _check_side(system, f, side)
    out = {}
    for gen in system.system_generators():
        for lam, c in _coefficients(system, gen, f, side):
            if c != 0:
                out[(gen.label, lam)] = c
    return out


def _check_side(system, f, side):
    want = system.chain.group if side == "time" else system.chain.dual
    if f.group != want:
        raise UnsupportedVerificationError(
            f"test function lives on {f.group.describe()}, expected {want.describe()}"
        )


def coefficient_energy(system: FrameSystem, f: DiscreteFunction, side: str | None = None) -> float:
    side = side or _default_side(system)
    _check_side(system, f, side)
    total = 0.0
    for gen in system.system_generators():
        total += _energy(system, gen, f, side)
    return total


def _energy(system, gen, f, side) -> float:
    return sum(abs(c) ** 2 for _, c in _coefficients(system, gen, f, side))


def parseval_residual(system: FrameSystem, f: DiscreteFunction, side: str | None = None) -> float:
    """|sum of squared coefficients - ||f||^2| / ||f||^2."""
    n2 = f.norm2()
    if n2 == 0:
        raise DomainParameterError("zero test function")
    return abs(coefficient_energy(system, f, side) - n2) / n2


def frame_operator(system: FrameSystem) -> np.ndarray:
    """Sum of rank-one projectors of all system elements on a cyclic group."""
    chain = system.chain
    if chain.group.kind != CYCLIC:
        raise UnsupportedVerificationError("brute-force frame operator needs a finite group")
    n = chain.group.modulus
    S = np.zeros((n, n), dtype=complex)
    for gen in system.system_generators():
        g = _generator_function(system, gen, "time")
        for lam in chain.level(gen.level).lattice.points():
            v = g.translate(lam).array
            S += np.outer(v, v.conj())
    return S


def fiber_identity_sides(lat, v_domain, F: DiscreteFunction, Phi: DiscreteFunction):
    """Both sides of the coefficient-sum / fiber-integral identity on Z_N.

    Left: sum over lattice points of |<F, modulation Phi>|^2.  Right: dual-cell
    measure times the integral over the cell of the squared annihilator-fiber
    sums.  Both are finite sums evaluated independently.
    """
    from .lattices import cyclic_annihilator

    if lat.group.kind != CYCLIC:
        raise UnsupportedVerificationError("fiber identity oracle runs on Z_N")
    n = lat.group.modulus
    dual = F.group
    weight = float(dual.point_mass)
    lhs = 0.0
    for lam in lat.points():
        phases = np.array([float(lam) * g / n for g in range(n)])
        mod_phi = np.exp(2j * np.pi * (phases % 1.0)) * Phi.array
        lhs += abs(weight * complex(np.vdot(mod_phi, F.array))) ** 2
    ann = cyclic_annihilator(lat)
    mu_v = float(len(list(domains.iter_points(v_domain, dual))) * dual.point_mass)
    rhs = 0.0
    for gamma in domains.iter_points(v_domain, dual):
        fiber = sum(
            F.value_at((int(w) + gamma) % n) * Phi.value_at((int(w) + gamma) % n).conjugate()
            for w in ann.points()
        )
        rhs += weight * abs(fiber) ** 2
    rhs *= mu_v
    return lhs, rhs


def ensure_certified(system: FrameSystem, k: int, tol: float = 1e-9):
    """Re-verify the level-k matrix identity on a small plan before use."""
    plan = dual_sampling_plan(system.chain, k, grid=256, random=64)
    report = verify_uep(system.uep_matrix(k), plan)
    if report.residual > tol:
        raise UncertifiedLevelError(
            f"level {k} matrix identity fails (residual {report.residual:.3e})"
        )


def telescoping_residual(
    system: FrameSystem, k: int, f: DiscreteFunction, side: str | None = None
) -> float:
    """|energy at level k+1 - (energy at level k + wavelet energies at k)|."""
    if not system.k0 <= k < system.k1:
        raise DomainParameterError(f"need a level with a successor, got {k}")
    side = side or _default_side(system)
    _check_side(system, f, side)
    ensure_certified(system, k)
    lhs = _energy(system, system.scaling(k + 1), f, side)
    rhs = _energy(system, system.scaling(k), f, side)
    for w in system.wavelets:
        if w.level == k:
            rhs += _energy(system, w, f, side)
    return abs(lhs - rhs)


def energy_bounds_check(
    system: FrameSystem, f: DiscreteFunction, eps: float, K: int, side: str | None = None
) -> bool:
    """Two-sided scaling-energy bound at level K and at the top level."""
    side = side or _default_side(system)
    _check_side(system, f, side)
    n2 = f.norm2()
    for k in {K, system.k1}:
        e = _energy(system, system.scaling(k), f, side)
        if not ((1 - eps) * n2 - 1e-12 <= e <= (1 + eps) * n2 + 1e-12):
            return False
    return True


def system_to_json(system: FrameSystem, seed: int | None = None) -> dict:
    from .chains import chain_to_json

    data = {
        "format": "lcaframes/1",
        "chain": {"kind": system.chain.kind, "params": system.chain.params},
        "chain_detail": chain_to_json(system.chain),
        "family": system.family,
        "k0": system.k0,
        "k1": system.k1,
        "filters": [
            {"k": lf.k, "h": filter_to_json(lf.h), "g": [filter_to_json(g) for g in lf.gs]}
            for lf in system.level_filters
        ],
    }
    if seed is not None:
        data["seed"] = seed
    return data


def system_from_json(data: dict) -> FrameSystem:
    """Rebuild a system from its artifact; filters are taken from the file."""
    try:
        chain = chain_from_params(data["chain"]["kind"], data["chain"]["params"])
        family = data["family"]
        k0, k1 = data["k0"], data["k1"]
        level_filters = tuple(
            LevelFilters(
                entry["k"],
                filter_from_json(entry["h"], chain, entry["k"]),
                tuple(filter_from_json(g, chain, entry["k"]) for g in entry["g"]),
            )
            for entry in data["filters"]
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed system artifact: {exc}") from exc
    if family.get("type") == "bspline":
        order = family["order"]
        discrete = chain.group.kind in (INTEGERS, CYCLIC)
        scalings, wavelets = [], []
        for k in range(k0, k1 + 1):
            time = bsp.bspline_time(chain, k, order).time if discrete else None
            scalings.append(Generator(f"phi[{k}]", "scaling", k, None, time, None))
        for lf in level_filters:
            for m, g in enumerate(lf.gs, start=1):
                wt = bsp.wavelet_time(chain, lf.k, g, order) if discrete else None
                wavelets.append(Generator(f"psi[{lf.k}][{m}]", "wavelet", lf.k, m, wt, None))
        return FrameSystem(chain, family, k0, k1, level_filters, tuple(scalings), tuple(wavelets))
    if family.get("type") == "charfun":
        band = _band_from_params(family["band"], family["band_params"])
        freq_side = chain.dual.is_discrete
        scalings = []
        for k in range(k0, k1 + 1):
            gen = cf.indicator_generator(band, k)
            freq = gen.freq_function() if freq_side else None
            time = (
                _inverse_transform_cyclic(freq, chain.group)
                if chain.group.kind == CYCLIC
                else None
            )
            scalings.append(Generator(f"phi[{k}]", "scaling", k, None, time, freq))
        partial = FrameSystem(
            chain, family, k0, k1, level_filters, tuple(scalings), (), band
        )
        wavelets = _charfun_wavelets(partial)
        return FrameSystem(
            chain, family, k0, k1, level_filters, tuple(scalings), tuple(wavelets), band
        )
    raise SchemaError(f"unknown family {family!r}")


def _band_from_params(label: str, params: dict) -> cf.OmegaChain:
    if label == "cyclic":
        return cf.band_chain_cyclic(params["M"], params["L"])
    if label == "torus":
        return cf.band_chain_torus(params["m_factors"], params["L"])
    if label == "boxes":
        return cf.band_chain_boxes(params["m_table"], [[Fraction(x) for x in r] for r in params["L"]])
    if label == "balls":
        return cf.band_chain_balls(params["m_table"], [Fraction(x) for x in params["L"]])
    if label == "full":
        return cf.full_band_chain(chain_from_params(params["kind"], params["chain_params"]))
    raise SchemaError(f"unknown band construction {label!r}")


def coefficients_to_json(coeffs: dict) -> dict:
    """Analysis table as JSON: "label @ lattice-point" -> [re, im]."""
    return {f"{label} @ {lam}": [c.real, c.imag] for (label, lam), c in coeffs.items()}


def write_matrix_csv(matrix: np.ndarray, path):
    """Frame-operator export: row, col, re, im with 17 significant digits."""
    lines = ["row,col,re,im"]
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            z = matrix[i, j]
            lines.append(f"{i},{j},{z.real:.17g},{z.imag:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
