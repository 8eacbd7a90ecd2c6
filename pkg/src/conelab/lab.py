"""Experiment harness: weighted-inequality ratios, operator-norm lower bounds,
Rademacher averaging checks, direction-family sweeps and the invariant gate.

Every trial draws its randomness from ``SeedSequence(seed, spawn_key=(trial,
attempt))``, so reports do not depend on evaluation order and are
bit-identical for a repeated configuration.
"""

import itertools
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import spectral_grid as grid
from .directions import (
    DirectionSet,
    equispaced,
    lacunary_polygon,
    localization_segments,
    make_lacunary_order1,
    make_lacunary_orderK,
    perp,
    sector_indices,
    validate_lacunary,
)
from .maximal import (
    lemma1_spec,
    lemma2_spec,
    remark1_spec,
    run_spec,
    theorem2_spec,
)
from .multipliers import (
    ConeSymbol,
    HalfspaceSymbol,
    HilbertSymbol,
    PolygonSymbol,
    SectorSymbol,
    angular_decompose,
    axis_part,
    build_phi,
)
from .validation import check_field, check_grid_size, check_lambda

FIELD_KINDS = ("gaussian_random", "random_modes", "wave_packets")
WEIGHT_KINDS = ("uniform_random", "peaked", "constant")
INEQUALITIES = ("lemma1", "lemma2_forward", "lemma2_reverse", "theorem2", "remark1_2d")
FAMILIES = ("order1", "orderK", "polygon", "equispaced")

RADII_NOTE = "sup over r > 0 replaced by dyadic radii {0, 1, 2, 4, ..., n/2}"
MAX_REDRAWS = 100


@dataclass(frozen=True)
class TrialConfig:
    """Everything a randomized experiment depends on.

    ``family`` picks the direction set: ``order1`` is
    ``make_lacunary_order1(lam, N)``, ``orderK`` is
    ``make_lacunary_orderK(lam, N, K)`` (``N`` is the branching),
    ``polygon`` is ``lacunary_polygon(lam, N)`` and ``equispaced`` is
    ``equispaced(N)``. ``rho=None`` means ``n / 4``.
    """

    d: int = 2
    n: int = 32
    seed: int = 0
    trials: int = 10
    field_kind: str = "gaussian_random"
    axis_free: bool = False
    modes: int = 8
    weight_kind: str = "uniform_random"
    peak_site: tuple | None = None
    peak_height: float = 100.0
    inequality: str = "theorem2"
    lam: float = 0.5
    K: int = 1
    N: int = 6
    family: str = "order1"
    rho: float | None = None

    def __post_init__(self):
        check_grid_size(self.n)
        if self.d not in (1, 2, 3):
            raise ValueError(f"d must be 1, 2 or 3, got {self.d}")
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        check_lambda(self.lam)
        for value, allowed, what in (
            (self.field_kind, FIELD_KINDS, "field generator"),
            (self.weight_kind, WEIGHT_KINDS, "weight generator"),
            (self.inequality, INEQUALITIES, "inequality"),
            (self.family, FAMILIES, "direction family"),
        ):
            if value not in allowed:
                raise ValueError(f"unknown {what} {value!r}; expected one of {', '.join(allowed)}")
        if self.N < 1 or self.K < 0 or self.modes < 1:
            raise ValueError("N and modes must be >= 1, K >= 0")

    @property
    def shape(self):
        return (self.n,) * self.d

    @property
    def dilation(self):
        return self.n / 4 if self.rho is None else float(self.rho)

    def directions(self):
        return family_set(self.family, self.N, self.lam, self.K)

    def to_dict(self):
        out = asdict(self)
        if out["peak_site"] is not None:
            out["peak_site"] = list(out["peak_site"])
        return out


def family_set(family, N, lam=0.5, K=1):
    if family == "order1":
        return make_lacunary_order1(lam, N)
    if family == "orderK":
        return make_lacunary_orderK(lam, N, K)
    if family == "polygon":
        return lacunary_polygon(lam, N)
    if family == "equispaced":
        return equispaced(N)
    raise ValueError(f"unknown direction family {family!r}")


def trial_rng(seed, index, attempt=0, stream=()):
    ss = np.random.SeedSequence(seed, spawn_key=tuple(stream) + (index, attempt))
    return np.random.default_rng(ss), int(ss.generate_state(1)[0])


@dataclass
class RatioReport:
    """Per-trial ``(seed, lhs, rhs, ratio)`` records and their summary."""

    trials: list
    discarded: int
    config: dict
    provenance: str

    @property
    def ratios(self):
        return np.array([t["ratio"] for t in self.trials])

    @property
    def max_ratio(self):
        return float(self.ratios.max())

    @property
    def median_ratio(self):
        return float(np.median(self.ratios))

    def to_dict(self):
        return {
            "config": self.config,
            "provenance": self.provenance,
            "discarded": self.discarded,
            "max_ratio": self.max_ratio,
            "median_ratio": self.median_ratio,
            "trials": self.trials,
        }


# -- generators ---------------------------------------------------------------


def _axis_mask(shape):
    xi = grid.frequencies(shape[0], len(shape))
    if len(shape) == 1:
        return xi[..., 0] == 0
    return (xi[..., 0] == 0) & (xi[..., 1] == 0)


def random_field(config, rng, dirs=None):
    kind = config.field_kind
    shape = config.shape
    if kind == "gaussian_random":
        f = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        if config.axis_free:
            F = grid.forward(f)
            F[_axis_mask(shape)] = 0
            f = grid.inverse(F)
        return f
    if kind == "random_modes":
        F = np.zeros(shape, dtype=complex)
        banned = _axis_mask(shape) if config.axis_free else np.zeros(shape, dtype=bool)
        placed = 0
        while placed < config.modes:
            slot = tuple(rng.integers(0, config.n, size=config.d))
            if banned[slot]:
                continue
            F[slot] += rng.standard_normal() + 1j * rng.standard_normal()
            placed += 1
        return grid.inverse(F)
    if kind == "wave_packets":
        if dirs is None:
            dirs = config.directions()
        return grid.inverse(wave_packet_spectrum(dirs, config.n, config.dilation, rng))
    raise ValueError(f"unknown field generator {kind!r}")


def random_weight(config, rng):
    shape = config.shape
    kind = config.weight_kind
    if kind == "constant":
        return np.ones(shape)
    if kind == "uniform_random":
        return rng.random(shape)
    if kind == "peaked":
        w = np.full(shape, 1e-2)
        site = config.peak_site
        if site is None:
            site = tuple(int(s) for s in rng.integers(0, config.n, size=config.d))
        w[tuple(site)] += config.peak_height
        return w
    raise ValueError(f"unknown weight generator {kind!r}")


def _bump(u):
    out = np.zeros_like(u)
    inside = u < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


def _half_sides(dirs, rho):
    # distance from the tangent point of each side to its nearer vertex
    ang = dirs.angles
    if len(ang) == 1:
        return np.array([rho])
    after = np.mod(np.roll(ang, 1) - ang, 2 * np.pi)
    before = np.mod(ang - np.roll(ang, -1), 2 * np.pi)
    gap = np.minimum(after, before)
    return rho * np.tan(np.minimum(gap / 2, 1.2))


def _match(dirs, envelope):
    idx = []
    for w in dirs.members:
        dist = np.linalg.norm(envelope.members - w, axis=1)
        k = int(np.argmin(dist))
        if dist[k] > 1e-9:
            raise ValueError("direction set is not contained in the envelope set")
        idx.append(k)
    return idx


def wave_packet_spectrum(dirs, n, rho, rng, envelope=None):
    """Spectrum of a random sum of packets sitting on sides of ``rho * P``.

    Each packet is a smooth compactly supported bump centred on the tangent
    point ``rho * w`` of a side, with coefficient ``+1`` on the inner half
    and ``-odd`` on the outer half, all focused at one random site. The
    multiplier keeps only the inner halves, which add up coherently at the
    focus while the input stays spread out. The lateral radius is capped at
    ``sqrt(n) / 2`` (spatial width of order ``n**-1/2``) and at 0.8 of the
    half-side of ``envelope``; a packet therefore sees a single half-plane
    for every polygon between ``dirs`` and ``envelope``.
    """
    if dirs.dim != 2:
        raise ValueError("wave packets are built for planar polygons")
    envelope = dirs if envelope is None else envelope
    half = _half_sides(envelope, rho)[_match(dirs, envelope)]
    cap = math.sqrt(n) / 2
    normal_max = n / 16
    if rho + normal_max >= n / 2:
        raise ValueError("rho leaves no room for packets below the Nyquist frequency")
    N = len(dirs)
    count = int(rng.integers(1, N + 1))
    chosen = np.sort(rng.choice(N, size=count, replace=False))
    r_normal = float(math.exp(rng.uniform(math.log(2.0), math.log(normal_max))))
    odd = float(rng.uniform(0.25, 1.0))
    focus = rng.random(2)
    F = np.zeros((n, n), dtype=complex)
    for k in chosen:
        w = dirs.members[k]
        wt = np.array([-w[1], w[0]])
        r_lat = min(cap, 0.8 * half[k])
        if r_lat < 1.0:
            continue
        reach = int(math.ceil(max(r_normal, r_lat))) + 1
        c = np.rint(rho * w).astype(int)
        ax = [np.arange(c[j] - reach, c[j] + reach + 1) for j in range(2)]
        X1, X2 = np.meshgrid(*ax, indexing="ij")
        xi = np.stack([X1, X2], axis=-1).astype(float)
        rel = xi - rho * w
        eta = rel @ w
        u = np.hypot(eta / r_normal, (rel @ wt) / r_lat)
        coef = _bump(u) * np.where(xi @ w <= rho, 1.0, -odd)
        coef = coef * np.exp(-2j * np.pi * (xi @ focus))
        np.add.at(F, (X1 % n, X2 % n), coef)
    return F


# -- weighted inequalities ----------------------------------------------------


def _rhs_spec(config, dirs):
    ineq = config.inequality
    if ineq == "lemma1":
        return lemma1_spec(1)
    if ineq in ("lemma2_forward", "lemma2_reverse"):
        return lemma2_spec(dirs)
    if ineq == "theorem2":
        return theorem2_spec(dirs, max(config.K, 1))
    return remark1_spec(dirs, max(config.K, 1))


def _check_dims(config, dirs):
    ineq = config.inequality
    need = {"theorem2": (3,), "remark1_2d": (2,), "lemma2_forward": (2, 3), "lemma2_reverse": (2, 3)}
    if ineq in need and config.d not in need[ineq]:
        raise ValueError(f"{ineq} needs d in {need[ineq]}, got d = {config.d}")
    if ineq != "lemma1" and dirs.dim != 2:
        raise ValueError(f"{ineq} needs a planar direction set")


def _sides(config, dirs, f, w, Mw):
    ineq = config.inequality
    if ineq == "lemma1":
        e1 = np.zeros(config.d)
        e1[0] = 1.0
        Tf = grid.apply_symbol(f, HilbertSymbol(e1))
        return grid.weighted_energy(Tf, w), grid.weighted_energy(f, Mw)
    if ineq == "theorem2":
        return grid.weighted_energy(grid.apply_symbol(f, ConeSymbol(dirs)), w), grid.weighted_energy(f, Mw)
    if ineq == "remark1_2d":
        Rf = grid.apply_symbol(f, PolygonSymbol(dirs, config.dilation))
        return grid.weighted_energy(Rf, w), grid.weighted_energy(f, Mw)
    parts = angular_decompose(dirs, f)
    if ineq == "lemma2_forward":
        return sum(grid.weighted_energy(g, w) for g in parts), grid.weighted_energy(f, Mw)
    return grid.weighted_energy(f, w), sum(grid.weighted_energy(g, Mw) for g in parts)


def eval_inequality(config, dirs=None):
    """Measure ``LHS / RHS`` of the configured weighted inequality over random trials.

    Only reports; nothing is asserted. A trial with ``RHS == 0`` is redrawn
    with the next attempt index and counted in ``discarded``.
    """
    dirs = config.directions() if dirs is None else dirs
    _check_dims(config, dirs)
    if config.inequality == "lemma2_reverse" and not config.axis_free:
        config = replace(config, axis_free=True)
    spec = _rhs_spec(config, dirs)
    records, discarded = [], 0
    for i in range(config.trials):
        for attempt in range(MAX_REDRAWS):
            rng, sub = trial_rng(config.seed, i, attempt)
            f = random_field(config, rng, dirs)
            w = random_weight(config, rng)
            if config.inequality == "lemma2_reverse" and not np.any(grid.forward(f)[~_axis_mask(config.shape)]):
                discarded += 1
                continue
            lhs, rhs = _sides(config, dirs, f, w, run_spec(w, spec))
            if rhs > 0:
                break
            discarded += 1
        else:
            raise RuntimeError(f"trial {i}: {MAX_REDRAWS} degenerate draws in a row")
        records.append({"trial": i, "seed": sub, "lhs": lhs, "rhs": rhs, "ratio": lhs / rhs})
    provenance = f"{spec.name}: {spec.describe()}; {RADII_NOTE}"
    return RatioReport(records, discarded, config.to_dict(), provenance)


# -- Rademacher averaging -----------------------------------------------------


@dataclass
class RademacherReport:
    size: int
    signs: int
    energy_error: float
    reconstruction_error: float
    tol: float = 1e-10

    @property
    def passed(self):
        return self.energy_error <= self.tol and self.reconstruction_error <= self.tol

    def to_dict(self):
        return {
            "size": self.size,
            "signs": self.signs,
            "energy_error": self.energy_error,
            "reconstruction_error": self.reconstruction_error,
            "passed": self.passed,
        }


def rademacher_check(dirs, field, tol=1e-10):
    """Average over every sign vector ``e`` of the sector pieces ``S_w f``.

    Checks ``mean_e ||sum e_w S_w f||^2 == sum ||S_w f||^2`` and
    ``mean_e sum_w e_w S_w (sum_v e_v S_v f) == f - axis_part(f)``, both as
    relative errors.
    """
    if len(dirs) > 12:
        raise ValueError(f"{len(dirs)} directions is too many for exhaustive sign enumeration (max 12)")
    f = check_field(field)
    parts = np.array(angular_decompose(dirs, f))
    target = sum(grid.lp_norm(g, 2) ** 2 for g in parts)
    energy = 0.0
    recon = np.zeros_like(f)
    count = 0
    for eps in itertools.product((1.0, -1.0), repeat=len(dirs)):
        e = np.array(eps)
        g = np.tensordot(e, parts, axes=1)
        energy += grid.lp_norm(g, 2) ** 2
        recon += np.tensordot(e, np.array(angular_decompose(dirs, g)), axes=1)
        count += 1
    energy /= count
    recon /= count
    free = f - axis_part(f)
    scale = max(grid.lp_norm(free, 2), 1e-300)
    return RademacherReport(
        size=len(dirs),
        signs=count,
        energy_error=abs(energy - target) / max(target, 1e-300),
        reconstruction_error=grid.lp_norm(recon - free, 2) / scale,
        tol=tol,
    )


# -- operator norm lower bounds -------------------------------------------------


@dataclass(eq=False)
class TestSpectrum:
    """A test function stored by its nonzero Fourier coefficients."""

    __test__ = False

    shape: tuple
    index: np.ndarray
    values: np.ndarray
    _norms: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dense(cls, F):
        flat = np.flatnonzero(F)
        return cls(F.shape, flat, F.ravel()[flat])

    def dense(self):
        F = np.zeros(int(np.prod(self.shape)), dtype=complex)
        F[self.index] = self.values
        return F.reshape(self.shape)

    def input_norm(self, p):
        # independent of the symbol, so sweeps reuse it across sizes
        if p not in self._norms:
            self._norms[p] = grid.lp_norm(grid.inverse(self.dense()), p)
        return self._norms[p]


def trial_spectra(config, dirs=None, envelope=None, stream=()):
    """The ``config.trials`` test spectra used by :func:`norm_lower_bound`."""
    out = []
    for i in range(config.trials):
        rng, _ = trial_rng(config.seed, i, stream=stream)
        if config.field_kind == "wave_packets":
            d = config.directions() if dirs is None else dirs
            F = wave_packet_spectrum(d, config.n, config.dilation, rng, envelope)
        else:
            F = grid.forward(random_field(config, rng, dirs))
        out.append(TestSpectrum.from_dense(F))
    return out


def ratios_over(symbol, p, spectra, shape):
    values = grid.symbol_values(symbol, shape)
    out = []
    for spec in spectra:
        den = spec.input_norm(p)
        if den == 0:
            out.append(0.0)
            continue
        F = spec.dense()
        out.append(grid.lp_norm(grid.inverse(values * F), p) / den)
    return out


def norm_lower_bound(symbol, p, config, dirs=None, spectra=None):
    """``max ||apply_symbol(f)||_p / ||f||_p`` over the configured test functions.

    A lower bound for the discrete operator norm; never the norm itself.
    """
    if not 1 < p < math.inf:
        raise ValueError("p must lie in (1, inf)")
    if spectra is None:
        spectra = trial_spectra(config, dirs)
    return float(max(ratios_over(symbol, p, spectra, config.shape)))


# -- sweeps -------------------------------------------------------------------

SWEEP_COLUMNS = ("kind", "N", "p", "grid", "seed", "norm_lb", "max_ratio", "median_ratio", "trials", "discarded")


def sweep_family(kind, lam=0.5):
    if kind == "lacunary":
        return lambda N: lacunary_polygon(lam, N)
    if kind == "equispaced":
        return equispaced
    raise ValueError(f"unknown sweep kind {kind!r}; expected lacunary or equispaced")


def _nested(sets):
    try:
        for a in sets:
            _match(a, sets[-1])
    except ValueError:
        return False
    return True


def sweep_directions(kind, sizes, p, config, lam=0.5, ratio_grid=64, ratio_trials=16):
    """Norm lower bounds and weighted ratios of the polygon multipliers ``R_Omega``.

    For each ``N`` the lower bound is taken over the packets drawn for every
    size up to ``N``: when the family is nested, packets are fitted to the
    sides of the largest set and so stay admissible test functions for every
    smaller polygon, which makes the column a running maximum over a growing
    trial set. The weighted ratio uses the ``remark1_2d`` inequality on a
    ``ratio_grid`` lattice with ``ratio_trials`` random (f, w) pairs.
    """
    sizes = list(sizes)
    if sizes != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError("sizes must be strictly ascending")
    if config.d != 2:
        raise ValueError("direction sweeps run on planar polygons (d = 2)")
    make = sweep_family(kind, lam)
    sets = [make(N) for N in sizes]
    envelope = sets[-1] if _nested(sets) else None
    rows, pool = [], []
    for N, dirs in zip(sizes, sets):
        cfg = replace(config, N=N, field_kind="wave_packets")
        pool += trial_spectra(cfg, dirs, envelope if envelope is not None else dirs, stream=(N,))
        lb = norm_lower_bound(PolygonSymbol(dirs, cfg.dilation), p, cfg, spectra=pool)
        wcfg = replace(
            config,
            n=ratio_grid,
            trials=ratio_trials,
            N=N,
            rho=None,
            field_kind="gaussian_random",
            inequality="remark1_2d",
        )
        report = eval_inequality(wcfg, dirs)
        rows.append(
            {
                "kind": kind,
                "N": N,
                "p": float(p),
                "grid": config.n,
                "seed": config.seed,
                "norm_lb": lb,
                "max_ratio": report.max_ratio,
                "median_ratio": report.median_ratio,
                "trials": config.trials,
                "discarded": report.discarded,
            }
        )
    return rows


def rows_to_csv(rows):
    lines = [",".join(SWEEP_COLUMNS)]
    for r in rows:
        cells = []
        for c in SWEEP_COLUMNS:
            v = r[c]
            cells.append(format(v, ".17g") if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


# -- invariant gate -----------------------------------------------------------


@dataclass
class SuiteReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self):
        return all(e["passed"] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e["passed"]]

    def add(self, ident, passed, n, seed, detail=""):
        entry = {"id": ident, "passed": bool(passed), "n": n, "seed": seed}
        if not passed:
            entry["detail"] = detail
        self.entries.append(entry)

    def to_dict(self):
        return {"passed": self.passed, "entries": self.entries}


def cyclic_gaps(dirs):
    """Angles between cyclically consecutive members, from their cross and dot products."""
    a = dirs.members
    b = np.roll(a, -1, axis=0)
    return np.arctan2(a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0], np.sum(a * b, axis=1))


def _rel(a, b):
    return float(np.linalg.norm(np.ravel(a - b)) / max(np.linalg.norm(np.ravel(b)), 1e-300))


def invariant_suite(gridsizes=(16,), seeds=(0,), overrides=None):
    """Run the module invariants at each grid size and seed.

    ``overrides`` maps names to replacements for fault injection; the
    recognised key is ``"halfspace"`` (a class taking ``omega``).
    """
    from .maximal import max_axis, max_directional, max_set

    overrides = overrides or {}
    Halfspace = overrides.get("halfspace", HalfspaceSymbol)
    report = SuiteReport()
    for n in gridsizes:
        check_grid_size(n)
        for seed in seeds:
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(n,)))

            def field2(d=2):
                return rng.standard_normal((n,) * d) + 1j * rng.standard_normal((n,) * d)

            # directions
            for name, dirs in (
                ("order1", make_lacunary_order1(0.5, 5)),
                ("orderK", make_lacunary_orderK(0.5, 2, 2)),
                ("polygon", lacunary_polygon(0.5, 12)),
            ):
                ang = dirs.angles
                ok = np.all(np.abs(np.linalg.norm(dirs.members, axis=1) - 1) <= 1e-12) and np.all(np.diff(ang) < 0)
                report.add(f"directions.clockwise[{name}]", ok, n, seed, "members not unit or not clockwise")
            dirs = make_lacunary_order1(0.5, 5)
            xi = grid.frequencies(n, 2)
            idx = sector_indices(dirs, xi[..., 0], xi[..., 1])
            origin = (xi[..., 0] == 0) & (xi[..., 1] == 0)
            hits = sum((idx == k).astype(int) for k in range(len(dirs)))
            report.add(
                "directions.sector_partition",
                np.all(hits[~origin] == 1) and np.all(idx[origin] == -1),
                n, seed, "a nonzero frequency lies in zero or several sectors",
            )
            for lam in (0.5, 1 / math.sqrt(2)):
                for b in (2, 3):
                    for K in range(4):
                        ok = bool(validate_lacunary(make_lacunary_orderK(lam, b, K), lam, K))
                        report.add(f"directions.generator_accepted[lam={lam:.6g},b={b},K={K}]", ok, n, seed, "rejected")
            report.add(
                "directions.perp_isometry",
                np.array_equal(np.sort(cyclic_gaps(perp(dirs))), np.sort(cyclic_gaps(dirs))),
                n, seed, "angular gaps changed under perp",
            )
            segs = localization_segments(dirs, 0.5, 3)
            flat = np.vstack([s.members for s in segs])
            same = len(flat) == len(dirs) and all(any(np.array_equal(r, m) for r in flat) for m in dirs.members)
            report.add("directions.segments_partition", same, n, seed, "segments do not partition the set")

            # spectral grid
            for d in (1, 2, 3):
                f = rng.standard_normal((n,) * d) + 1j * rng.standard_normal((n,) * d)
                F = grid.forward(f)
                report.add(f"grid.roundtrip[d={d}]", _rel(grid.inverse(F), f) <= 1e-10, n, seed, "round trip error")
                a, b = grid.lp_norm(f, 2), float(np.linalg.norm(F.ravel()))
                report.add(f"grid.plancherel[d={d}]", abs(a - b) <= 1e-12 * b, n, seed, f"{a} vs {b}")
            f, g = field2(), field2()
            s1 = Halfspace(np.array([0.6, 0.8]))
            s2 = PolygonSymbol(dirs, n / 4)
            al, be = 0.3 - 1.1j, 2.0
            lin = _rel(grid.apply_symbol(al * f + be * g, s2), al * grid.apply_symbol(f, s2) + be * grid.apply_symbol(g, s2))
            report.add("grid.linearity", lin <= 1e-10, n, seed, f"relative error {lin:.3g}")
            comp = _rel(grid.apply_symbol(grid.apply_symbol(f, s1), s2), grid.apply_symbol(f, s1 * s2))
            report.add("grid.composition", comp <= 1e-10, n, seed, f"relative error {comp:.3g}")

            # multipliers
            f3 = field2(3)
            for name, sym, fld in (
                ("cone", ConeSymbol(dirs), f3),
                ("polygon", PolygonSymbol(dirs, n / 4), f),
                ("sector", SectorSymbol(dirs, 2), f),
                ("halfspace", Halfspace(np.array([0.6, 0.8])), f),
            ):
                once = grid.apply_symbol(fld, sym)
                err = _rel(grid.apply_symbol(once, sym), once) if np.any(once) else 0.0
                report.add(f"multipliers.idempotent[{name}]", err <= 1e-10, n, seed, f"relative error {err:.3g}")
                ok = grid.lp_norm(once, 2) <= grid.lp_norm(fld, 2) * (1 + 1e-12)
                report.add(f"multipliers.contraction[{name}]", ok, n, seed, "p=2 norm grew")
            total = sum(SectorSymbol(dirs, k)(xi) for k in range(len(dirs)))
            report.add("multipliers.sector_completeness", np.all(total[~origin] == 1), n, seed, "sector sum != 1")
            for label, omega in (
                ("e1", np.array([1.0, 0.0])),
                ("3-4-5", np.array([0.6, 0.8])),
                ("diagonal", np.array([1.0, 1.0]) / math.sqrt(2)),
            ):
                v = Halfspace(omega)(xi) + Halfspace(-omega)(xi)
                on = xi @ omega == 0
                ok = np.array_equal(v.real, 1.0 + on) and not np.any(v.imag)
                report.add(
                    f"multipliers.halfspace_complement[{label}]", ok, n, seed,
                    f"omega={omega.tolist()}: H(w) + H(-w) != 1 + [w.xi = 0]",
                )
            for lam in (0.5, 1 / math.sqrt(2)):
                phi = build_phi(lam)
                t = np.exp(rng.uniform(-8, 8, size=2000)) * rng.choice([-1, 1], size=2000)
                lo, hi = math.floor(phi.log_position(np.abs(t)).min()) - 2, math.ceil(phi.log_position(np.abs(t)).max()) + 2
                total_phi = sum(phi(phi.dilate(i) * t) ** 2 for i in range(-hi, -lo + 1))
                res = float(np.max(np.abs(total_phi - 1)))
                report.add(f"multipliers.partition_of_unity[lam={lam:.6g}]", res <= 1e-12, n, seed, f"residual {res:.3g}")

            # maximal
            w = rng.random(n)
            w2 = w + rng.random(n)
            for ident, out, base in (
                ("maximal.domination", max_axis(w, 0), w),
            ):
                report.add(ident, np.all(out >= base), n, seed, "output below input")
            report.add("maximal.monotone", np.all(max_axis(w, 0) <= max_axis(w2, 0)), n, seed, "order not preserved")
            u = rng.random(n)
            sub = max_axis(w + u, 0) <= (max_axis(w, 0) + max_axis(u, 0)) * (1 + 1e-12)
            report.add("maximal.sublinear", np.all(sub), n, seed, "M(f+g) > Mf + Mg")
            ones2 = np.ones((n, n))
            for ident, out in (
                ("axis", max_axis(ones2, 1)),
                ("direction", max_directional(ones2, dirs.members[1])),
                ("set", max_set(ones2, dirs)),
            ):
                report.add(f"maximal.unit[{ident}]", np.all(out == 1.0), n, seed, "M(1) != 1")

            # lab
            for size in (2, 4):
                r = rademacher_check(make_lacunary_order1(0.5, size), field2(3))
                report.add(f"lab.rademacher[size={size}]", r.passed, n, seed, str(r.to_dict()))
            cfg = TrialConfig(d=2, n=n, seed=seed, trials=2, inequality="remark1_2d", weight_kind="constant", family="polygon", N=4)
            rep = eval_inequality(cfg)
            ok = np.all(np.isfinite(rep.ratios)) and np.all(rep.ratios > 0) and rep.max_ratio <= 1 + 1e-10
            report.add("lab.ratio_report", ok, n, seed, f"ratios {rep.ratios.tolist()}")
    return report
