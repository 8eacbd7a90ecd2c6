"""Discrete Hardy-Littlewood, directional and set maximal operators.

All averages are centred, symmetric Riemann sums over ``2m + 1`` samples
spaced one lattice step apart along the direction, taken over dyadic radii
``m in {0, 1, 2, 4, ..., n/2}`` with periodic wraparound. Off-lattice
samples are multilinear interpolates of ``|f|``. The ``m = 0`` window is
``|f|`` itself, so every output dominates its input pointwise.
"""

from dataclasses import dataclass, field

import numba
import numpy as np

from .directions import DirectionSet, lift3d, perp, union
from .validation import check_field

_AXES = {1: 0, 2: 1, 3: 2}


def dyadic_radii(n):
    radii = [0]
    m = 1
    while m <= n // 2:
        radii.append(m)
        m *= 2
    return radii


@numba.njit(cache=True)
def _window_max(a, shifts, weights, ring_end, denom):
    n0, n1, n2 = a.shape
    acc = a.copy()
    out = a.copy()
    k = 0
    for r in range(ring_end.size):
        while k < ring_end[r]:
            o0, o1, o2, w = shifts[k, 0], shifts[k, 1], shifts[k, 2], weights[k]
            c = o2 % n2
            for i0 in range(n0):
                s0 = (i0 + o0) % n0
                for i1 in range(n1):
                    s1 = (i1 + o1) % n1
                    for i2 in range(n2 - c):
                        acc[i0, i1, i2] += w * a[s0, s1, i2 + c]
                    for i2 in range(n2 - c, n2):
                        acc[i0, i1, i2] += w * a[s0, s1, i2 + c - n2]
            k += 1
        inv = denom[r]
        for i0 in range(n0):
            for i1 in range(n1):
                for i2 in range(n2):
                    v = acc[i0, i1, i2] / inv
                    if v > out[i0, i1, i2]:
                        out[i0, i1, i2] = v
    return out


def _stencil(omega, radii, d):
    # ring r collects the samples x - j*omega with radii[r-1] < |j| <= radii[r];
    # identical integer offsets inside a ring are merged in sorted order
    shifts, weights, ring_end, denom = [], [], [], []
    total = 1.0
    for r in range(1, len(radii)):
        ring = {}
        for j in range(radii[r - 1] + 1, radii[r] + 1):
            for sgn in (-1, 1):
                pos = -sgn * j * omega
                base = np.floor(pos)
                frac = pos - base
                for corner in np.ndindex(*([2] * d)):
                    w = 1.0
                    for t, c in zip(frac, corner):
                        w *= t if c else 1.0 - t
                    if w == 0.0:
                        continue
                    off = tuple(int(b) + c for b, c in zip(base, corner))
                    ring[off] = ring.get(off, 0.0) + w
        for off in sorted(ring):
            shifts.append((0,) * (3 - d) + off)
            weights.append(ring[off])
            total += ring[off]
        ring_end.append(len(shifts))
        denom.append(total)
    return (
        np.array(shifts, dtype=np.int64).reshape(-1, 3),
        np.array(weights, dtype=float),
        np.array(ring_end, dtype=np.int64),
        np.array(denom, dtype=float),
    )


_STENCIL_CACHE = {}


def _cached_stencil(omega, radii, d):
    key = (tuple(np.round(omega, 15)), tuple(radii), d)
    if key not in _STENCIL_CACHE:
        _STENCIL_CACHE[key] = _stencil(np.asarray(omega, dtype=float), list(radii), d)
    return _STENCIL_CACHE[key]


def _as3d(a):
    return a.reshape((1,) * (3 - a.ndim) + a.shape)


def _check_radii(radii, n):
    radii = dyadic_radii(n) if radii is None else sorted(set(int(m) for m in radii))
    if radii[0] != 0:
        radii = [0] + radii
    return radii


def max_directional(field, omega, radii=None):
    """``max_m (2m+1)^-1 sum_{|j|<=m} |f|(x - j h omega)`` over the radii."""
    a = np.abs(check_field(field)).astype(float)
    d = a.ndim
    omega = np.asarray(omega, dtype=float).reshape(-1)
    if omega.size < d:
        omega = np.concatenate([omega, np.zeros(d - omega.size)])
    if omega.size != d:
        raise ValueError(f"direction with {omega.size} components on a {d}D field")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    radii = _check_radii(radii, a.shape[0])
    shifts, weights, ring_end, denom = _cached_stencil(omega, radii, d)
    if len(ring_end) == 0:
        return a
    out = _window_max(np.ascontiguousarray(_as3d(a)), shifts, weights, ring_end, denom)
    return out.reshape(a.shape)


def max_axis(field, axis, radii=None):
    """Hardy-Littlewood maximal function along numpy axis ``axis``."""
    f = check_field(field)
    if not 0 <= axis < f.ndim:
        raise ValueError(f"axis {axis} out of range for a {f.ndim}D field")
    e = np.zeros(f.ndim)
    e[axis] = 1.0
    return max_directional(f, e, radii)


def _distinct_lines(directions):
    keep = []
    for w in directions:
        if not any(np.allclose(w, k, atol=1e-12) or np.allclose(w, -k, atol=1e-12) for k in keep):
            keep.append(w)
    return keep


def max_set(field, directions, radii=None):
    """Pointwise maximum of :func:`max_directional` over a set of directions.

    ``w`` and ``-w`` give the same operator, so only one of each pair is run.
    """
    members = directions.members if isinstance(directions, DirectionSet) else np.atleast_2d(directions)
    if len(members) == 0:
        raise ValueError("empty direction set")
    out = None
    for w in _distinct_lines(members):
        m = max_directional(field, w, radii)
        out = m if out is None else np.maximum(out, m)
    return out


@dataclass(frozen=True)
class Stage:
    """One factor ``M^power`` of a composition.

    ``kind`` is ``"axis"`` (``param`` = j for ``e_j``), ``"direction"``
    (a unit vector), ``"set"`` (planar directions) or ``"set3d"`` (3D
    directions, e.g. a lifted set).
    """

    kind: str
    param: object
    power: int = 1
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("axis", "direction", "set", "set3d"):
            raise ValueError(f"unknown stage kind {self.kind!r}")
        if self.power < 1:
            raise ValueError("stage powers must be >= 1")

    def apply_once(self, w, radii):
        d = w.ndim
        if self.kind == "axis":
            if self.param not in _AXES or _AXES[self.param] >= d:
                raise ValueError(f"axis e{self.param} does not exist on a {d}D weight")
            return max_axis(w, _AXES[self.param], radii)
        members = self.param.members if isinstance(self.param, DirectionSet) else np.atleast_2d(self.param)
        if self.kind == "set3d" and d != 3:
            raise ValueError("set3d stages need a 3D weight")
        if members.shape[1] > d:
            raise ValueError(f"{members.shape[1]}D directions on a {d}D weight")
        if self.kind == "direction":
            return max_directional(w, members[0], radii)
        return max_set(w, members, radii)

    def describe(self):
        name = self.label or (f"e{self.param}" if self.kind == "axis" else self.kind)
        return f"M^{self.power}_{{{name}}}"


@dataclass(frozen=True)
class MaximalSpec:
    """Composition of maximal stages, written left to right as in ``M_a M_b w``.

    The rightmost stage acts first. ``radii=None`` means dyadic radii for the
    grid it is run on.
    """

    stages: tuple
    radii: tuple | None = None
    name: str = ""
    notes: dict = field(default_factory=dict)

    def describe(self):
        return " ".join(s.describe() for s in self.stages) + " w"


def run_spec(weight, spec):
    w = check_field(weight, dtype=float)
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    radii = None if spec.radii is None else list(spec.radii)
    for stage in reversed(spec.stages):
        for _ in range(stage.power):
            w = stage.apply_once(w, radii)
    return w


def _both(dirs):
    return union(dirs, perp(dirs))


def lemma2_spec(dirs):
    """``M^3_{e2} M^3_{e1} M^3_{Omega-perp} M^3_{e2} M^3_{e1}``."""
    p = perp(dirs)
    return MaximalSpec(
        (
            Stage("axis", 2, 3),
            Stage("axis", 1, 3),
            Stage("set", p.members, 3, "Omega-perp"),
            Stage("axis", 2, 3),
            Stage("axis", 1, 3),
        ),
        name="lemma2",
    )


def theorem2_spec(dirs, K):
    """``M^{15K}_{Omega u Omega-perp} M^6_{Omega-3d} M^{15K}_{Omega u Omega-perp}``."""
    if K < 1:
        raise ValueError("K must be >= 1")
    both = _both(dirs)
    return MaximalSpec(
        (
            Stage("set", both, 15 * K, "Omega u Omega-perp"),
            Stage("set3d", lift3d(dirs).members, 6, "Omega-3d"),
            Stage("set", both, 15 * K, "Omega u Omega-perp"),
        ),
        name="theorem2",
    )


def remark1_spec(dirs, K):
    """``M^{30K+6}_{Omega u Omega-perp}`` for planar polygon multipliers."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return MaximalSpec((Stage("set", _both(dirs), 30 * K + 6, "Omega u Omega-perp"),), name="remark1")


def lemma1_spec(axis=1):
    """``M^3`` along ``e_axis``."""
    return MaximalSpec((Stage("axis", axis, 3),), name="lemma1")


def higher_dim_exponent(n):
    """Exponent ``30(n-1) + 3 * 2**(n-1)`` of the maximal operator for product polytopes in R^n."""
    return 30 * (n - 1) + 3 * 2 ** (n - 1)


def stage_powers(spec):
    return tuple(s.power for s in spec.stages)

