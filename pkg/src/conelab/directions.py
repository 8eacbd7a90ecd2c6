"""Lacunary direction sets on the circle and the geometry derived from them.

A :class:`DirectionSet` stores unit vectors in clockwise order (strictly
decreasing angle in ``(-pi, pi]``) together with the data that witnesses its
lacunarity: the constant ``lam``, the order ``K``, the basis in which slopes
``|w2 / w1|`` are read, and a tree mapping annulus indices to child sets.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .validation import check_lambda

ANGLE_TOL = 1e-10
# annulus bounds lam**i are hit exactly by generated members; absorb log rounding
_LOG_SNAP = 1e-9

_IDENTITY = np.eye(2)


def normalize(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def annulus_index(slope, lam):
    """Index ``i`` with ``lam**(i+1) < slope <= lam**i``.

    Slope 0 maps to ``+inf`` and an infinite slope to ``-inf``; these are the
    two degenerate annuli holding members that lie on a basis axis.
    """
    if slope == 0.0:
        return math.inf
    if math.isinf(slope):
        return -math.inf
    t = math.log(slope) / math.log(lam)
    r = round(t)
    if abs(t - r) < _LOG_SNAP:
        return int(r)
    return math.floor(t)


def _rot90(v):
    return np.array([-v[1], v[0]])


def _basis_from_angle(beta):
    e1 = np.array([math.cos(beta), math.sin(beta)])
    return np.vstack([e1, _rot90(e1)])


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Finite set of unit directions with lacunary-tree metadata."""

    members: np.ndarray
    lam: float = 0.5
    order: int = 0
    basis: np.ndarray = field(default_factory=lambda: _IDENTITY.copy())
    tree: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.members, dtype=float))
        if m.size == 0:
            raise ValueError("a direction set needs at least one member")
        if m.shape[1] not in (2, 3):
            raise ValueError(f"directions live in R^2 or R^3, got {m.shape[1]} components")
        norms = np.linalg.norm(m, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("direction set members must be unit vectors")
        check_lambda(self.lam)
        if self.order < 0:
            raise ValueError("order must be nonnegative")
        if m.shape[1] == 2:
            ang = np.arctan2(m[:, 1], m[:, 0])
            m = m[np.argsort(-ang, kind="stable")]
            ang = np.arctan2(m[:, 1], m[:, 0])
            gaps = np.abs(np.diff(ang))
            if len(ang) > 1:
                wrap = 2 * np.pi - (ang[0] - ang[-1])
                gaps = np.append(gaps, wrap)
            if np.any(gaps < ANGLE_TOL):
                raise ValueError("direction set contains members closer than 1e-10 rad")
        else:
            cos = np.clip(m @ m.T, -1.0, 1.0)
            ang = np.arccos(cos)
            np.fill_diagonal(ang, np.inf)
            if np.any(ang < ANGLE_TOL):
                raise ValueError("direction set contains members closer than 1e-10 rad")
        m.setflags(write=False)
        object.__setattr__(self, "members", m)
        basis = np.asarray(self.basis, dtype=float)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def dim(self):
        return self.members.shape[1]

    @property
    def angles(self):
        if self.dim != 2:
            raise ValueError("angles are only defined for planar sets")
        return np.arctan2(self.members[:, 1], self.members[:, 0])

    def prev(self, index):
        """Member preceding ``index`` in the clockwise cyclic order."""
        return self.members[(index - 1) % len(self)]


def _singleton(angle, lam, basis=None):
    return DirectionSet(
        np.array([[math.cos(angle), math.sin(angle)]]),
        lam=lam,
        order=0,
        basis=_IDENTITY if basis is None else basis,
    )


def make_lacunary_order1(lam, count, basis=None):
    """Directions ``normalize(e1 + lam**i e2)`` for ``i = 0 .. count-1``."""
    lam = check_lambda(lam)
    if count < 1:
        raise ValueError("count must be >= 1")
    basis = _IDENTITY if basis is None else np.asarray(basis, dtype=float)
    e1, e2 = basis
    members = [normalize(e1 + lam**i * e2) for i in range(count)]
    tree = {i: DirectionSet(members[i][None, :], lam=lam, basis=basis) for i in range(count)}
    return DirectionSet(
        np.array(members), lam=lam, order=1 if count > 1 else 0, basis=basis, tree=tree
    )


def _cluster(lam, branching, K, beta, offset):
    # order-K cluster whose accumulation direction sits at angle beta;
    # scaffold annuli offset .. offset+branching-1 in the rotated basis
    basis = _basis_from_angle(beta)
    if K == 0:
        return _singleton(beta + math.atan(lam**offset), lam, basis)
    tree = {}
    for i in range(offset, offset + branching):
        if K == 1:
            child = _singleton(beta + math.atan(lam**i), lam, basis)
        else:
            lo = math.atan(lam ** (i + 1))
            gap = math.atan(lam**i) - lo
            sub = i + 1
            while math.atan(lam**sub) > 0.5 * gap:
                sub += 1
            child = _cluster(lam, branching, K - 1, beta + lo, sub)
        tree[i] = child
    members = np.vstack([c.members for c in tree.values()])
    return DirectionSet(members, lam=lam, order=K, basis=basis, tree=tree)


def make_lacunary_orderK(lam, branching, K):
    """Order-K lacunary set with ``branching**K`` members.

    Each annulus of an order-1 scaffold holds a rescaled order-(K-1) cluster
    that accumulates toward the small-slope end of the annulus.
    """
    lam = check_lambda(lam)
    if K < 0:
        raise ValueError("K must be >= 0")
    if branching < 1:
        raise ValueError("branching must be >= 1")
    out = _cluster(lam, branching, K, 0.0, 0)
    if K == 0:
        return DirectionSet(out.members, lam=lam, order=0)
    return out


@dataclass
class LacunaryReport:
    accepted: bool
    order: int | None
    constants: dict
    reason: str = ""

    def __bool__(self):
        return self.accepted


def _same_members(a, b):
    if a.shape != b.shape:
        return False
    key_a = np.round(np.arctan2(a[:, 1], a[:, 0]), 9)
    key_b = np.round(np.arctan2(b[:, 1], b[:, 0]), 9)
    return np.array_equal(np.sort(key_a), np.sort(key_b))


def _candidate_bases(group_coords, basis, index, lam):
    e1, e2 = basis
    s1 = 1.0 if group_coords[0, 0] >= 0 else -1.0
    s2 = 1.0 if group_coords[0, 1] >= 0 else -1.0
    out = []
    for theta in (lam ** (index + 1), lam**index):
        v = normalize(s1 * e1 + s2 * theta * e2)
        out.append(np.vstack([v, _rot90(v)]))
    return out


def _validate(members, basis, tree, lam, K, level, constants):
    if len(members) == 1:
        return True, 0, ""
    if K == 0:
        return False, None, f"level {level}: {len(members)} directions where order zero allows one"
    coords = members @ np.asarray(basis).T
    psi = np.arctan2(coords[:, 1], coords[:, 0])
    quadrant = np.floor(psi / (np.pi / 2)).astype(int) % 4
    with np.errstate(divide="ignore"):
        slopes = np.abs(coords[:, 1]) / np.abs(coords[:, 0])
    order = 1
    for q in np.unique(quadrant):
        sel = np.flatnonzero(quadrant == q)
        keys = [annulus_index(float(slopes[k]), lam) for k in sel]
        finite = sorted({k for k in keys if math.isfinite(k)})
        if len(finite) > 1:
            worst = lam ** min(b - a for a, b in zip(finite, finite[1:]))
            constants[level] = max(constants.get(level, 0.0), worst)
        for key in set(keys):
            group = sel[[k == key for k in keys]]
            if len(group) == 1:
                continue
            sub = members[group]
            candidates = []
            child = tree.get(key)
            if child is not None and _same_members(child.members, sub):
                candidates.append((child.basis, child.tree))
            if math.isfinite(key):
                candidates += [(b, {}) for b in _candidate_bases(coords[group], basis, key, lam)]
            best = None
            for cb, ctree in candidates:
                trial = {}
                ok, sub_order, why = _validate(sub, cb, ctree, lam, K - 1, level + 1, trial)
                if ok:
                    best = (sub_order, trial)
                    break
            if best is None:
                return False, None, (
                    f"level {level}: annulus {key} holds {len(group)} directions that are not "
                    f"lacunary of order <= {K - 1}"
                )
            order = max(order, best[0] + 1)
            for lvl, c in best[1].items():
                constants[lvl] = max(constants.get(lvl, 0.0), c)
    if order > K:
        return False, order, f"order {order} exceeds {K}"
    return True, order, ""


def validate_lacunary(dirs, lam, K):
    """Check that ``dirs`` is lacunary of order <= K with constant ``lam``.

    Members are split into the four quadrants of the recorded basis and each
    quadrant is checked separately; inside a quadrant every annulus
    ``(lam**(i+1), lam**i]`` must hold an order <= K-1 set, read in the
    child's recorded basis or in a basis anchored at an end of the annulus.
    The report lists the worst ratio between consecutive occupied annulus
    bounds at each level of the recursion.
    """
    lam = check_lambda(lam)
    if dirs.dim != 2:
        raise ValueError("lacunarity is checked for planar sets")
    constants = {}
    ok, order, reason = _validate(dirs.members, dirs.basis, dirs.tree, lam, K, 0, constants)
    return LacunaryReport(ok, order, constants, reason)


def perp(dirs):
    """Rotate every member by -pi/2, i.e. ``w -> w x e3``."""
    if dirs.dim != 2:
        raise ValueError("perp is defined for planar sets")
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    return DirectionSet(
        dirs.members @ rot,
        lam=dirs.lam,
        order=dirs.order,
        basis=dirs.basis @ rot,
        tree={k: perp(c) for k, c in dirs.tree.items()},
    )


def lift3d(dirs):
    """The 3D directions ``(w +- e3) / sqrt(2)``, two per member."""
    if dirs.dim != 2:
        raise ValueError("lift3d expects a planar set")
    s = 1.0 / math.sqrt(2.0)
    rows = []
    for w in dirs.members:
        rows.append([w[0] * s, w[1] * s, s])
        rows.append([w[0] * s, w[1] * s, -s])
    return DirectionSet(np.array(rows), lam=dirs.lam, order=dirs.order)


def union(*sets):
    """Members of several planar sets as one array, dropping exact repeats."""
    rows = np.vstack([s.members for s in sets])
    keep = []
    for r in rows:
        if not any(np.allclose(r, k, atol=1e-12) for k in keep):
            keep.append(r)
    return np.array(keep)


def sector_indices(dirs, xi1, xi2):
    """Vectorised sector lookup; ``-1`` marks the origin.

    Sector ``k`` is the half-open arc that runs counterclockwise from member
    ``k`` (included) up to the previous member in clockwise order (excluded).
    """
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    theta = np.arctan2(xi2, xi1)
    a = dirs.angles
    d = np.mod(theta[..., None] - a, 2 * np.pi)
    d[d > 2 * np.pi - 1e-12] = 0.0
    idx = np.argmin(d, axis=-1)
    return np.where((xi1 == 0) & (xi2 == 0), -1, idx)


def sector_of(dirs, xi2d):
    xi1, xi2 = xi2d
    if xi1 == 0 and xi2 == 0:
        return None
    return int(sector_indices(dirs, np.array([xi1]), np.array([xi2]))[0])


@dataclass(frozen=True)
class HalfPlanes:
    """Polygon as the intersection of ``{x : w . x <= rho}`` over its normals."""

    normals: np.ndarray

    def contains(self, points, rho=1.0):
        points = np.asarray(points, dtype=float)
        return np.all(points @ self.normals.T <= rho, axis=-1)


def polygon_halfplanes(dirs):
    if dirs.dim != 2:
        raise ValueError("polygons are built from planar sets")
    return HalfPlanes(np.array(dirs.members))


_AXIS_PAIRS = {3: (0, 1), 1: (1, 2), 2: (0, 2)}


def localization_segments(dirs, lam, axis_index):
    """Split members by ``lam**(i+1) < |w_k / w_j| <= lam**i`` for the pair
    of coordinates orthogonal to ``e_axis_index``."""
    lam = check_lambda(lam)
    if axis_index not in _AXIS_PAIRS:
        raise ValueError(f"axis_index must be 1, 2 or 3, got {axis_index!r}")
    j, k = _AXIS_PAIRS[axis_index]
    if k >= dirs.dim:
        raise ValueError(f"axis {axis_index} needs 3D directions")
    groups = {}
    for w in dirs.members:
        with np.errstate(divide="ignore"):
            slope = abs(w[k]) / abs(w[j]) if w[j] != 0 else math.inf
        groups.setdefault(annulus_index(slope, lam), []).append(w)
    return [
        DirectionSet(np.array(groups[key]), lam=dirs.lam, order=dirs.order if len(groups[key]) > 1 else 0)
        for key in sorted(groups)
    ]


def equispaced(count, start=math.pi / 4):
    """``count`` directions evenly spread around the circle starting at ``start``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    ang = start - 2 * np.pi * np.arange(count) / count
    return DirectionSet(np.column_stack([np.cos(ang), np.sin(ang)]), lam=0.5, order=0)


def lacunary_polygon(lam, count):
    """Four-fold symmetric lacunary family accumulating at the coordinate axes.

    Members are taken in a fixed insertion order: the four diagonals first,
    then ``axis +- atan(lam**k)`` layer by layer. Each quadrant of the result
    is lacunary of order one; a single member coincides with
    ``equispaced(1)``.
    """
    lam = check_lambda(lam)
    if count < 1:
        raise ValueError("count must be >= 1")
    ang = [math.pi / 4 + q * math.pi / 2 for q in range(4)]
    k = 1
    while len(ang) < count:
        off = math.atan(lam**k)
        ang += [q * math.pi / 2 + off for q in range(4)]
        ang += [q * math.pi / 2 - off for q in range(4)]
        k += 1
    ang = np.array(ang[:count])
    members = np.column_stack([np.cos(ang), np.sin(ang)])
    return DirectionSet(members, lam=lam, order=1 if count > 1 else 0)
