"""Ammann's recomposition of a Penrose patch around an added point Q.

Within each thin rhomb, Q sits in the counter-clockwise acute half tile,
located by polar coordinates (r, theta) measured from the acute corner A
along the rhomb edge AB, 0 <= theta <= pi/5.  Q is joined to A and to both
obtuse corners.  Rigid copies of the two triangles flanking Q transport it
into every thick rhomb as the points R and S, R joined to the ends of one
edge, S to the ends of the opposite edge, plus the segment RS.  Erasing the
Penrose edges merges the resulting faces into three tile types:

* A: pentagon around each thick rhomb's S-side quad (one per thick rhomb),
* B: hexagon around each thin rhomb's far quad,
* C: pentagon around each thick rhomb's R-side quad.

The thick-rhomb frame and copy orientations below are the unique choice (up
to global mirror) for which the merged faces fall into exactly three
congruence classes satisfying the Ammann angle and edge relations; the
mirror-image construction corresponds to placing Q in the upper half and is
deliberately not a second code path.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

from .errors import DegenerateTile, MalformedPatch, OutOfRhomb
from .exactnum import CycloPoint, GoldenRational
from .penrose import ACUTE, HalfTile, PenrosePatch

PHI = (1.0 + math.sqrt(5.0)) / 2.0
THETA = math.pi / 5.0

# Reference thin half tile: acute corner at the origin, edge AB along +x.
REF_A = 0j
REF_B = 1.0 + 0j
REF_D = cmath.exp(1j * THETA)
REF_C = REF_B + REF_D

KINDS = ("A", "B", "C")

# Canonical corner roles per kind (counter-clockwise, recomposition handedness):
#   A: [S, P, W, P, R]       anchored at its thick rhomb's S corner
#   B: [Q, P, W, P, W, P]    anchored at its thin rhomb's Q corner
#   C: [R, P, W, P, S]       anchored at its thick rhomb's R corner
# P are Penrose vertices, W are wedge points contributed by neighbours.
CUT_INDICES = {"A": ((1, 3),), "B": ((1, 3), (3, 5)), "C": ((1, 3),)}

# Angle letters by canonical corner index (solved against Proposition-style
# relations; theta units).  The three 2-theta angles are epsilon (A), gamma
# (B), nu (C); iota and lambda are B's two 4-theta corners.
ANGLE_LETTERS = {
    "A": ("chi", "beta", "eta", "epsilon", "delta"),
    "B": ("kappa", "lam", "alpha", "gamma", "mu", "iota"),
    "C": ("tau", "sigma", "rho", "nu", "omega"),
}

# Edge letters by canonical edge index (edge k joins corners k, k+1); the
# four congruence classes are {a,c,e,f,g,n} = |AQ|, {b,h,i,o} = |BQ|,
# {j,k,l,m} = |DQ|, {d,p} = |RS|.
EDGE_LETTERS = {
    "A": ("a", "b", "c", "e", "d"),
    "B": ("h", "i", "f", "g", "j", "k"),
    "C": ("o", "n", "l", "m", "p"),
}

EDGE_CLASSES = {
    "a=c=e=f=g=n": ("a", "c", "e", "f", "g", "n"),
    "b=h=i=o": ("b", "h", "i", "o"),
    "j=k=l=m": ("j", "k", "l", "m"),
    "d=p": ("d", "p"),
}

ANGLE_RELATIONS = (
    ("epsilon=2theta", ("epsilon",), 2.0),
    ("gamma=2theta", ("gamma",), 2.0),
    ("nu=2theta", ("nu",), 2.0),
    ("iota=4theta", ("iota",), 4.0),
    ("lambda=4theta", ("lam",), 4.0),
    ("beta+sigma=6theta", ("beta", "sigma"), 6.0),
    ("chi+rho+omega=10theta", ("chi", "rho", "omega"), 10.0),
    ("delta+tau+eta=10theta", ("delta", "tau", "eta"), 10.0),
    ("alpha+kappa+mu=10theta", ("alpha", "kappa", "mu"), 10.0),
    ("alpha=eta", ("alpha", "-eta"), 0.0),
    ("mu=rho", ("mu", "-rho"), 0.0),
)


def interior_angles(zs: list[complex], orientation: str = "CCW") -> list[float]:
    """Interior angles of a simple polygon, reflex corners included."""
    n = len(zs)
    sign = 1.0 if orientation == "CCW" else -1.0
    out = []
    for k in range(n):
        v1 = zs[k] - zs[(k - 1) % n]
        v2 = zs[(k + 1) % n] - zs[k]
        turn = math.atan2(v1.real * v2.imag - v1.imag * v2.real,
                          v1.real * v2.real + v1.imag * v2.imag)
        out.append(math.pi - sign * turn)
    return out


@dataclass(frozen=True)
class QPoint:
    """Location of Q in the thin-rhomb chart."""

    r: float
    theta: float
    exact: Optional[tuple[GoldenRational, GoldenRational]] = None

    @classmethod
    def from_polar(cls, r: float, theta: float) -> QPoint:
        return cls(float(r), float(theta))

    @classmethod
    def from_xy(cls, x: float, y: float) -> QPoint:
        return cls(math.hypot(x, y), math.atan2(y, x))

    @classmethod
    def from_exact_xy(cls, x: GoldenRational, y: GoldenRational) -> QPoint:
        xf, yf = float(x), float(y)
        return cls(math.hypot(xf, yf), math.atan2(yf, xf), exact=(x, y))

    @property
    def xy(self) -> complex:
        return cmath.rect(self.r, self.theta)

    def __iter__(self):
        return iter((self.r, self.theta))


def _chart_lengths(q: QPoint) -> dict[str, float]:
    z = q.xy
    # RS is a physical segment of the construction; its law-of-cosines angle
    # is measured from the D-leg (theta folds across the half-tile wedge).
    return {
        "AQ": abs(z - REF_A),
        "BQ": abs(z - REF_B),
        "CQ": abs(z - REF_C),
        "DQ": abs(z - REF_D),
        "RS": math.sqrt(q.r * q.r + PHI * PHI
                        - 2.0 * q.r * PHI * math.cos(THETA - q.theta)) / PHI,
    }


def _inside_closed_half(z: complex, tol: float = 1e-12) -> bool:
    for p, w in ((REF_A, REF_B), (REF_B, REF_D), (REF_D, REF_A)):
        if ((w - p).real * (z - p).imag - (w - p).imag * (z - p).real) < -tol:
            return False
    return True


LIMIT_QPOINT = QPoint(PHI - 1.0, 0.0)


@dataclass
class GenericityReport:
    generic: bool
    lengths: dict[str, float]
    coincidences: list[tuple[str, str]]
    exact_checked: bool = False

    def __bool__(self) -> bool:
        return self.generic


def validate_q(q: QPoint, tol: float = 1e-12) -> GenericityReport:
    """Check chart bounds and the distinct-lengths genericity condition.

    The four lengths of the condition are |AQ|, |BQ|, |CQ|, |RS| (C the far
    acute corner); |DQ| is also reported and scanned since it is the length
    of the S-side construction edges.  |CQ|-vs-|DQ| coincidences are ignored
    as neither drawn edge class depends on that equality.
    """
    if not (q.r > 0.0):
        raise OutOfRhomb("r must be positive")
    if not (-tol <= q.theta <= THETA + tol):
        raise OutOfRhomb("theta outside [0, pi/5]")
    if not _inside_closed_half(q.xy, tol=1e-9):
        raise OutOfRhomb("Q outside the closed lower half rhomb")
    lengths = _chart_lengths(q)
    if q.exact is not None:
        return _validate_exact(q, lengths)
    names = list(lengths)
    coinc = []
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            if {n1, n2} == {"CQ", "DQ"}:
                continue
            if abs(lengths[n1] - lengths[n2]) <= tol:
                coinc.append((n1, n2))
    return GenericityReport(not coinc, lengths, coinc)


def _validate_exact(q: QPoint, lengths: dict[str, float]) -> GenericityReport:
    """Exact coincidence scan for golden-rational cartesian Q via sympy."""
    import sympy as sp

    phi = (1 + sp.sqrt(5)) / 2
    gx, gy = q.exact
    x = sp.Rational(gx.a) + sp.Rational(gx.b) * phi
    y = sp.Rational(gy.a) + sp.Rational(gy.b) * phi
    cs, ss = sp.cos(sp.pi / 5), sp.sin(sp.pi / 5)
    pts = {
        "AQ": (x, y),
        "BQ": (x - 1, y),
        "CQ": (x - 1 - cs, y - ss),
        "DQ": (x - cs, y - ss),
    }
    sq = {k: sp.expand((u * u + v * v)) for k, (u, v) in pts.items()}
    sq["RS"] = sp.expand(((x - phi * cs) ** 2 + (y - phi * ss) ** 2) / phi ** 2)
    names = list(sq)
    coinc = []
    for i, n1 in enumerate(names):
        for n2 in names[i + 1:]:
            if {n1, n2} == {"CQ", "DQ"}:
                continue
            if sp.simplify(sq[n1] - sq[n2]) == 0:
                coinc.append((n1, n2))
    return GenericityReport(not coinc, lengths, coinc, exact_checked=True)


@dataclass
class Point:
    pid: tuple
    z: complex
    exact: Optional[CycloPoint] = None


class AmmannTile:
    """One placed Ammann tile (or a boundary fragment when kind is None)."""

    def __init__(self, kind, corners, cuts=(), provenance=(), orientation="CCW",
                 collinear=False):
        self.kind = kind
        self.corners = list(corners)
        self.cuts = list(cuts)
        self.provenance = tuple(provenance)
        self.orientation = orientation
        self.collinear = collinear

    def __repr__(self) -> str:
        return f"AmmannTile({self.kind}, {len(self.corners)} corners)"

    def edge_pairs(self):
        n = len(self.corners)
        return [(self.corners[k], self.corners[(k + 1) % n]) for k in range(n)]


class AmmannPatch:
    def __init__(self, points, tiles, partial, qpoint, source=None,
                 dropped_halves=(), thin_frames=None, thick_frames=None):
        self.points: dict = points
        self.tiles: list[AmmannTile] = tiles
        self.partial: list[AmmannTile] = partial
        self.qpoint: QPoint = qpoint
        self.source: Optional[PenrosePatch] = source
        self.dropped_halves = tuple(dropped_halves)
        self.thin_frames = thin_frames or {}
        self.thick_frames = thick_frames or {}

    def coords(self, tile: AmmannTile) -> list[complex]:
        return [self.points[p].z for p in tile.corners]

    def kind_counts(self) -> dict[str, int]:
        out = {"A": 0, "B": 0, "C": 0}
        for t in self.tiles:
            out[t.kind] += 1
        return out

    @cached_property
    def edge_map(self) -> dict:
        out: dict = {}
        for i, t in enumerate(self.tiles):
            for a, b in t.edge_pairs():
                out.setdefault(frozenset((a, b)), []).append(i)
        return out

    def area(self) -> float:
        total = 0.0
        for t in self.tiles + self.partial:
            zs = self.coords(t)
            n = len(zs)
            total += abs(sum(zs[k].real * zs[(k + 1) % n].imag
                             - zs[(k + 1) % n].real * zs[k].imag for k in range(n))) / 2.0
        return total

    def tile_angles(self, tile: AmmannTile) -> list[float]:
        return interior_angles(self.coords(tile), tile.orientation)

    def tile_edge_lengths(self, tile: AmmannTile) -> list[float]:
        zs = self.coords(tile)
        n = len(zs)
        return [abs(zs[(k + 1) % n] - zs[k]) for k in range(n)]


def _sorted_pairs(patch: PenrosePatch):
    pairs, single = patch.rhomb_pairs()
    pairs.sort(key=lambda p: min(p[0].key, p[1].key))
    return pairs, single


def recompose(patch: PenrosePatch, q: QPoint, allow_nongeneric: bool = False) -> AmmannPatch:
    """Run Algorithm-style recomposition over a rhomb-stage Penrose patch.

    Boundary half tiles without a rhomb partner are dropped and reported on
    ``dropped_halves``; merged faces missing an outside neighbour stay in
    ``partial`` unclassified.
    """
    if patch.generation % 2 != 0:
        raise MalformedPatch("recomposition needs a rhomb-stage patch")
    report = validate_q(q)
    if not report.generic and not allow_nongeneric:
        raise OutOfRhomb(f"q is not generic: coincidences {report.coincidences}")
    collinear = abs(q.theta) < 1e-12 or abs(q.theta - THETA) < 1e-12
    if min(report.lengths["AQ"], report.lengths["BQ"], report.lengths["DQ"]) < 1e-9:
        raise DegenerateTile("Q coincides with a rhomb corner")

    pairs, single = _sorted_pairs(patch)
    points: dict = {}
    pieces = []  # (name, [pids], [penrose side keys], rhomb_index)
    thin_frames = {}
    thick_frames = {}

    def preg(v: CycloPoint):
        pid = ("p", v.key)
        if pid not in points:
            points[pid] = Point(pid, complex(*v.embed()), v)
        return pid

    # The paper's theta is measured from the edge carrying the limit point;
    # in the internal frame (legs at 0 and pi/5) that folds the angle.
    z0 = cmath.rect(q.r, THETA - q.theta)
    for idx, (t1, t2) in enumerate(pairs):
        hp = t1 if t1.chirality == "L" else t2
        hm = t2 if hp is t1 else t1
        if t1.shape == ACUTE:
            iA, iB, iD = preg(hp.a), preg(hp.b), preg(hp.c)
            iC = preg(hm.a)
            A, B = points[iA].z, points[iB].z
            Q = A + z0 * (B - A)
            qid = ("q", idx)
            points[qid] = Point(qid, Q)
            thin_frames[idx] = {"A": iA, "B": iB, "C": iC, "D": iD, "Q": qid}
            pieces.append(("tABQ", [iA, iB, qid], [frozenset((iA, iB))], idx))
            pieces.append(("tADQ", [iA, iD, qid], [frozenset((iA, iD))], idx))
            pieces.append(("quadBCDQ", [iB, iC, iD, qid],
                           [frozenset((iB, iC)), frozenset((iC, iD))], idx))
        else:
            iE, iF = preg(hp.b), preg(hm.a)
            iG, iH = preg(hp.c), preg(hp.a)
            E, F, G, H = (points[i].z for i in (iE, iF, iG, iH))
            R = E + z0 * (F - E)
            S = G + (z0 - REF_D) * (H - G) / (REF_A - REF_D)
            rid, sid = ("r", idx), ("s", idx)
            points[rid] = Point(rid, R)
            points[sid] = Point(sid, S)
            thick_frames[idx] = {"E": iE, "F": iF, "G": iG, "H": iH, "R": rid, "S": sid}
            pieces.append(("tEFR", [iE, iF, rid], [frozenset((iE, iF))], idx))
            pieces.append(("tGHS", [iG, iH, sid], [frozenset((iG, iH))], idx))
            pieces.append(("quadRFGS", [rid, iF, iG, sid], [frozenset((iF, iG))], idx))
            pieces.append(("quadSHER", [sid, iH, iE, rid], [frozenset((iH, iE))], idx))

    tiles, partial = _merge_pieces(pieces, points, collinear)
    return AmmannPatch(points, tiles, partial, q, source=patch,
                       dropped_halves=single, thin_frames=thin_frames,
                       thick_frames=thick_frames)


def _merge_pieces(pieces, points, collinear):
    side_owner: dict = {}
    for i, (_n, _ids, sides, _r) in enumerate(pieces):
        for s in sides:
            side_owner.setdefault(s, []).append(i)

    parent = list(range(len(pieces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    complete = [True] * len(pieces)
    for s, owners in side_owner.items():
        if len(owners) == 2:
            ra, rb = find(owners[0]), find(owners[1])
            if ra != rb:
                parent[ra] = rb
        else:
            complete[owners[0]] = False

    groups: dict = {}
    for i in range(len(pieces)):
        groups.setdefault(find(i), []).append(i)

    tiles: list[AmmannTile] = []
    partial: list[AmmannTile] = []
    for idxs in groups.values():
        erased = set()
        for i in idxs:
            for s in pieces[i][2]:
                if len(side_owner[s]) == 2:
                    erased.add(s)
        directed: dict = {}
        pinched = False
        for i in idxs:
            ids = pieces[i][1]
            zs = [points[p].z for p in ids]
            n = len(ids)
            area2 = sum(zs[k].real * zs[(k + 1) % n].imag
                        - zs[(k + 1) % n].real * zs[k].imag for k in range(n))
            if area2 < 0:
                ids = ids[::-1]
            for k in range(n):
                u, v = ids[k], ids[(k + 1) % n]
                if frozenset((u, v)) in erased:
                    continue
                if u in directed:
                    pinched = True
                directed[u] = v
        is_complete = all(complete[i] for i in idxs)
        names = sorted(pieces[i][0] for i in idxs)
        rhombs = sorted({pieces[i][3] for i in idxs})
        cuts = [tuple(sorted(s, key=repr)) for s in erased]

        chain = None
        if not pinched:
            start = min(directed)
            chain = [start]
            while True:
                nxt = directed.get(chain[-1])
                if nxt is None or len(chain) > len(directed):
                    chain = None
                    break
                if nxt == start:
                    break
                chain.append(nxt)
            if chain is not None and len(chain) != len(directed):
                chain = None
        if chain is None:
            if is_complete:
                raise MalformedPatch("could not assemble a merged face")
            # pinched boundary fragment: keep the raw pieces separately
            for i in idxs:
                partial.append(AmmannTile(None, pieces[i][1], (), (pieces[i][3],),
                                          collinear=collinear))
            continue
        if not is_complete:
            partial.append(AmmannTile(None, chain, cuts, rhombs, collinear=collinear))
            continue
        if "quadBCDQ" in names:
            kind, anchor_role = "B", "q"
        elif "quadSHER" in names:
            kind, anchor_role = "A", "s"
        else:
            kind, anchor_role = "C", "r"
        own = [i for i in idxs if pieces[i][0].startswith("quad")]
        own_rhomb = pieces[own[0]][3]
        anchor = (anchor_role, own_rhomb)
        k0 = chain.index(anchor)
        chain = chain[k0:] + chain[:k0]
        tiles.append(AmmannTile(kind, chain, cuts, rhombs, collinear=collinear))
    return tiles, partial


# Prototiles.

class AmmannPrototile:
    """Canonical-pose tile of one kind: anchor corner at the origin."""

    def __init__(self, kind: str, vertices: list[complex], orientation: str = "CCW"):
        self.kind = kind
        self.vertices = vertices
        self.orientation = orientation
        self.angle_labels = ANGLE_LETTERS[kind]
        self.edge_labels = EDGE_LETTERS[kind]

    def angles(self) -> list[float]:
        return interior_angles(self.vertices, self.orientation)

    def edge_lengths(self) -> list[float]:
        zs = self.vertices
        n = len(zs)
        return [abs(zs[(k + 1) % n] - zs[k]) for k in range(n)]

    def labelled_angles(self) -> dict[str, float]:
        return dict(zip(self.angle_labels, self.angles()))

    def labelled_edges(self) -> dict[str, float]:
        return dict(zip(self.edge_labels, self.edge_lengths()))


_PROTO_PATCH_CACHE: dict[int, PenrosePatch] = {}


def _reference_patch(steps: int = 6) -> PenrosePatch:
    from .penrose import deflate, seed_patch

    if steps not in _PROTO_PATCH_CACHE:
        _PROTO_PATCH_CACHE[steps] = deflate(seed_patch("sun"), steps)
    return _PROTO_PATCH_CACHE[steps]


def canonical_pose(zs: Iterable[complex]) -> list[complex]:
    """Translate anchor to 0 and rotate the first edge onto +x."""
    zs = list(zs)
    z0 = zs[0]
    d = zs[1] - z0
    rot = abs(d) / d
    return [(z - z0) * rot for z in zs]


def build_prototiles(q: QPoint, allow_nongeneric: bool = False):
    """Construct the A, B, C prototiles for this Q in canonical pose."""
    patch = _reference_patch()
    ap = recompose(patch, q, allow_nongeneric=allow_nongeneric)
    found: dict[str, AmmannPrototile] = {}
    for t in ap.tiles:
        if t.kind in found:
            continue
        found[t.kind] = AmmannPrototile(t.kind, canonical_pose(ap.coords(t)))
        if len(found) == 3:
            break
    if len(found) != 3:
        raise MalformedPatch("reference patch too small to produce all prototiles")
    for kind, nvert in (("A", 5), ("B", 6), ("C", 5)):
        if len(found[kind].vertices) != nvert:
            raise DegenerateTile(f"prototile {kind} has {len(found[kind].vertices)} corners")
    return found["A"], found["B"], found["C"]


# Relation checks.

def _angle_values(triple) -> dict[str, float]:
    out = {}
    for proto in triple:
        out.update(proto.labelled_angles())
    return out


def _edge_values(triple) -> dict[str, float]:
    out = {}
    for proto in triple:
        out.update(proto.labelled_edges())
    return out


@dataclass
class RelationReport:
    angle_residuals: dict[str, float]
    edge_residuals: dict[str, float]

    @property
    def max_residual(self) -> float:
        vals = list(self.angle_residuals.values()) + list(self.edge_residuals.values())
        return max(vals) if vals else 0.0


def verify_relations(triple) -> RelationReport:
    """Residuals of the eight angle relations and four edge congruences."""
    ang = _angle_values(triple)
    edge = _edge_values(triple)
    a_res = {}
    for name, letters, target in ANGLE_RELATIONS:
        total = 0.0
        for letter in letters:
            if letter.startswith("-"):
                total -= ang[letter[1:]]
            else:
                total += ang[letter]
        a_res[name] = abs(total - target * THETA)
    e_res = {}
    for cname, letters in EDGE_CLASSES.items():
        vals = [edge[letter] for letter in letters]
        e_res[cname] = max(vals) - min(vals)
    return RelationReport(a_res, e_res)


# Serialization.

def _pid_str(pid: tuple) -> str:
    if pid[0] == "p":
        return "p:" + ",".join(f"{f.numerator}/{f.denominator}" for f in pid[1])
    return f"{pid[0]}:{pid[1]}"


def ammann_to_json(ap: AmmannPatch) -> str:
    order = sorted(ap.points, key=_pid_str)
    index = {pid: i for i, pid in enumerate(order)}
    doc = {
        "q": {"r": ap.qpoint.r, "theta": ap.qpoint.theta},
        "points": [[_pid_str(pid), ap.points[pid].z.real, ap.points[pid].z.imag]
                   for pid in order],
        "tiles": [
            {
                "kind": t.kind,
                "v": [index[p] for p in t.corners],
                "cuts": [[index[a], index[b]] for a, b in t.cuts],
                "rhombs": list(t.provenance),
                "orientation": t.orientation,
            }
            for t in ap.tiles
        ],
        "partial": [{"v": [index[p] for p in t.corners]} for t in ap.partial],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def ammann_to_svg(ap: AmmannPatch, scale: float = 40.0) -> str:
    pts = [p.z for p in ap.points.values()]
    xs = [z.real for z in pts]
    ys = [z.imag for z in pts]
    pad = 0.6
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = (max(xs) - min(xs) + 2 * pad) * scale
    h = (max(ys) - min(ys) + 2 * pad) * scale
    fills = {"A": "#b2df8a", "B": "#a6cee3", "C": "#fdbf6f", None: "#eeeeee"}
    rows = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}">']
    for t in ap.tiles + ap.partial:
        cs = " ".join(
            f"{(z.real - x0) * scale:.3f},{h - (z.imag - y0) * scale:.3f}"
            for z in ap.coords(t)
        )
        rows.append(f'<polygon points="{cs}" fill="{fills[t.kind]}" '
                    f'stroke="#333" stroke-width="0.7"/>')
    rows.append("</svg>")
    return "\n".join(rows)
