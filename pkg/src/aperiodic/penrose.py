"""Rhombic Penrose tilings at the half-tile (triangle) level.

Tiles are golden triangles stored apex-first: an ``acute`` triangle has apex
angle pi/5 and legs equal; a ``gnomon`` has apex angle 3*pi/5.  The base
(v1, v2) is always the rhomb diagonal, so a rhomb is a pair of mirror halves
sharing their base.  At even generations (rhomb stages) small tiles are the
acute halves of thin rhombs and large tiles the gnomon halves of thick
rhombs; odd generations are the intermediate kite-and-dart stages with the
roles swapped.

One deflation step splits every large tile into two and relabels every small
tile; composition is the exact inverse.  The split rules below are the unique
(up to global mirror) chirality-consistent single-step substitution: any
other choice produces cracks or T-junctions within a few generations.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import MalformedPatch, OnBoundary, OutOfPatch
from .exactnum import (
    CycloPoint,
    GoldenRational,
    INV_PHI,
    PHI,
    cross_sign,
    dot,
)

ACUTE = "acute"
GNOMON = "gnomon"

_THETA = math.pi / 5


class HalfTile:
    """One golden triangle, apex first; base (b, c) is the rhomb diagonal."""

    __slots__ = ("shape", "a", "b", "c", "__dict__")

    def __init__(self, shape: str, a: CycloPoint, b: CycloPoint, c: CycloPoint) -> None:
        self.shape = shape
        self.a = a
        self.b = b
        self.c = c

    def __repr__(self) -> str:
        return f"HalfTile({self.shape}, {self.a.embed()}, {self.b.embed()}, {self.c.embed()})"

    @property
    def vertices(self) -> tuple[CycloPoint, CycloPoint, CycloPoint]:
        return (self.a, self.b, self.c)

    @cached_property
    def key(self) -> tuple:
        return (self.shape, self.a.key, self.b.key, self.c.key)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, HalfTile):
            return self.key == other.key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key)

    @cached_property
    def chirality(self) -> str:
        """'L' when (a, b, c) winds counter-clockwise, 'R' otherwise."""
        return "L" if cross_sign(self.b - self.a, self.c - self.a) > 0 else "R"

    def size(self, generation: int) -> str:
        """'s' or 'l' for the tile's role at the given generation parity."""
        small_shape = ACUTE if generation % 2 == 0 else GNOMON
        return "s" if self.shape == small_shape else "l"

    def edges(self) -> list[tuple[str, CycloPoint, CycloPoint]]:
        """Edges as (role, start, end); legs start at the apex, base at b."""
        return [("ab", self.a, self.b), ("ac", self.a, self.c), ("base", self.b, self.c)]

    def exact_area2(self) -> GoldenRational:
        """Twice the unsigned area, in units of sin(pi/5)."""
        g = ((self.b - self.a).conj() * (self.c - self.a)).im_unit()
        return g if g.sign() >= 0 else -g

    def scaled(self, factor: GoldenRational) -> HalfTile:
        return HalfTile(self.shape, self.a * factor, self.b * factor, self.c * factor)

    def contains(self, point, tol: float = 1e-9) -> str:
        """'in', 'out', or 'edge' for an exact CycloPoint or float pair."""
        if isinstance(point, CycloPoint):
            signs = []
            for p, q in ((self.a, self.b), (self.b, self.c), (self.c, self.a)):
                signs.append(cross_sign(q - p, point - p))
            if 0 in signs and (all(s >= 0 for s in signs) or all(s <= 0 for s in signs)):
                return "edge"
            if all(s > 0 for s in signs) or all(s < 0 for s in signs):
                return "in"
            return "out"
        x, y = point
        pa, pb, pc = (v.embed() for v in (self.a, self.b, self.c))
        signs_f = []
        for (px, py), (qx, qy) in ((pa, pb), (pb, pc), (pc, pa)):
            signs_f.append((qx - px) * (y - py) - (qy - py) * (x - px))
        if all(s > tol for s in signs_f) or all(s < -tol for s in signs_f):
            return "in"
        if all(s >= -tol for s in signs_f) or all(s <= tol for s in signs_f):
            return "edge"
        return "out"


class PenrosePatch:
    """Immutable collection of half tiles plus its deflation depth."""

    def __init__(self, tiles: Iterable[HalfTile], generation: int = 0) -> None:
        self.tiles: tuple[HalfTile, ...] = tuple(tiles)
        self.generation = generation
        self.dropped: tuple[HalfTile, ...] = ()

    def __len__(self) -> int:
        return len(self.tiles)

    @property
    def normalized(self) -> bool:
        """True at rhomb stages, where edge lengths are exactly one."""
        return self.generation % 2 == 0

    @cached_property
    def vertices(self) -> dict:
        out = {}
        for t in self.tiles:
            for v in t.vertices:
                out.setdefault(v.key, v)
        return out

    @cached_property
    def edge_map(self) -> dict:
        """Unordered edge -> list of (tile, role, start_key)."""
        out: dict = {}
        for t in self.tiles:
            for role, p, q in t.edges():
                k = frozenset((p.key, q.key))
                out.setdefault(k, []).append((t, role, p.key))
        return out

    @cached_property
    def tile_set(self) -> frozenset:
        return frozenset(t.key for t in self.tiles)

    def exact_area2(self) -> GoldenRational:
        total = GoldenRational(0)
        for t in self.tiles:
            total = total + t.exact_area2()
        return total

    def tile_counts(self) -> dict[str, int]:
        """Counts keyed by size role, plus rhomb counts at rhomb stages."""
        small = sum(1 for t in self.tiles if t.size(self.generation) == "s")
        large = len(self.tiles) - small
        counts = {"s": small, "l": large}
        if self.normalized:
            counts["thin"] = small // 2
            counts["thick"] = large // 2
        return counts

    def locate(self, point, tol: float = 1e-9) -> HalfTile | None:
        """Tile whose interior contains the point; raises OnBoundary on edges."""
        hit_edge = False
        for t in self.tiles:
            where = t.contains(point, tol)
            if where == "in":
                return t
            if where == "edge":
                hit_edge = True
        if hit_edge:
            raise OnBoundary("point lies on a tile boundary")
        return None

    def rhomb_pairs(self) -> tuple[list[tuple[HalfTile, HalfTile]], list[HalfTile]]:
        """Pair halves across their base diagonals; also return unpaired halves."""
        pairs = []
        single = []
        for k, sides in self.edge_map.items():
            base_sides = [(t, r, s) for (t, r, s) in sides if r == "base"]
            if len(base_sides) == 2:
                t1, t2 = base_sides[0][0], base_sides[1][0]
                if t1.shape == t2.shape:
                    pairs.append((t1, t2))
        seen = set()
        for t1, t2 in pairs:
            seen.add(t1.key)
            seen.add(t2.key)
        for t in self.tiles:
            if t.key not in seen:
                single.append(t)
        return pairs, single


# Frozen single-step substitution (found by exhaustive convention search;
# the mirror-image family is equivalent, every other choice cracks).

def _split_acute(t: HalfTile) -> tuple[HalfTile, HalfTile]:
    d = t.a + (t.b - t.a) * INV_PHI
    return (
        HalfTile(GNOMON, d, t.c, t.a),
        HalfTile(ACUTE, t.c, d, t.b),
    )


def _split_gnomon(t: HalfTile) -> tuple[HalfTile, HalfTile]:
    z = t.b + (t.c - t.b) * INV_PHI
    return (
        HalfTile(ACUTE, t.b, t.a, z),
        HalfTile(GNOMON, z, t.c, t.a),
    )


def seed_patch(kind: str) -> PenrosePatch:
    """Canonical marked starting patches centered at the origin."""
    Z = CycloPoint.zeta_pow
    O = CycloPoint()
    if kind == "thick-rhomb":
        u, v = O, Z(1) + Z(9)
        return PenrosePatch([HalfTile(GNOMON, Z(1), u, v), HalfTile(GNOMON, Z(9), u, v)])
    if kind == "thin-rhomb":
        b, c = Z(1), Z(9)
        return PenrosePatch([HalfTile(ACUTE, O, b, c), HalfTile(ACUTE, Z(1) + Z(9), b, c)])
    if kind == "sun":
        tiles = []
        for j in range(5):
            diag = (Z(2 * j) * PHI)
            tiles.append(HalfTile(GNOMON, Z(2 * j + 1), diag, O))
            tiles.append(HalfTile(GNOMON, Z(2 * j - 1), diag, O))
        return PenrosePatch(tiles)
    if kind == "star":
        # Decagonal wheel of thin-rhomb halves; the singular 8th vertex star.
        tiles = []
        for i in range(10):
            b, c = Z(i), Z(i + 1)
            if i % 2 == 0:
                b, c = c, b
            tiles.append(HalfTile(ACUTE, O, b, c))
        return PenrosePatch(tiles)
    raise ValueError(f"unknown seed kind: {kind}")


def reflect(patch: PenrosePatch) -> PenrosePatch:
    """Mirror image across the real axis (exact conjugation)."""
    tiles = [HalfTile(t.shape, t.a.conj(), t.b.conj(), t.c.conj()) for t in patch.tiles]
    return PenrosePatch(tiles, patch.generation)


def deflate(patch: PenrosePatch, steps: int, rescale: bool = True) -> PenrosePatch:
    """Apply the triangle substitution; rescale by phi per double step.

    Odd output generations are kite-and-dart stages and are left
    non-normalized; only even stages have unit rhomb edges.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    tiles = list(patch.tiles)
    gen = patch.generation
    for _ in range(steps):
        large_shape = GNOMON if gen % 2 == 0 else ACUTE
        new_tiles: list[HalfTile] = []
        for t in tiles:
            if t.shape != large_shape:
                new_tiles.append(t)
            elif t.shape == GNOMON:
                new_tiles.extend(_split_gnomon(t))
            else:
                new_tiles.extend(_split_acute(t))
        tiles = new_tiles
        gen += 1
        if rescale and gen % 2 == 0:
            tiles = [t.scaled(PHI) for t in tiles]
    return PenrosePatch(tiles, gen)


def _merge_pair(small: HalfTile, large: HalfTile, parity: int) -> HalfTile | None:
    """Merged parent if the pair composes, else None.

    At rhomb stages the small acute's (a, b) leg must coincide with the
    gnomon's (a, b) leg apex-to-apex; at kite/dart stages the small gnomon's
    (a, c) leg must coincide with the acute's base.
    """
    if parity % 2 == 0:
        if small.shape != ACUTE or large.shape != GNOMON:
            return None
        if small.a == large.b and small.b == large.a:
            return HalfTile(ACUTE, large.c, small.c, small.a)
        return None
    if small.shape != GNOMON or large.shape != ACUTE:
        return None
    if large.b == small.c and large.c == small.a:
        return HalfTile(GNOMON, large.b, large.a, small.b)
    return None


def compose(patch: PenrosePatch) -> PenrosePatch:
    """Merge every small tile with its unique large partner (one step).

    Small tiles whose partner lies outside the patch are dropped along with
    any large tile that was not consumed and sits on the boundary of the
    merge; dropped tiles are reported on the result's ``dropped`` attribute.
    Raises MalformedPatch when an interior small tile has zero or two
    mergeable neighbours.
    """
    parity = patch.generation % 2
    small_shape = ACUTE if parity == 0 else GNOMON
    merge_role = "ab" if parity == 0 else "ac"

    merged: list[HalfTile] = []
    consumed: set = set()
    dropped: list[HalfTile] = []
    edge_map = patch.edge_map

    for t in patch.tiles:
        if t.shape != small_shape:
            continue
        p, q = (t.a, t.b) if merge_role == "ab" else (t.a, t.c)
        k = frozenset((p.key, q.key))
        neighbours = [s for (s, _r, _st) in edge_map[k] if s.key != t.key]
        candidates = []
        for nb in neighbours:
            m = _merge_pair(t, nb, parity)
            if m is not None:
                candidates.append((nb, m))
        if len(candidates) == 1:
            nb, m = candidates[0]
            merged.append(m)
            consumed.add(t.key)
            consumed.add(nb.key)
        elif len(candidates) == 0:
            if not neighbours:
                dropped.append(t)
                consumed.add(t.key)
            else:
                raise MalformedPatch("small tile with no mergeable large neighbour")
        else:
            raise MalformedPatch("small tile with two mergeable large neighbours")

    for t in patch.tiles:
        if t.key in consumed:
            continue
        if t.shape == small_shape:
            raise MalformedPatch("small tile consumed twice")
        merged.append(t)

    out = PenrosePatch(merged, patch.generation - 1)
    out.dropped = tuple(dropped)
    return out


class IndexSequence:
    """Finite s/l itinerary of a point under repeated composition."""

    def __init__(self, symbols: str) -> None:
        if "ss" in symbols:
            raise ValueError("an s is never followed by an s")
        self.symbols = symbols

    def __str__(self) -> str:
        return self.symbols

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IndexSequence):
            return self.symbols == other.symbols
        if isinstance(other, str):
            return self.symbols == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)


def index_sequence(patch: PenrosePatch, point, n: int) -> IndexSequence:
    """Record the size of the tile containing ``point`` over n compositions.

    Raises OutOfPatch if composition erodes the region around the point
    before n symbols are produced, and OnBoundary if the point ever lies on
    a tile boundary (no perturbation is attempted).
    """
    symbols = []
    current = patch
    for _ in range(n):
        tile = current.locate(point)
        if tile is None:
            raise OutOfPatch("point left the patch during composition")
        symbols.append(tile.size(current.generation))
        current = compose(current)
    return IndexSequence("".join(symbols))


# Vertex-star atlas.  Star codes are cyclic sequences of rhomb corners,
# canonical under rotation and reflection.  Seven types occur with positive
# density in every tiling; the decagonal 'star' wheel of thin tips is the
# singular eighth entry (it heads the 5-fold symmetric star tiling).

def _canon_cyclic(seq: tuple) -> tuple:
    cands = []
    n = len(seq)
    for s in (seq, tuple(reversed(seq))):
        for r in range(n):
            cands.append(s[r:] + s[:r])
    return min(cands)


_T36, _T144, _K72, _K108 = "thin36", "thin144", "thick72", "thick108"

PENROSE_STAR_ATLAS: dict[tuple, tuple[int, str]] = {
    _canon_cyclic((_K72,) * 5): (1, "sun"),
    _canon_cyclic((_T36,) * 10): (2, "star"),
    _canon_cyclic((_T144, _K108, _K108)): (3, "deuce"),
    _canon_cyclic((_T36, _K108, _K108, _T36, _K72)): (4, "jack"),
    _canon_cyclic((_T144, _T144, _K72)): (5, "queen"),
    _canon_cyclic((_T144, _K72, _K72, _K72)): (6, "king"),
    _canon_cyclic((_T36, _T36, _K72, _T36, _T36, _K72, _K72)): (7, "ace"),
    _canon_cyclic((_T36, _T36, _K72, _K72, _K72, _K72)): (8, "crown"),
}

UNKNOWN = "unknown"


class StarRecord:
    def __init__(self, atlas_id, name: str, corners: tuple) -> None:
        self.atlas_id = atlas_id
        self.name = name
        self.corners = corners

    def __repr__(self) -> str:
        return f"StarRecord({self.atlas_id}, {self.name!r})"


def _corners_at(patch: PenrosePatch) -> dict:
    """Vertex key -> sorted corner records (mid_angle, span, shape, role, base_edge)."""
    out: dict = {}
    for t in patch.tiles:
        vs = t.vertices
        for i, v in enumerate(vs):
            others = [x for j, x in enumerate(vs) if j != i]
            e1 = (others[0] - v).embed()
            e2 = (others[1] - v).embed()
            a1 = math.atan2(e1[1], e1[0])
            a2 = math.atan2(e2[1], e2[0])
            span = abs(math.remainder(a1 - a2, 2 * math.pi))
            mid = a2 + math.remainder(a1 - a2, 2 * math.pi) / 2
            base_key = frozenset((t.b.key, t.c.key)) if i != 0 else None
            out.setdefault(v.key, []).append((mid, span, t.shape, "apex" if i == 0 else "base", base_key))
    for corners in out.values():
        corners.sort()
    return out


def _star_code(corners: list) -> tuple | None:
    """Pair base corners across shared diagonals into rhomb corners."""
    n = len(corners)
    for rot in range(n):
        cs = corners[rot:] + corners[:rot]
        seq = []
        i = 0
        ok = True
        while i < len(cs):
            _mid, _span, shape, role, bk = cs[i]
            if role == "base":
                if i + 1 < len(cs) and cs[i + 1][3] == "base" and cs[i + 1][4] == bk:
                    seq.append(_T144 if shape == ACUTE else _K72)
                    i += 2
                else:
                    ok = False
                    break
            else:
                seq.append(_T36 if shape == ACUTE else _K108)
                i += 1
        if ok:
            return _canon_cyclic(tuple(seq))
    return None


def vertex_star(patch: PenrosePatch, v: CycloPoint) -> StarRecord:
    """Classify the rhomb star around an interior vertex against the atlas."""
    corners = _corners_at(patch).get(v.key)
    if not corners:
        return StarRecord(UNKNOWN, UNKNOWN, ())
    total = sum(c[1] for c in corners)
    if abs(total - 2 * math.pi) > 1e-9:
        return StarRecord(UNKNOWN, UNKNOWN, ())
    code = _star_code(corners)
    if code is None or code not in PENROSE_STAR_ATLAS:
        return StarRecord(UNKNOWN, UNKNOWN, code or ())
    atlas_id, name = PENROSE_STAR_ATLAS[code]
    return StarRecord(atlas_id, name, code)


def interior_vertices(patch: PenrosePatch) -> list[CycloPoint]:
    """Vertices fully surrounded by tiles (corner angles sum to 2*pi)."""
    out = []
    verts = patch.vertices
    for vk, corners in _corners_at(patch).items():
        if abs(sum(c[1] for c in corners) - 2 * math.pi) <= 1e-9:
            out.append(verts[vk])
    return out


def star_audit(patch: PenrosePatch) -> dict:
    """Classify every interior vertex; report counts and violations."""
    counts: dict[str, int] = {}
    unknown = []
    for v in interior_vertices(patch):
        rec = vertex_star(patch, v)
        counts[rec.name] = counts.get(rec.name, 0) + 1
        if rec.atlas_id == UNKNOWN:
            unknown.append(v.embed())
    return {"counts": counts, "unknown": unknown}


# Marking audit.  The legal pairings of edge roles across a shared edge were
# derived from deep substitution patches; they encode the arrow decorations
# of the rhombs (legs pair within their arrow class, diagonals pair mirror
# halves).  ``aligned`` records whether both sides start at the same
# endpoint (legs start at the apex, bases at b).

_LEGAL_EDGE_PAIRS = {
    0: {
        ((ACUTE, "ab"), (GNOMON, "ab"), False),
        ((GNOMON, "base"), (GNOMON, "base"), True),
        ((ACUTE, "ac"), (GNOMON, "ac"), True),
        ((GNOMON, "ac"), (GNOMON, "ac"), True),
        ((ACUTE, "base"), (ACUTE, "base"), True),
        ((GNOMON, "ab"), (GNOMON, "ab"), True),
        ((ACUTE, "ac"), (ACUTE, "ac"), True),
        ((ACUTE, "ab"), (ACUTE, "ab"), True),  # star-wheel tip contacts
    },
    1: {
        ((ACUTE, "base"), (GNOMON, "ac"), False),
        ((ACUTE, "ab"), (ACUTE, "ab"), True),
        ((ACUTE, "ac"), (ACUTE, "ac"), True),
        ((GNOMON, "ab"), (GNOMON, "ab"), True),
        ((ACUTE, "ac"), (GNOMON, "base"), False),
        ((GNOMON, "base"), (GNOMON, "base"), True),
        ((ACUTE, "base"), (ACUTE, "base"), True),
    },
}


def marks_audit(patch: PenrosePatch) -> list[dict]:
    """Interior edges whose marking tags do not match; empty when legal."""
    parity = patch.generation % 2
    legal = _LEGAL_EDGE_PAIRS[parity]
    bad = []
    for k, sides in patch.edge_map.items():
        if len(sides) != 2:
            continue
        (t1, r1, s1), (t2, r2, s2) = sides
        item = tuple(sorted([(t1.shape, r1), (t2.shape, r2)])) + (s1 == s2,)
        if item not in legal:
            p = patch.vertices[next(iter(k))].embed()
            bad.append({"edge_at": p, "pair": item})
    return bad


def edge_marks(tile: HalfTile) -> dict[str, tuple[str, str]]:
    """Arrow tags per edge role: (mark class, head end).

    Leg 'ab' carries the single arrow (head at the apex for gnomons and at
    the far end for acutes, which is what makes composition partners line
    up head-to-head); leg 'ac' carries the double arrow with the head at
    the apex; the base is the undecorated rhomb diagonal.
    """
    if tile.shape == GNOMON:
        return {"ab": ("arrow1", "a"), "ac": ("arrow2", "a"), "base": ("diag-thick", "")}
    return {"ab": ("arrow1", "b"), "ac": ("arrow2", "a"), "base": ("diag-thin", "")}


# Serialization.

def patch_to_json(patch: PenrosePatch) -> str:
    verts = sorted(patch.vertices.values(), key=lambda v: v.key)
    index = {v.key: i for i, v in enumerate(verts)}
    tiles = []
    for t in sorted(patch.tiles, key=lambda t: t.key):
        tiles.append(
            {
                "size": t.size(patch.generation),
                "shape": t.shape,
                "chirality": t.chirality,
                "v": [index[t.a.key], index[t.b.key], index[t.c.key]],
            }
        )
    doc = {
        "generation": patch.generation,
        "vertices": [v.to_tuples() for v in verts],
        "tiles": tiles,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def patch_from_json(text: str) -> PenrosePatch:
    doc = json.loads(text)
    verts = [CycloPoint.from_tuples(rows) for rows in doc["vertices"]]
    tiles = []
    for t in doc["tiles"]:
        i, j, k = t["v"]
        tiles.append(HalfTile(t["shape"], verts[i], verts[j], verts[k]))
    return PenrosePatch(tiles, doc.get("generation", 0))


def patch_to_svg(patch: PenrosePatch, scale: float = 40.0) -> str:
    """Minimal SVG rendering with per-size fill colours."""
    pts = [v.embed() for v in patch.vertices.values()]
    if not pts:
        return "<svg xmlns='http://www.w3.org/2000/svg'/>"
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    pad = 0.6
    x0, y0 = min(xs) - pad, min(ys) - pad
    w = (max(xs) - min(xs) + 2 * pad) * scale
    h = (max(ys) - min(ys) + 2 * pad) * scale
    fills = {"s": "#9ecae9", "l": "#f4a582"}
    rows = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
        f'viewBox="0 0 {w:.3f} {h:.3f}">'
    ]
    for t in patch.tiles:
        cs = []
        for v in t.vertices:
            x, y = v.embed()
            cs.append(f"{(x - x0) * scale:.3f},{h - (y - y0) * scale:.3f}")
        rows.append(
            f'<polygon points="{" ".join(cs)}" fill="{fills[t.size(patch.generation)]}" '
            f'stroke="#333" stroke-width="0.7"/>'
        )
    rows.append("</svg>")
    return "\n".join(rows)
