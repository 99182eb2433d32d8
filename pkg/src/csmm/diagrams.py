"""Jacobi diagrams, marked surfaces and the U(N) weight system.

A Jacobi (unitrivalent) diagram is stored as a set of half-edges, a
fixed-point-free ``pairing`` involution (the edges) and a list of vertices.
A trivalent vertex is a triple of half-edges in cyclic order; a leg is a
univalent vertex carrying a color.

``psi`` thickens a diagram into a signed sum of marked surfaces, ``phi``
sends marked surfaces to power sums, and ``lmo_pair`` glues cup strips onto
the marked points (sum over pairings).  ``glN_bruteforce`` evaluates a closed
diagram by contracting gl_N structure constants and is used as an oracle for
``phi(psi(.))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .corealg import MIN_HBAR_EXPONENT, HSeries, NPoly, scalar, scalar_to_str
from .symfun import Partition, SymFunc

__all__ = [
    "JacobiDiagram",
    "MarkedSurface",
    "SurfaceCombo",
    "wheel",
    "theta",
    "ribbon_R",
    "psi",
    "phi",
    "lmo_pair",
    "perfect_matchings",
    "glN_bruteforce",
    "DiagramTooLarge",
]

Color = str


class DiagramTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class JacobiDiagram:
    """Unitrivalent graph with cyclically ordered trivalent vertices.

    ``vertices[v]`` lists the half-edges at ``v`` (three, in cyclic order, or
    one for a leg); ``colors[v]`` is the leg color or ``None``.
    """

    pairing: Tuple[int, ...]
    vertices: Tuple[Tuple[int, ...], ...]
    colors: Tuple[Optional[Color], ...]

    def __post_init__(self):
        n = len(self.pairing)
        object.__setattr__(self, "pairing", tuple(self.pairing))
        object.__setattr__(self, "vertices", tuple(tuple(v) for v in self.vertices))
        object.__setattr__(self, "colors", tuple(self.colors))
        if len(self.colors) != len(self.vertices):
            raise ValueError("one color slot per vertex is required")
        for h, g in enumerate(self.pairing):
            if not 0 <= g < n or g == h or self.pairing[g] != h:
                raise ValueError("pairing must be a fixed-point-free involution")
        seen = sorted(h for v in self.vertices for h in v)
        if seen != list(range(n)):
            raise ValueError("every half-edge must belong to exactly one vertex")
        for v, c in zip(self.vertices, self.colors):
            if len(v) == 3 and c is not None:
                raise ValueError("trivalent vertices carry no color")
            if len(v) == 1 and c is None:
                raise ValueError("legs must be colored")
            if len(v) not in (1, 3):
                raise ValueError("vertices must be trivalent or univalent")

    # structure ------------------------------------------------------------------
    @property
    def trivalent(self) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if len(v) == 3]

    @property
    def legs(self) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if len(v) == 1]

    @property
    def num_edges(self) -> int:
        return len(self.pairing) // 2

    @property
    def euler_char(self) -> int:
        return len(self.vertices) - self.num_edges

    @property
    def deg1(self) -> int:
        """Vassiliev degree: half the number of vertices."""
        return len(self.vertices) // 2

    @property
    def deg2(self) -> int:
        """Euler degree ``-chi``."""
        return -self.euler_char

    def is_closed(self) -> bool:
        return not self.legs

    def leg_colors(self) -> List[Color]:
        return [self.colors[v] for v in self.legs]

    # constructions --------------------------------------------------------------
    def disjoint_union(self, other: "JacobiDiagram") -> "JacobiDiagram":
        off = len(self.pairing)
        return JacobiDiagram(
            self.pairing + tuple(g + off for g in other.pairing),
            self.vertices + tuple(tuple(h + off for h in v) for v in other.vertices),
            self.colors + other.colors,
        )

    __mul__ = disjoint_union

    def reverse_vertex(self, v: int) -> "JacobiDiagram":
        verts = list(self.vertices)
        a, b, c = verts[v]
        verts[v] = (a, c, b)
        return JacobiDiagram(self.pairing, verts, self.colors)

    def close_legs(self, pairs: Sequence[Tuple[int, int]]) -> "JacobiDiagram":
        """Glue legs pairwise; ``pairs`` holds positions into :attr:`legs`."""
        legs = self.legs
        pairing = list(self.pairing)
        dropped = set()
        used = set()
        for i, j in pairs:
            if i in used or j in used or i == j:
                raise ValueError("each leg can be closed at most once")
            used.update((i, j))
            (a,), (b,) = self.vertices[legs[i]], self.vertices[legs[j]]
            x, y = pairing[a], pairing[b]
            pairing[x], pairing[y] = y, x
            dropped.update((legs[i], legs[j]))
        removed = {self.vertices[v][0] for v in dropped}
        keep = [h for h in range(len(pairing)) if h not in removed]
        index = {h: i for i, h in enumerate(keep)}
        return JacobiDiagram(
            tuple(index[pairing[h]] for h in keep),
            tuple(
                tuple(index[h] for h in vert)
                for v, vert in enumerate(self.vertices)
                if v not in dropped
            ),
            tuple(c for v, c in enumerate(self.colors) if v not in dropped),
        )

    def to_json(self) -> dict:
        return {
            "pairing": list(self.pairing),
            "vertices": [list(v) for v in self.vertices],
            "colors": list(self.colors),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "JacobiDiagram":
        return cls(tuple(data["pairing"]), tuple(map(tuple, data["vertices"])), tuple(data["colors"]))


def wheel(n: int, color: Color = "x") -> JacobiDiagram:
    """The wheel ``w_n``: an ``n``-cycle of trivalent vertices, one leg each."""
    if n < 2:
        raise ValueError("wheels need at least two legs")
    pairing = [0] * (4 * n)
    vertices = []
    for k in range(n):
        inc, out, spoke = 3 * k, 3 * k + 1, 3 * k + 2
        nxt = 3 * ((k + 1) % n)
        pairing[out], pairing[nxt] = nxt, out
        pairing[spoke], pairing[3 * n + k] = 3 * n + k, spoke
        vertices.append((inc, out, spoke))
    vertices += [(3 * n + k,) for k in range(n)]
    return JacobiDiagram(tuple(pairing), tuple(vertices), (None,) * n + (color,) * n)


def theta() -> JacobiDiagram:
    """Closure of ``w_2``: two trivalent vertices joined by three edges."""
    return wheel(2).close_legs([(0, 1)])


@dataclass(frozen=True, order=True)
class MarkedSurface:
    """Oriented surface recorded by its Euler characteristic and boundary.

    Each boundary circle is a cyclic word of marked-point colors, stored as
    its lexicographically least rotation; circles are kept sorted.
    """

    euler_char: int
    boundary: Tuple[Tuple[Color, ...], ...]

    def __post_init__(self):
        circles = tuple(sorted(_min_rotation(tuple(c)) for c in self.boundary))
        object.__setattr__(self, "boundary", circles)

    @property
    def num_points(self) -> int:
        return sum(len(c) for c in self.boundary)

    @property
    def deg1(self) -> int:
        return -self.euler_char + self.num_points

    @property
    def deg2(self) -> int:
        return -self.euler_char

    def disjoint_union(self, other: "MarkedSurface") -> "MarkedSurface":
        return MarkedSurface(self.euler_char + other.euler_char, self.boundary + other.boundary)

    def to_json(self) -> dict:
        return {"euler_char": self.euler_char, "boundary": [list(c) for c in self.boundary]}

    @classmethod
    def from_json(cls, data: Mapping) -> "MarkedSurface":
        return cls(int(data["euler_char"]), tuple(tuple(c) for c in data["boundary"]))


def _min_rotation(word: Tuple[Color, ...]) -> Tuple[Color, ...]:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def ribbon_R(n: int, color: Color = "x") -> MarkedSurface:
    """Disk with ``n`` marked points on its boundary (realizes ``p_n``)."""
    if n < 1:
        raise ValueError("R_n needs n >= 1")
    return MarkedSurface(1, ((color,) * n,))


class SurfaceCombo:
    """Finite rational combination of marked surfaces."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[MarkedSurface, object]] = None):
        clean: Dict[MarkedSurface, Fraction] = {}
        for s, c in (terms or {}).items():
            c = scalar(c)
            if c:
                clean[s] = clean.get(s, Fraction(0)) + c
                if not clean[s]:
                    del clean[s]
        self._terms = dict(sorted(clean.items()))

    @classmethod
    def of(cls, surface: MarkedSurface, coeff=1) -> "SurfaceCombo":
        return cls({surface: coeff})

    @property
    def terms(self) -> Dict[MarkedSurface, Fraction]:
        return dict(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __add__(self, other: "SurfaceCombo") -> "SurfaceCombo":
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, Fraction(0)) + c
        return SurfaceCombo(out)

    def __sub__(self, other: "SurfaceCombo") -> "SurfaceCombo":
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, SurfaceCombo):
            out: Dict[MarkedSurface, Fraction] = {}
            for s1, c1 in self._terms.items():
                for s2, c2 in other._terms.items():
                    s = s1.disjoint_union(s2)
                    out[s] = out.get(s, Fraction(0)) + c1 * c2
            return SurfaceCombo(out)
        c = scalar(other)
        return SurfaceCombo({s: c * v for s, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SurfaceCombo):
            return NotImplemented
        return self._terms == other._terms

    def __repr__(self):
        return "SurfaceCombo(" + ", ".join(
            f"{scalar_to_str(c)}*chi={s.euler_char}{list(map(list, s.boundary))}"
            for s, c in self._terms.items()
        ) + ")"

    def to_json(self) -> List[dict]:
        return [
            {"surface": s.to_json(), "coefficient": scalar_to_str(c)}
            for s, c in self._terms.items()
        ]


# ---------------------------------------------------------------------------
# thickening


def _cycles(perm: Sequence[int]) -> List[List[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = perm[h]
        out.append(cyc)
    return out


def _thicken(d: JacobiDiagram, marking: Sequence[int]) -> MarkedSurface:
    nxt = list(range(len(d.pairing)))
    leg_color: Dict[int, Color] = {}
    tri = iter(marking)
    for vert, color in zip(d.vertices, d.colors):
        if len(vert) == 1:
            leg_color[vert[0]] = color
            continue
        a, b, c = vert
        if next(tri):
            a, b, c = a, c, b
        nxt[a], nxt[b], nxt[c] = b, c, a
    # boundary walks of the ribbon graph
    face = [nxt[d.pairing[h]] for h in range(len(d.pairing))]
    circles = []
    for cyc in _cycles(face):
        circles.append(tuple(leg_color[h] for h in cyc if h in leg_color))
    return MarkedSurface(d.euler_char, tuple(circles))


def psi(d: JacobiDiagram) -> SurfaceCombo:
    """Signed sum over the ``2^T`` vertex markings of thickened surfaces.

    Marking 1 at a trivalent vertex reverses its cyclic order and flips the
    sign.
    """
    if not d.vertices and d.pairing:
        raise ValueError("a diagram needs at least one vertex")
    tri = len(d.trivalent)
    out: Dict[MarkedSurface, Fraction] = {}
    for marking in itertools.product((0, 1), repeat=tri):
        s = _thicken(d, marking)
        sign = -1 if sum(marking) % 2 else 1
        out[s] = out.get(s, Fraction(0)) + sign
    return SurfaceCombo(out)


def phi(s: Union[SurfaceCombo, MarkedSurface], colors: Sequence[Color] = ("x",),
        order: Optional[int] = None) -> SymFunc:
    """Power-sum image ``N^(empty circles) prod p_n hbar^deg1`` of marked surfaces.

    Each circle must carry points of a single color; ``order`` defaults to
    the largest Vassiliev degree present.
    """
    if isinstance(s, MarkedSurface):
        s = SurfaceCombo.of(s)
    colors = list(colors)
    index = {c: i for i, c in enumerate(colors)}
    terms = {}
    for surf, c in s:
        parts: List[List[int]] = [[] for _ in colors]
        empty = 0
        for circle in surf.boundary:
            if not circle:
                empty += 1
                continue
            kinds = set(circle)
            if len(kinds) > 1:
                raise ValueError(
                    f"circle {circle} mixes colors; its trace has no power-sum image"
                )
            (col,) = kinds
            if col not in index:
                raise ValueError(f"unknown color {col!r}")
            parts[index[col]].append(len(circle))
        terms[surf] = (tuple(Partition(p) for p in parts), c * NPoly.N() ** empty, surf.deg1)
    if order is None:
        order = max((deg for *_, deg in terms.values()), default=0)
    out = SymFunc.zero(len(colors), order)
    for key, coeff, deg in terms.values():
        out = out + SymFunc(len(colors), {key: HSeries.monomial(deg, coeff, order)}, order)
    return out


# ---------------------------------------------------------------------------
# pairing integral


def perfect_matchings(items: Sequence) -> Iterator[List[Tuple]]:
    """All perfect matchings of ``items`` ((2m-1)!! of them)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for m in perfect_matchings(remaining):
            yield [(first, partner)] + m


def _glue(circles: List[List[int]], matching: Sequence[Tuple[int, int]]) -> int:
    """Attach one band per pair; returns the number of resulting circles."""
    circles = [list(c) for c in circles]
    where = {}
    for ci, c in enumerate(circles):
        for p in c:
            where[p] = ci
    for a, b in matching:
        ca, cb = where[a], where[b]
        if ca == cb:
            c = circles[ca]
            i = c.index(a)
            c = c[i:] + c[:i]
            j = c.index(b)
            first, second = c[1:j], c[j + 1:]
            circles[ca] = first
            circles.append(second)
            for p in second:
                where[p] = len(circles) - 1
        else:
            c1, c2 = circles[ca], circles[cb]
            i, j = c1.index(a), c2.index(b)
            merged = c1[i + 1:] + c1[:i] + c2[j + 1:] + c2[:j]
            circles[ca] = merged
            circles[cb] = None
            for p in merged:
                where[p] = ca
        del where[a], where[b]
    return sum(1 for c in circles if c is not None)


def _surface_points(surface: MarkedSurface):
    circles, colors, k = [], [], 0
    for circle in surface.boundary:
        ids = []
        for col in circle:
            ids.append(k)
            colors.append(col)
            k += 1
        circles.append(ids)
    return circles, colors


def _pair_surface(surface: MarkedSurface, m: Mapping[Color, int], literal: bool) -> Dict[int, NPoly]:
    """``{hbar exponent: value}`` of the cup-strip pairing of one surface."""
    circles, colors = _surface_points(surface)
    by_color: Dict[Color, List[int]] = {c: [] for c in m}
    for p, col in enumerate(colors):
        if col not in by_color:
            raise ValueError(f"marked point color {col!r} is not being integrated")
        by_color[col].append(p)
    for col, pts in by_color.items():
        if len(pts) != 2 * m[col]:
            return {}
    strips = sum(m.values())
    chi = surface.euler_char + strips - 2 * strips
    per_color = []
    for col in sorted(by_color):
        pts = by_color[col]
        if literal:
            per_color.append(list(_literal_matchings(pts, m[col])))
        else:
            per_color.append([(mt, Fraction(1)) for mt in perfect_matchings(pts)])
    total = NPoly()
    N = NPoly.N()
    for combo in itertools.product(*per_color):
        matching = [pair for mt, _ in combo for pair in mt]
        weight = math.prod((w for _, w in combo), start=Fraction(1))
        total = total + N ** _glue(circles, matching) * weight
    return {-chi: total} if total else {}


def _literal_matchings(points: List[int], m: int):
    """Bijections onto the endpoints of ``m`` cups, each with weight 1/(2^m m!)."""
    weight = Fraction(1, 2**m * math.factorial(m))
    for perm in itertools.permutations(points):
        yield [(perm[2 * k], perm[2 * k + 1]) for k in range(m)], weight


def lmo_pair(a, m: Union[int, Mapping[Color, int], Sequence[int]], colors: Sequence[Color] = ("x",),
             order: Optional[int] = None, literal: bool = False, grading: str = "euler") -> HSeries:
    """Glue ``m`` half-weighted cup strips per color onto the marked points.

    ``a`` is a :class:`SurfaceCombo`, a :class:`MarkedSurface`, or a power-sum
    monomial given as a partition (one color) or tuple of partitions, which
    is realized as a disjoint union of disks ``R_j``.  ``m`` is one integer
    for every color or one per color.  The result carries ``hbar^(-chi)`` of
    each closed-up surface; ``.strip_hbar()`` gives the hbar-free value.
    With ``literal=True`` all bijections to cup endpoints are summed with
    weight ``1/(2^m m!)`` instead of the equivalent perfect matchings.

    ``grading="normalized"`` returns the hbar-free value at ``hbar^0``.  It
    is needed when a disconnected result has ``chi > 2``, since series stop
    at ``hbar^-2``; the default ``"euler"`` raises in that case.
    """
    if grading not in ("euler", "normalized"):
        raise ValueError(f"unknown grading {grading!r}")
    colors = list(colors)
    if isinstance(m, int):
        m_map = {c: m for c in colors}
    elif isinstance(m, Mapping):
        m_map = dict(m)
    else:
        m_map = dict(zip(colors, m))
    if set(m_map) != set(colors):
        raise ValueError("pairing degrees must be given for exactly the integrated colors")
    if any(v < 0 for v in m_map.values()):
        raise ValueError("pairing degree must be nonnegative")
    combo = _as_combo(a, colors)
    values: Dict[int, NPoly] = {}
    for surf, c in combo:
        for e, v in _pair_surface(surf, m_map, literal).items():
            values[e] = values.get(e, NPoly()) + v * c
    if grading == "normalized":
        total = sum(values.values(), NPoly())
        return HSeries.constant(total, 0 if order is None else order)
    low = min(values, default=0)
    if low < MIN_HBAR_EXPONENT:
        raise ValueError(
            f"glued surface has chi = {-low} > {-MIN_HBAR_EXPONENT}; use grading='normalized'"
        )
    if order is None:
        order = max(values, default=0)
    return HSeries(values, order)


def _as_combo(a, colors: List[Color]) -> SurfaceCombo:
    if isinstance(a, SurfaceCombo):
        return a
    if isinstance(a, MarkedSurface):
        return SurfaceCombo.of(a)
    key = tuple(a)
    if not key or all(isinstance(x, int) for x in key):
        key = (key,)
    if len(key) != len(colors):
        raise ValueError("monomial has a different number of colors than the integration")
    disks = []
    for col, part in zip(colors, key):
        disks.extend(ribbon_R(j, col) for j in Partition(part))
    surface = MarkedSurface(len(disks), tuple(c for d in disks for c in d.boundary))
    return SurfaceCombo.of(surface)


# ---------------------------------------------------------------------------
# gl_N structure-constant contraction

MAX_BRUTEFORCE_RANK = 4
MAX_BRUTEFORCE_EDGES = 24


def _glN_tensors(n: int):
    dim = n * n
    E = np.zeros((dim, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            E[i * n + j, i, j] = 1
    # tr(e_a e_b e_c); bracket [e_ij, e_kl] = d_jk e_il - d_li e_kj gives
    # tr(X [Y, Z]) = tr(XYZ) - tr(XZY)
    T = np.einsum("aij,bjk,cki->abc", E, E, E)
    f = T - T.transpose(0, 2, 1)
    # inverse of the trace form tr(e_ij e_kl) = d_il d_jk
    G = np.einsum("aij,bji->ab", E, E)
    return f, G


def glN_bruteforce(d: JacobiDiagram, n: int) -> Fraction:
    """Value of a closed diagram in the gl_n weight system by tensor contraction."""
    if not d.is_closed():
        raise ValueError("brute-force contraction needs a closed diagram")
    if not 1 <= n <= MAX_BRUTEFORCE_RANK:
        raise DiagramTooLarge(f"rank {n} outside 1..{MAX_BRUTEFORCE_RANK}")
    if d.num_edges > MAX_BRUTEFORCE_EDGES:
        raise DiagramTooLarge(f"{d.num_edges} edges exceed the guard {MAX_BRUTEFORCE_EDGES}")
    if not d.vertices:
        return Fraction(1)
    f, G = _glN_tensors(n)
    # fold each edge's metric into the endpoint holding the larger half-edge,
    # which leaves one 3-index tensor per vertex and a cheap contraction path
    operands: list = []
    for vert in d.vertices:
        t = f
        labels = list(vert)
        for slot, h in enumerate(vert):
            g = d.pairing[h]
            if h > g:
                t = np.moveaxis(np.tensordot(t, G, axes=([slot], [1])), -1, slot)
                labels[slot] = g
        operands.append((t, labels))
    return Fraction(int(_contract_all(operands)))


def _contract_all(operands):
    """Full contraction, pairing tensors so that intermediates stay small.

    numpy's own greedy path gives up on these networks (no pairwise step
    shrinks the operands) and falls back to one naive contraction.
    """
    ops = []
    for t, labels in operands:
        # traces over labels repeated inside one operand
        out = [x for x in dict.fromkeys(labels) if labels.count(x) == 1]
        ops.append((np.einsum(t, labels, out), out))
    while len(ops) > 1:
        best = None
        for i in range(len(ops)):
            for j in range(i + 1, len(ops)):
                a, b = ops[i][1], ops[j][1]
                shared = set(a) & set(b)
                if not shared:
                    continue
                free = [x for x in a + b if x not in shared]
                if best is None or len(free) < len(best[2]):
                    best = (i, j, free)
        if best is None:  # disconnected pieces multiply
            i, j = 0, 1
            free = ops[0][1] + ops[1][1]
        else:
            i, j, free = best
        merged = np.einsum(ops[i][0], ops[i][1], ops[j][0], ops[j][1], free)
        ops = [op for k, op in enumerate(ops) if k not in (i, j)] + [(merged, free)]
    t, labels = ops[0]
    return np.einsum(t, labels, []) if labels else t
