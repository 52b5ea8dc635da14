"""Geometric dual-power instances and their induced communication graphs.

All coordinates are integers and all range tests compare squared distances,
so a node at exactly the range boundary is always inside it.
"""
import json
import random
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .digraph import DiGraph, masks_strongly_connected
from .errors import GenerationError, InputError, ParseError


class Point(NamedTuple):
    x: int
    y: int


def dist_sq(p, q):
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return dx * dx + dy * dy


@dataclass(frozen=True)
class Instance:
    points: tuple
    rl_sq: int
    rh_sq: int

    def __post_init__(self):
        pts = tuple(Point(int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not 0 < self.rl_sq <= self.rh_sq:
            raise InputError(f"need 0 < rl_sq <= rh_sq, got {self.rl_sq}, {self.rh_sq}")
        if len(set(pts)) != len(pts):
            raise InputError("points must be pairwise distinct")

    @property
    def n(self):
        return len(self.points)

    @cached_property
    def low_masks(self):
        return self._range_masks(self.rl_sq)

    @cached_property
    def high_masks(self):
        return self._range_masks(self.rh_sq)

    def _range_masks(self, r_sq):
        pts = self.points
        masks = []
        for u, p in enumerate(pts):
            m = 0
            for v, q in enumerate(pts):
                if v != u and dist_sq(p, q) <= r_sq:
                    m |= 1 << v
            masks.append(m)
        return tuple(masks)

    def out_masks(self, high):
        """Out-neighbour bitmasks of G_R; ``high`` is a set of ids or a bitmask."""
        if not isinstance(high, int):
            high = sum(1 << u for u in high)
        lo, hi = self.low_masks, self.high_masks
        return tuple(hi[u] if high >> u & 1 else lo[u] for u in range(self.n))

    def is_feasible(self):
        """True iff giving every node high power yields a strongly connected graph."""
        return self.n >= 1 and masks_strongly_connected(self.high_masks)

    def validate(self):
        if self.n < 1:
            raise InputError("instance has no points")
        if not self.is_feasible():
            raise InputError("all-high communication graph is not strongly connected")
        return self


@dataclass(frozen=True)
class PowerAssignment:
    high: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "high", frozenset(int(u) for u in self.high))

    def __len__(self):
        return len(self.high)

    def union(self, other):
        return PowerAssignment(self.high | frozenset(other))

    @property
    def mask(self):
        return sum(1 << u for u in self.high)

    def check(self, instance):
        bad = [u for u in self.high if not 0 <= u < instance.n]
        if bad:
            raise InputError(f"node ids out of range: {sorted(bad)}")
        return self


def induce_graph(instance, assignment):
    if not isinstance(assignment, PowerAssignment):
        assignment = PowerAssignment(frozenset(assignment))
    assignment.check(instance)
    return DiGraph.from_masks(instance.out_masks(assignment.mask))


def generate_instance(n, extent, rl_sq, rh_sq, seed, max_tries=1000):
    """Uniform distinct grid points, redrawn until the all-high graph is
    strongly connected."""
    if n < 1 or extent < 1:
        raise InputError("need n >= 1 and extent >= 1")
    side = extent + 1
    if n > side * side:
        raise InputError(f"cannot place {n} distinct points on a {side}x{side} grid")
    rng = random.Random(seed)
    for _ in range(max_tries):
        cells = rng.sample(range(side * side), n)
        inst = Instance(tuple(Point(c % side, c // side) for c in cells), rl_sq, rh_sq)
        if inst.is_feasible():
            return inst
    raise GenerationError(f"no strongly connected instance within {max_tries} draws")


def _expect_int(value, path):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(path, f"expected integer, got {value!r}")
    return value


def instance_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("$", "expected an object")
    for key in ("points", "rl_sq", "rh_sq"):
        if key not in doc:
            raise ParseError(f"$.{key}", "missing field")
    if not isinstance(doc["points"], list):
        raise ParseError("$.points", "expected a list")
    pts = []
    for i, p in enumerate(doc["points"]):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"$.points[{i}]", "expected [x, y]")
        pts.append(Point(_expect_int(p[0], f"$.points[{i}][0]"), _expect_int(p[1], f"$.points[{i}][1]")))
    seen = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise ParseError(f"$.points[{i}]", f"duplicate of $.points[{seen[p]}]")
        seen[p] = i
    rl = _expect_int(doc["rl_sq"], "$.rl_sq")
    rh = _expect_int(doc["rh_sq"], "$.rh_sq")
    if rl <= 0:
        raise ParseError("$.rl_sq", "must be positive")
    if rl > rh:
        raise ParseError("$.rl_sq", "must not exceed rh_sq")
    if not pts:
        raise ParseError("$.points", "instance has no points")
    inst = Instance(tuple(pts), rl, rh)
    if not inst.is_feasible():
        raise ParseError("$", "all-high communication graph is not strongly connected")
    return inst


def instance_to_dict(inst):
    return {"points": [[p.x, p.y] for p in inst.points], "rl_sq": inst.rl_sq, "rh_sq": inst.rh_sq}


def read_instance(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    return instance_from_dict(doc)


def write_instance(inst):
    return json.dumps(instance_to_dict(inst)) + "\n"


def read_assignment(text, instance=None):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("high"), list):
        raise ParseError("$.high", "expected a list of node ids")
    ids = [_expect_int(u, f"$.high[{i}]") for i, u in enumerate(doc["high"])]
    a = PowerAssignment(frozenset(ids))
    if instance is not None:
        a.check(instance)
    return a


def write_assignment(assignment):
    return json.dumps({"high": sorted(assignment.high)}) + "\n"
