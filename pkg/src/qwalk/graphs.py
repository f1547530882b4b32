"""Circulant graphs and their join / Cartesian compositions.

Graphs are immutable descriptions; :func:`adjacency` realizes them as dense
0/1 matrices. Vertex order follows the block structure used by the spectral
code: in ``join(G, H)`` the G-vertices come first, and in ``cartesian(G, H)``
vertex ``(u, v)`` has index ``u * |H| + v``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

DEFAULT_SIZE_CAP = 4096


class GraphError(ValueError):
    """Invalid graph construction."""


class InvalidGeneratorError(GraphError):
    pass


class EmptyGraphError(GraphError):
    pass


class SizeCapError(GraphError):
    pass


def size_cap() -> int:
    """Dense-realization cap, overridable through ``QWALK_SIZE_CAP``."""
    raw = os.environ.get("QWALK_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError("QWALK_SIZE_CAP must be >= 1")
    return cap


@dataclass(frozen=True)
class ConnectionSet:
    """Connection set S of a circulant on Z_n, closed under negation."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise EmptyGraphError("circulant order must be >= 1")
        elems = tuple(sorted(set(self.elements)))
        for d in elems:
            if not 1 <= d <= self.n - 1:
                raise InvalidGeneratorError(f"element {d} outside [1, {self.n - 1}]")
            if (self.n - d) not in elems:
                raise InvalidGeneratorError(f"element {d} present without its inverse {self.n - d}")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_generators(cls, n: int, generators) -> "ConnectionSet":
        if n < 1:
            raise EmptyGraphError("circulant order must be >= 1")
        elems = set()
        for g in generators:
            d = int(g) % n
            if d == 0:
                raise InvalidGeneratorError(f"generator {g} is 0 mod {n} (self-loop)")
            elems.add(d)
            elems.add(n - d)
        return cls(n, tuple(elems))

    @property
    def degree(self) -> int:
        return len(self.elements)

    def first_row(self) -> np.ndarray:
        """The row (a_0, ..., a_{n-1}) with a_k = 1 iff k in S."""
        row = np.zeros(self.n, dtype=np.int8)
        row[list(self.elements)] = 1
        return row

    def gcd(self) -> int:
        return reduce(math.gcd, self.elements, self.n)


class Graph:
    """Base class of all graph expressions."""

    order: int

    @property
    def kind(self) -> str:
        return type(self).__name__.lower()


@dataclass(frozen=True)
class Circulant(Graph):
    connection: ConnectionSet

    @property
    def n(self) -> int:
        return self.connection.n

    @property
    def order(self) -> int:
        return self.connection.n

    @property
    def degree(self) -> int:
        return self.connection.degree


@dataclass(frozen=True)
class Path(Graph):
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise EmptyGraphError("a path needs at least one vertex")

    @property
    def order(self) -> int:
        return self.m


@dataclass(frozen=True)
class Join(Graph):
    left: Graph
    right: Graph

    @property
    def order(self) -> int:
        return self.left.order + self.right.order


@dataclass(frozen=True)
class Cartesian(Graph):
    left: Graph
    right: Graph

    @property
    def order(self) -> int:
        return self.left.order * self.right.order


@dataclass(frozen=True, eq=False)
class Explicit(Graph):
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise GraphError("explicit adjacency must be a non-empty square matrix")
        if not np.isin(a, (0, 1)).all():
            raise GraphError("explicit adjacency must be 0/1")
        if not np.array_equal(a, a.T):
            raise GraphError("explicit adjacency must be symmetric")
        if np.any(np.diag(a)):
            raise GraphError("explicit adjacency must have a zero diagonal")
        a = a.astype(np.int8)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def order(self) -> int:
        return self.matrix.shape[0]


def make_circulant(n: int, generators=()) -> Circulant:
    """Circulant on Z_n; generators are closed under negation automatically."""
    return Circulant(ConnectionSet.from_generators(n, generators))


def make_path(m: int) -> Path:
    return Path(m)


def complete(n: int) -> Circulant:
    return make_circulant(n, range(1, n))


def empty(n: int) -> Circulant:
    return make_circulant(n, ())


def cycle(n: int) -> Circulant:
    return make_circulant(n, (1,))


def mobius(n: int) -> Circulant:
    """circ(n; 1, n/2), a cycle plus a perfect matching (n even)."""
    if n < 2 or n % 2:
        raise InvalidGeneratorError("mobius(n) needs an even n >= 2")
    return make_circulant(n, (1, n // 2))


def join(g: Graph, h: Graph) -> Join:
    return Join(g, h)


def joinpow(g: Graph, m: int) -> Graph:
    """m-fold homogeneous join G + ... + G, folded from the left."""
    if m < 1:
        raise GraphError("joinpow needs m >= 1")
    out = g
    for _ in range(m - 1):
        out = Join(out, g)
    return out


def cartesian(g: Graph, h: Graph) -> Cartesian:
    return Cartesian(g, h)


def explicit(matrix) -> Explicit:
    return Explicit(np.asarray(matrix))


def hypercube(d: int) -> Graph:
    if d < 1:
        raise GraphError("hypercube dimension must be >= 1")
    q = make_path(2)
    for _ in range(d - 1):
        q = cartesian(make_path(2), q)
    return q


def regular_degree(g: Graph) -> int | None:
    """Degree if g is regular, else None (decided structurally where possible)."""
    if isinstance(g, Circulant):
        return g.degree
    if isinstance(g, Path):
        return g.m - 1 if g.m <= 2 else None
    if isinstance(g, Join):
        k, ell = regular_degree(g.left), regular_degree(g.right)
        if k is None or ell is None:
            return None
        if k + g.right.order != ell + g.left.order:
            return None
        return k + g.right.order
    if isinstance(g, Cartesian):
        k, ell = regular_degree(g.left), regular_degree(g.right)
        return None if k is None or ell is None else k + ell
    degs = g.matrix.sum(axis=1)
    return int(degs[0]) if np.all(degs == degs[0]) else None


def _realize(g: Graph) -> np.ndarray:
    if isinstance(g, Circulant):
        row = g.connection.first_row()
        idx = (np.arange(g.n)[None, :] - np.arange(g.n)[:, None]) % g.n
        return row[idx]
    if isinstance(g, Path):
        a = np.zeros((g.m, g.m), dtype=np.int8)
        i = np.arange(g.m - 1)
        a[i, i + 1] = a[i + 1, i] = 1
        return a
    if isinstance(g, Join):
        a, b = _realize(g.left), _realize(g.right)
        out = np.ones((a.shape[0] + b.shape[0],) * 2, dtype=np.int8)
        out[: a.shape[0], : a.shape[0]] = a
        out[a.shape[0]:, a.shape[0]:] = b
        return out
    if isinstance(g, Cartesian):
        a, b = _realize(g.left), _realize(g.right)
        eye_a = np.eye(a.shape[0], dtype=np.int8)
        eye_b = np.eye(b.shape[0], dtype=np.int8)
        return np.kron(a, eye_b) + np.kron(eye_a, b)
    if isinstance(g, Explicit):
        return g.matrix.copy()
    raise TypeError(f"not a graph: {g!r}")


def adjacency(g: Graph, cap: int | None = None) -> np.ndarray:
    """Dense symmetric 0/1 adjacency matrix of ``g``."""
    cap = size_cap() if cap is None else cap
    if g.order > cap:
        raise SizeCapError(f"order {g.order} exceeds the size cap {cap}")
    a = _realize(g)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Diagnostics:
    ok: bool
    messages: tuple[str, ...] = ()


def validate(g: Graph, require_connected: bool = False) -> Diagnostics:
    """Check structural invariants; never raises on a bad graph."""
    msgs = []
    for c in _circulants(g):
        s = set(c.connection.elements)
        missing = sorted(d for d in s if (c.n - d) not in s)
        if missing:
            msgs.append(f"circ({c.n}): connection set not closed under negation: {missing}")
        if 0 in s:
            msgs.append(f"circ({c.n}): contains a self-loop")
    if require_connected:
        if isinstance(g, Circulant):
            d = g.connection.gcd()
            if d != 1:
                msgs.append(f"circ({g.n}) is disconnected: gcd(n, S) = {d}")
        elif not _connected(g):
            msgs.append("graph is disconnected")
    return Diagnostics(not msgs, tuple(msgs))


def _circulants(g: Graph):
    if isinstance(g, Circulant):
        yield g
    elif isinstance(g, (Join, Cartesian)):
        yield from _circulants(g.left)
        yield from _circulants(g.right)


def _connected(g: Graph) -> bool:
    a = adjacency(g)
    n = a.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(a[u] & ~seen):
            seen[v] = True
            stack.append(int(v))
    return bool(seen.all())
