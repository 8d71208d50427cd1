"""Linear primitive recursion on tensor powers of V.

A :class:`MultiMap` of arity k is a linear map V^{(x)k} -> V given on basis
tuples ``(n_1, ..., n_k)``. Maps are combined with :func:`primrec` and
:func:`superpose`; :func:`projection` and :func:`lift_setmap` provide the
atoms.

Convention: the recursion variable is the *first* tensor slot, so
``primrec(g, h)`` satisfies

    phi(e_0 (x) e_ns)     = g(e_ns)
    phi(e_{n+1} (x) e_ns) = h(e_ns (x) e_n (x) phi(e_n (x) e_ns))

with h linear in its last argument.
"""

from __future__ import annotations

import itertools
import json
import threading
from typing import Callable, Iterable, Mapping, Sequence

from .freemodule import Vector, basis
from .ring import QQ, Ring, RingMismatch

__all__ = [
    "ArityError",
    "Tensor",
    "tensor",
    "MultiMap",
    "tensor_apply",
    "primrec",
    "superpose",
    "projection",
    "lift_setmap",
]


class ArityError(ValueError):
    pass


class Tensor:
    """Element of V^{(x)k}: finitely supported map from k-tuples to coefficients."""

    __slots__ = ("ring", "arity", "_coeffs")

    def __init__(self, ring: Ring, arity: int, coeffs: Mapping[tuple, object] | Iterable = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        d: dict[tuple, object] = {}
        for idx, c in items:
            idx = tuple(idx)
            if len(idx) != arity or any(i < 0 for i in idx):
                raise ArityError(f"bad index {idx} for arity {arity}")
            c = ring(c)
            if idx in d:
                c = d[idx] + c
            if c:
                d[idx] = c
            else:
                d.pop(idx, None)
        self.ring = ring
        self.arity = arity
        self._coeffs = d

    @classmethod
    def basis(cls, *idx: int, ring: Ring = QQ) -> Tensor:
        """e_{i_1} (x) ... (x) e_{i_k}."""
        return cls(ring, len(idx), {idx: 1})

    @classmethod
    def scalar(cls, value, ring: Ring = QQ) -> Tensor:
        return cls(ring, 0, {(): value})

    def items(self):
        return sorted(self._coeffs.items())

    def __eq__(self, other):
        if isinstance(other, Tensor):
            return (self.ring, self.arity, self._coeffs) == (other.ring, other.arity, other._coeffs)
        return NotImplemented

    def __add__(self, other: Tensor) -> Tensor:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        if self.arity != other.arity:
            raise ArityError(f"arity {self.arity} vs {other.arity}")
        return Tensor(self.ring, self.arity, itertools.chain(self.items(), other.items()))

    def scale(self, alpha) -> Tensor:
        a = self.ring(alpha)
        return Tensor(self.ring, self.arity, [(i, a * c) for i, c in self.items()])

    __rmul__ = scale

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "coeffs": [{"index": list(i), "value": str(c)} for i, c in self.items()],
        }

    @classmethod
    def from_json(cls, ring: Ring, data) -> Tensor:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(ring, int(data["arity"]), [(e["index"], ring(str(e["value"]))) for e in data["coeffs"]])


def tensor(*vectors: Vector) -> Tensor:
    """v_1 (x) ... (x) v_k expanded over basis tuples."""
    if not vectors:
        raise ArityError("use Tensor.scalar for arity 0")
    ring = vectors[0].ring
    for v in vectors:
        if v.ring != ring:
            raise RingMismatch(f"{v.ring} vs {ring}")
    terms = []
    for combo in itertools.product(*(v.items() for v in vectors)):
        c = ring.one
        for _, a in combo:
            c = c * a
        terms.append((tuple(n for n, _ in combo), c))
    return Tensor(ring, len(vectors), terms)


class MultiMap:
    """Linear map V^{(x)arity} -> V defined by a memoized basis oracle."""

    def __init__(self, ring: Ring, arity: int, oracle: Callable[..., Vector], name: str | None = None):
        self.ring = ring
        self.arity = arity
        self._oracle = oracle
        self._cache: dict[tuple, Vector] = {}
        self.name = name

    def at(self, *idx: int) -> Vector:
        """Image of the basis tensor e_{idx[0]} (x) ... ."""
        if len(idx) != self.arity:
            raise ArityError(f"{self.name} has arity {self.arity}, got {len(idx)} indices")
        try:
            return self._cache[idx]
        except KeyError:
            pass
        v = self._oracle(*idx)
        if not isinstance(v, Vector) or v.ring != self.ring:
            raise TypeError(f"oracle of {self.name} returned {v!r} at {idx}")
        return self._cache.setdefault(idx, v)

    def __call__(self, t: Tensor) -> Vector:
        return tensor_apply(self, t)

    def apply_last(self, prefix: Sequence[int], v: Vector) -> Vector:
        """Image of e_prefix (x) v, by linearity in the last slot."""
        acc = Vector.zero(self.ring)
        for p, c in v.items():
            acc = acc + self.at(*prefix, p).scale(c)
        return acc

    def __repr__(self):
        return f"MultiMap({self.name or '<anonymous>'}, arity={self.arity})"


def tensor_apply(m: MultiMap, t: Tensor) -> Vector:
    if t.arity != m.arity:
        raise ArityError(f"{m.name} has arity {m.arity}, tensor has arity {t.arity}")
    if t.ring != m.ring:
        raise RingMismatch(f"{t.ring} vs {m.ring}")
    acc = Vector.zero(m.ring)
    for idx, c in t.items():
        acc = acc + m.at(*idx).scale(c)
    return acc


def primrec(g: MultiMap, h: MultiMap) -> MultiMap:
    """The unique linear map R(g, h) of arity k+1 built from g (arity k) and h (arity k+2).

    Evaluation at (n, ns) walks n = 0, 1, ... iteratively, reusing memoized
    values, so deep recursion never hits the interpreter's stack limit.
    """
    k = g.arity
    if h.arity != k + 2:
        raise ArityError(f"step map needs arity {k + 2}, got {h.arity}")
    if g.ring != h.ring:
        raise RingMismatch(f"{g.ring} vs {h.ring}")
    values: dict[tuple, Vector] = {}
    lock = threading.Lock()

    def oracle(n: int, *ns: int) -> Vector:
        with lock:
            j = n
            while j > 0 and (j, *ns) not in values:
                j -= 1
            if (j, *ns) not in values:
                values[(0, *ns)] = g.at(*ns)
            while j < n:
                values[(j + 1, *ns)] = h.apply_last((*ns, j), values[(j, *ns)])
                j += 1
            return values[(n, *ns)]

    return MultiMap(g.ring, k + 1, oracle, name=f"R({g.name}, {h.name})")


def superpose(f: MultiMap, gs: Sequence[MultiMap]) -> MultiMap:
    """f(g_1 (x) ... (x) g_m), evaluated on basis tuples and expanded multilinearly."""
    if len(gs) != f.arity:
        raise ArityError(f"{f.name} has arity {f.arity}, got {len(gs)} maps")
    if not gs:
        raise ArityError("superposition needs at least one inner map")
    n = gs[0].arity
    for g in gs:
        if g.arity != n:
            raise ArityError(f"inner maps have mixed arities {[g.arity for g in gs]}")
        if g.ring != f.ring:
            raise RingMismatch(f"{g.ring} vs {f.ring}")

    def oracle(*idx: int) -> Vector:
        return tensor_apply(f, tensor(*(g.at(*idx) for g in gs)))

    names = ", ".join(str(g.name) for g in gs)
    return MultiMap(f.ring, n, oracle, name=f"{f.name}({names})")


def projection(i: int, n: int, ring: Ring = QQ) -> MultiMap:
    """pi_i^(n): e_{j_1} (x) ... (x) e_{j_n} -> e_{j_i}, with 1 <= i <= n."""
    if not 1 <= i <= n:
        raise ArityError(f"projection index {i} out of range 1..{n}")
    return MultiMap(ring, n, lambda *idx: basis(idx[i - 1], ring), name=f"pi_{i}^({n})")


def lift_setmap(f: Callable[..., int], arity: int, ring: Ring = QQ, name: str | None = None) -> MultiMap:
    """Linear extension of a map N^arity -> N: e_i... -> e_{f(i...)}."""

    def oracle(*idx: int) -> Vector:
        return basis(f(*idx), ring)

    return MultiMap(ring, arity, oracle, name=name or getattr(f, "__name__", "f"))
