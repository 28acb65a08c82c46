"""Finite root systems in simple-root coordinates.

Roots are plain integer tuples over the simple roots, in Bourbaki order
(``(3, 2)`` is 3ψ1 + 2ψ2 in G2).  The invariant form is exact and normalized
so that the longest roots have squared length 2.

Simple-root indices in the public API (``zero_set`` of :func:`restrict`) are
1-based, matching the Bourbaki labels ψ1, ..., ψn.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import exact

Root = tuple[int, ...]

TYPES = ("A", "B", "C", "D", "E", "F", "G", "BC")


@dataclass(frozen=True, eq=False)
class RootSystem:
    type_label: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Q, ...], ...]
    positive_roots: tuple[Root, ...]

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(unit(self.rank, i) for i in range(self.rank))

    @property
    def label(self) -> str:
        return f"{self.type_label}{self.rank}" if self.type_label in TYPES else self.type_label

    @cached_property
    def _positive_set(self) -> frozenset[Root]:
        return frozenset(self.positive_roots)

    @cached_property
    def _index(self) -> dict[Root, int]:
        return {a: i for i, a in enumerate(self.positive_roots)}

    def index(self, alpha: Root) -> int:
        """Position of a positive root in ``positive_roots``."""
        return self._index[tuple(alpha)]

    def is_positive_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self._positive_set

    @property
    def reduced(self) -> bool:
        return not any(self.is_positive_root(tuple(2 * c for c in a)) for a in self.positive_roots)

    def nonmultipliable(self) -> tuple[Root, ...]:
        """Positive roots α with 2α not a root."""
        return tuple(
            a for a in self.positive_roots if not self.is_positive_root(tuple(2 * c for c in a))
        )

    def __repr__(self) -> str:
        return f"RootSystem({self.label}, {len(self.positive_roots)} positive roots)"


def unit(n: int, i: int) -> Root:
    return tuple(int(j == i) for j in range(n))


def height(alpha: Sequence[int]) -> int:
    return sum(alpha)


def add(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Sequence[int]) -> Root:
    return tuple(-x for x in a)


def root_order_key(alpha: Sequence[int]) -> tuple:
    """Height first, then lexicographic with ψ1-heavy roots first."""
    return (height(alpha), tuple(-c for c in alpha))


def format_root(alpha: Sequence[int], symbol: str = "ψ") -> str:
    terms = []
    for i, c in enumerate(alpha, start=1):
        if c == 0:
            continue
        coef = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, f"{coef}{symbol}{i}"))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


# Dynkin data: (edges, squared lengths of simple roots).  Off-diagonal form
# entries on an edge are -max(len_i, len_j)/2, which covers single, double
# and triple bonds at once.
def _dynkin(type_label: str, n: int) -> tuple[list[tuple[int, int]], list[Q]]:
    chain = [(i, i + 1) for i in range(n - 1)]
    if type_label == "A":
        return chain, [Q(2)] * n
    if type_label == "B":
        return chain, [Q(2)] * (n - 1) + [Q(1)]
    if type_label == "C":
        return chain, [Q(1)] * (n - 1) + [Q(2)]
    if type_label == "BC":
        return chain, [Q(1)] * (n - 1) + [Q(1, 2)]
    if type_label == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)], [Q(2)] * n
    if type_label == "E":
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
        return edges, [Q(2)] * n
    if type_label == "F":
        return chain, [Q(2), Q(2), Q(1), Q(1)]
    if type_label == "G":
        return chain, [Q(2, 3), Q(2)]
    raise AssertionError(type_label)


def _check_type(type_label: str, rank: int) -> None:
    if type_label not in TYPES:
        raise ValueError(f"unknown root system type {type_label!r}; expected one of {TYPES}")
    if not isinstance(rank, int) or rank < 1:
        raise ValueError(f"rank must be a positive integer, got {rank!r}")
    minimum = {"A": 1, "B": 2, "C": 2, "D": 4, "BC": 1}
    if type_label in minimum and rank < minimum[type_label]:
        hint = " (D3 is A3; use type A)" if (type_label, rank) == ("D", 3) else ""
        raise ValueError(
            f"type {type_label} needs rank >= {minimum[type_label]}, got {rank}{hint}"
        )
    if type_label == "E" and not 6 <= rank <= 8:
        raise ValueError(f"type E exists only in ranks 6, 7, 8, got {rank}")
    if type_label == "F" and rank != 4:
        raise ValueError(f"type F exists only in rank 4, got {rank}")
    if type_label == "G" and rank != 2:
        raise ValueError(f"type G exists only in rank 2, got {rank}")


def _closure(gram: Sequence[Sequence[Q]]) -> list[Root]:
    """Positive roots of the reduced system with this Gram matrix, by root strings."""
    n = len(gram)
    simple = [unit(n, i) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for a in layer:
            for i in range(n):
                if a == simple[i]:
                    continue
                # p = how far the ψi-string extends downward from a
                p = 0
                b = sub(a, simple[i])
                while b in found:
                    p += 1
                    b = sub(b, simple[i])
                pairing = 2 * _form(gram, a, simple[i]) / gram[i][i]
                q = p - pairing
                if q > 0:
                    c = add(a, simple[i])
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        layer = nxt
    return sorted(found, key=root_order_key)


def _form(gram: Sequence[Sequence[Q]], a: Sequence[int], b: Sequence[int]) -> Q:
    return sum((x * gram[i][j] * y for i, x in enumerate(a) if x for j, y in enumerate(b) if y), Q(0))


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Cartan data and positive roots for an irreducible (possibly BC) system."""
    type_label = type_label.upper()
    _check_type(type_label, rank)
    edges, lengths = _dynkin(type_label, rank)
    gram = [[Q(0)] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) / 2
    cartan = tuple(
        tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(rank)) for i in range(rank)
    )
    roots = _closure(gram)
    if type_label == "BC":
        shortest = min(lengths)
        roots += [tuple(2 * c for c in a) for a in roots if _form(gram, a, a) == shortest]
        roots.sort(key=root_order_key)
    return RootSystem(
        type_label=type_label,
        rank=rank,
        cartan=cartan,
        gram=tuple(tuple(row) for row in gram),
        positive_roots=tuple(roots),
    )


def classical_count(type_label: str, rank: int) -> int:
    """Number of positive roots from the closed-form formulas."""
    n = rank
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "BC": n * n + n,
        "G": 6,
        "F": 24,
        "E": {6: 36, 7: 63, 8: 120}.get(n, -1),
    }[type_label]


def _check_vec(sys: RootSystem, v: Sequence[int]) -> None:
    if len(v) != sys.rank:
        raise ValueError(f"vector {tuple(v)} has length {len(v)}, system has rank {sys.rank}")


def bilinear(sys: RootSystem, alpha: Sequence[int], beta: Sequence[int]) -> Q:
    _check_vec(sys, alpha)
    _check_vec(sys, beta)
    return _form(sys.gram, alpha, beta)


def is_root(sys: RootSystem, v: Sequence[int]) -> bool:
    _check_vec(sys, v)
    v = tuple(v)
    return sys.is_positive_root(v) or sys.is_positive_root(neg(v))


def reflect(sys: RootSystem, beta: Sequence[int], alpha: Sequence[int]) -> Root:
    """s_β(α) = α − (2⟨α,β⟩/⟨β,β⟩) β."""
    if not is_root(sys, beta):
        raise ValueError(f"cannot reflect in {tuple(beta)}: not a root of {sys.label}")
    _check_vec(sys, alpha)
    k = 2 * bilinear(sys, alpha, beta) / bilinear(sys, beta, beta)
    if k.denominator != 1:
        raise ValueError(f"{tuple(alpha)} is not in the root lattice of {sys.label}")
    return tuple(a - int(k) * b for a, b in zip(alpha, beta))


def strongly_orthogonal(sys: RootSystem, alpha: Sequence[int], beta: Sequence[int]) -> bool:
    return not is_root(sys, add(alpha, beta)) and not is_root(sys, sub(alpha, beta))


@dataclass(frozen=True, eq=False)
class RestrictedSystem:
    """Restriction of ``ambient`` to the span of the surviving simple roots.

    Coordinates of restricted roots are over the surviving simple indices, in
    increasing order.  Only correct for Satake diagrams without arrows; the
    caller is responsible for passing such a pattern.
    """

    ambient: RootSystem
    zero_set: frozenset[int]
    restricted_positive: tuple[Root, ...]
    fibers: dict[Root, tuple[Root, ...]] = field(repr=False)
    zero_roots: tuple[Root, ...] = field(repr=False)

    @property
    def surviving(self) -> tuple[int, ...]:
        """1-based simple indices that are not zeroed."""
        return tuple(i for i in range(1, self.ambient.rank + 1) if i not in self.zero_set)

    def restrict_root(self, alpha: Sequence[int]) -> Root:
        return tuple(alpha[i - 1] for i in self.surviving)

    @cached_property
    def root_system(self) -> RootSystem:
        """The restricted roots as a root system in their own coordinates.

        The form is the Schur complement of the ambient Gram matrix over the
        zeroed block (orthogonal projection away from the compact roots),
        rescaled so the longest restricted root has squared length 2.
        """
        g = self.ambient.gram
        keep = [i - 1 for i in self.surviving]
        drop = [i - 1 for i in sorted(self.zero_set)]
        if drop:
            gzz_inv = exact.inverse([[g[i][j] for j in drop] for i in drop])
            gkz = [[g[i][j] for j in drop] for i in keep]
            corr = exact.matmul(exact.matmul(gkz, gzz_inv), exact.transpose(gkz))
        else:
            corr = [[Q(0)] * len(keep) for _ in keep]
        gram = [[g[i][j] - corr[a][b] for b, j in enumerate(keep)] for a, i in enumerate(keep)]
        longest = max(_form(gram, r, r) for r in self.restricted_positive)
        scale = Q(2) / longest
        gram = [[x * scale for x in row] for row in gram]
        k = len(keep)
        cartan = tuple(
            tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(k)) for i in range(k)
        )
        zs = ",".join(str(i) for i in sorted(self.zero_set))
        return RootSystem(
            type_label=f"{self.ambient.label}/{{{zs}}}",
            rank=k,
            cartan=cartan,
            gram=tuple(tuple(row) for row in gram),
            positive_roots=self.restricted_positive,
        )


def restrict(sys: RootSystem, zero_set: Iterable[int]) -> RestrictedSystem:
    zero = frozenset(zero_set)
    if not zero <= set(range(1, sys.rank + 1)):
        raise ValueError(f"zero_set {sorted(zero)} must use 1-based indices in 1..{sys.rank}")
    if len(zero) == sys.rank:
        raise ValueError("zero_set may not contain every simple root")
    keep = [i - 1 for i in range(1, sys.rank + 1) if i not in zero]
    fibers: dict[Root, list[Root]] = {}
    zero_roots = []
    for a in sys.positive_roots:
        r = tuple(a[i] for i in keep)
        if any(r):
            fibers.setdefault(r, []).append(a)
        else:
            zero_roots.append(a)
    restricted = tuple(sorted(fibers, key=root_order_key))
    return RestrictedSystem(
        ambient=sys,
        zero_set=zero,
        restricted_positive=restricted,
        fibers={r: tuple(fibers[r]) for r in restricted},
        zero_roots=tuple(zero_roots),
    )
