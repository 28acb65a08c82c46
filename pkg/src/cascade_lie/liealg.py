"""Nilpotent Lie algebras over Q with a layered basis.

Three families are built here: strictly upper-triangular matrices, the
nilradical spanned by the positive root vectors of a split form (Chevalley
constants), and the complexified nilradicals of two real forms given by a
zero-set on the Dynkin diagram (sl(n,H) and the E6 form with Cayley-plane
restricted roots).

Every algebra carries ``layers`` m_r and ``centers`` z_r ⊂ m_r as tuples of
basis indices; ``complements`` v_r are the rest of each layer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

from .cascade import Cascade, compute_layers, kostant_cascade
from .exact import fmt_q, parse_q, rank
from .report import VerificationReport
from .rootsys import (
    RestrictedSystem,
    Root,
    RootSystem,
    add,
    bilinear,
    is_root,
    neg,
    restrict,
    sub,
)

Vector = list[Q]
Structure = dict[tuple[int, int], dict[int, Q]]


@dataclass(frozen=True, eq=False)
class NilpotentAlgebra:
    """Structure constants ``sc[(i, j)] = {k: c}`` for i < j, meaning
    [x_i, x_j] = Σ c x_k.  Missing keys are zero brackets."""

    labels: tuple[str, ...]
    sc: Structure = field(repr=False)
    layers: tuple[tuple[int, ...], ...]
    centers: tuple[tuple[int, ...], ...]
    roots: tuple[Root, ...] | None = field(default=None, repr=False)
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def complements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(i for i in layer if i not in set(z)) for layer, z in zip(self.layers, self.centers)
        )

    @property
    def v_indices(self) -> frozenset[int]:
        return frozenset(i for v in self.complements for i in v)

    @property
    def s_indices(self) -> tuple[int, ...]:
        return tuple(i for z in self.centers for i in z)

    def d(self, r: int) -> int:
        """d_r = ½ dim v_r (r is 1-based)."""
        return len(self.complements[r - 1]) // 2

    def index(self, label: str) -> int:
        return self.labels.index(label)

    @cached_property
    def _table(self) -> dict[tuple[int, int], dict[int, Q]]:
        out = {}
        for (i, j), vec in self.sc.items():
            out[(i, j)] = vec
            out[(j, i)] = {k: -c for k, c in vec.items()}
        return out

    def bracket_basis(self, i: int, j: int) -> dict[int, Q]:
        return self._table.get((i, j), {})

    def with_layers(
        self, layers: Sequence[Sequence[int]], centers: Sequence[Sequence[int]]
    ) -> "NilpotentAlgebra":
        """Same brackets, different layer bookkeeping (for negative controls)."""
        return NilpotentAlgebra(
            self.labels,
            self.sc,
            tuple(map(tuple, layers)),
            tuple(map(tuple, centers)),
            self.roots,
            self.name,
        )

    def with_structure(self, sc: Structure) -> "NilpotentAlgebra":
        return NilpotentAlgebra(self.labels, sc, self.layers, self.centers, self.roots, self.name)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        sc = [
            [i, j, [[k, fmt_q(c)] for k, c in sorted(vec.items())]]
            for (i, j), vec in sorted(self.sc.items())
            if vec
        ]
        return {
            "basis": list(self.labels),
            "sc": sc,
            "layers": [list(x) for x in self.layers],
            "centers": [list(x) for x in self.centers],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict | str) -> "NilpotentAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        sc = {}
        for i, j, vec in data["sc"]:
            if i >= j:
                raise ValueError(f"structure constant key ({i}, {j}) must have i < j")
            sc[(i, j)] = {k: parse_q(c) for k, c in vec}
        return cls(
            labels=tuple(data["basis"]),
            sc=sc,
            layers=tuple(tuple(x) for x in data["layers"]),
            centers=tuple(tuple(x) for x in data["centers"]),
        )


def bracket(alg: NilpotentAlgebra, x: Sequence, y: Sequence) -> Vector:
    """Bilinear extension of the structure constants to coefficient vectors."""
    if len(x) != alg.dim or len(y) != alg.dim:
        raise ValueError(f"vectors must have length {alg.dim}, got {len(x)} and {len(y)}")
    out = [Q(0)] * alg.dim
    xs = [(i, Q(a)) for i, a in enumerate(x) if a]
    ys = [(j, Q(b)) for j, b in enumerate(y) if b]
    for i, a in xs:
        for j, b in ys:
            for k, c in alg.bracket_basis(i, j).items():
                out[k] += a * b * c
    return out


def basis_vector(alg: NilpotentAlgebra, i: int) -> Vector:
    v = [Q(0)] * alg.dim
    v[i] = Q(1)
    return v


def _combine(alg: NilpotentAlgebra, vec: dict[int, Q], j: int) -> dict[int, Q]:
    """[Σ vec_k x_k, x_j] as a sparse dict."""
    out: dict[int, Q] = {}
    for k, a in vec.items():
        for m, c in alg.bracket_basis(k, j).items():
            out[m] = out.get(m, Q(0)) + a * c
    return {m: c for m, c in out.items() if c}


def jacobi_defect(alg: NilpotentAlgebra, i: int, j: int, k: int) -> dict[int, Q]:
    """[[x_i,x_j],x_k] + [[x_j,x_k],x_i] + [[x_k,x_i],x_j]."""
    total: dict[int, Q] = {}
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for m, v in _combine(alg, alg.bracket_basis(a, b), c).items():
            total[m] = total.get(m, Q(0)) + v
    return {m: v for m, v in total.items() if v}


def verify_jacobi(alg: NilpotentAlgebra) -> VerificationReport:
    report = VerificationReport(f"Jacobi {alg.name or alg.dim}")
    asym = [(i, j) for (i, j) in alg.sc if i >= j]
    report.add("structure constants stored for i < j only", not asym, f"bad keys {asym[:3]}")
    witness = None
    n = alg.dim
    # only triples where some bracket is nonzero can fail
    nonzero = {i: set() for i in range(n)}
    for i, j in alg.sc:
        nonzero[i].add(j)
        nonzero[j].add(i)
    for i, j, k in combinations(range(n), 3):
        if not (j in nonzero[i] or k in nonzero[j] or i in nonzero[k]):
            continue
        defect = jacobi_defect(alg, i, j, k)
        if defect:
            witness = (alg.labels[i], alg.labels[j], alg.labels[k])
            break
    report.add("Jacobi identity on all basis triples", witness is None, f"witness {witness}")
    return report


# subspace bookkeeping ---------------------------------------------------------


class _Span:
    """Incrementally maintained row-echelon basis of a subspace of Q^n."""

    def __init__(self) -> None:
        self.rows: dict[int, dict[int, Q]] = {}

    def reduce(self, vec: dict[int, Q]) -> dict[int, Q]:
        vec = dict(vec)
        while vec:
            p = min(vec)
            row = self.rows.get(p)
            if row is None:
                return vec
            f = vec[p] / row[p]
            for k, c in row.items():
                v = vec.get(k, Q(0)) - f * c
                if v:
                    vec[k] = v
                else:
                    vec.pop(k, None)
        return vec

    def insert(self, vec: dict[int, Q]) -> bool:
        vec = self.reduce(vec)
        if not vec:
            return False
        self.rows[min(vec)] = vec
        return True

    def __len__(self) -> int:
        return len(self.rows)


def lower_central_series(alg: NilpotentAlgebra) -> list[int]:
    """Dimensions of n = C¹ ⊃ C² ⊃ … down to the first repeated dimension."""
    dims = [alg.dim]
    current = [{i: Q(1)} for i in range(alg.dim)]
    while current:
        span = _Span()
        for vec in current:
            for j in range(alg.dim):
                w = _combine(alg, vec, j)
                if w:
                    span.insert(w)
        dims.append(len(span))
        if len(span) == dims[-2]:
            break
        current = [span.rows[p] for p in sorted(span.rows)]
    return dims


def is_nilpotent(alg: NilpotentAlgebra) -> bool:
    return lower_central_series(alg)[-1] == 0


def verify_setup(alg: NilpotentAlgebra) -> VerificationReport:
    """Structure-constant form of the layer conditions:

    (i) n_r = m_1 + … + m_r is an ideal, (ii) [m_r, z_s] = 0 for r > s,
    (iii) [m_r, m_s] ⊂ v for r > s, (iv) z_r is central in m_r and
    [v_r, v_r] ⊂ z_r + v.
    """
    report = VerificationReport(f"layer conditions {alg.name or alg.dim}")
    layers = [set(x) for x in alg.layers]
    centers = [set(x) for x in alg.centers]
    v = set(alg.v_indices)
    everything = set(range(alg.dim))
    covered = [i for layer in alg.layers for i in layer]
    report.add(
        "layers partition the basis",
        sorted(covered) == sorted(everything) and all(z <= m for z, m in zip(centers, layers)),
        f"{len(covered)} indices over {alg.dim}",
    )

    def supp(i: int, j: int) -> set[int]:
        return set(alg.bracket_basis(i, j))

    bad = None
    n_r: set[int] = set()
    for r, layer in enumerate(layers, start=1):
        n_r |= layer
        for x in everything:
            for y in n_r:
                if not supp(x, y) <= n_r:
                    bad = (r, alg.labels[x], alg.labels[y])
                    break
            if bad:
                break
        if bad:
            break
    report.add("(i) each n_r is an ideal", bad is None, f"witness {bad}")

    bad2 = bad3 = None
    for r, mr in enumerate(layers, start=1):
        for s in range(1, r):
            for x in mr:
                for y in centers[s - 1]:
                    if supp(x, y) and bad2 is None:
                        bad2 = (r, s, alg.labels[x], alg.labels[y])
                for y in layers[s - 1]:
                    if not supp(x, y) <= v and bad3 is None:
                        bad3 = (r, s, alg.labels[x], alg.labels[y])
    report.add("(ii) [m_r, z_s] = 0 for r > s", bad2 is None, f"witness {bad2}")
    report.add("(iii) [m_r, m_s] ⊂ v for r > s", bad3 is None, f"witness {bad3}")

    bad4 = None
    for r, (mr, zr) in enumerate(zip(layers, centers), start=1):
        vr = mr - zr
        for x in mr:
            for y in zr:
                if supp(x, y) and bad4 is None:
                    bad4 = (r, alg.labels[x], alg.labels[y])
        for x in vr:
            for y in vr:
                if not supp(x, y) <= zr | v and bad4 is None:
                    bad4 = (r, alg.labels[x], alg.labels[y])
    report.add("(iv) z_r central in m_r and [v_r, v_r] ⊂ z_r + v", bad4 is None, f"witness {bad4}")
    return report


def pairing_matrix(alg: NilpotentAlgebra, r: int, z_index: int | None = None) -> list[list[Q]]:
    """Matrix of (x, y) ↦ z-component of [x, y] on v_r.

    With ``z_index`` None the z_r-components are summed (λ = 1 on every basis
    element of z_r).
    """
    vr = alg.complements[r - 1]
    zs = alg.centers[r - 1] if z_index is None else (z_index,)
    return [[sum((alg.bracket_basis(i, j).get(k, Q(0)) for k in zs), Q(0)) for j in vr] for i in vr]


def pairing_rank(alg: NilpotentAlgebra, r: int) -> int:
    return rank(pairing_matrix(alg, r)) if alg.complements[r - 1] else 0


# Chevalley constants -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ConstantsTable:
    """N_{α,β} for positive roots α, β with α + β a root."""

    system: RootSystem
    values: dict[tuple[Root, Root], int] = field(repr=False)

    def __getitem__(self, key: tuple[Root, Root]) -> int:
        return self.values.get((tuple(key[0]), tuple(key[1])), 0)

    def __len__(self) -> int:
        return len(self.values)


def string_below(sys: RootSystem, alpha: Root, beta: Root) -> int:
    """p = max{k : β − kα is a root}."""
    p = 0
    while is_root(sys, sub(beta, tuple((p + 1) * c for c in alpha))):
        p += 1
    return p


def extraspecial_pairs(sys: RootSystem) -> dict[Root, tuple[Root, Root]]:
    """For each non-simple positive ξ the pair (α, ξ−α) with α earliest."""
    out = {}
    for xi in sys.positive_roots:
        for a in sys.positive_roots:
            b = sub(xi, a)
            if sys.is_positive_root(b):
                out[xi] = (a, b)
                break
    return out


@lru_cache(maxsize=None)
def chevalley_constants(sys: RootSystem) -> ConstantsTable:
    """Signs fixed by N = +(p+1) on extraspecial pairs; the rest follow from
    the four-root and three-root identities of a Chevalley basis."""
    if not sys.reduced:
        raise ValueError(f"{sys.label} is not reduced; Chevalley constants need a reduced system")
    pos: dict[tuple[Root, Root], int] = {}
    norm = {a: bilinear(sys, a, a) for a in sys.positive_roots}

    def length(a: Root) -> Q:
        return norm[a] if a in norm else norm[neg(a)]

    def N(a: Root, b: Root) -> Q:
        s = add(a, b)
        if not is_root(sys, s):
            return Q(0)
        a_pos, b_pos = sys.is_positive_root(a), sys.is_positive_root(b)
        if a_pos and b_pos:
            return Q(pos[(a, b)])
        if not a_pos and not b_pos:
            return -N(neg(a), neg(b))
        c = neg(s)  # a + b + c = 0
        if sys.is_positive_root(s):
            # c negative together with one of a, b
            if a_pos:  # b, c negative: N_{a,b}/(c,c) = N_{b,c}/(a,a)
                return length(c) / length(a) * N(b, c)
            return length(c) / length(b) * N(c, a)  # a, c negative
        # s negative, c positive: use the pair of positives among a, b, c
        if a_pos:  # a, c positive: N_{a,b}/(c,c) = N_{c,a}/(b,b)
            return length(c) / length(b) * N(c, a)
        return length(c) / length(a) * N(b, c)  # b, c positive

    extra = extraspecial_pairs(sys)
    for xi in sys.positive_roots:
        if xi not in extra:
            continue
        g, d = extra[xi]
        n_gd = string_below(sys, g, d) + 1
        pos[(g, d)] = n_gd
        pos[(d, g)] = -n_gd
        for a in sys.positive_roots:
            b = sub(xi, a)
            if not sys.is_positive_root(b) or (a, b) in pos:
                continue
            # four roots γ, δ, −α, −β summing to zero
            val = Q(0)
            t1 = sub(d, a)
            if is_root(sys, t1):
                val += N(d, neg(a)) * N(g, neg(b)) / length(t1)
            t2 = sub(g, a)
            if is_root(sys, t2):
                val += N(neg(a), g) * N(d, neg(b)) / length(t2)
            # N_{γδ} N_{−α,−β} / (ξ,ξ) + val = 0 and N_{−α,−β} = −N_{αβ}
            n_ab = val * norm[xi] / n_gd
            if n_ab.denominator != 1:
                raise ArithmeticError(f"non-integral constant for {a}, {b} in {sys.label}")
            pos[(a, b)] = int(n_ab)
            pos[(b, a)] = -int(n_ab)
    return ConstantsTable(sys, pos)


# constructions ---------------------------------------------------------------------


def _from_brackets(
    labels: Sequence[str],
    brackets: dict[tuple[int, int], dict[int, Q]],
    layers,
    centers,
    roots=None,
    name: str = "",
) -> NilpotentAlgebra:
    sc = {}
    for (i, j), vec in brackets.items():
        vec = {k: c for k, c in vec.items() if c}
        if not vec:
            continue
        if i < j:
            sc[(i, j)] = vec
        elif i > j and (j, i) not in brackets:
            sc[(j, i)] = {k: -c for k, c in vec.items()}
    return NilpotentAlgebra(
        tuple(labels),
        sc,
        tuple(map(tuple, layers)),
        tuple(map(tuple, centers)),
        tuple(roots) if roots is not None else None,
        name,
    )


def upper_label(i: int, j: int) -> str:
    return f"e({i},{j})"


def build_upper_triangular(ell: int) -> NilpotentAlgebra:
    """Strictly upper-triangular ℓ×ℓ real matrices with the layer filtration.

    m_r = span{e_{r,s}, e_{s,ℓ−r+1} : r < s < ℓ−r+1} + R e_{r,ℓ−r+1}; inside v_r
    the basis runs over the pairs (e_{r,s}, e_{s,ℓ−r+1}).
    """
    if not isinstance(ell, int) or ell < 2:
        raise ValueError(f"need ℓ >= 2, got {ell!r}")
    order: list[tuple[int, int]] = []
    layers, centers = [], []
    for r in range(1, ell // 2 + 1):
        top = ell - r + 1
        layer = []
        for s in range(r + 1, top):
            layer += [(r, s), (s, top)]
        layer.append((r, top))
        start = len(order)
        order += layer
        layers.append(range(start, len(order)))
        centers.append([len(order) - 1])
    pos = {p: k for k, p in enumerate(order)}
    brackets = {}
    for (i, j), a in pos.items():
        for (m, n), b in pos.items():
            if j == m and a < b:
                brackets[(a, b)] = {pos[(i, n)]: Q(1)}
            elif i == n and a < b:
                brackets[(a, b)] = {pos[(m, j)]: Q(-1)}
    roots = [tuple(int(i <= k + 1 < j) for k in range(ell - 1)) for i, j in order]
    return _from_brackets(
        [upper_label(i, j) for i, j in order], brackets, layers, centers, roots, f"upper-triangular {ell}"
    )


def root_label(alpha: Root) -> str:
    return "g(" + ",".join(map(str, alpha)) + ")"


def _layered_root_basis(pairs, betas) -> tuple[list[Root], list[range], list[list[int]]]:
    order: list[Root] = []
    layers, centers = [], []
    for layer_pairs, beta in zip(pairs, betas):
        start = len(order)
        for p in layer_pairs:
            order += list(p)
        order.append(beta)
        layers.append(range(start, len(order)))
        centers.append([len(order) - 1])
    return order, layers, centers


def _root_brackets(sys: RootSystem, order: Sequence[Root]) -> dict[tuple[int, int], dict[int, Q]]:
    table = chevalley_constants(sys)
    pos = {a: k for k, a in enumerate(order)}
    brackets = {}
    for a, i in pos.items():
        for b, j in pos.items():
            if i < j:
                s = add(a, b)
                if s in pos:
                    brackets[(i, j)] = {pos[s]: Q(table[(a, b)])}
    return brackets


def build_split_nilradical(sys: RootSystem, cascade: Cascade | None = None) -> NilpotentAlgebra:
    """Span of the positive root vectors with [e_α, e_β] = N_{α,β} e_{α+β}."""
    if not sys.reduced:
        raise ValueError(f"{sys.label} is not reduced")
    cascade = cascade or kostant_cascade(sys)
    dec = compute_layers(sys, cascade)
    order, layers, centers = _layered_root_basis(dec.pairs, cascade.betas)
    return _from_brackets(
        [root_label(a) for a in order],
        _root_brackets(sys, order),
        layers,
        centers,
        order,
        f"split {sys.label}",
    )


def supported_restriction(sys: RootSystem, zero_set) -> str | None:
    """Name of the supported involution-free pattern, or None."""
    zero = frozenset(zero_set)
    if sys.type_label == "A" and sys.rank % 2 == 1 and sys.rank >= 3:
        if zero == frozenset(range(1, sys.rank + 1, 2)):
            return f"sl({(sys.rank + 1) // 2},H)"
    if sys.label == "E6" and zero == frozenset({2, 3, 4, 5}):
        return "e6,F4"
    return None


def build_restricted_nilradical(sys: RootSystem, zero_set) -> NilpotentAlgebra:
    """Nilradical for a real form whose Satake diagram has no arrows.

    One generator per ambient positive root with nonzero restriction; z_r is
    the fiber over the restricted β_r and v_r the fibers over Δ⁺_r.
    """
    name = supported_restriction(sys, zero_set)
    if name is None:
        raise ValueError(
            f"unsupported pattern {sorted(zero_set)} on {sys.label}; only odd indices on "
            "A_{2n-1} and {2,3,4,5} on E6 are implemented"
        )
    rs = restrict(sys, zero_set)
    rsys = rs.root_system
    cascade = kostant_cascade(rsys)
    dec = compute_layers(rsys, cascade)
    order: list[Root] = []
    layers, centers = [], []
    for layer_pairs, beta in zip(dec.pairs, cascade.betas):
        start = len(order)
        for p in layer_pairs:
            for rho in p:
                order += list(rs.fibers[rho])
        z_start = len(order)
        order += list(rs.fibers[beta])
        layers.append(range(start, len(order)))
        centers.append(range(z_start, len(order)))
    return _from_brackets(
        [root_label(a) for a in order],
        _root_brackets(sys, order),
        layers,
        centers,
        order,
        name,
    )

