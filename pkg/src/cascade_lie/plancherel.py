"""Pfaffians, the Plancherel density P(λ), formal degrees and multiplicities.

Coordinates of λ ∈ s* are the values λ(x_k) on the basis elements of the
centers z_1, …, z_m, concatenated in layer order.  The variable for the k-th
basis element of z_r is named ``l{r}_{k}``.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Mapping, Sequence

from . import exact
from .exact import fmt_q, parse_q
from .liealg import NilpotentAlgebra

Monomial = tuple[int, ...]
Poly = dict[Monomial, Q]

DEFAULT_SEED = 1729
SEED_ENV = "CASCADE_LIE_SEED"
SYMBOLIC_MAX_V = 16
SYMBOLIC_MAX_Z = 8


# numeric Pfaffian -----------------------------------------------------------------


def _check_skew(m: Sequence[Sequence]) -> list[list[Q]]:
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("Pfaffian needs a square matrix")
    if n % 2:
        raise ValueError(f"Pfaffian needs even dimension, got {n}")
    a = [[Q(x) for x in row] for row in m]
    for i in range(n):
        for j in range(i, n):
            if a[i][j] != -a[j][i]:
                raise ValueError(f"matrix is not antisymmetric at ({i}, {j})")
    return a


def pfaffian(m: Sequence[Sequence]) -> Q:
    """Exact Pfaffian by skew Schur-complement elimination."""
    a = _check_skew(m)
    n = len(a)
    result = Q(1)
    idx = list(range(n))
    while idx:
        k = idx[0]
        piv = next((j for j in idx[1:] if a[k][j] != 0), None)
        if piv is None:
            return Q(0)
        # move piv next to k; a transposition of basis vectors flips the sign
        pos = idx.index(piv)
        if pos != 1:
            idx[1], idx[pos] = idx[pos], idx[1]
            result = -result
        k1 = idx[1]
        p = a[k][k1]
        result *= p
        rest = idx[2:]
        for i in rest:
            aik, aik1 = a[i][k], a[i][k1]
            if not aik and not aik1:
                continue
            for j in rest:
                delta = aik * a[k1][j] - aik1 * a[k][j]
                if delta:
                    a[i][j] += delta / p
        idx = rest
    return result


# polynomials ------------------------------------------------------------------------


def _padd(x: Poly, y: Poly, scale: Q = Q(1)) -> Poly:
    out = dict(x)
    for mono, c in y.items():
        v = out.get(mono, Q(0)) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def _pmul(x: Poly, y: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            mono = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(mono, Q(0)) + c1 * c2
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


@dataclass(frozen=True, eq=False)
class PfaffianPolynomial:
    variables: tuple[str, ...]
    terms: Poly = field(repr=False)

    @classmethod
    def constant(cls, variables: Sequence[str], value=1) -> "PfaffianPolynomial":
        v = Q(value)
        return cls(tuple(variables), {(0,) * len(variables): v} if v else {})

    def __call__(self, values: Sequence | Mapping[str, object]) -> Q:
        return self.evaluate(values)

    def evaluate(self, values: Sequence | Mapping[str, object]) -> Q:
        if isinstance(values, Mapping):
            values = [values[v] for v in self.variables]
        if len(values) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(values)}")
        xs = [Q(x) for x in values]
        total = Q(0)
        for mono, c in self.terms.items():
            t = c
            for x, e in zip(xs, mono):
                if e:
                    t *= x**e
            total += t
        return total

    @property
    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> int:
        return max(self.degrees, default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, other: "PfaffianPolynomial") -> "PfaffianPolynomial":
        """Product of polynomials in disjoint variable sets."""
        if set(self.variables) & set(other.variables):
            raise ValueError("product needs disjoint variable sets")
        terms = {m1 + m2: c1 * c2 for m1, c1 in self.terms.items() for m2, c2 in other.terms.items()}
        return PfaffianPolynomial(self.variables + other.variables, terms)

    def __neg__(self) -> "PfaffianPolynomial":
        return PfaffianPolynomial(self.variables, {m: -c for m, c in self.terms.items()})

    def same_up_to_sign(self, other: "PfaffianPolynomial") -> bool:
        if self.variables != other.variables:
            return False
        return self.terms == other.terms or self.terms == (-other).terms

    def to_json(self) -> dict:
        return {
            "vars": list(self.variables),
            "terms": [[list(m), fmt_q(c)] for m, c in sorted(self.terms.items())],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict | str) -> "PfaffianPolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["vars"]), {tuple(m): parse_q(c) for m, c in data["terms"]})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            factors = [
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, mono) if e
            ]
            coef = str(c)
            if factors and c in (1, -1):
                coef = "-" if c == -1 else ""
                parts.append(coef + "*".join(factors))
            else:
                parts.append("*".join([coef] + factors))
        return " + ".join(parts).replace("+ -", "- ")


# b_λ and layer Pfaffians ---------------------------------------------------------------


def layer_variables(alg: NilpotentAlgebra, r: int) -> tuple[str, ...]:
    return tuple(f"l{r}_{k}" for k in range(1, len(alg.centers[r - 1]) + 1))


def all_variables(alg: NilpotentAlgebra) -> tuple[str, ...]:
    return tuple(v for r in range(1, len(alg.layers) + 1) for v in layer_variables(alg, r))


def _check_r(alg: NilpotentAlgebra, r: int) -> None:
    if not isinstance(r, int) or not 1 <= r <= len(alg.layers):
        raise ValueError(f"layer index {r!r} out of range 1..{len(alg.layers)}")


def b_matrix(alg: NilpotentAlgebra, r: int, lam: Sequence | None = None):
    """Matrix of b_λ(x, y) = λ([x, y]) on the basis of v_r.

    With ``lam`` a sequence of rationals (values on the z_r basis) the result
    is a rational matrix.  With ``lam`` None every entry is a linear form,
    returned as a dict {variable position: coefficient}.
    """
    _check_r(alg, r)
    zr = alg.centers[r - 1]
    vr = alg.complements[r - 1]
    if lam is not None:
        lam = [Q(x) for x in lam]
        if len(lam) != len(zr):
            raise ValueError(f"λ_{r} needs {len(zr)} coordinates, got {len(lam)}")
    zpos = {k: p for p, k in enumerate(zr)}
    out = []
    for i in vr:
        row = []
        for j in vr:
            comps = {zpos[k]: c for k, c in alg.bracket_basis(i, j).items() if k in zpos}
            if lam is None:
                row.append(comps)
            else:
                row.append(sum((lam[p] * c for p, c in comps.items()), Q(0)))
        out.append(row)
    return out


def symbolic_pfaffian(entries: Sequence[Sequence[Mapping[int, Q]]], nvars: int) -> Poly:
    """Pfaffian of a matrix of linear forms, by memoized first-row expansion."""
    n = len(entries)
    if n % 2:
        return {}
    lin = [
        [{tuple(int(k == p) for k in range(nvars)): Q(c) for p, c in entries[i][j].items() if c} for j in range(n)]
        for i in range(n)
    ]
    memo: dict[int, Poly] = {0: {(0,) * nvars: Q(1)}}

    def pf(mask: int) -> Poly:
        if mask in memo:
            return memo[mask]
        rem = [i for i in range(n) if mask >> i & 1]
        i = rem[0]
        total: Poly = {}
        for pos, j in enumerate(rem[1:]):
            a = lin[i][j]
            if not a:
                continue
            sub = pf(mask & ~(1 << i) & ~(1 << j))
            if not sub:
                continue
            total = _padd(total, _pmul(a, sub), Q(-1) if pos % 2 else Q(1))
        memo[mask] = total
        return total

    return pf((1 << n) - 1)


def layer_pfaffian(alg: NilpotentAlgebra, r: int) -> PfaffianPolynomial:
    """Pf(b_{λ_r}) as a polynomial in the coordinates of λ_r."""
    _check_r(alg, r)
    names = layer_variables(alg, r)
    dz, dv = len(alg.centers[r - 1]), len(alg.complements[r - 1])
    if dv == 0:
        return PfaffianPolynomial.constant(names)
    if dz == 1:
        c = pfaffian(b_matrix(alg, r, [1]))
        return PfaffianPolynomial(names, {(dv // 2,): c} if c else {})
    if dv > SYMBOLIC_MAX_V or dz > SYMBOLIC_MAX_Z:
        raise ValueError(
            f"layer {r} has dim v = {dv}, dim z = {dz}: symbolic expansion is over budget "
            f"(dim v <= {SYMBOLIC_MAX_V} and dim z <= {SYMBOLIC_MAX_Z}); use "
            "find_nondegenerate_lambda for an exact numeric witness instead"
        )
    return PfaffianPolynomial(names, symbolic_pfaffian(b_matrix(alg, r), dz))


def plancherel_polynomial(alg: NilpotentAlgebra) -> PfaffianPolynomial:
    """P(λ) = Pf(b_{λ_1}) ⋯ Pf(b_{λ_m})."""
    out = PfaffianPolynomial.constant(())
    for r in range(1, len(alg.layers) + 1):
        out = out * layer_pfaffian(alg, r)
    return out


def plancherel_constant(alg: NilpotentAlgebra) -> int:
    """c = 2^{d_1+⋯+d_m} d_1! ⋯ d_m!."""
    ds = [alg.d(r) for r in range(1, len(alg.layers) + 1)]
    return 2 ** sum(ds) * math.prod(math.factorial(d) for d in ds)


def split_lambda(alg: NilpotentAlgebra, lam: Sequence | Mapping[str, object]) -> list[list[Q]]:
    """Cut a λ on s into its blocks λ_1, …, λ_m."""
    if isinstance(lam, Mapping):
        lam = [lam[v] for v in all_variables(alg)]
    lam = [Q(x) for x in lam]
    if len(lam) != len(alg.s_indices):
        raise ValueError(f"λ needs {len(alg.s_indices)} coordinates, got {len(lam)}")
    out, k = [], 0
    for z in alg.centers:
        out.append(lam[k : k + len(z)])
        k += len(z)
    return out


def layer_factors(alg: NilpotentAlgebra, lam) -> list[Q]:
    """The numbers Pf(b_{λ_r}), computed exactly without symbolic expansion."""
    return [
        pfaffian(b_matrix(alg, r, block)) for r, block in enumerate(split_lambda(alg, lam), start=1)
    ]


def formal_degree(alg: NilpotentAlgebra, lam) -> Q:
    """|P(λ)|."""
    return abs(math.prod(layer_factors(alg, lam), start=Q(1)))


def is_stepwise_si(alg: NilpotentAlgebra, lam) -> bool:
    return all(f != 0 for f in layer_factors(alg, lam))


# nondegeneracy witnesses ------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    layer: int
    lam: tuple[Q, ...]
    pfaffian: Q
    pattern: str
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {
            "layer": self.layer,
            "lambda": [fmt_q(x) for x in self.lam],
            "pfaffian": fmt_q(self.pfaffian),
            "pattern": self.pattern,
            "trials": self.trials,
            "seed": self.seed,
        }


def witness_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def sparse_patterns(alg: NilpotentAlgebra, r: int) -> list[tuple[str, list[Q]]]:
    """Candidate λ_r supported on the extreme elements of z_r.

    With root labels the extremes are the highest and lowest roots of the
    fiber; otherwise the first and last basis elements.
    """
    zr = list(alg.centers[r - 1])
    n = len(zr)
    if alg.roots is not None:
        by_height = sorted(range(n), key=lambda p: (sum(alg.roots[zr[p]]), p))
        low, high = by_height[0], by_height[-1]
    else:
        low, high = n - 1, 0

    def vec(*ps: int) -> list[Q]:
        return [Q(int(p in ps)) for p in range(n)]

    out = [("top+bottom", vec(high, low)), ("top", vec(high)), ("bottom", vec(low))]
    out.append(("all ones", [Q(1)] * n))
    seen, unique = set(), []
    for name, v in out:
        if tuple(v) not in seen:
            seen.add(tuple(v))
            unique.append((name, v))
    return unique


def find_nondegenerate_lambda(
    alg: NilpotentAlgebra, r: int, seed: int | None = None, budget: int = 64
) -> Witness | None:
    """Search for λ_r with Pf(b_{λ_r}) ≠ 0 on v_r.

    Sparse patterns first, then ``budget`` random integer vectors in [-5, 5]
    from a seeded generator.  None means no witness within the budget, which
    is inconclusive rather than a proof of degeneracy.
    """
    _check_r(alg, r)
    if not alg.centers[r - 1]:
        raise ValueError(f"layer {r} has an empty center")
    seed = witness_seed() if seed is None else seed
    trials = 0
    for name, lam in sparse_patterns(alg, r):
        trials += 1
        pf = pfaffian(b_matrix(alg, r, lam))
        if pf:
            return Witness(r, tuple(lam), pf, name, trials, seed)
    rng = random.Random(seed)
    n = len(alg.centers[r - 1])
    for _ in range(budget):
        trials += 1
        lam = [Q(rng.randint(-5, 5)) for _ in range(n)]
        if not any(lam):
            continue
        pf = pfaffian(b_matrix(alg, r, lam))
        if pf:
            return Witness(r, tuple(lam), pf, "random", trials, seed)
    return None


# lattices and multiplicities -----------------------------------------------------------


@dataclass(frozen=True)
class LatticeSpec:
    """Lattice in s with generators as the columns of ``basis``.

    ``blocks`` lists dim z_1, …, dim z_m; the basis must be block diagonal so
    that the lattice respects the filtration.
    """

    basis: tuple[tuple[Q, ...], ...]
    blocks: tuple[int, ...]

    def __post_init__(self) -> None:
        b = tuple(tuple(Q(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "blocks", tuple(self.blocks))
        n = len(b)
        if any(len(row) != n for row in b):
            raise ValueError("lattice basis must be square")
        if sum(self.blocks) != n:
            raise ValueError(f"blocks {self.blocks} do not add up to {n}")
        owner = [r for r, size in enumerate(self.blocks) for _ in range(size)]
        for i in range(n):
            for j in range(n):
                if b[i][j] and owner[i] != owner[j]:
                    raise ValueError(
                        f"lattice basis is not block diagonal: entry ({i}, {j}) couples "
                        f"z_{owner[i] + 1} and z_{owner[j] + 1}"
                    )
        if n and exact.det(b) == 0:
            raise ValueError("lattice basis is singular")

    @classmethod
    def standard(cls, alg: NilpotentAlgebra) -> "LatticeSpec":
        blocks = tuple(len(z) for z in alg.centers)
        return cls(tuple(map(tuple, exact.identity(sum(blocks)))), blocks)

    def coordinates(self, lam: Sequence) -> list[Q]:
        """λ evaluated on the generators: Lᵀλ."""
        return [sum((self.basis[i][j] * Q(lam[i]) for i in range(len(lam))), Q(0)) for j in range(len(lam))]


def dual_lattice(lattice: LatticeSpec) -> LatticeSpec:
    """Λ* with generators the columns of (L⁻¹)ᵀ."""
    inv = exact.inverse(lattice.basis) if lattice.basis else []
    return LatticeSpec(tuple(map(tuple, exact.transpose(inv))), lattice.blocks)


def in_dual(lattice: LatticeSpec, lam: Sequence) -> bool:
    return all(x.denominator == 1 for x in lattice.coordinates(lam))


def _check_blocks(alg: NilpotentAlgebra, lattice: LatticeSpec) -> None:
    blocks = tuple(len(z) for z in alg.centers)
    if lattice.blocks != blocks:
        raise ValueError(f"lattice blocks {lattice.blocks} do not match center dimensions {blocks}")


def multiplicity(alg: NilpotentAlgebra, lattice: LatticeSpec, lam: Sequence) -> Q:
    """|P(λ)| if every λ_r lies in Λ_r* and P(λ) ≠ 0, else 0.

    The lattice coordinates are the basis of s in which P is computed, so the
    normalization constant is 1 there.
    """
    _check_blocks(alg, lattice)
    lam = [Q(x) for x in lam]
    if not in_dual(lattice, lam):
        return Q(0)
    return formal_degree(alg, lam)


@dataclass(frozen=True)
class MultiplicityReport:
    box: int
    entries: tuple[tuple[tuple[Q, ...], Q], ...]
    flags: tuple[str, ...] = ()

    def to_json(self) -> dict:
        out = {
            "box": self.box,
            "entries": [[[fmt_q(x) for x in lam], fmt_q(m)] for lam, m in self.entries],
        }
        if self.flags:
            out["flags"] = list(self.flags)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict | str) -> "MultiplicityReport":
        if isinstance(data, str):
            data = json.loads(data)
        entries = tuple(
            (tuple(parse_q(x) for x in lam), parse_q(m)) for lam, m in data["entries"]
        )
        return cls(int(data["box"]), entries, tuple(data.get("flags", ())))


def multiplicity_table(alg: NilpotentAlgebra, lattice: LatticeSpec, box: int) -> MultiplicityReport:
    """Every λ ∈ Λ* with dual coordinates in [-box, box] and P(λ) ≠ 0."""
    _check_blocks(alg, lattice)
    if box < 0:
        raise ValueError("box must be nonnegative")
    dual = dual_lattice(lattice)
    n = len(dual.basis)
    entries = []
    flags = []
    for mu in itertools.product(range(-box, box + 1), repeat=n):
        lam = tuple(sum((dual.basis[i][j] * mu[j] for j in range(n)), Q(0)) for i in range(n))
        m = multiplicity(alg, lattice, lam)
        if m:
            entries.append((lam, m))
            if m.denominator != 1:
                flags.append(f"non-integral multiplicity {fmt_q(m)} at {[fmt_q(x) for x in lam]}")
    return MultiplicityReport(box, tuple(entries), tuple(flags))
