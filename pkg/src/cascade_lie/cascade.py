"""Kostant's cascade of strongly orthogonal roots and the layers Δ⁺_r.

Layer indices ``r`` in this module are 1-based, so ``layers.layer(1)`` is the
layer attached to the highest root β_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .report import VerificationReport
from .rootsys import Root, RootSystem, add, bilinear, height, is_root, reflect, sub

TieBreak = Callable[[Root], object]


class CascadeError(RuntimeError):
    """The two characterizations of a layer disagree."""


def reverse_lex(alpha: Root) -> tuple:
    return tuple(reversed(alpha))


@dataclass(frozen=True)
class Cascade:
    betas: tuple[Root, ...]
    generations: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.betas)

    def generation_sets(self) -> list[frozenset[Root]]:
        return [frozenset(self.betas[i] for i in g) for g in self.generations]


def _components(sys: RootSystem, roots: Sequence[Root]) -> list[list[Root]]:
    """Irreducible components: classes of the non-orthogonality relation."""
    remaining = list(roots)
    comps = []
    while remaining:
        comp = [remaining.pop(0)]
        grew = True
        while grew:
            grew = False
            for a in list(remaining):
                if any(bilinear(sys, a, b) != 0 for b in comp):
                    comp.append(a)
                    remaining.remove(a)
                    grew = True
        comps.append(comp)
    return comps


def kostant_cascade(sys: RootSystem, tiebreak: TieBreak = reverse_lex, descending: bool = True) -> Cascade:
    """Greedy cascade: each generation takes the highest root of every
    irreducible component of the roots orthogonal to all earlier betas.

    Inside a generation the betas are sorted by ``tiebreak`` (descending by
    default).  Only the generation sets carry meaning.
    """
    betas: list[Root] = []
    generations = []
    while True:
        rest = [a for a in sys.positive_roots if all(bilinear(sys, a, b) == 0 for b in betas)]
        if not rest:
            break
        tops = [max(comp, key=height) for comp in _components(sys, rest)]
        tops.sort(key=tiebreak, reverse=descending)
        generations.append(tuple(range(len(betas), len(betas) + len(tops))))
        betas.extend(tops)
    return Cascade(betas=tuple(betas), generations=tuple(generations))


@dataclass(frozen=True)
class LayerDecomposition:
    """``layers[r-1]`` is Δ⁺_r (ordered as in ``sys.positive_roots``).

    ``pairs[r-1]`` lists the pairs {α, β_r − α} with the lexicographically
    smaller root first; a 1-tuple marks α = β_r/2.
    """

    betas: tuple[Root, ...]
    layers: tuple[tuple[Root, ...], ...]
    pairs: tuple[tuple[tuple[Root, ...], ...], ...]

    def layer(self, r: int) -> tuple[Root, ...]:
        return self.layers[r - 1]

    def layer_of(self, alpha: Root) -> int | None:
        """1-based layer index containing α, or None (α is a beta)."""
        for r, layer in enumerate(self.layers, start=1):
            if alpha in layer:
                return r
        return None

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)


def layers_by_definition(sys: RootSystem, betas: Sequence[Root]) -> list[tuple[Root, ...]]:
    """Δ⁺_r from the recursive definition: β_r − α positive, α unclaimed earlier."""
    claimed: set[Root] = set()
    out = []
    for b in betas:
        layer = tuple(
            a for a in sys.positive_roots if a not in claimed and sys.is_positive_root(sub(b, a))
        )
        claimed.update(layer)
        out.append(layer)
    return out


def layers_by_orthogonality(sys: RootSystem, betas: Sequence[Root]) -> list[tuple[Root, ...]]:
    """{α ⊥ β_i for i < r, ⟨α, β_r⟩ > 0} minus β_r itself."""
    out = []
    for r, b in enumerate(betas):
        out.append(
            tuple(
                a
                for a in sys.positive_roots
                if a != b
                and all(bilinear(sys, a, betas[i]) == 0 for i in range(r))
                and bilinear(sys, a, b) > 0
            )
        )
    return out


def _pairs(sys: RootSystem, beta: Root, layer: Sequence[Root]) -> tuple[tuple[Root, ...], ...]:
    seen = set()
    out = []
    for a in layer:
        if a in seen:
            continue
        partner = sub(beta, a)
        seen.update((a, partner))
        out.append((a,) if partner == a else tuple(sorted((a, partner))))
    return tuple(out)


@lru_cache(maxsize=None)
def _layers_cached(sys: RootSystem, cascade: Cascade) -> LayerDecomposition:
    by_def = layers_by_definition(sys, cascade.betas)
    by_orth = layers_by_orthogonality(sys, cascade.betas)
    for r, (x, y) in enumerate(zip(by_def, by_orth), start=1):
        if set(x) != set(y):
            raise CascadeError(
                f"{sys.label}: layer {r} differs between the recursive definition "
                f"and the orthogonality characterization "
                f"(only-recursive {sorted(set(x) - set(y))}, only-orthogonal {sorted(set(y) - set(x))})"
            )
    return LayerDecomposition(
        betas=cascade.betas,
        layers=tuple(by_def),
        pairs=tuple(_pairs(sys, b, layer) for b, layer in zip(cascade.betas, by_def)),
    )


def compute_layers(sys: RootSystem, cascade: Cascade | None = None) -> LayerDecomposition:
    """Layers Δ⁺_r, cross-checked against the orthogonality characterization.

    Raises :class:`CascadeError` if the two constructions disagree.
    """
    return _layers_cached(sys, cascade if cascade is not None else kostant_cascade(sys))


def sigma(sys: RootSystem, cascade: Cascade, r: int, alpha: Root) -> Root:
    """σ_r(α) = −s_{β_r}(α) for α in Δ⁺_r."""
    if not 1 <= r <= len(cascade):
        raise ValueError(f"layer index {r} out of range 1..{len(cascade)}")
    layers = compute_layers(sys, cascade)
    alpha = tuple(alpha)
    if alpha not in layers.layer(r):
        raise ValueError(f"{alpha} is not in layer {r} of {sys.label}")
    return tuple(-x for x in reflect(sys, cascade.betas[r - 1], alpha))


def verify_layer_lemmas(
    sys: RootSystem, cascade: Cascade, layers: LayerDecomposition
) -> VerificationReport:
    """Root-level checks behind the layer lemmas; failures become report lines."""
    report = VerificationReport(f"layer lemmas {sys.label}")
    betas = cascade.betas
    pos = set(sys.positive_roots)

    # (a) partition, and every layer is the one the recursive definition gives
    seen: dict[Root, int] = {}
    dup = []
    for r, layer in enumerate(layers.layers, start=1):
        for a in layer:
            if a in seen or a in betas:
                dup.append(a)
            seen[a] = r
    missing = pos - set(seen) - set(betas)
    expected = layers_by_definition(sys, betas)
    wrong = [
        r for r, (x, y) in enumerate(zip(layers.layers, expected), start=1) if set(x) != set(y)
    ]
    report.add(
        "(a) fill-out partition",
        not dup and not missing and not wrong and len(layers.layers) == len(betas),
        f"duplicates={dup[:3]} missing={sorted(missing)[:3]} misassigned layers={wrong}",
    )

    # (b) orthogonality characterization
    ortho = layers_by_orthogonality(sys, betas)
    bad = [r for r, (x, y) in enumerate(zip(layers.layers, ortho), start=1) if set(x) != set(y)]
    report.add("(b) layers equal orthogonality characterization", not bad, f"layers {bad}")

    # (c) sums inside one layer
    offenders = []
    for r, layer in enumerate(layers.layers, start=1):
        for i, a in enumerate(layer):
            for b in layer[i:]:
                s = add(a, b)
                if is_root(sys, s) and s != betas[r - 1]:
                    offenders.append((r, a, b))
    report.add("(c) α+α' a root inside Δ⁺_r forces α+α' = β_r", not offenders, f"{offenders[:3]}")

    # (d) [m_r, z_s] = 0 for r > s
    offenders = [
        (r, s, a)
        for r, layer in enumerate(layers.layers, start=1)
        for a in layer
        for s in range(1, r)
        if is_root(sys, add(betas[s - 1], a))
    ]
    report.add("(d) β_s + α not a root for α in Δ⁺_r, r > s", not offenders, f"{offenders[:3]}")

    # (e) cross-layer sums avoid the betas
    beta_set = set(betas)
    offenders = []
    for r, lr in enumerate(layers.layers, start=1):
        for s, ls in enumerate(layers.layers, start=1):
            if s <= r:
                continue
            for a in lr:
                for b in ls:
                    if add(a, b) in beta_set:
                        offenders.append((r, s, a, b))
    report.add("(e) α ∈ Δ⁺_r, α' ∈ Δ⁺_s, r ≠ s: α+α' is never a beta", not offenders, f"{offenders[:3]}")
    return report
