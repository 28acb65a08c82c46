"""Golden cascade and layer data for the classical and exceptional systems.

Exceptional data is transcribed as digit strings (one digit per simple-root
coefficient, Bourbaki order).  The classical families come from closed-form
generators.  Printed misprints are repaired here, and each repair is kept as
a :class:`Correction` quoting the printed string verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cascade import compute_layers, kostant_cascade
from .report import VerificationReport
from .rootsys import Root, add, build_root_system, format_root


def _r(digits: str) -> Root:
    return tuple(int(c) for c in digits)


@dataclass(frozen=True)
class Correction:
    where: str
    printed: str
    corrected: str
    reason: str
    roots: tuple[Root, ...] = ()


@dataclass(frozen=True)
class GoldenFixture:
    label: str
    type_label: str
    rank: int
    generations: tuple[tuple[Root, ...], ...]
    pairs: dict[int, tuple[tuple[Root, Root], ...]] | None = field(default=None, repr=False)
    corrections: tuple[Correction, ...] = ()

    @property
    def betas(self) -> tuple[Root, ...]:
        return tuple(b for g in self.generations for b in g)

    def layer_roots(self, r: int) -> set[Root]:
        return {a for p in (self.pairs or {}).get(r, ()) for a in p}

    def validate(self) -> VerificationReport:
        """The fixture on its own must satisfy the partition it describes."""
        sys = build_root_system(self.type_label, self.rank)
        report = VerificationReport(f"fixture {self.label}")
        betas = self.betas
        not_roots = [b for b in betas if not sys.is_positive_root(b)]
        report.add("betas are positive roots", not not_roots, f"{not_roots}")
        if self.pairs is None:
            return report
        bad_sum, not_roots = [], []
        seen: list[Root] = list(betas)
        for r, prs in sorted(self.pairs.items()):
            for p in prs:
                for a in p:
                    if not sys.is_positive_root(a):
                        not_roots.append(a)
                if add(*p) != betas[r - 1]:
                    bad_sum.append((r, p))
                seen.extend(p)
        report.add("pair members are positive roots", not not_roots, f"{not_roots[:3]}")
        report.add("each pair sums to its beta", not bad_sum, f"{bad_sum[:3]}")
        report.add(
            "betas and layers partition the positive roots",
            len(seen) == len(set(seen)) and set(seen) == set(sys.positive_roots),
            f"{len(seen)} listed, {len(set(seen))} distinct, {len(sys.positive_roots)} positive roots",
        )
        return report


def _pairs(*specs: str) -> tuple[tuple[Root, Root], ...]:
    return tuple(tuple(_r(x) for x in s.split()) for s in specs)


_F4 = GoldenFixture(
    "F4",
    "F",
    4,
    ((_r("2342"),), (_r("0122"),), (_r("0120"),), (_r("0100"),)),
    {
        1: _pairs("1000 1342", "1100 1242", "1110 1232", "1120 1222", "1111 1231", "1220 1122", "1121 1221"),
        2: _pairs("0001 0121", "0011 0111"),
        3: _pairs("0010 0110"),
        4: (),
    },
    (
        Correction(
            "beta 1",
            r"2\psi_1 + 3\psi_2 + 4\psi_4 + 2\psi_4",
            "2ψ1 + 3ψ2 + 4ψ3 + 2ψ4",
            "ψ4 printed twice; the highest root of F4 has ψ3-coefficient 4",
            (_r("2342"),),
        ),
    ),
)

_G2 = GoldenFixture(
    "G2",
    "G",
    2,
    ((_r("32"),), (_r("10"),)),
    {1: _pairs("31 01", "21 11"), 2: ()},
    (Correction("layer 1, pair 2", r"\psi_1 + \Psi_2", "ψ1 + ψ2", "capital Ψ for ψ", (_r("11"),)),),
)

_E6 = GoldenFixture(
    "E6",
    "E",
    6,
    ((_r("122321"),), (_r("101111"),), (_r("001110"),), (_r("000100"),)),
    {
        1: _pairs(
            "010000 112321", "010100 112221", "011100 111221", "010110 112211", "111100 011221",
            "011110 111211", "010111 112210", "111110 011211", "011210 111111", "011111 111210",
        ),
        2: _pairs("100000 001111", "000001 101110", "101000 000111", "000011 101100"),
        3: _pairs("001000 000110", "000010 001100"),
        4: (),
    },
    (
        Correction(
            "layer 1, pair 1",
            r"\psi_1 + \psi_2 + 2\psi_2 + 3\psi_4 + 2\psi_5 + \psi_6",
            "ψ1 + ψ2 + 2ψ3 + 3ψ4 + 2ψ5 + ψ6",
            "second ψ2 term is ψ3; only this reading pairs with ψ2 to give beta 1",
            (_r("112321"),),
        ),
        Correction(
            "layer 2",
            r"\psi_3 + \psi_4 + \psi_5 + \psi_6;",
            "pairs separated by commas",
            "semicolons used as pair separators",
        ),
    ),
)

_E7 = GoldenFixture(
    "E7",
    "E",
    7,
    (
        (_r("2234321"),),
        (_r("0112221"),),
        (_r("0000001"), _r("0112100")),
        (_r("0100000"), _r("0010000"), _r("0000100")),
    ),
    {
        1: _pairs(
            "1000000 1234321", "1010000 1224321", "1011000 1223321", "1111000 1123321",
            "1011100 1223221", "1111100 1123221", "1011110 1223211", "1112100 1122221",
            "1111110 1123211", "1011111 1223210", "1122100 1112221", "1112110 1122211",
            "1111111 1123210", "1122110 1112211", "1112210 1122111", "1112111 1122210",
        ),
        2: _pairs(
            "0000010 0112211", "0000110 0112111", "0000011 0112210", "0001110 0111111",
            "0000111 0112110", "0101110 0011111", "0011110 0101111", "0001111 0111110",
        ),
        3: (),
        4: _pairs("0001000 0111100", "0101000 0011100", "0011000 0101100", "0001100 0111000"),
        5: (),
        6: (),
        7: (),
    },
    (
        Correction(
            "layer 2, pair 3",
            r"\{\{psi_6 + \psi_7",
            "ψ6 + ψ7",
            "stray brace and missing backslash",
            (_r("0000011"),),
        ),
    ),
)

_E8 = GoldenFixture(
    "E8",
    "E",
    8,
    (
        (_r("23465432"),),
        (_r("22343210"),),
        (_r("01122210"),),
        (_r("00000010"), _r("01121000")),
        (_r("01000000"), _r("00100000"), _r("00001000")),
    ),
    {
        1: _pairs(
            "00000001 23465431", "00000011 23465421", "00000111 23465321", "00001111 23464321",
            "00011111 23454321", "01011111 22454321", "00111111 23354321", "10111111 13354321",
            "01111111 22354321", "11111111 12354321", "01121111 22344321", "11121111 12344321",
            "01122111 22343321", "11221111 12244321", "11122111 12343321", "01122211 22343221",
            "11222111 12243321", "11122211 12343221", "01122221 22343211", "11232111 12233321",
            "11222211 12243221", "11122221 12343211", "12232111 11233321", "11232211 12233221",
            "11222221 12243211", "12232211 11233221", "11233211 12232221", "11232221 12233211",
        ),
        2: _pairs(
            "10000000 12343210", "10100000 12243210", "10110000 12233210", "11110000 11233210",
            "10111000 12232210", "11111000 11232210", "10111100 12232110", "11121000 11222210",
            "11111100 11232110", "10111110 12232100", "11221000 11122210", "11121100 11222110",
            "11111110 11232100", "11221100 11122110", "11122100 11221110", "11121110 11222100",
        ),
        3: _pairs(
            "00000100 01122110", "00001100 01121110", "00000110 01122100", "00011100 01111110",
            "00001110 01121100", "01011100 00111110", "00111100 01011110", "00011110 01111100",
        ),
        4: (),
        5: _pairs("00010000 01111000", "01010000 00111000", "00110000 01011000", "00011000 01110000"),
        6: (),
        7: (),
        8: (),
    },
)

EXCEPTIONAL = {f.label: f for f in (_G2, _F4, _E6, _E7, _E8)}


# classical families ---------------------------------------------------------------


def _span(n: int, coeffs: dict[int, int]) -> Root:
    """Root from 1-based {index: coefficient}."""
    return tuple(coeffs.get(i, 0) for i in range(1, n + 1))


def _run(n: int, lo: int, hi: int, c: int = 1) -> dict[int, int]:
    return {i: c for i in range(lo, hi + 1)}


def _fixture_a(n: int) -> GoldenFixture:
    ell = n + 1
    gens, pairs = [], {}
    for r in range(1, ell // 2 + 1):
        beta = _span(n, _run(n, r, ell - r))
        gens.append((beta,))
        pairs[r] = tuple(
            (_span(n, _run(n, r, s)), _span(n, _run(n, s + 1, ell - r))) for s in range(r, ell - r)
        )
    return GoldenFixture(f"A{n}", "A", n, tuple(gens), pairs)


def _fixture_b(n: int) -> GoldenFixture:
    def top(r: int) -> Root:
        return _span(n, {r: 1, **_run(n, r + 1, n, 2)})

    gens = [(top(1),)]
    r = 1
    while r < n:
        g = [_span(n, {r: 1})]
        if r + 2 <= n:
            g.append(top(r + 2))
        gens.append(tuple(g))
        r += 2
    betas = [b for g in gens for b in g]
    pairs = {}
    for k, beta in enumerate(betas, start=1):
        if sum(beta) == 1:  # a simple root ends its component: empty layer
            pairs[k] = ()
            continue
        r = list(beta).index(1) + 1
        prs = []
        for u in range(r + 1, n):
            tail = _run(n, u + 1, n, 2)
            prs.append((_span(n, _run(n, r, u)), _span(n, {**_run(n, r + 1, u), **tail})))
            prs.append((_span(n, _run(n, r + 1, u)), _span(n, {**_run(n, r, u), **tail})))
        if r < n:
            prs.append((_span(n, _run(n, r, n)), _span(n, _run(n, r + 1, n))))
        pairs[k] = tuple(prs)
    return GoldenFixture(f"B{n}", "B", n, tuple(gens), pairs)


def _fixture_c(n: int) -> GoldenFixture:
    gens, pairs = [], {}
    for r in range(1, n + 1):
        gens.append((_span(n, {**_run(n, r, n - 1, 2), n: 1}),))
        pairs[r] = tuple(
            (_span(n, _run(n, r, u)), _span(n, {**_run(n, r, u), **_run(n, u + 1, n - 1, 2), n: 1}))
            for u in range(r, n)
        )
    fix = Correction(
        "beta 1",
        r"2(\psi_1 + \dots \psi_{n-1} + \psi_n",
        "2(ψ1 + … + ψ(n−1)) + ψn",
        "unclosed parenthesis; the long highest root has ψn-coefficient 1",
    )
    return GoldenFixture(f"C{n}", "C", n, tuple(gens), pairs, (fix,))


def _fixture_d(n: int) -> GoldenFixture:
    def top(r: int) -> Root:
        return _span(n, {r: 1, **_run(n, r + 1, n - 2, 2), n - 1: 1, n: 1})

    gens = [(top(1),)]
    r = 1
    while True:
        g = [_span(n, {r: 1})]
        if r + 2 <= n - 2:
            g.append(top(r + 2))
        elif r + 2 == n - 1:
            g += [_span(n, {n - 1: 1}), _span(n, {n: 1})]
        gens.append(tuple(g))
        if r + 2 > n - 2:
            break
        r += 2
    return GoldenFixture(f"D{n}", "D", n, tuple(gens), None)


def fixture(label: str) -> GoldenFixture:
    """Golden data by label: G2, F4, E6, E7, E8, or A_n, B_n, C_n, D_n for a rank."""
    label = label.strip().upper()
    if label in EXCEPTIONAL:
        return EXCEPTIONAL[label]
    kind, digits = label[:1], label[1:]
    if kind not in "ABCD" or not digits.isdigit():
        raise ValueError(f"no golden data for {label!r}")
    n = int(digits)
    build_root_system(kind, n)  # validates the rank
    return {"A": _fixture_a, "B": _fixture_b, "C": _fixture_c, "D": _fixture_d}[kind](n)


DEFAULT_LABELS = (
    ["G2", "F4", "E6", "E7", "E8"]
    + [f"A{n}" for n in range(1, 8)]
    + [f"B{n}" for n in range(2, 6)]
    + [f"C{n}" for n in range(2, 6)]
    + [f"D{n}" for n in range(4, 8)]
)


def _digits(alpha: Root) -> str:
    return "".join(str(c) for c in alpha)


def _fmt_set(roots) -> str:
    return "{" + ", ".join(format_root(a) for a in sorted(roots)) + "}"


def _correction_for(fx: GoldenFixture, roots) -> Correction | None:
    return next((c for c in fx.corrections if set(c.roots) & set(roots)), None)


def fixture_diff(fx: GoldenFixture) -> dict:
    """Per-generation and per-layer set comparison, as plain JSON data.

    Roots are digit strings; pairs are sorted two-element lists.  Layer
    indices follow the fixture's β order and are matched to computed layers
    by β, so intra-generation ordering never matters.
    """
    sys = build_root_system(fx.type_label, fx.rank)
    cascade = kostant_cascade(sys)
    got = cascade.generation_sets()
    gens = []
    for k in range(max(len(got), len(fx.generations))):
        w = frozenset(fx.generations[k]) if k < len(fx.generations) else frozenset()
        g = got[k] if k < len(got) else frozenset()
        gens.append(
            {
                "generation": k + 1,
                "fixture": sorted(_digits(a) for a in w),
                "computed": sorted(_digits(a) for a in g),
                "missing": sorted(_digits(a) for a in w - g),
                "extra": sorted(_digits(a) for a in g - w),
            }
        )
    out = {"system": fx.label, "generations": gens, "layers": None}
    if fx.pairs is None:
        return out
    layers = compute_layers(sys, cascade)
    computed = {b: {frozenset(p) for p in prs} for b, prs in zip(layers.betas, layers.pairs)}

    def enc(ps):
        return sorted(sorted(_digits(a) for a in p) for p in ps)

    rows = []
    for r, beta in enumerate(fx.betas, start=1):
        want = {frozenset(p) for p in fx.pairs.get(r, ())}
        have = computed.get(beta, set())
        missing, extra = want - have, have - want
        touched = {a for p in missing | extra for a in p}
        corr = _correction_for(fx, touched)
        rows.append(
            {
                "layer": r,
                "beta": _digits(beta),
                "fixture": enc(want),
                "computed": enc(have),
                "missing": enc(missing),
                "extra": enc(extra),
                "correction": None if corr is None else {"where": corr.where, "printed": corr.printed},
            }
        )
    out["layers"] = rows
    return out


def compare_fixture(fx: GoldenFixture) -> VerificationReport:
    """Set-level comparison of computed cascade and layers with the fixture."""
    report = VerificationReport(f"appendix {fx.label}")
    report.extend(fx.validate(), "fixture: ")
    diff = fixture_diff(fx)
    report.add(
        "number of generations",
        len(fx.generations) == sum(1 for g in diff["generations"] if g["computed"]),
        f"fixture has {len(fx.generations)}",
    )
    for g in diff["generations"]:
        report.add(
            f"generation {g['generation']} betas",
            not g["missing"] and not g["extra"],
            f"missing {g['missing']}, extra {g['extra']}",
        )
    for row in diff["layers"] or ():
        r = row["layer"]
        note = ""
        if row["correction"]:
            note = f"; correction at {row['correction']['where']}, printed {row['correction']['printed']!r}"
        report.add(
            f"layer {r} pairs ({len(row['fixture'])} expected)",
            not row["missing"] and not row["extra"],
            f"layer {r}: missing {row['missing']}, extra {row['extra']}{note}",
        )
    return report
