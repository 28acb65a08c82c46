"""Suite runner behind ``cascade-lie verify``.

A run is a matrix of (suite, target) cells, each holding a report.  Targets
are root-system labels (``E7``, ``BC3``), upper-triangular algebras
(``upper5``) and the two restricted examples.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction as Q

from .appendix import DEFAULT_LABELS, compare_fixture, fixture
from .cascade import compute_layers, kostant_cascade, verify_layer_lemmas
from .exact import det, matmul, transpose
from .liealg import (
    NilpotentAlgebra,
    build_restricted_nilradical,
    build_split_nilradical,
    build_upper_triangular,
    pairing_rank,
    verify_jacobi,
    verify_setup,
)
from .plancherel import (
    PfaffianPolynomial,
    all_variables,
    find_nondegenerate_lambda,
    is_stepwise_si,
    layer_pfaffian,
    pfaffian,
    plancherel_polynomial,
)
from .report import VerificationReport
from .rootsys import (
    RootSystem,
    add,
    bilinear,
    build_root_system,
    classical_count,
    reflect,
    strongly_orthogonal,
    unit,
)

SUITES = ("rootsys", "cascade", "appendix", "jacobi", "setup", "pfaffian", "numeric")

SYSTEMS = (
    [f"A{n}" for n in range(1, 8)]
    + [f"B{n}" for n in range(2, 6)]
    + [f"C{n}" for n in range(2, 6)]
    + [f"D{n}" for n in range(4, 8)]
    + ["G2", "F4", "E6", "E7", "E8"]
    + [f"BC{n}" for n in range(1, 5)]
)
UPPER = tuple(range(3, 9))
RESTRICTED = {"sl3H": ("A", 5, (1, 3, 5)), "e6F4": ("E", 6, (2, 3, 4, 5))}

_LABEL = re.compile(r"^(BC|[A-G])(\d*)$")


def parse_system(text: str, rank: int | None = None) -> RootSystem:
    """``E7``, or ``E`` together with ``rank=7``.  ValueError on anything else."""
    m = _LABEL.match(text.strip().upper())
    if not m:
        raise ValueError(f"unknown root-system type {text!r}")
    kind, digits = m.groups()
    if digits and rank is not None and int(digits) != rank:
        raise ValueError(f"{text!r} conflicts with rank {rank}")
    n = int(digits) if digits else rank
    if n is None:
        raise ValueError(f"type {kind} needs a rank")
    return build_root_system(kind, n)


def restricted_algebra(key: str) -> NilpotentAlgebra:
    kind, n, zero = RESTRICTED[key]
    return build_restricted_nilradical(build_root_system(kind, n), zero)


def restricted_slnh(n: int) -> NilpotentAlgebra:
    """Nilradical for sl(n, H): A_{2n-1} with the odd simple roots compact."""
    if n < 2:
        raise ValueError("sl(n,H) needs n ≥ 2")
    return build_restricted_nilradical(build_root_system("A", 2 * n - 1), range(1, 2 * n, 2))


# individual suites ------------------------------------------------------------------


def rootsys_suite(sys: RootSystem) -> VerificationReport:
    report = VerificationReport(f"rootsys {sys.label}")
    pos = sys.positive_roots
    report.add(
        "positive-root count",
        len(pos) == classical_count(sys.type_label, sys.rank),
        f"{len(pos)} vs {classical_count(sys.type_label, sys.rank)}",
    )
    report.add("coefficients nonnegative", all(min(a) >= 0 and any(a) for a in pos))
    bad = None
    for i in range(1, sys.rank + 1):
        e = unit(sys.rank, i - 1)
        for a in pos:
            if any(a[j] for j in range(sys.rank) if j != i - 1):
                img = reflect(sys, e, a)
                if not sys.is_positive_root(img):
                    bad = (i, a)
    report.add("simple reflections permute the other positive roots", bad is None, f"{bad}")
    bad = [
        (a, b)
        for k, a in enumerate(pos)
        for b in pos[k:]
        if bilinear(sys, a, b) < 0 and not sys.is_positive_root(add(a, b))
    ]
    report.add("⟨α,β⟩ < 0 forces α+β to be a positive root", not bad, f"{bad[:2]}")
    if sys.type_label == "BC":
        doubles = [tuple(2 * c for c in a) for a in pos if sys.is_positive_root(tuple(2 * c for c in a))]
        report.add("nonreduced: 2α present for the short directions", len(doubles) == sys.rank)
    return report


def cascade_suite(sys: RootSystem) -> VerificationReport:
    cascade = kostant_cascade(sys)
    layers = compute_layers(sys, cascade)
    report = verify_layer_lemmas(sys, cascade, layers)
    report.title = f"cascade {sys.label}"
    betas = cascade.betas
    report.add(
        "betas mutually strongly orthogonal",
        all(strongly_orthogonal(sys, a, b) for i, a in enumerate(betas) for b in betas[i + 1 :]),
    )
    total = sum(layers.sizes()) + len(betas)
    report.add(
        "Σ|Δ⁺_r| + m = |Δ⁺|", total == len(sys.positive_roots), f"{total} vs {len(sys.positive_roots)}"
    )
    return report


def _algebra_for(target: str) -> NilpotentAlgebra | None:
    if target.startswith("upper"):
        return build_upper_triangular(int(target[5:]))
    if target in RESTRICTED:
        return restricted_algebra(target)
    sys = parse_system(target)
    return build_split_nilradical(sys) if sys.reduced else None


def jacobi_suite(alg: NilpotentAlgebra) -> VerificationReport:
    report = verify_jacobi(alg)
    report.title = f"jacobi {alg.name}"
    return report


def setup_suite(alg: NilpotentAlgebra) -> VerificationReport:
    report = verify_setup(alg)
    report.title = f"setup {alg.name}"
    short = [
        r
        for r in range(1, len(alg.layers) + 1)
        if len(alg.centers[r - 1]) == 1 and pairing_rank(alg, r) != len(alg.complements[r - 1])
    ]
    report.add("pairing on v_r has full rank (one-dimensional centers)", not short, f"layers {short}")
    return report


def pfaffian_identities(seed: int = 0, count: int = 200, max_half: int = 6) -> VerificationReport:
    """Pf² = det and Pf(AᵀMA) = det(A)·Pf(M) on seeded random rational matrices."""
    rng = random.Random(seed)
    report = VerificationReport("pfaffian identities")

    def entry() -> Q:
        return Q(rng.randint(-9, 9), rng.randint(1, 4))

    def skew(n: int) -> list[list[Q]]:
        m = [[Q(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                m[i][j] = entry()
                m[j][i] = -m[i][j]
        return m

    bad_sq = bad_cong = 0
    for k in range(count):
        n = 2 * (1 + k % max_half)
        m = skew(n)
        pf = pfaffian(m)
        if pf * pf != det(m):
            bad_sq += 1
        if k % 4 == 0:
            a = [[entry() for _ in range(n)] for _ in range(n)]
            if pfaffian(matmul(matmul(transpose(a), m), a)) != det(a) * pf:
                bad_cong += 1
    report.add(f"Pf² = det on {count} matrices up to {2 * max_half}×{2 * max_half}", not bad_sq, f"{bad_sq} failures")
    report.add("Pf(AᵀMA) = det(A)·Pf(M)", not bad_cong, f"{bad_cong} failures")
    return report


def pfaffian_suite(target: str) -> VerificationReport:
    alg = _algebra_for(target)
    report = VerificationReport(f"pfaffian {alg.name}")
    if target.startswith("upper"):
        ell = int(target[5:])
        poly = plancherel_polynomial(alg)
        exps = tuple(ell - 2 * r for r in range(1, ell // 2 + 1))
        monomial = PfaffianPolynomial(poly.variables, {exps: Q(1)})
        report.add("P = ±∏ λ_r^{ℓ−2r}", poly.same_up_to_sign(monomial), str(poly))
        return report
    if target in RESTRICTED:
        w = find_nondegenerate_lambda(alg, 1)
        report.add("layer 1 witness exists", w is not None)
        if w is not None:
            report.add("sparse top+bottom pattern is a witness", w.pattern == "top+bottom", w.pattern)
            report.notes.append(f"witness seed {w.seed}, Pf = {w.pfaffian}")
        return report
    rng = random.Random(sum(map(ord, target)))  # fixed per target for byte-stable reports
    lam = [Q(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5)) for _ in all_variables(alg)]
    report.add("stepwise square integrable at a random λ", is_stepwise_si(alg, lam), f"λ = {lam}")
    homogeneous = all(layer_pfaffian(alg, r).is_homogeneous() for r in range(1, len(alg.layers) + 1))
    report.add("each Pf(b_λr) homogeneous", homogeneous)
    return report


def numeric_suite() -> VerificationReport:
    from .numcheck import coefficient_norm_check, degree_scaling_ratio, plancherel_inversion_check

    report = VerificationReport("numeric")
    for d, lam, tol in ((1, 1.0, 1e-6), (1, 2.0, 1e-6), (2, 1.0, 1e-4)):
        res = coefficient_norm_check(d, lam, threshold=tol)
        report.add(f"coefficient norm d={d} λ={lam:g} < {tol:g}", res.verdict == "pass", f"{res.residual:.3e} {res.verdict}")
    for group, tol in (("H1", 1e-4), ("upper4", 1e-2)):
        res = plancherel_inversion_check(group, threshold=tol)
        report.add(f"inversion {group} < {tol:g}", res.verdict == "pass", f"{res.residual:.3e} {res.verdict}")
    for d in (1, 2):
        ratio = degree_scaling_ratio(d)
        report.add(f"degree scaling ratio 2^{d}", abs(ratio - 2**d) < 1e-4, f"{ratio!r}")
    return report


# the matrix ---------------------------------------------------------------------------


@dataclass
class SuiteMatrix:
    cells: list[tuple[str, str, VerificationReport]] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(rep.ok for _, _, rep in self.cells)

    def lines(self, verbose: bool = False) -> list[str]:
        out = []
        for suite, target, rep in self.cells:
            tag = "PASS" if rep.ok else "FAIL"
            out.append(f"{tag}  {suite:<9} {target:<8} {len(rep.checks)} checks")
            if verbose or not rep.ok:
                out += ["      " + c.line() for c in rep.checks if verbose or not c.passed]
        out += [f"SKIP  {s}" for s in self.skipped]
        passed = sum(rep.ok for _, _, rep in self.cells)
        out.append(f"{passed}/{len(self.cells)} cells pass")
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "cells": [{"suite": s, "target": t, "report": r.to_json()} for s, t, r in self.cells],
            "skipped": list(self.skipped),
        }


def _targets(suite: str, system: RootSystem | None) -> list[str]:
    label = system.label if system is not None else None
    if suite == "rootsys" or suite == "cascade":
        return [label] if label else list(SYSTEMS)
    if suite == "appendix":
        if label:
            return [label] if _has_fixture(label) else []
        return list(DEFAULT_LABELS)
    if suite in ("jacobi", "setup", "pfaffian"):
        if label:
            return [label] if system.reduced else []
        split = [s for s in SYSTEMS if not s.startswith("BC")]
        return [f"upper{l}" for l in UPPER] + split + list(RESTRICTED)
    return []


def _has_fixture(label: str) -> bool:
    try:
        fixture(label)
    except ValueError:
        return False
    return True


def run_suite(suite: str, target: str) -> VerificationReport:
    if suite == "rootsys":
        return rootsys_suite(parse_system(target))
    if suite == "cascade":
        return cascade_suite(parse_system(target))
    if suite == "appendix":
        return compare_fixture(fixture(target))
    if suite == "jacobi":
        return jacobi_suite(_algebra_for(target))
    if suite == "setup":
        return setup_suite(_algebra_for(target))
    if suite == "pfaffian":
        return pfaffian_suite(target)
    raise ValueError(f"unknown suite {suite!r}")


def verify_all(
    system: RootSystem | None = None, only: str | None = None, numeric: bool = False
) -> SuiteMatrix:
    """Run every suite (or just ``only``) over the default targets or one system."""
    if only is not None and only not in SUITES:
        raise ValueError(f"unknown suite {only!r}; choose from {', '.join(SUITES)}")
    matrix = SuiteMatrix()
    for suite in SUITES:
        if only is not None and suite != only:
            continue
        if suite == "numeric":
            if numeric or only == "numeric":
                matrix.cells.append(("numeric", "-", numeric_suite()))
            else:
                matrix.skipped.append("numeric (enable with --numeric)")
            continue
        targets = _targets(suite, system)
        if not targets and system is not None:
            why = "no golden data" if suite == "appendix" else "nonreduced, no split nilradical"
            matrix.skipped.append(f"{suite} {system.label} ({why})")
        for target in targets:
            matrix.cells.append((suite, target, run_suite(suite, target)))
        if suite == "pfaffian" and system is None:
            matrix.cells.append(("pfaffian", "random", pfaffian_identities()))
    return matrix
