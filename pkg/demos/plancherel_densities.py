"""Plancherel densities of a few layered nilpotent algebras."""

from __future__ import annotations

from cascade_lie import (
    build_restricted_nilradical,
    build_root_system,
    build_split_nilradical,
    build_upper_triangular,
    find_nondegenerate_lambda,
    plancherel_constant,
    plancherel_polynomial,
)

for ell in range(3, 7):
    alg = build_upper_triangular(ell)
    print(f"upper {ell}x{ell}: P = {plancherel_polynomial(alg)}, c = {plancherel_constant(alg)}")

for kind, rank in [("G", 2), ("F", 4), ("E", 6)]:
    alg = build_split_nilradical(build_root_system(kind, rank))
    print(f"split {kind}{rank}: P = {plancherel_polynomial(alg)}")

sl3h = build_restricted_nilradical(build_root_system("A", 5), {1, 3, 5})
print(f"sl(3,H): P = {plancherel_polynomial(sl3h)}")

e6f4 = build_restricted_nilradical(build_root_system("E", 6), {2, 3, 4, 5})
w = find_nondegenerate_lambda(e6f4, 1)
print(f"e6,F4 layer 1: {w.pattern} witness gives Pf = {w.pfaffian}")
