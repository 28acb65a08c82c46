"""Coefficient norms and Plancherel inversion on Heisenberg groups."""

from __future__ import annotations

from cascade_lie.numcheck import coefficient_norm_check, degree_scaling_ratio, plancherel_inversion_check

for d, lam in [(1, 1.0), (1, 2.0), (2, 1.0), (2, -0.5)]:
    rep = coefficient_norm_check(d, lam, threshold=1e-4)
    print(f"d={d} λ={lam:+}: ∫|coefficient|² = {rep.value:.12f}, expected {rep.oracle:.12f} ({rep.verdict})")
for d in (1, 2):
    print(f"d={d}: integral ratio λ vs 2λ = {degree_scaling_ratio(d):.8f}")
for group in ("H1", "upper4"):
    rep = plancherel_inversion_check(group)
    print(f"{group}: inversion gives {rep.value:.8f} for f(e) = {rep.oracle} ({rep.verdict})")
