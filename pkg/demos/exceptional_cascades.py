"""Cascades and layer sizes of the exceptional root systems."""

from __future__ import annotations

from cascade_lie import build_root_system, compute_layers, kostant_cascade
from cascade_lie.rootsys import format_root

for kind, rank in [("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8)]:
    sys = build_root_system(kind, rank)
    cascade = kostant_cascade(sys)
    layers = compute_layers(sys, cascade)
    print(f"{kind}{rank}: |Δ⁺| = {len(sys.positive_roots)}, layer sizes {list(layers.sizes())}")
    for k, gen in enumerate(cascade.generations, start=1):
        print(f"  gen {k}: " + ", ".join(format_root(cascade.betas[r]) for r in gen))
