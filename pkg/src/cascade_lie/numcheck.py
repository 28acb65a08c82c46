"""Floating-point checks of the analytic identities on Heisenberg factors.

Model: for λ ≠ 0 on the Heisenberg group H_d with law
(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x·y'),

    π_λ(x, y, z) f(t) = exp(2πiλ(z + y·t)) f(t + x)        on L²(R^d).

With this 2π convention ∫∫ |⟨u, π_λ(x, y, 0) v⟩|² dx dy = ‖u‖²‖v‖² / |λ|^d.

Test vectors are decomposable: products over coordinates of
(polynomial) × exp(−a t²).  Their norms come from closed-form Gaussian
moments, which serve as the independent oracle for the quadrature.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import hermite as _hermite

from .liealg import build_upper_triangular
from .plancherel import formal_degree, plancherel_constant

RULES = ("trapezoid", "gauss-hermite")


@dataclass(frozen=True)
class QuadratureSpec:
    """One-dimensional rule on [−extent, extent], reused on every axis it is given to."""

    extent: float
    points: int
    rule: str = "trapezoid"

    def __post_init__(self) -> None:
        if self.points < 8:
            raise ValueError(f"need at least 8 points per axis, got {self.points}")
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        if not self.extent > 0:
            raise ValueError("extent must be positive")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        if self.rule == "trapezoid":
            t = np.linspace(-self.extent, self.extent, self.points)
            w = np.full(self.points, t[1] - t[0])
            w[0] = w[-1] = w[0] / 2
            return t, w
        xi, w = _hermite.hermgauss(self.points)
        s = self.extent / xi[-1]
        return s * xi, s * w * np.exp(xi**2)

    def refined(self) -> "QuadratureSpec":
        pts = 2 * self.points - 1 if self.rule == "trapezoid" else 2 * self.points
        return QuadratureSpec(self.extent, pts, self.rule)

    def describe(self, axis: str) -> dict:
        return {"axis": axis, "extent": self.extent, "points": self.points, "rule": self.rule}


def midpoints(extent: float, points: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint rule on [−extent, extent]; never samples 0 when points is even."""
    h = 2 * extent / points
    return -extent + h * (np.arange(points) + 0.5), np.full(points, h)


def gaussian_moment(m: int, a: float) -> float:
    """∫ t^m exp(−a t²) dt over R."""
    if m % 2:
        return 0.0
    return math.gamma((m + 1) / 2) / a ** ((m + 1) / 2)


@dataclass(frozen=True)
class GaussianPolynomial:
    """p(t) exp(−a t²) in one variable, p given by coefficients (constant first)."""

    coeffs: tuple[complex, ...]
    a: float = 0.5

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("Gaussian width must be positive")
        if not any(self.coeffs):
            raise ValueError("zero vector")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.polynomial.polynomial.polyval(t, np.asarray(self.coeffs, dtype=complex)) * np.exp(
            -self.a * t**2
        )

    def norm2(self) -> float:
        total = 0.0
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(self.coeffs):
                total += (np.conj(ci) * cj).real * gaussian_moment(i + j, 2 * self.a)
        return total

    @property
    def sigma(self) -> float:
        """Standard deviation of the Gaussian factor."""
        return 1 / math.sqrt(2 * self.a)


@dataclass(frozen=True)
class Vector:
    """Decomposable vector in L²(R^d): a product of one-variable factors."""

    factors: tuple[GaussianPolynomial, ...]

    @classmethod
    def ground(cls, d: int, a: float = 0.5) -> "Vector":
        """Unit-norm Gaussian (2a/π)^{d/4} exp(−a|t|²)."""
        c = (2 * a / math.pi) ** 0.25
        return cls(tuple(GaussianPolynomial((c,), a) for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.factors)

    def __call__(self, *ts):
        out = 1.0
        for f, t in zip(self.factors, ts):
            out = out * f(t)
        return out

    def norm2(self) -> float:
        return math.prod(f.norm2() for f in self.factors)


@dataclass(frozen=True)
class ModelRep:
    d: int
    lam: float

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ValueError("λ must be nonzero")

    @staticmethod
    def multiply(g, h):
        x, y, z = (np.asarray(c, dtype=float) for c in g)
        x2, y2, z2 = (np.asarray(c, dtype=float) for c in h)
        return (x + x2, y + y2, float(z + z2 + np.dot(x, y2)))

    def act(self, g, f: Callable) -> Callable:
        """π_λ(g) f as a function of t ∈ R^d (t given as a sequence of arrays)."""
        x, y, z = g
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)

        def out(*ts):
            phase = z + sum(yi * ti for yi, ti in zip(y, ts))
            return np.exp(2j * math.pi * self.lam * phase) * f(*(ti + xi for ti, xi in zip(ts, x)))

        return out

    def norm2(self, f: Callable, quad: QuadratureSpec) -> float:
        t, w = quad.nodes()
        grids = np.meshgrid(*([t] * self.d), indexing="ij")
        weights = math.prod(np.meshgrid(*([w] * self.d), indexing="ij"))
        return float(np.sum(weights * np.abs(f(*grids)) ** 2))


def _verdict(residual: float, threshold: float, drift: float) -> str:
    if drift > threshold:
        return "inconclusive"
    return "pass" if residual < threshold else "fail"


@dataclass
class ResidualReport:
    check: str
    params: dict
    residual: float
    grids: list = field(default_factory=list)
    verdict: str = "pass"
    value: float = float("nan")
    oracle: float = float("nan")

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "residual": self.residual,
            "grids": self.grids,
            "verdict": self.verdict,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)


def _coefficient_integral_1d(
    lam: float, u: GaussianPolynomial, v: GaussianPolynomial, quads: dict[str, QuadratureSpec]
) -> float:
    t, wt = quads["t"].nodes()
    x, wx = quads["x"].nodes()
    y, wy = quads["y"].nodes()
    a = np.conj(u(t))[None, :] * v(t[None, :] + x[:, None]) * wt[None, :]
    phase = np.exp(2j * math.pi * lam * np.outer(t, y))
    c = a @ phase
    return float(np.einsum("i,ij,j->", wx, np.abs(c) ** 2, wy))


DECAY = 40.0  # grids stop where the Gaussian envelopes fall below exp(-DECAY)


def default_coefficient_quadrature(
    lam: float, u: Vector, v: Vector, points: int = 96, rule: str = "trapezoid"
) -> dict[str, QuadratureSpec]:
    """Grids for the vectors (t), their overlap (x) and the Fourier side (y).

    u(t)v(t+x) carries a Gaussian exp(−(a_u+a_v)t²), so its transform at
    ω = 2πλy decays like exp(−ω²/(4(a_u+a_v))).  The y-range stops where that
    reaches exp(−DECAY), and the t-spacing keeps the first alias of the
    largest frequency beyond the same decay.
    """
    factors = u.factors + v.factors
    degree = max(len(f.coeffs) for f in factors)
    sig = max(f.sigma for f in factors)
    a_lo = 2 * min(f.a for f in factors)
    a_hi = 2 * max(f.a for f in factors)
    t_ext = (10 + degree) * sig
    omega = math.sqrt(4 * a_lo * DECAY) * 1.5
    y_ext = omega / (2 * math.pi * abs(lam))
    margin = math.sqrt(4 * a_hi * DECAY) * 1.5
    needed = math.ceil(2 * t_ext * (omega + margin) / (2 * math.pi)) + 1
    t_points = max(points, needed)
    return {
        "t": QuadratureSpec(t_ext, t_points, rule),
        "x": QuadratureSpec(2 * t_ext, points, rule),
        "y": QuadratureSpec(y_ext, points, rule),
    }


def coefficient_integral(lam: float, u: Vector, v: Vector, quads: dict[str, QuadratureSpec]) -> float:
    """∫∫ |⟨u, π_λ(x, y, 0) v⟩|² dx dy over R^{2d}; factorizes over coordinates."""
    return math.prod(_coefficient_integral_1d(lam, fu, fv, quads) for fu, fv in zip(u.factors, v.factors))


def coefficient_norm_check(
    d: int,
    lam: float,
    u: Vector | None = None,
    v: Vector | None = None,
    quad: dict[str, QuadratureSpec] | QuadratureSpec | None = None,
    threshold: float = 1e-6,
) -> ResidualReport:
    """Relative residual of the coefficient integral against ‖u‖²‖v‖²/|λ|^d."""
    if lam == 0:
        raise ValueError("λ must be nonzero")
    u = u or Vector.ground(d)
    v = v or Vector.ground(d)
    if u.d != d or v.d != d:
        raise ValueError(f"vectors must have {d} factors")
    if quad is None:
        quad = default_coefficient_quadrature(lam, u, v)
    elif isinstance(quad, QuadratureSpec):
        quad = {"t": quad, "x": quad, "y": quad}
    for f in u.factors + v.factors:
        if quad["t"].extent < 6 * f.sigma:
            raise ValueError("t-grid must cover at least 6 standard deviations of the test vectors")
    oracle = u.norm2() * v.norm2() / abs(lam) ** d
    value = coefficient_integral(lam, u, v, quad)
    fine = coefficient_integral(lam, u, v, {k: q.refined() for k, q in quad.items()})
    residual = abs(value - oracle) / oracle
    drift = abs(fine - value) / abs(fine)
    return ResidualReport(
        check="coefficient_norm",
        params={"d": d, "lambda": lam},
        residual=residual,
        grids=[q.describe(k) for k, q in sorted(quad.items())],
        verdict=_verdict(residual, threshold, drift),
        value=value,
        oracle=oracle,
    )


def degree_scaling_ratio(d: int, lam: float = 1.0) -> float:
    """Coefficient integral at λ divided by the one at 2λ (expected 2^d).

    Each integral runs on a grid resolved for its own λ.
    """
    u = v = Vector.ground(d)
    lo = coefficient_integral(lam, u, v, default_coefficient_quadrature(lam, u, v))
    hi = coefficient_integral(2 * lam, u, v, default_coefficient_quadrature(2 * lam, u, v))
    return lo / hi


# Plancherel inversion ------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianSpec:
    """f(X) = amplitude · exp(−Σ widths_k X_k²) on Lie algebra coordinates."""

    widths: tuple[float, ...]
    amplitude: float = 1.0

    def __call__(self, *xs):
        return self.amplitude * np.exp(-sum(a * x**2 for a, x in zip(self.widths, xs)))

    def at_identity(self) -> float:
        return self.amplitude


def _fourier_matrix(quad: QuadratureSpec, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x, w = quad.nodes()
    return x, np.exp(-2j * math.pi * np.outer(xi, x)) * w[None, :]


def _inversion_h1(f: GaussianSpec, quad: QuadratureSpec, lam_points: int) -> float:
    """Full-tensor path on H_1 (coordinates X, Y in v and Z in z)."""
    alg = build_upper_triangular(3)
    c = plancherel_constant(alg)
    x, _ = quad.nodes()
    grid = np.meshgrid(x, x, x, indexing="ij")
    values = f(*grid)
    xi, wxi = quad.nodes()  # frequency grid for the orbit directions
    lam, wlam = midpoints(quad.extent, lam_points)
    _, ex = _fourier_matrix(quad, xi)
    _, ez = _fourier_matrix(quad, lam)
    # f̂(ξ_X, ξ_Y, λ) by successive contractions
    fh = np.tensordot(ex, values, axes=([1], [0]))
    fh = np.tensordot(ex, fh, axes=([1], [1])).transpose(1, 0, 2)
    fh = np.tensordot(fh, ez, axes=([2], [1]))
    orbit = np.einsum("i,j,ijk->k", wxi, wxi, fh)  # ∫ over v* + λ
    degree = np.array([float(formal_degree(alg, [Q(l)])) for l in lam])
    theta = orbit / (c * degree)  # distribution character at λ
    return float(np.real(c * np.sum(wlam * theta * degree)))


def _inversion_upper4(f: GaussianSpec, quad: QuadratureSpec, lam_points: int) -> float:
    """Separable path on the ℓ = 4 group: v has 4 coordinates, s = (z_1, z_2)."""
    alg = build_upper_triangular(4)
    c = plancherel_constant(alg)
    v_idx, s_idx = sorted(alg.v_indices), list(alg.s_indices)
    xi, wxi = quad.nodes()
    lam, wlam = midpoints(quad.extent, lam_points)
    orbit_v = 1.0 + 0j
    for k in v_idx:
        x, e = _fourier_matrix(quad, xi)
        g_hat = e @ np.exp(-f.widths[k] * x**2)
        orbit_v *= np.sum(wxi * g_hat)
    x, e = _fourier_matrix(quad, lam)
    hat_s = [e @ np.exp(-f.widths[k] * x**2) for k in s_idx]
    l1, l2 = np.meshgrid(lam, lam, indexing="ij")
    degree = np.vectorize(lambda a, b: float(formal_degree(alg, [Q(a), Q(b)])))(l1, l2)
    orbit = f.amplitude * orbit_v * np.outer(hat_s[0], hat_s[1])
    theta = orbit / (c * degree)
    return float(np.real(c * np.einsum("i,j,ij->", wlam, wlam, theta * degree)))


def plancherel_inversion_check(
    group: str | int,
    f: GaussianSpec | None = None,
    quad: QuadratureSpec | None = None,
    lam_points: int = 64,
    threshold: float | None = None,
) -> ResidualReport:
    """Relative residual of c ∫ Θ_λ(f) |P(λ)| dλ against f(e).

    ``group`` is "H1" (or 1) for the three-dimensional Heisenberg group, or
    "upper4" (or 4) for strictly upper-triangular 4×4 matrices.  Θ_λ is the
    orbit integral of the Euclidean Fourier transform of f over v* + λ.
    """
    key = {"H1": "H1", 1: "H1", "upper4": "upper4", 4: "upper4"}.get(group)
    if key is None:
        raise ValueError(f"group must be 'H1' or 'upper4', got {group!r}")
    dim = 3 if key == "H1" else 6
    f = f or GaussianSpec((math.pi,) * dim)
    if len(f.widths) != dim:
        raise ValueError(f"{key} needs {dim} Gaussian widths")
    if threshold is None:
        threshold = 1e-4 if key == "H1" else 1e-2
    quad = quad or QuadratureSpec(4.0, 48 if key == "H1" else 64)
    sig = max(1 / math.sqrt(2 * a) for a in f.widths)
    if quad.extent < 6 * sig:
        raise ValueError("grid must cover at least 6 standard deviations of f")
    run = _inversion_h1 if key == "H1" else _inversion_upper4
    value = run(f, quad, lam_points)
    fine = run(f, quad.refined(), 2 * lam_points)
    target = f.at_identity()
    residual = abs(value - target) / abs(target)
    drift = abs(fine - value) / abs(target)
    return ResidualReport(
        check="plancherel_inversion",
        params={"group": key, "widths": list(f.widths), "amplitude": f.amplitude},
        residual=residual,
        grids=[quad.describe("algebra and frequency"), {"axis": "lambda", "rule": "midpoint", "points": lam_points, "extent": quad.extent}],
        verdict=_verdict(residual, threshold, drift),
        value=value,
        oracle=target,
    )


def unitarity_defect(rep: ModelRep, v: Vector, g, quad: QuadratureSpec) -> float:
    """|‖π(g)v‖² − ‖v‖²| / ‖v‖² by quadrature."""
    base = v.norm2()
    return abs(rep.norm2(rep.act(g, v), quad) - base) / base


def group_law_defect(rep: ModelRep, v: Vector, g, h, quad: QuadratureSpec) -> float:
    """max |π(g)π(h)v − π(gh)v| on the quadrature grid."""
    t, _ = quad.nodes()
    grids = np.meshgrid(*([t] * rep.d), indexing="ij")
    lhs = rep.act(g, rep.act(h, v))(*grids)
    rhs = rep.act(ModelRep.multiply(g, h), v)(*grids)
    return float(np.max(np.abs(lhs - rhs)))
