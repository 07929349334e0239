"""Analytic 1D energy landscapes with exact derivatives and basin geometry.

Each built-in family is a polynomial potential with closed-form first and
second derivatives.  A basin is an open interval around a single local
minimum whose boundary points are the flanking saddles; crossing a saddle
is an exit through the pathway that owns it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsideBasin, NoConvergence, WrongSignature

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class PathwayInfo:
    """One exit pathway: its saddle point and the curvatures entering the rate law.

    Attributes:
        label: 1-based pathway label, ordered left to right.
        saddle: abscissa of the saddle point.
        barrier: energy difference V(saddle) - V(minimum), always > 0.
        curvature_at_saddle: V''(saddle), always < 0.
        curvature_at_min: V''(minimum), always > 0.
    """

    label: int
    saddle: float
    barrier: float
    curvature_at_saddle: float
    curvature_at_min: float

    def __post_init__(self):
        if self.barrier <= 0.0:
            raise WrongSignature(f"pathway {self.label}: barrier must be > 0, got {self.barrier}")
        if self.curvature_at_saddle >= 0.0:
            raise WrongSignature(
                f"pathway {self.label}: curvature at saddle must be < 0, "
                f"got {self.curvature_at_saddle}"
            )
        if self.curvature_at_min <= 0.0:
            raise WrongSignature(
                f"pathway {self.label}: curvature at minimum must be > 0, "
                f"got {self.curvature_at_min}"
            )


@dataclass(frozen=True)
class Basin:
    """Open interval (a, b) around one local minimum, with its exit pathways.

    For a basin with two pathways, pathway 1 exits at ``a`` and pathway 2 at
    ``b``.  A single-saddle basin is a half line: the non-saddle side is
    +/-inf and can never be crossed, so the lone pathway carries label 1.
    """

    a: float
    b: float
    minimum: float
    pathways: tuple[PathwayInfo, ...]

    def __post_init__(self):
        if not self.a < self.minimum < self.b:
            raise WrongSignature(
                f"basin ordering violated: a={self.a}, m={self.minimum}, b={self.b}"
            )
        if not self.pathways:
            raise WrongSignature("a basin needs at least one pathway")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def n_pathways(self) -> int:
        return len(self.pathways)

    @property
    def curvature_at_min(self) -> float:
        return self.pathways[0].curvature_at_min

    def contains(self, x: float) -> bool:
        return self.a < x < self.b


class Potential:
    """Base class for the built-in 1D potential families."""

    kind: str = ""
    dimension: int = 1

    def evaluate(self, x):
        """Return V(x); accepts scalars or arrays."""
        raise NotImplementedError

    def gradient(self, x):
        """Return V'(x), the exact analytic derivative."""
        raise NotImplementedError

    def hessian(self, x):
        """Return V''(x), the exact analytic second derivative."""
        raise NotImplementedError

    def drift_coefficients(self) -> tuple[float, float, float, float]:
        """Coefficients (d0, d1, d2, d3) of the drift -V'(x) as a cubic in x."""
        raise NotImplementedError

    def parameters(self) -> dict[str, float]:
        """Family parameters, for config echoes and metadata."""
        return {}

    def _seeds(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Analytic (minima, saddles) seed positions for Newton refinement."""
        raise NotImplementedError


@dataclass(frozen=True)
class DoubleWell(Potential):
    """Symmetric double well V(x) = x^4/4 - x^2/2 (minima at +-1, saddle at 0)."""

    kind = "double-well"

    def evaluate(self, x):
        return x**4 / 4.0 - x**2 / 2.0

    def gradient(self, x):
        return x**3 - x

    def hessian(self, x):
        return 3.0 * x**2 - 1.0

    def drift_coefficients(self):
        return (0.0, 1.0, 0.0, -1.0)

    def _seeds(self):
        return ((-1.0, 1.0), (0.0,))


@dataclass(frozen=True)
class TwoSaddle(Potential):
    """Asymmetric single well V(x) = -x^4/4 - c*x^3/3 + x^2/2.

    The minimum sits at 0 with V(0) = 0; the two flanking saddles are the
    roots of x^2 + c*x - 1 = 0, so c > 0 lowers the right barrier.  This is
    the primary search testbed: its basin is a bounded interval with two
    pathways carrying distinct barriers.
    """

    c: float = 0.2
    kind = "two-saddle"

    def evaluate(self, x):
        return -(x**4) / 4.0 - self.c * x**3 / 3.0 + x**2 / 2.0

    def gradient(self, x):
        return -(x**3) - self.c * x**2 + x

    def hessian(self, x):
        return -3.0 * x**2 - 2.0 * self.c * x + 1.0

    def drift_coefficients(self):
        return (0.0, -1.0, self.c, 1.0)

    def parameters(self):
        return {"c": self.c}

    def _seeds(self):
        disc = math.sqrt(self.c * self.c + 4.0)
        return ((0.0,), ((-self.c - disc) / 2.0, (-self.c + disc) / 2.0))


@dataclass(frozen=True)
class QuadraticWell(Potential):
    """Harmonic well V(x) = omega * x^2 / 2; no saddles, no basin."""

    omega: float = 1.0
    kind = "quadratic-well"

    def evaluate(self, x):
        return self.omega * x**2 / 2.0

    def gradient(self, x):
        return self.omega * x

    def hessian(self, x):
        return self.omega * np.ones_like(np.asarray(x, dtype=float))

    def drift_coefficients(self):
        return (0.0, -self.omega, 0.0, 0.0)

    def parameters(self):
        return {"omega": self.omega}

    def _seeds(self):
        return ((0.0,), ())


_FAMILIES = {
    DoubleWell.kind: DoubleWell,
    TwoSaddle.kind: TwoSaddle,
    QuadraticWell.kind: QuadraticWell,
}


def make_potential(kind: str, **params) -> Potential:
    """Construct a built-in potential by family name."""
    try:
        family = _FAMILIES[kind]
    except KeyError:
        known = ", ".join(sorted(_FAMILIES))
        raise ValueError(f"unknown potential family {kind!r} (known: {known})") from None
    return family(**params)


def refine_stationary_point(
    potential: Potential,
    seed: float,
    tol: float = NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
) -> float:
    """Newton-refine a stationary point of V from an analytic seed.

    Iterates x <- x - V'(x)/V''(x) until |V'(x)| <= tol.

    Raises:
        NoConvergence: if the tolerance is not met within max_iter steps.
    """
    x = float(seed)
    for _ in range(max_iter):
        g = float(potential.gradient(x))
        if abs(g) <= tol:
            return x
        h = float(potential.hessian(x))
        if h == 0.0:
            raise NoConvergence(f"vanishing curvature at x={x}; Newton step undefined")
        x -= g / h
    if abs(float(potential.gradient(x))) <= tol:
        return x
    raise NoConvergence(f"Newton did not reach |V'| <= {tol} within {max_iter} iterations")


def stationary_points(potential: Potential, search_interval: tuple[float, float]) -> Basin:
    """Locate the basin inside ``search_interval``: its minimum and flanking saddles.

    The interval must contain exactly one interior minimum of the family,
    flanked by one or two of its saddles.  Stationary points are refined by
    Newton iteration on V' and classified by the sign of V''.

    Returns:
        Basin whose interval endpoints are the saddle abscissas; a missing
        side (no saddle there) is extended to +/-inf, the true extent of the
        basin of attraction.

    Raises:
        NoConvergence: Newton failed on some seed.
        WrongSignature: a refined point's curvature contradicts its role.
        ValueError: the interval does not select a one-minimum basin.
    """
    lo, hi = search_interval
    if not lo < hi:
        raise ValueError(f"empty search interval ({lo}, {hi})")
    min_seeds, saddle_seeds = potential._seeds()

    minima = [refine_stationary_point(potential, s) for s in min_seeds if lo < s < hi]
    if len(minima) != 1:
        raise ValueError(
            f"search interval ({lo}, {hi}) contains {len(minima)} minima; need exactly 1"
        )
    m = minima[0]
    curv_min = float(potential.hessian(m))
    if curv_min <= 0.0:
        raise WrongSignature(f"curvature at refined minimum x={m} is {curv_min}, expected > 0")

    saddles = sorted(refine_stationary_point(potential, s) for s in saddle_seeds if lo < s < hi)
    if not saddles:
        raise ValueError(f"search interval ({lo}, {hi}) contains no saddle")
    if len(saddles) > 2:
        raise ValueError(f"search interval ({lo}, {hi}) contains {len(saddles)} saddles")
    v_min = float(potential.evaluate(m))
    pathways = []
    for label, s in enumerate(saddles, start=1):
        curv_s = float(potential.hessian(s))
        if curv_s >= 0.0:
            raise WrongSignature(f"curvature at refined saddle x={s} is {curv_s}, expected < 0")
        pathways.append(
            PathwayInfo(
                label=label,
                saddle=s,
                barrier=float(potential.evaluate(s)) - v_min,
                curvature_at_saddle=curv_s,
                curvature_at_min=curv_min,
            )
        )

    left = [p for p in pathways if p.saddle < m]
    right = [p for p in pathways if p.saddle > m]
    if len(left) > 1 or len(right) > 1:
        raise ValueError("more than one saddle on the same side of the minimum")
    a = left[0].saddle if left else -math.inf
    b = right[0].saddle if right else math.inf
    return Basin(a=a, b=b, minimum=m, pathways=tuple(pathways))


def classify_exit(basin: Basin, exit_point: float) -> int:
    """Map a boundary crossing to its pathway label.

    Returns label 1 for exit at or beyond ``a`` and the last label for exit
    at or beyond ``b``.

    Raises:
        InsideBasin: if ``exit_point`` lies strictly inside (a, b).
    """
    if basin.contains(exit_point):
        raise InsideBasin(f"x={exit_point} lies inside ({basin.a}, {basin.b})")
    if exit_point <= basin.a:
        return basin.pathways[0].label
    return basin.pathways[-1].label
