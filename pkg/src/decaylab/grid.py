"""Radial exterior-domain geometry, quadrature, and initial-data families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .special import gamma

__all__ = [
    "ModelParams",
    "RadialGrid",
    "InitialData",
    "build_grid",
    "bump_profile",
    "smooth_cutoff",
    "bump_data",
    "polybump_profile",
    "polybump_data",
    "polytail_data",
    "custom_data",
    "parse_initial_data",
    "sphere_area",
]

MAX_DR = 0.25


def sphere_area(dim: int) -> float:
    """Surface area of the unit sphere in R^dim, 2 pi^(N/2) / Gamma(N/2)."""
    return 2.0 * math.pi ** (dim / 2.0) / gamma(dim / 2.0)


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 0.0
    dim: int = 3
    r_inner: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        if self.r_inner <= 0:
            raise ValueError("r_inner must be positive (origin excluded from the domain)")

    @property
    def cexp(self) -> float:
        return (self.dim - self.alpha) / (2.0 - self.alpha)

    def damping(self, r):
        return np.asarray(r, dtype=float) ** (-self.alpha)


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Uniform nodes r_0 = r_inner, ..., r_{n+1} = r_outer.

    Fields are arrays over all n+2 nodes and vanish at the two end nodes.
    ``w_vol`` and ``w_mu`` are trapezoid weights for dx and a(x) dx including
    the sphere area; ``w_half`` weights the n+1 half-node differences.
    """

    params: ModelParams
    r_outer: float
    n: int
    r: np.ndarray = field(repr=False)
    dr: float
    r_half: np.ndarray = field(repr=False)
    w_vol: np.ndarray = field(repr=False)
    w_mu: np.ndarray = field(repr=False)
    w_half: np.ndarray = field(repr=False)

    @classmethod
    def uniform(cls, params: ModelParams, r_outer: float, n: int) -> "RadialGrid":
        if n < 3:
            raise ValueError("need at least 3 interior nodes")
        if r_outer <= params.r_inner:
            raise ValueError("r_outer must exceed r_inner")
        r = np.linspace(params.r_inner, r_outer, n + 2)
        dr = (r_outer - params.r_inner) / (n + 1)
        omega = sphere_area(params.dim)
        trap = np.full(n + 2, dr)
        trap[[0, -1]] = 0.5 * dr
        w_vol = omega * trap * r ** (params.dim - 1)
        w_mu = w_vol * r ** (-params.alpha)
        r_half = 0.5 * (r[1:] + r[:-1])
        w_half = omega * dr * r_half ** (params.dim - 1)
        return cls(params, float(r_outer), int(n), r, dr, r_half, w_vol, w_mu, w_half)

    @property
    def interior(self) -> slice:
        return slice(1, self.n + 1)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.n + 2)

    def same_as(self, other: "RadialGrid") -> bool:
        return (self.params == other.params and self.n == other.n
                and self.r_outer == other.r_outer)

    # discrete calculus -------------------------------------------------
    def gradient(self, f: np.ndarray) -> np.ndarray:
        """Forward differences at the half nodes."""
        return np.diff(f) / self.dr

    def laplacian(self, f: np.ndarray) -> np.ndarray:
        """Flux-form radial Laplacian, zero on the boundary nodes.

        r^(1-N) d/dr (r^(N-1) df/dr) with centered differences; symmetric in
        the ``w_vol`` inner product for boundary-clean fields.
        """
        flux = self.r_half ** (self.params.dim - 1) * np.diff(f) / self.dr
        out = np.zeros_like(f)
        out[1:-1] = np.diff(flux) / (self.dr * self.r[1:-1] ** (self.params.dim - 1))
        return out

    def integrate(self, f: np.ndarray) -> float:
        return float(self.w_vol @ f)

    def integrate_mu(self, f: np.ndarray) -> float:
        return float(self.w_mu @ f)

    def integrate_half(self, g: np.ndarray) -> float:
        return float(self.w_half @ g)

    def support_radius(self, f: np.ndarray, threshold: float) -> float:
        """Largest node radius with |f| > threshold (r_inner when none)."""
        idx = np.nonzero(np.abs(f) > threshold)[0]
        return float(self.r[idx[-1]]) if idx.size else float(self.r[0])


def build_grid(params: ModelParams, R_supp: float, t_final: float, dr: float,
               dt: float | None = None) -> RadialGrid:
    """Grid whose outer radius the solution cannot reach before t_final.

    R_supp is the extent of the data beyond r_inner. Without ``dt`` the outer
    radius is r_inner + R_supp + t_final + 2 dr (the continuous light cone).
    An explicit scheme moves information one node per step, i.e. at speed
    dr/dt, so when ``dt`` is given the margin uses max(1, dr/dt) t_final and
    the discrete solution is exactly zero on the last nodes.
    """
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if not 0 < dr <= MAX_DR:
        raise ValueError(f"dr must lie in (0, {MAX_DR}], got {dr}")
    speed = 1.0 if dt is None else max(1.0, dr / dt)
    r_outer = params.r_inner + R_supp + speed * t_final + 2.0 * dr
    n = math.ceil((r_outer - params.r_inner) / dr - 1e-9) - 1
    return RadialGrid.uniform(params, r_outer, max(n, 3))


# initial data --------------------------------------------------------

def bump_profile(r, center: float, width: float, amp: float = 1.0):
    """amp * exp(1 - 1/(1 - x^2)) for |x| < 1, x = (r - center)/width."""
    x = (np.asarray(r, dtype=float) - center) / width
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = amp * np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


def _smooth_step(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def smooth_cutoff(y):
    """C-infinity eta with eta = 1 on [0, 1] and eta = 0 on [2, inf)."""
    a = _smooth_step(2.0 - np.asarray(y, dtype=float))
    b = _smooth_step(np.asarray(y, dtype=float) - 1.0)
    return a / (a + b)


@dataclass(frozen=True)
class InitialData:
    """Initial displacement and velocity profiles, sampled onto a grid on demand."""

    u0_fn: Callable[[np.ndarray], np.ndarray]
    u1_fn: Callable[[np.ndarray], np.ndarray]
    family: str
    R_supp: float
    descriptor: str = ""

    def sample(self, grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
        u0 = np.asarray(self.u0_fn(grid.r), dtype=float).copy()
        u1 = np.asarray(self.u1_fn(grid.r), dtype=float).copy()
        for f in (u0, u1):
            f[0] = 0.0
            f[-1] = 0.0
        return u0, u1


def bump_data(center: float = 2.0, width: float = 0.5, amp: float = 1.0,
              vel: float = 0.0, r_inner: float = 1.0) -> InitialData:
    """u0 = bump, u1 = vel * bump."""
    if center - width < r_inner:
        raise ValueError("bump support must stay inside the domain")
    desc = f"bump:center={center:g},width={width:g},amp={amp:g}"
    if vel:
        desc += f",vel={vel:g}"
    return InitialData(
        lambda r: bump_profile(r, center, width, amp),
        lambda r: vel * bump_profile(r, center, width, amp),
        "bump", center + width, desc,
    )


def polybump_profile(r, center: float, width: float, power: float = 6.0, amp: float = 1.0):
    """amp * (1 - x^2)^power for |x| < 1, x = (r - center)/width.

    Only C^(power-1), but with bounded high derivatives; useful where the
    exponential bump is too steep for the asymptotic convergence regime.
    """
    x = (np.asarray(r, dtype=float) - center) / width
    return np.where(np.abs(x) < 1.0, amp * np.clip(1.0 - x * x, 0.0, None) ** power, 0.0)


def polybump_data(center: float = 3.0, width: float = 1.5, power: float = 6.0, amp: float = 1.0,
                  vel: float = 0.0, r_inner: float = 1.0) -> InitialData:
    """u0 = polynomial bump, u1 = vel * polynomial bump."""
    if center - width < r_inner:
        raise ValueError("bump support must stay inside the domain")
    desc = f"polybump:center={center:g},width={width:g},power={power:g}"
    if amp != 1.0:
        desc += f",amp={amp:g}"
    if vel:
        desc += f",vel={vel:g}"
    return InitialData(
        lambda r: polybump_profile(r, center, width, power, amp),
        lambda r: vel * polybump_profile(r, center, width, power, amp),
        "polybump", center + width, desc,
    )


def polytail_profile(r, power: float, cutoff: float, r_inner: float, amp: float = 1.0):
    """amp (1 - exp(-(r - r_inner)^2)) r^-power, truncated by eta(r / cutoff)."""
    r = np.asarray(r, dtype=float)
    base = amp * (1.0 - np.exp(-((r - r_inner) ** 2))) * r ** (-power)
    return base * smooth_cutoff(r / cutoff)


def polytail_data(power: float = 5.0, cutoff: float = 20.0, amp: float = 1.0,
                  vel: float = 0.0, r_inner: float = 1.0) -> InitialData:
    """Polynomially decaying data cut off smoothly between cutoff and 2*cutoff."""
    if cutoff <= r_inner:
        raise ValueError("cutoff must exceed r_inner")
    desc = f"polytail:power={power:g},cutoff={cutoff:g}"
    if amp != 1.0:
        desc += f",amp={amp:g}"
    if vel:
        desc += f",vel={vel:g}"
    return InitialData(
        lambda r: polytail_profile(r, power, cutoff, r_inner, amp),
        lambda r: vel * polytail_profile(r, power, cutoff, r_inner, amp),
        "polytail", 2.0 * cutoff, desc,
    )


def custom_data(r_samples, u0_samples, u1_samples=None) -> InitialData:
    """Piecewise-linear interpolation of sampled profiles (zero outside)."""
    rs = np.asarray(r_samples, dtype=float)
    a = np.asarray(u0_samples, dtype=float)
    b = np.zeros_like(a) if u1_samples is None else np.asarray(u1_samples, dtype=float)
    return InitialData(
        lambda r: np.interp(r, rs, a, left=0.0, right=0.0),
        lambda r: np.interp(r, rs, b, left=0.0, right=0.0),
        "custom", float(rs[-1]), "custom",
    )


_FAMILIES = {
    "bump": (bump_data, {"center", "width", "amp", "vel"}),
    "polybump": (polybump_data, {"center", "width", "power", "amp", "vel"}),
    "polytail": (polytail_data, {"power", "cutoff", "amp", "vel"}),
}


def parse_initial_data(descriptor: str, r_inner: float = 1.0) -> InitialData:
    """Parse ``bump:center=2,width=0.5,amp=1``, ``polybump:center=3,width=1.5,power=6``
    or ``polytail:power=5,cutoff=20``."""
    family, _, rest = descriptor.strip().partition(":")
    if family not in _FAMILIES:
        raise ValueError(f"unknown initial-data family {family!r} (expected one of {sorted(_FAMILIES)})")
    factory, allowed = _FAMILIES[family]
    kwargs = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or key not in allowed:
            raise ValueError(f"bad {family} parameter {item!r}; allowed: {sorted(allowed)}")
        kwargs[key] = float(value)
    return factory(r_inner=r_inner, **kwargs)
