"""Space-time weights Psi^beta and the self-similar solutions Phi_beta.

Both weights are evaluated at the shifted time ``t0 + t``. ``t0 = 0`` is
accepted as a raw mode that evaluates the unshifted functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .special import ProfileParams, gamma, varphi

__all__ = [
    "RegimeError",
    "WeightSpec",
    "psi",
    "phi_weight",
    "phi_time_derivative",
    "phi_envelope_constants",
    "phi_initial_trace",
    "literal_initial_trace",
    "envelope_grid",
]


class RegimeError(ValueError):
    """Parameter outside the range where a quantity is defined."""


@dataclass(frozen=True)
class WeightSpec:
    beta: float
    t0: float = 16.0
    alpha: float = 0.0
    dim: int = 3

    def __post_init__(self):
        if not (self.t0 >= 1.0 or self.t0 == 0.0):
            raise ValueError(f"t0 must be >= 1 (or 0 for unshifted evaluation), got {self.t0}")
        # validates alpha and dim
        ProfileParams(self.alpha, self.dim, self.beta)

    @property
    def profile(self) -> ProfileParams:
        return ProfileParams(self.alpha, self.dim, self.beta)

    @property
    def cexp(self) -> float:
        return (self.dim - self.alpha) / (2.0 - self.alpha)

    def with_beta(self, beta: float) -> "WeightSpec":
        return WeightSpec(beta, self.t0, self.alpha, self.dim)

    @property
    def eps_star(self) -> float:
        """epsilon_* from lambda = (1 - 3 eps) cexp, clamped to (0, 1/3]."""
        lam = self.beta
        if lam >= self.cexp:
            raise RegimeError(f"lambda={lam} must be below (N-alpha)/(2-alpha)={self.cexp:g}")
        if lam <= 0:
            return 1.0 / 3.0
        return min((1.0 - lam / self.cexp) / 3.0, 1.0 / 3.0)

    @property
    def lambda_star(self) -> float:
        return self.beta / (1.0 - 2.0 * self.eps_star)


def _similarity_variable(alpha: float, r, t):
    return np.asarray(r, dtype=float) ** (2.0 - alpha) / ((2.0 - alpha) ** 2 * t)


def psi(spec: WeightSpec, r, t):
    """(t0 + t + r^(2-alpha)/(2-alpha)^2)^beta."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("r must be positive")
    base = spec.t0 + t + r ** (2.0 - spec.alpha) / (2.0 - spec.alpha) ** 2
    out = base ** spec.beta
    return float(out) if out.ndim == 0 else out


def phi_weight(spec: WeightSpec, r, t):
    """Phi_beta(r, t0 + t) = T^-beta phi_beta(r^(2-alpha) / ((2-alpha)^2 T))."""
    time = spec.t0 + t
    if np.any(np.asarray(time) <= 0):
        raise ValueError("Phi_beta needs positive (shifted) time")
    s = _similarity_variable(spec.alpha, r, time)
    out = np.asarray(time, dtype=float) ** (-spec.beta) * varphi(spec.profile, s)
    return float(out) if np.ndim(out) == 0 else out


def phi_time_derivative(spec: WeightSpec, r, t):
    """d/dt Phi_beta = -beta Phi_{beta+1}."""
    if spec.beta == 0:
        return 0.0 * np.asarray(phi_weight(spec, r, t)) if np.ndim(r) else 0.0
    return -spec.beta * phi_weight(spec.with_beta(spec.beta + 1.0), r, t)


def envelope_grid(n: int = 1024, s_max: float = 1e6) -> np.ndarray:
    """s = 0 followed by a log grid up to s_max (n points in total)."""
    return np.concatenate([[0.0], np.logspace(-6, np.log10(s_max), n - 1)])


def phi_envelope_constants(spec: WeightSpec, require_lower: bool = True):
    """Measured (c_beta, C_beta) with c (1+s)^-beta <= phi_beta <= C (1+s)^-beta.

    The lower constant only exists for beta < (N-alpha)/(2-alpha); outside
    that regime it is reported as None, or a RegimeError is raised when
    ``require_lower`` is set.
    """
    p = spec.profile
    if not p.positive and require_lower:
        raise RegimeError(
            f"lower envelope needs beta < {p.cexp:g}, got beta={spec.beta:g}"
        )
    s = envelope_grid()
    scaled = varphi(p, s) * (1.0 + s) ** spec.beta
    upper = float(np.max(np.abs(scaled)))
    lower = float(np.min(scaled)) if p.positive else None
    return lower, upper


def phi_initial_trace(spec: WeightSpec, r):
    """Limit of Phi_beta(r, t) as the (unshifted) time goes to zero.

    From phi_beta(s) ~ Gamma(c)/Gamma(c-beta) s^-beta this is
    Gamma(c)/Gamma(c-beta) (2-alpha)^(2 beta) r^(-(2-alpha) beta).
    """
    c = spec.cexp
    if spec.beta >= c:
        raise RegimeError(f"initial trace needs beta < {c:g}")
    ratio = gamma(c) / gamma(c - spec.beta)
    r = np.asarray(r, dtype=float)
    out = ratio * (2.0 - spec.alpha) ** (2.0 * spec.beta) * r ** (-(2.0 - spec.alpha) * spec.beta)
    return float(out) if out.ndim == 0 else out


def literal_initial_trace(spec: WeightSpec, r):
    """Gamma(c)/Gamma(c-beta) r^((2-alpha) beta), the closed form as usually quoted.

    Kept for comparison only; Phi_beta does not converge to it (see
    ``phi_initial_trace``).
    """
    c = spec.cexp
    return gamma(c) / gamma(c - spec.beta) * np.asarray(r, dtype=float) ** ((2.0 - spec.alpha) * spec.beta)
