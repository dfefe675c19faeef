"""Gamma, Kummer's M and U, and the self-similar profile phi_beta.

All evaluators accept a float or an array of non-negative arguments and
return the same shape. ``phi`` style quantities are computed in scaled form
(``exp(-s) * M``) so large arguments never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadratureError, integrate_adaptive

__all__ = [
    "GammaPoleError",
    "KummerArgs",
    "KummerRangeError",
    "ProfileParams",
    "QuadratureError",
    "S_SWITCH",
    "gamma",
    "rgamma",
    "kummer_m",
    "kummer_m_scaled",
    "kummer_u",
    "varphi",
    "varphi_derivative",
    "varphi_derivatives",
]

# Lanczos approximation, g = 7, 15 coefficients (fitted at z = 0..14).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    1.0,
    676.5203681218835,
    -1259.1392167222818,
    771.3234287754377,
    -176.61502914598978,
    12.507343225028745,
    -0.13857103233328225,
    1.0091126294731374e-05,
    -3.434584225253105e-07,
    8.359337835712596e-07,
    -8.597755644539608e-07,
    6.046497338494928e-07,
    -2.9113287278906135e-07,
    8.589129313568227e-08,
    -1.1646065639867852e-08,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)

S_SWITCH = 40.0
SERIES_RTOL = 1e-16
SERIES_MAX_TERMS = 100_000
_ASYMP_MAX_TERMS = 400
_LOG_DBL_MAX = math.log(np.finfo(float).max)


class GammaPoleError(ValueError):
    """Gamma evaluated at a non-positive integer."""


class KummerRangeError(OverflowError):
    """Result of M(b, c; s) is not representable as a double."""


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma(x: float) -> float:
    """Gamma function via Lanczos (x >= 0.5) and reflection otherwise."""
    x = float(x)
    if _is_nonpositive_int(x):
        raise GammaPoleError(f"gamma has a pole at {x:g}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    # split the power so t**(z+0.5) cannot overflow before exp(-t) damps it
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_2PI * half * math.exp(-t) * half * acc


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpositive_int(float(x)):
        return 0.0
    return 1.0 / gamma(x)


@dataclass(frozen=True)
class KummerArgs:
    b: float
    c: float

    def __post_init__(self):
        if _is_nonpositive_int(self.c):
            raise ValueError(f"c must not be zero or a negative integer, got {self.c}")

    @property
    def terminating(self) -> bool:
        """True when M(b, c; s) is a polynomial."""
        return _is_nonpositive_int(self.b)


@dataclass(frozen=True)
class ProfileParams:
    alpha: float
    dim: int
    beta: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")

    @property
    def cexp(self) -> float:
        """(N - alpha) / (2 - alpha)."""
        return (self.dim - self.alpha) / (2.0 - self.alpha)

    @property
    def positive(self) -> bool:
        """Whether phi_beta is strictly positive (beta < cexp)."""
        return self.beta < self.cexp

    @property
    def kummer(self) -> KummerArgs:
        return KummerArgs(self.cexp - self.beta, self.cexp)

    def with_beta(self, beta: float) -> "ProfileParams":
        return ProfileParams(self.alpha, self.dim, beta)


def _as_array(s) -> tuple[np.ndarray, bool]:
    arr = np.asarray(s, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _out(arr: np.ndarray, scalar: bool):
    return float(arr[0]) if scalar else arr


def _series(b: float, c: float, s: np.ndarray) -> np.ndarray:
    """Direct power series for M(b, c; s)."""
    term = np.ones_like(s)
    total = np.ones_like(s)
    quiet = np.zeros(s.shape, dtype=int)
    for n in range(SERIES_MAX_TERMS):
        term = term * ((b + n) / (c + n)) * s / (n + 1)
        total = total + term
        small = np.abs(term) <= SERIES_RTOL * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= 3):
            return total
    raise ArithmeticError(f"M({b}, {c}; s) series did not converge in {SERIES_MAX_TERMS} terms")


def _pochhammer(x: float, j: int) -> float:
    out = 1.0
    for k in range(j):
        out *= x + k
    return out


def _asymptotic_sum(coef_ratio, exps0: float, s: np.ndarray, order: int, sign: float):
    """Sum_k a_k sign^k s^(exps0 - k) and its first `order` derivatives.

    ``coef_ratio(k)`` gives a_{k+1}/a_k. Truncated at the smallest term.
    """
    outs = [np.zeros_like(s) for _ in range(order + 1)]
    a = 1.0
    active = np.ones(s.shape, dtype=bool)
    prev = np.full(s.shape, np.inf)
    logs = np.log(s)
    for k in range(_ASYMP_MAX_TERMS):
        if a == 0.0:
            break
        m = exps0 - k
        base = a * sign**k * np.exp(m * logs)
        mag = np.abs(base)
        active &= mag < prev
        if not active.any():
            break
        fall = 1.0
        for j in range(order + 1):
            outs[j] = outs[j] + np.where(active, fall * base, 0.0)
            base = base / s
            fall *= m - j
        total = np.abs(outs[0])
        active &= mag > 1e-17 * total
        prev = mag
        a *= coef_ratio(k)
    return outs


def _scaled_asymptotic(b: float, c: float, s: np.ndarray, order: int) -> list[np.ndarray]:
    """exp(-s) M(b, c; s) and derivatives from the large-s expansion."""
    dominant = gamma(c) * rgamma(b)
    recessive = gamma(c) * math.cos(math.pi * b) * rgamma(c - b)
    out = [np.zeros_like(s) for _ in range(order + 1)]
    if dominant != 0.0:
        parts = _asymptotic_sum(
            lambda k: (c - b + k) * (1 - b + k) / (k + 1), b - c, s, order, 1.0
        )
        for j in range(order + 1):
            out[j] = out[j] + dominant * parts[j]
    if recessive != 0.0:
        g = _asymptotic_sum(lambda k: (b + k) * (b - c + 1 + k) / (k + 1), -b, s, order, -1.0)
        e = np.exp(-s)
        # d^j/ds^j [exp(-s) g] = exp(-s) sum_i binom(j,i) (-1)^(j-i) g^(i)
        for j in range(order + 1):
            acc = np.zeros_like(s)
            for i in range(j + 1):
                acc = acc + math.comb(j, i) * (-1) ** (j - i) * g[i]
            out[j] = out[j] + recessive * e * acc
    return out


def _scaled_series(b: float, c: float, s: np.ndarray, order: int) -> list[np.ndarray]:
    """exp(-s) M(b, c; s) and derivatives from term-wise differentiated series."""
    mders = [_pochhammer(b, j) / _pochhammer(c, j) * _series(b + j, c + j, s) for j in range(order + 1)]
    e = np.exp(-s)
    out = []
    for j in range(order + 1):
        acc = np.zeros_like(s)
        for i in range(j + 1):
            acc = acc + math.comb(j, i) * (-1) ** (j - i) * mders[i]
        out.append(e * acc)
    return out


def _scaled_m_derivs(args: KummerArgs, s: np.ndarray, order: int) -> list[np.ndarray]:
    if np.any(s < 0) or np.any(~np.isfinite(s)):
        raise ValueError("s must be finite and non-negative")
    b, c = float(args.b), float(args.c)
    if args.terminating:
        return _scaled_series(b, c, s, order)
    out = [np.empty_like(s) for _ in range(order + 1)]
    low = s <= S_SWITCH
    if low.any():
        for j, v in enumerate(_scaled_series(b, c, s[low], order)):
            out[j][low] = v
    if (~low).any():
        for j, v in enumerate(_scaled_asymptotic(b, c, s[~low], order)):
            out[j][~low] = v
    return out


def kummer_m_scaled(args: KummerArgs, s):
    """exp(-s) * M(b, c; s), safe for large s."""
    arr, scalar = _as_array(s)
    return _out(_scaled_m_derivs(args, arr, 0)[0], scalar)


def kummer_m(args: KummerArgs, s):
    """Kummer's function of the first kind M(b, c; s) for s >= 0.

    Raises KummerRangeError instead of returning inf when exp(s) scaling
    pushes the value past the double range.
    """
    arr, scalar = _as_array(s)
    if args.terminating:
        if np.any(arr < 0):
            raise ValueError("s must be non-negative")
        val = _series(float(args.b), float(args.c), arr)
        if not np.all(np.isfinite(val)):
            raise KummerRangeError(f"M({args.b}, {args.c}; s) exceeds double range")
        return _out(val, scalar)
    scaled = _scaled_m_derivs(args, arr, 0)[0]
    with np.errstate(divide="ignore"):
        log_mag = arr + np.log(np.abs(scaled))
    if np.any(log_mag > _LOG_DBL_MAX):
        raise KummerRangeError(f"M({args.b}, {args.c}; s) exceeds double range at s={arr.max():g}")
    return _out(np.exp(arr) * scaled, scalar)


def kummer_u(args: KummerArgs, s: float, rtol: float = 1e-12) -> float:
    """Kummer's function of the second kind from its integral representation.

    With sigma = tau/s the integral becomes
    U = s^-b / Gamma(b) * int_0^inf exp(-tau) tau^(b-1) (1 + tau/s)^(c-b-1) dtau,
    integrated on [0, 1] and [1, inf) separately.
    """
    b, c, s = float(args.b), float(args.c), float(s)
    if b <= 0:
        raise ValueError(f"U integral representation needs b > 0, got {b}")
    if s <= 0:
        raise ValueError(f"U needs s > 0, got {s}")
    p = c - b - 1.0

    def tail_factor(tau):
        return p * np.log1p(tau / s) - tau

    if b < 1.0:
        # tau = v^(1/b) removes the tau^(b-1) endpoint singularity
        def head(v):
            tau = v ** (1.0 / b)
            return np.exp(tail_factor(tau)) / b
    else:
        def head(tau):
            with np.errstate(divide="ignore"):
                return np.exp((b - 1.0) * np.log(tau) + tail_factor(tau))

    def tail(x):
        tau = 1.0 + x / (1.0 - x)
        with np.errstate(over="ignore"):
            return np.exp((b - 1.0) * np.log(tau) + tail_factor(tau)) / (1.0 - x) ** 2

    i1 = integrate_adaptive(head, 0.0, 1.0, rtol=rtol)
    i2 = integrate_adaptive(tail, 0.0, 1.0, rtol=rtol)
    return s ** (-b) * rgamma(b) * (i1 + i2)


def varphi_derivatives(p: ProfileParams, s, order: int = 2):
    """(phi_beta, phi_beta', ...) up to the requested derivative order."""
    arr, scalar = _as_array(s)
    vals = _scaled_m_derivs(p.kummer, arr, order)
    return tuple(_out(v, scalar) for v in vals)


def varphi(p: ProfileParams, s):
    """phi_beta(s) = exp(-s) M(cexp - beta, cexp; s)."""
    arr, scalar = _as_array(s)
    return _out(_scaled_m_derivs(p.kummer, arr, 0)[0], scalar)


def varphi_derivative(p: ProfileParams, s):
    arr, scalar = _as_array(s)
    return _out(_scaled_m_derivs(p.kummer, arr, 1)[1], scalar)
