"""Exponential sums along curves: evaluation, growth and dominance analysis.

An :class:`ExponentialSum` is ``phi(t) = sum_j c_j(t) exp(-2 pi i v_j . gamma(t))``
where each coefficient ``c_j`` is a vectorised callable returning NaN where it
is undefined (poles, near-singular cone denominators).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import logsumexp

from .config import rel_tol
from .curves import AnalyticCurve, ParametricCurve, RationalCircle, RationalCurve, TrigCircle
from .errors import (
    AllPoles,
    IdenticallyZeroOnGrid,
    NoUniqueDominant,
    OverflowGuard,
    PoleAtParameter,
    UnsupportedCurveKind,
    WrongCurveKind,
)
from .geometry import projection_collisions
from .transform import EXP_LIMIT, TWO_PI_I

log = logging.getLogger(__name__)

DOMINANCE_MARGIN = 1e-9
ZERO_TERM_SAMPLES = 256
ZERO_TERM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ExpTerm:
    frequency: np.ndarray
    coefficient: Callable
    label: str = ""

    def __post_init__(self):
        v = np.array(self.frequency, dtype=float).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "frequency", v)

    @classmethod
    def constant(cls, frequency, value=1.0, label=""):
        value = complex(value)
        return cls(frequency, lambda t: np.full(np.shape(np.atleast_1d(t)), value, dtype=complex), label)

    @classmethod
    def rational(cls, frequency, numerator, denominator=(1.0,), label=""):
        """Coefficient ``num(t)/den(t)`` (ascending coefficients); NaN at poles."""
        num = np.asarray(numerator, dtype=complex)
        den = np.asarray(denominator, dtype=complex)

        def coefficient(t):
            t = np.atleast_1d(np.asarray(t, dtype=complex))
            d = P.polyval(t, den)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = P.polyval(t, num) / d
            return np.where(np.abs(d) < 1e-12, np.nan, out)

        return cls(frequency, coefficient, label)


@dataclass(frozen=True, eq=False)
class ExponentialSum:
    terms: tuple
    curve: ParametricCurve
    coefficient_matrix: Callable | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def __len__(self):
        return len(self.terms)

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([term.frequency for term in self.terms]).reshape(len(self.terms), -1)

    def coefficients(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        if self.coefficient_matrix is not None:
            return self.coefficient_matrix(t)
        if not self.terms:
            return np.zeros((len(t), 0), dtype=complex)
        return np.stack([np.asarray(term.coefficient(t), dtype=complex) for term in self.terms], axis=1)

    def exponents(self, t) -> np.ndarray:
        """``-2 pi i v_j . gamma(t)``, shape (n, N)."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        return -TWO_PI_I * (self.curve(t) @ self.frequencies.T)

    def log_moduli(self, t) -> np.ndarray:
        """``log |c_j(t) exp(...)|`` without forming the exponential."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.coefficients(t))) + self.exponents(t).real

    def term_values(self, t) -> np.ndarray:
        expo = self.exponents(t)
        if np.nanmax(expo.real, initial=-np.inf) > EXP_LIMIT:
            raise OverflowGuard(f"exponent real part {np.nanmax(expo.real):.1f} exceeds {EXP_LIMIT}")
        return self.coefficients(t) * np.exp(expo)

    def evaluate_many(self, t) -> np.ndarray:
        """phi at many parameters; NaN where any term is undefined."""
        return self.term_values(t).sum(axis=1)

    def evaluate(self, t) -> complex:
        value = self.evaluate_many(np.array([t], dtype=complex))[0]
        if not np.isfinite(value):
            raise PoleAtParameter(f"sum undefined at t={t}")
        return complex(value)

    def without_vanishing_terms(self, samples=None) -> "ExponentialSum":
        """Drop terms whose coefficient is numerically zero on a sample grid."""
        if samples is None:
            lo, hi = self.curve.default_interval()
            samples = np.linspace(lo, hi, ZERO_TERM_SAMPLES)
        coeff = np.abs(self.coefficients(samples))
        peak = np.nanmax(coeff, axis=0, initial=0.0)
        scale = max(1.0, float(peak.max(initial=0.0)))
        keep = [k for k in range(len(self.terms)) if peak[k] >= ZERO_TERM_TOL * scale]
        for k in set(range(len(self.terms))) - set(keep):
            log.info("dropping term %d (%s): coefficient vanishes on the sample grid", k, self.terms[k].label)
        if len(keep) == len(self.terms):
            return self
        return ExponentialSum(tuple(self.terms[k] for k in keep), self.curve)


def evaluate(S: ExponentialSum, t) -> complex:
    return S.evaluate(t)


# -- growth along vertical lines ----------------------------------------------------

def cosine_asymptotics(t):
    """Leading-order models ``(e^y / 2, -x)`` of ``|cos t|`` and ``Arg cos t``."""
    t = complex(t)
    return math.exp(t.imag) / 2, -t.real


def cosine_sine_asymptotics(t, A, B):
    """Models of ``|A sin t + B cos t|`` and its argument for large ``Im t``."""
    t = complex(t)
    c = complex(B) + 1j * complex(A)
    return abs(c) * math.exp(t.imag) / 2, -t.real + cmath.phase(c)


def principal_arg(z) -> float:
    """Argument in (-pi, pi]."""
    a = cmath.phase(z)
    return math.pi if a == -math.pi else a


def _require_trig_circle(S):
    if not isinstance(S.curve, TrigCircle):
        raise WrongCurveKind(f"growth analysis needs a trigonometric circle, got {S.curve.kind}")
    return S.curve.circle


def _plane_projection(S, shift=None):
    C = _require_trig_circle(S)
    v = S.frequencies
    if shift is not None:
        v = v + np.asarray(shift, dtype=float)
    i, j = C.plane
    return v[:, i] + 1j * v[:, j]


def growth_rates(S: ExponentialSum, shift=None) -> np.ndarray:
    """``pi |R| |v_j . e_i + i v_j . e_j|`` for each term, optionally after translating by ``shift``."""
    C = _require_trig_circle(S)
    return math.pi * abs(C.radius) * np.abs(_plane_projection(S, shift))


@dataclass(frozen=True)
class Dominance:
    index: int
    x_star: float
    epsilon: float
    shift: np.ndarray
    rates: np.ndarray


def _unique_max(rates):
    order = np.argsort(-rates, kind="stable")
    top = rates[order[0]]
    if len(rates) == 1:
        return int(order[0]), 1.0
    second = rates[order[1]]
    if top <= 0:
        return None, 0.0
    eps = 1.0 - second / top
    return (int(order[0]) if eps > DOMINANCE_MARGIN else None), eps


def dominant_term(S: ExponentialSum) -> Dominance:
    """Term of strictly largest growth and the real part ``x*`` that aligns it.

    When several distinct plane projections tie for the largest modulus the
    frequencies are translated (which multiplies phi by a common factor and
    leaves its zeros alone) so that one of them becomes the unique farthest.
    Ties between identical projections cannot be broken this way and raise
    :class:`NoUniqueDominant`.
    """
    C = _require_trig_circle(S)
    if not S.terms:
        raise NoUniqueDominant("empty sum")
    d = C.dim
    shift = np.zeros(d)
    rates = growth_rates(S)
    index, eps = _unique_max(rates)
    if index is None:
        proj = _plane_projection(S)
        tied = np.flatnonzero(rates >= rates.max() * (1 - DOMINANCE_MARGIN))
        scale = max(float(np.abs(proj - proj.mean()).max()), 1e-300)
        dup = any(abs(proj[a] - proj[b]) < rel_tol() * scale for a in tied for b in tied if a < b)
        if dup or len(rates) < 2:
            raise NoUniqueDominant("two terms share a plane projection; rotate the region and retry")
        centre = proj.mean()
        radial = np.abs(proj - centre)
        k = int(np.flatnonzero(radial >= radial.max() * (1 - DOMINANCE_MARGIN))[0])
        target = centre - (proj[k] - centre)
        i, j = C.plane
        shift[i], shift[j] = -target.real, -target.imag
        rates = growth_rates(S, shift)
        index, eps = _unique_max(rates)
        if index is None:
            raise NoUniqueDominant("no unique farthest projection after translation")
    p = _plane_projection(S, shift)[index]
    x_star = principal_arg(-TWO_PI_I * C.radius * p)
    return Dominance(index, x_star, float(eps), shift, rates)


@dataclass
class DominanceReport:
    rates: list
    dominant_index: int
    epsilon: float
    x_star: float
    shift: list
    ratio_trace: list
    y0: float | None
    final_ratio: float
    increasing_top_half: bool
    increasing_after_y0: bool
    top_modulus_lower_bound: float
    growth_model_ratio: float
    passed: bool

    def as_dict(self):
        return {
            "rates": [float(r) for r in self.rates],
            "dominant_index": self.dominant_index,
            "epsilon": self.epsilon,
            "x_star": self.x_star,
            "shift": [float(s) for s in self.shift],
            "y0": self.y0,
            "final_ratio": self.final_ratio,
            "increasing_top_half": self.increasing_top_half,
            "increasing_after_y0": self.increasing_after_y0,
            "top_modulus_lower_bound": self.top_modulus_lower_bound,
            "growth_model_ratio": self.growth_model_ratio,
            "passed": self.passed,
        }


def verify_dominance(S: ExponentialSum, y_grid, dominance: Dominance | None = None) -> DominanceReport:
    """Trace ``|dominant term| / sum |others|`` along ``t = x* + i y``.

    The ratio is invariant under the normalising translation, so it is
    computed from the untranslated terms in log space. The report passes when
    the ratio exceeds 10 at the top of the grid and increases over its upper
    half.
    """
    y = np.asarray(y_grid, dtype=float)
    if y.ndim != 1 or len(y) < 2 or (np.diff(y) <= 0).any():
        raise ValueError("y_grid must be strictly increasing with at least two points")
    dom = dominant_term(S) if dominance is None else dominance
    t = dom.x_star + 1j * y
    shifted = -TWO_PI_I * (S.curve(t) @ (S.frequencies[dom.index] + dom.shift))
    if shifted.real.max() > EXP_LIMIT:
        raise OverflowGuard("dominant exponent exceeds the double range; rescale the circle radius")
    logs = S.log_moduli(t)
    if not np.isfinite(logs[:, dom.index]).all():
        raise PoleAtParameter("dominant coefficient undefined on the vertical line")
    others = np.delete(logs, dom.index, axis=1)
    if others.shape[1]:
        rest = logsumexp(np.where(np.isfinite(others), others, -np.inf), axis=1)
        log_ratio = logs[:, dom.index] - rest
    else:
        log_ratio = np.full(len(y), np.inf)
    ratio = np.exp(np.minimum(log_ratio, 700.0))
    ratio[np.isinf(log_ratio)] = np.inf

    above = np.flatnonzero(ratio > 2)
    y0 = float(y[above[0]]) if above.size else None
    half = len(y) // 2
    increasing_top = bool((np.diff(log_ratio[half:]) > 0).all()) if others.shape[1] else True
    increasing_y0 = bool(above.size and (np.diff(log_ratio[above[0]:]) > 0).all()) if others.shape[1] else True
    final = float(ratio[-1])
    # |phi| >= |dominant| - sum |others| = |dominant| (1 - 1/ratio)
    top_lb = float(np.exp(logs[-1, dom.index]) * (1 - 1 / final)) if final > 1 else 0.0
    coeff_log = logs[-1, dom.index] - S.exponents(t[-1:])[0, dom.index].real
    model = float((coeff_log + shifted[-1].real) / (dom.rates[dom.index] * math.exp(y[-1])))
    passed = bool(final > 10 and increasing_top)
    return DominanceReport(
        rates=list(dom.rates),
        dominant_index=dom.index,
        epsilon=dom.epsilon,
        x_star=dom.x_star,
        shift=list(dom.shift),
        ratio_trace=list(zip(y.tolist(), ratio.tolist())),
        y0=y0,
        final_ratio=final,
        increasing_top_half=increasing_top,
        increasing_after_y0=increasing_y0,
        top_modulus_lower_bound=top_lb,
        growth_model_ratio=model,
        passed=passed,
    )


# -- scans and witnesses ------------------------------------------------------------------

@dataclass
class ScanResult:
    t_min: complex
    min_modulus: float
    t: np.ndarray
    modulus: np.ndarray
    term_moduli: np.ndarray
    skipped: np.ndarray

    def rows(self):
        """Trace rows ``(t_re, t_im, |phi|, |term_1|, ...)`` for evaluated points."""
        ok = ~self.skipped
        return np.column_stack([self.t.real[ok], self.t.imag[ok], self.modulus[ok], self.term_moduli[ok]])


def min_modulus_scan(S: ExponentialSum, t_grid) -> ScanResult:
    """Pointwise ``|phi|`` over a grid, skipping parameters where phi is undefined."""
    t = np.atleast_1d(np.asarray(t_grid, dtype=complex))
    terms = S.term_values(t)
    values = terms.sum(axis=1)
    skipped = ~np.isfinite(values)
    if skipped.all():
        raise AllPoles("every grid point was a pole or near-singular")
    if skipped.any():
        log.info("skipped %d of %d grid points (poles or near-singular)", int(skipped.sum()), len(t))
    modulus = np.abs(values)
    masked = np.where(skipped, np.inf, modulus)
    k = int(np.argmin(masked))
    return ScanResult(complex(t[k]), float(modulus[k]), t, modulus, np.abs(terms), skipped)


class DecayWitness(NamedTuple):
    witness: float
    rate: float
    passed: bool


def decay_lower_bound_check(coefficients, exponents, direction, offset, t_grid) -> DecayWitness:
    """Grid witness that ``S(b + t a) = sum c_j exp(mu_j (b + t a))`` decays at most exponentially.

    With ``c = -max Re(mu_j a)`` the scaled sum ``e^{c t} |S(b + t a)|`` has a
    positive lim sup; the witness is its maximum over the top decade
    ``t >= t_max / 10`` of the grid.
    """
    c = np.asarray(coefficients, dtype=complex)
    mu = np.asarray(exponents, dtype=complex)
    a = complex(direction)
    b = complex(offset)
    t = np.asarray(t_grid, dtype=float)
    c_abs = c * np.exp(mu * b)
    rates = mu * a
    rate = -float(rates.real.max())
    scaled = np.abs(np.exp(np.outer(t, rates + rate)) @ c_abs)
    if scaled.max(initial=0.0) <= 1e-13 * max(np.abs(c_abs).sum(), 1e-300):
        raise IdenticallyZeroOnGrid("the exponential sum vanishes on the whole grid")
    top = t >= t.max() / 10
    witness = float(scaled[top].max())
    return DecayWitness(witness, rate, witness > 1e-8 * float(np.abs(c).max()))


class FlaggedPair(NamedTuple):
    k: int
    l: int
    polynomial: np.ndarray


def _trim(coeffs, tol):
    coeffs = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(np.abs(coeffs) > tol)
    return coeffs[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)


def _rational_pair(curve: RationalCurve, w, rho):
    """``w . gamma(t)`` as a polynomial of degree <= rho, or None."""
    dens = curve.denominators
    D = np.ones(1, dtype=complex)
    for d in dens:
        D = P.polymul(D, d)
    N = np.zeros(1, dtype=complex)
    for k, (num, den) in enumerate(zip(curve.numerators, dens)):
        if w[k] == 0:
            continue
        others = np.ones(1, dtype=complex)
        for i, d in enumerate(dens):
            if i != k:
                others = P.polymul(others, d)
        N = P.polyadd(N, w[k] * P.polymul(num, others))
    scale = max(1.0, float(np.abs(N).max()))
    q, r = P.polydiv(N, D)
    if np.abs(r).max(initial=0.0) > 1e-10 * scale:
        return None
    q = _trim(q, 1e-10 * scale)
    if len(q) - 1 > rho:
        return None
    return q


def brownawell_pair_check(curve: ParametricCurve, frequencies, rho=None) -> list:
    """Pairs ``(k, l)`` for which ``-2 pi i (v_k - v_l) . gamma(t)`` is a polynomial of degree <= rho."""
    v = np.atleast_2d(np.asarray(frequencies, dtype=float))
    rho = curve.order if rho is None else float(rho)
    flagged = []
    if isinstance(curve, (RationalCurve, RationalCircle)):
        rational = curve.as_rational() if isinstance(curve, RationalCircle) else curve
        for k in range(len(v)):
            for l in range(k + 1, len(v)):
                w = -TWO_PI_I * (v[k] - v[l])
                q = _rational_pair(rational, w, rho)
                if q is not None:
                    flagged.append(FlaggedPair(k, l, q))
    elif isinstance(curve, TrigCircle):
        C = curve.circle
        hits = projection_collisions(v, axes=C.plane).collisions
        for k, l in hits:
            w = -TWO_PI_I * (v[k] - v[l])
            flagged.append(FlaggedPair(k, l, np.array([complex(w @ C.center)])))
    elif isinstance(curve, AnalyticCurve) and curve.name == "t2_sin":
        tol = rel_tol() * max(float(np.ptp(v, axis=0).max()) if len(v) > 1 else 0.0, 1e-300)
        for k in range(len(v)):
            for l in range(k + 1, len(v)):
                dv = v[k] - v[l]
                if abs(dv[1]) > tol:
                    continue
                if abs(dv[0]) <= tol:
                    flagged.append(FlaggedPair(k, l, np.zeros(1, dtype=complex)))
                elif rho >= 2:
                    flagged.append(FlaggedPair(k, l, np.array([0, 0, -TWO_PI_I * dv[0]])))
    else:
        raise UnsupportedCurveKind(f"no pair criterion for curve kind {curve.kind!r}")
    return flagged
