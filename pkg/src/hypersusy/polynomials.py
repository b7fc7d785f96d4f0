"""Polynomial eigenfunctions and the associated special functions.

The level-l eigenfunction is built from the three-term coefficient
recurrence of sigma*p'' + tau*p' + lambda_l*p = 0, normalized so its l-th
derivative is exactly 1; the order-m associated function is then
kappa^m * (m-th derivative of the polynomial) with kappa = sqrt(sigma).
Coefficients are exact Fractions whenever the family parameters are
int/Fraction, plain floats otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import families
from .errors import (
    CutoffExceeded,
    IndexViolation,
    NotProportional,
    RecurrenceBreakdown,
)
from .numerics import quad


class Poly:
    """Dense univariate polynomial; index = power of s."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def zero(cls):
        return cls()

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly()
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return Poly(out)
        return Poly([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def deriv(self, order=1):
        p = self
        for _ in range(order):
            p = Poly([i * c for i, c in enumerate(p.coeffs)][1:])
        return p

    def __call__(self, s):
        out = 0
        for c in reversed(self.coeffs):
            out = out * s + c
        return out

    def eval_array(self, x):
        out = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            out = out * x + float(c)
        return out

    def max_abs(self):
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    def as_exact(self):
        return Poly([Fraction(c) for c in self.coeffs])

    def to_json(self):
        out = []
        for c in self.coeffs:
            if isinstance(c, Fraction):
                out.append(str(c))
            elif isinstance(c, int):
                out.append(str(c))
            else:
                out.append(float(c))
        return out

    @classmethod
    def from_json(cls, items):
        cs = []
        for it in items:
            cs.append(Fraction(it) if isinstance(it, str) else float(it))
        return cls(cs)


def poly_divmod(num, den):
    """Long division num = q*den + r; exact for Fraction coefficients."""
    if den.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    n = list(num.coeffs)
    d = den.coeffs
    if len(n) < len(d):
        return Poly(), num
    q = [0] * (len(n) - len(d) + 1)
    lead = d[-1]
    for i in range(len(n) - len(d), -1, -1):
        c = n[i + len(d) - 1] / lead
        q[i] = c
        if c != 0:
            for j, dc in enumerate(d):
                n[i + j] -= c * dc
    return Poly(q), Poly(n[: len(d) - 1])


@dataclass(frozen=True)
class DifferentiableValue:
    """Value and first derivative at a single point."""

    value: float
    deriv: float


@dataclass(frozen=True)
class AssociatedFunction:
    """kappa^m(s) * poly(s) on the family interval."""

    family: families.Family
    l: int
    m: int
    poly: Poly

    def eval(self, s):
        """Value and analytic s-derivative at a point inside the interval."""
        self.family.require_inside(s)
        p = self.poly
        sig = float(self.family.sigma(s))
        km = sig ** (self.m / 2.0)
        val = km * float(p(s))
        der = km * float(p.deriv()(s))
        if self.m:
            der += km * self.m * float(self.family.sigma_prime(s)) / (2.0 * sig) * float(p(s))
        return DifferentiableValue(val, der)

    def values(self, s_arr):
        """Vectorized plain values (no derivative)."""
        sig = np.asarray(self.family.sigma(np.asarray(s_arr, dtype=float)), dtype=float)
        return sig ** (self.m / 2.0) * self.poly.eval_array(s_arr)

    def to_json(self):
        return {
            "family": self.family.to_json(),
            "l": self.l,
            "m": self.m,
            "coeffs": self.poly.to_json(),
        }


def poly_eigenfunction(fam, level):
    """Level-l polynomial from the downward coefficient recurrence.

    The substitution p = sum c_j s^j into sigma p'' + tau p' + lambda_l p = 0
    couples c_j to c_{j+1}, c_{j+2}; fixing the leading coefficient at 1/l!
    (so the l-th derivative is exactly 1) determines the rest.  A vanishing
    divisor lambda_l - lambda_j flags a degenerate parameter choice.
    """
    if not isinstance(level, int) or level < 0:
        raise CutoffExceeded(f"level must be a non-negative integer, got {level!r}")
    if not families.below_cutoff(fam, level):
        raise CutoffExceeded(f"level {level} is not below the cutoff {families.cutoff(fam)}")
    c0, c1, c2 = fam.sigma_coeffs
    alpha, beta = fam.alpha, fam.beta
    lam = families.eigenvalue(fam, level)
    exact = fam.exact
    lead = Fraction(1, math.factorial(level)) if exact else 1.0 / math.factorial(level)
    cs = [0] * (level + 1)
    cs[level] = lead
    for j in range(level - 1, -1, -1):
        div = c2 * j * (j - 1) + alpha * j + lam
        if div == 0 or (not exact and abs(float(div)) < 1e-14):
            raise RecurrenceBreakdown(
                f"lambda_{level} - lambda_{j} vanishes for ({fam.kind}, "
                f"alpha={fam.alpha}, beta={fam.beta})"
            )
        num = (j + 1) * (c1 * j + beta) * cs[j + 1]
        if j + 2 <= level:
            num += c0 * (j + 2) * (j + 1) * cs[j + 2]
        if exact:
            cs[j] = -Fraction(num) / Fraction(div)
        else:
            cs[j] = -float(num) / float(div)
    return Poly(cs)


def ode_residual(fam, level, p):
    """sigma p'' + tau p' + lambda_l p as a polynomial (zero for solutions)."""
    sig = Poly(fam.sigma_coeffs)
    tau = Poly([fam.beta, fam.alpha])
    lam = families.eigenvalue(fam, level)
    return sig * p.deriv(2) + tau * p.deriv() + lam * p


def associated_function(fam, level, order):
    """kappa^order * (order-th derivative of the level polynomial)."""
    if not isinstance(order, int) or order < 0 or order > level:
        raise IndexViolation(f"order must satisfy 0 <= m <= l, got m={order}, l={level}")
    return AssociatedFunction(fam, level, order, poly_eigenfunction(fam, level).deriv(order))


# --- classical three-term recurrences, used only as a cross-check ---------

def hermite_value(n, x):
    if n == 0:
        return 1.0
    prev, cur = 1.0, 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur


def laguerre_value(n, p, x):
    if n == 0:
        return 1.0
    prev, cur = 1.0, 1.0 + p - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + p - x) * cur - (k + p) * prev) / (k + 1)
    return cur


def jacobi_value(n, p, q, z):
    """Jacobi recurrence; works for complex parameters and argument."""
    if n == 0:
        return 1.0
    prev = 1.0
    cur = (p + 1) + (p + q + 2) * (z - 1) / 2.0
    for k in range(1, n):
        a = 2 * (k + 1) * (k + p + q + 1) * (2 * k + p + q)
        if a == 0:
            raise NotProportional(
                f"classical recurrence degenerates at n={k + 1} for (p={p}, q={q})"
            )
        b = (2 * k + p + q + 1) * ((2 * k + p + q) * (2 * k + p + q + 2) * z + p * p - q * q)
        c = 2 * (k + p) * (k + q) * (2 * k + p + q + 2)
        prev, cur = cur, (b * cur - c * prev) / a
    return cur


def classical_value(fam, level, s):
    """The standard-polynomial identification of the level-l eigenfunction."""
    al, be = float(fam.alpha), float(fam.beta)
    if fam.kind == families.CONST:
        return hermite_value(level, math.sqrt(-al / 2.0) * s - be / math.sqrt(-2.0 * al))
    if fam.kind == families.LINEAR:
        return laguerre_value(level, be - 1.0, -al * s)
    if fam.kind == families.ONE_MINUS_S2:
        return jacobi_value(level, -(al + be) / 2.0 - 1.0, (-al + be) / 2.0 - 1.0, s)
    if fam.kind == families.S2_MINUS_ONE:
        return jacobi_value(level, (al - be) / 2.0 - 1.0, (al + be) / 2.0 - 1.0, -s)
    if fam.kind == families.S2:
        if be == 0:
            raise NotProportional("the s^2 identification needs beta != 0")
        return (s / be) ** level * laguerre_value(level, 1.0 - al - 2 * level, be / s)
    p = (al + 1j * be) / 2.0 - 1.0
    val = (1j ** level) * jacobi_value(level, p, p.conjugate(), 1j * s)
    if abs(val.imag) > 1e-9 * (1.0 + abs(val.real)):
        raise NotProportional(f"complex identification not real at s={s}: {val}")
    return val.real


def classical_ratio(fam, level, rel_tol=1e-8):
    """Constant ratio classical / constructed at 16 interior points.

    Points where the constructed polynomial nearly vanishes are skipped
    (both sides share the zeros when proportional); a ratio spread above
    rel_tol raises NotProportional.
    """
    p = poly_eigenfunction(fam, level)
    pts = families.sample_points(fam, 16)
    ours = p.eval_array(pts)
    scale = float(np.max(np.abs(ours))) or 1.0
    ratios = []
    for s, v in zip(pts, ours):
        if abs(v) < 1e-6 * scale:
            continue
        ratios.append(classical_value(fam, level, float(s)) / v)
    if len(ratios) < 6:
        raise NotProportional("too few usable sample points for the ratio")
    ratios = np.asarray(ratios, dtype=float)
    mean = float(np.mean(ratios))
    spread = float(np.max(ratios) - np.min(ratios))
    if spread > rel_tol * max(1.0, abs(mean)):
        raise NotProportional(
            f"ratio varies by {spread:.3e} over the samples (mean {mean:.6g})"
        )
    return mean


# --- weighted norms and Gram matrices --------------------------------------

def _pair_integrand(fam, m, p1, p2):
    # once rho underflows to 0 the product is 0 no matter how large the
    # polynomial part has grown at the extreme quadrature nodes
    def f(s):
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            w = families.weight(fam, s)
            sig = np.asarray(fam.sigma(s), dtype=float)
            out = sig ** m * p1.eval_array(s) * p2.eval_array(s) * w
        return np.where(w == 0.0, 0.0, out)

    return f


def norm(fam, level, order, tol=1e-13):
    """Weighted L2 norm of the associated function via the quadrature oracle."""
    if order > level:
        raise IndexViolation(f"order must satisfy m <= l, got m={order}, l={level}")
    p = poly_eigenfunction(fam, level).deriv(order)
    a, b = fam.interval
    res = quad(_pair_integrand(fam, order, p, p), a, b, tol=tol)
    return math.sqrt(res.value)


def gram_matrix(fam, order, lmax, tol=1e-13):
    """Inner products of the order-m associated functions up to level lmax."""
    levels = list(range(order, lmax + 1))
    polys = {l: poly_eigenfunction(fam, l).deriv(order) for l in levels}
    a, b = fam.interval
    g = np.zeros((len(levels), len(levels)))
    for i, li in enumerate(levels):
        for j, lj in enumerate(levels):
            if j < i:
                continue
            val = quad(_pair_integrand(fam, order, polys[li], polys[lj]), a, b, tol=tol).value
            g[i, j] = g[j, i] = val
    return g
