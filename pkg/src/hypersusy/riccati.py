"""One-parameter deformation of the factorization.

The general solution of the first-order Riccati equation behind the
factorization replaces the particular solution by

    psi_gamma = -tau/sigma - (m-1)/2 sigma'/sigma + sigma^m rho / (gamma + I_m)

with I_m the cumulative weight integral of sigma^m rho from a fixed base
point.  gamma ranges over two admissible rays determined by the endpoint
limits of I_m; the sentinel gamma = inf recovers the undeformed operators.
All derivatives here are analytic: I_m' = sigma^m rho needs no numeric
differentiation.

Everything is pure and cache-free (cumulative weights are re-integrated per
call), so Deformation values can be shared across threads freely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import families
from .errors import CutoffExceeded, InadmissibleGamma, OutOfDomain
from .numerics import derivative, quad
from .polynomials import DifferentiableValue, associated_function

_MARGIN = 1e-9

_BASE_POINT = {
    families.CONST: 0.0,
    families.ONE_MINUS_S2: 0.0,
    families.LINEAR: 1.0,
    families.S2: 1.0,
    families.S2_MINUS_ONE: 2.0,
    families.S2_PLUS_ONE: 0.0,
}


def base_point(fam):
    """Fixed interior base point of the cumulative weight integral."""
    return _BASE_POINT[fam.kind]


def sigma_m_rho(fam, m, s):
    """sigma^m * rho, the integrand of the cumulative weight (vectorized)."""
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        w = families.weight(fam, s)
        sig = np.asarray(fam.sigma(np.asarray(s, dtype=float)), dtype=float)
        out = sig ** m * w
    return np.where(w == 0.0, 0.0, out)


def cumulative_weight(fam, m, s, tol=1e-13):
    """I_m(s): integral of sigma^m rho from the base point to s."""
    fam.require_inside(s)
    s0 = base_point(fam)
    return quad(lambda t: sigma_m_rho(fam, m, t), s0, float(s), tol=tol).value


def cumulative_weight_sorted(fam, m, pts, tol=1e-13):
    """I_m at an ascending array of interior points, by prefix segments."""
    pts = np.asarray(pts, dtype=float)
    s0 = base_point(fam)
    out = np.empty_like(pts)
    anchor = float(quad(lambda t: sigma_m_rho(fam, m, t), s0, pts[0], tol=tol).value)
    out[0] = anchor
    for i in range(1, len(pts)):
        seg = quad(lambda t: sigma_m_rho(fam, m, t), pts[i - 1], pts[i], tol=tol).value
        out[i] = out[i - 1] + seg
    return out


def _endpoint_diverges(fam, m, endpoint):
    """Closed-form test of whether the cumulative weight diverges there."""
    al, be = float(fam.alpha), float(fam.beta)
    if fam.kind == families.CONST:
        return False
    if fam.kind == families.LINEAR:
        # integrand s^(m+beta-1) e^(alpha s): lower exponent > -1 always
        return endpoint == "upper" and al == 0
    if fam.kind == families.ONE_MINUS_S2:
        expo = m - (al + be) / 2.0 - 1.0 if endpoint == "upper" else m - (al - be) / 2.0 - 1.0
        return expo <= -1.0
    if fam.kind == families.S2_MINUS_ONE:
        if endpoint == "lower":
            return m + (al + be) / 2.0 - 1.0 <= -1.0
        return 2 * m + al - 2.0 >= -1.0
    if fam.kind == families.S2:
        if endpoint == "lower":
            return be == 0 and 2 * m + al - 2.0 <= -1.0
        return 2 * m + al - 2.0 >= -1.0
    return 2 * m + al - 2.0 >= -1.0


def endpoint_limit(fam, m, endpoint, tol=1e-12):
    """Limit of I_m at an endpoint: tail quadrature, or +-inf on divergence."""
    a, b = fam.interval
    s0 = base_point(fam)
    if _endpoint_diverges(fam, m, endpoint):
        return -math.inf if endpoint == "lower" else math.inf
    target = a if endpoint == "lower" else b
    return quad(lambda t: sigma_m_rho(fam, m, t), s0, target, tol=tol).value


@dataclass(frozen=True)
class GammaRays:
    """Admissible gamma set {gamma > right_start} U {gamma < left_end}.

    right_start = -I_m(a+) and left_end = -I_m(b-); an infinite limit
    empties the corresponding ray.
    """

    right_start: float
    left_end: float

    def contains(self, gamma, margin=_MARGIN):
        if gamma == math.inf:
            return True
        if math.isfinite(self.right_start) and gamma >= self.right_start + margin:
            return True
        if math.isfinite(self.left_end) and gamma <= self.left_end - margin:
            return True
        return False

    def describe(self):
        parts = []
        if math.isfinite(self.right_start):
            parts.append(f"gamma > {self.right_start:.4f}")
        if math.isfinite(self.left_end):
            parts.append(f"gamma < {self.left_end:.4f}")
        return " or ".join(parts) if parts else "only gamma = inf"

    def to_json(self):
        def enc(v):
            if v == math.inf:
                return "inf"
            if v == -math.inf:
                return "-inf"
            return v

        return {"right_start": enc(self.right_start), "left_end": enc(self.left_end)}


def gamma_rays(fam, m):
    """Admissible rays from the endpoint limits of the cumulative weight."""
    lo = endpoint_limit(fam, m, "lower")
    hi = endpoint_limit(fam, m, "upper")
    right = -lo if math.isfinite(lo) else math.inf
    left = -hi if math.isfinite(hi) else -math.inf
    return GammaRays(right_start=right, left_end=left)


@dataclass(frozen=True)
class Deformation:
    family: families.Family
    m: int
    gamma: float
    s0: float
    delta: object = None
    rays: GammaRays = None

    @property
    def shift_constant(self):
        if self.delta is None:
            return 0.0
        k = families.weight_power(self.family)
        return float(self.delta) / float(2 * self.m + 2 * k + 1)

    @property
    def lambda_base(self):
        """lambda_m, shift-corrected when delta is active."""
        if self.delta is None:
            return float(families.eigenvalue(self.family, self.m))
        return float(families.shifted_eigenvalue(self.family, self.m, self.delta))

    def to_json(self):
        return {
            "family": self.family.to_json(),
            "m": self.m,
            "gamma": "inf" if self.gamma == math.inf else self.gamma,
            "s0": self.s0,
            "delta": self.delta,
        }

    @classmethod
    def from_json(cls, obj):
        fam = families.Family.from_json(obj["family"])
        gamma = math.inf if obj["gamma"] == "inf" else float(obj["gamma"])
        return make_deformation(fam, obj["m"], gamma, obj.get("delta"))


def make_deformation(fam, m, gamma, delta=None):
    """Validated deformation; gamma must avoid the forbidden interval."""
    if not isinstance(m, int) or m < 0:
        raise InadmissibleGamma(f"order must be a non-negative integer, got {m!r}")
    if not families.below_cutoff(fam, m + 1):
        raise CutoffExceeded(f"deformation needs m+1 below the cutoff, got m={m}")
    if delta is not None:
        families.shifted_eigenvalue(fam, m, delta)  # validates the shift
    rays = gamma_rays(fam, m)
    if not rays.contains(gamma):
        raise InadmissibleGamma(
            f"gamma={gamma} is not admissible; admissible rays: {rays.describe()}"
        )
    return Deformation(fam, m, gamma, base_point(fam), delta, rays)


# --- pointwise machinery ----------------------------------------------------

def _core_arrays(defm, s):
    """Deformation term g = sigma^m rho/(gamma+I) and dg/ds on sorted points."""
    fam, m = defm.family, defm.m
    s = np.asarray(s, dtype=float)
    w = sigma_m_rho(fam, m, s)
    if defm.gamma == math.inf:
        return np.zeros_like(s), np.zeros_like(s)
    order = np.argsort(s)
    i_sorted = cumulative_weight_sorted(fam, m, s[order])
    i_vals = np.empty_like(s)
    i_vals[order] = i_sorted
    den = defm.gamma + i_vals
    if np.any(np.abs(den) < _MARGIN):
        raise InadmissibleGamma(
            f"gamma + I_m(s) vanishes within the margin near gamma={defm.gamma}"
        )
    g = w / den
    sig = np.asarray(fam.sigma(s), dtype=float)
    sp = np.asarray(fam.sigma_prime(s), dtype=float)
    tau = np.asarray(fam.tau(s), dtype=float)
    gp = g * ((m - 1) * sp + tau) / sig - g * g
    return g, gp


def psi_phi_arrays(defm, s):
    """(psi, psi', phi, phi') at an array of interior points."""
    fam, m = defm.family, defm.m
    s = np.asarray(s, dtype=float)
    fam.require_inside(s)
    sig = np.asarray(fam.sigma(s), dtype=float)
    sp = np.asarray(fam.sigma_prime(s), dtype=float)
    spp = 2.0 * fam.sigma_lead
    tau = np.asarray(fam.tau(s), dtype=float)
    al = float(fam.alpha)
    g, gp = _core_arrays(defm, s)
    d_ratio = (spp * sig - sp * sp) / (sig * sig)  # (sigma'/sigma)'
    psi = -tau / sig - (m - 1) / 2.0 * sp / sig + g
    psi_p = -(al * sig - tau * sp) / (sig * sig) - (m - 1) / 2.0 * d_ratio + gp
    phi = -m / 2.0 * sp / sig + g
    phi_p = -m / 2.0 * d_ratio + gp
    return psi, psi_p, phi, phi_p


def psi(defm, s):
    """General Riccati solution and its analytic derivative at s."""
    p, pp, _, _ = psi_phi_arrays(defm, np.array([float(s)]))
    return DifferentiableValue(float(p[0]), float(pp[0]))


def phi(defm, s):
    """Companion gauge function phi = psi + tau/sigma - kappa'/kappa at s."""
    _, _, q, qp = psi_phi_arrays(defm, np.array([float(s)]))
    return DifferentiableValue(float(q[0]), float(qp[0]))


def riccati_residual(defm, points):
    """max |psi' + psi^2 + (tau/sigma) psi - (v_{m+1} - lambda_m)/sigma|."""
    fam, m = defm.family, defm.m
    pts = np.asarray(points, dtype=float)
    p, pp, _, _ = psi_phi_arrays(defm, pts)
    sig = np.asarray(fam.sigma(pts), dtype=float)
    tau = np.asarray(fam.tau(pts), dtype=float)
    v_next = np.array([families.potential_term(fam, m + 1, float(s)) for s in pts])
    lam = float(families.eigenvalue(fam, m))
    res = pp + p * p + tau / sig * p - (v_next - lam) / sig
    return float(np.max(np.abs(res)))


def apply_b(defm, s, fv, which="b"):
    """First-order deformed maps at a point.

    b      : kappa * (d/ds + phi)   (+ the constant shift when delta is set)
    b_plus : kappa * (-d/ds + psi)  (+ the same constant)
    """
    defm.family.require_inside(s)
    kap = float(defm.family.kappa(s))
    c = defm.shift_constant
    if which == "b":
        return kap * (fv.deriv + phi(defm, s).value * fv.value) + c * fv.value
    if which == "b_plus":
        return kap * (-fv.deriv + psi(defm, s).value * fv.value) + c * fv.value
    raise ValueError("which must be 'b' or 'b_plus'")


def partner_potential(defm, s):
    """Zeroth-order term of the deformed partner operator at s.

    Expansion of kappa(-D+psi) kappa(D+phi) + lambda_m in the form
    -sigma D^2 - tau D + v keeps the first-order coefficient at -tau
    because sigma(phi - psi) + kappa kappa' = tau; when delta is active the
    two constant shifts add delta * c * kappa (phi + psi) on top (the shifted
    eigenvalue absorbs the c^2 delta^2 piece).
    """
    fam = defm.family
    pts = np.array([float(s)])
    p, _, q, qp = psi_phi_arrays(defm, pts)
    sig = float(fam.sigma(float(s)))
    sp = float(fam.sigma_prime(float(s)))
    v = sig * p[0] * q[0] - sig * qp[0] - sp / 2.0 * q[0] + float(
        families.eigenvalue(fam, defm.m)
    )
    if defm.delta is not None:
        kap = float(fam.kappa(float(s)))
        v += defm.shift_constant * kap * (p[0] + q[0])
    return float(v)


def partner_eigenfunction(defm, l):
    """s -> b_plus applied to the order-(m+1) associated function.

    The value is analytic; the derivative is extrapolated numerically from
    the value function.
    """
    fam, m = defm.family, defm.m
    if not (m < l and families.below_cutoff(fam, l)):
        raise OutOfDomain(f"partner eigenfunction needs m < l < cutoff, got l={l}")
    af = associated_function(fam, l, m + 1)

    def value(s):
        return apply_b(defm, float(s), af.eval(float(s)), "b_plus")

    def both(s):
        return DifferentiableValue(value(s), derivative(value, float(s), order=1, h0=0.02))

    return both


def partner_eigenfunction_values(defm, l, s_arr):
    """Vectorized values of the partner eigenfunction (no derivatives)."""
    fam, m = defm.family, defm.m
    af = associated_function(fam, l, m + 1)
    s_arr = np.asarray(s_arr, dtype=float)
    p, _, _, _ = psi_phi_arrays(defm, s_arr)
    sig = np.asarray(fam.sigma(s_arr), dtype=float)
    kap = np.sqrt(sig)
    vals = af.poly.eval_array(s_arr)
    dvals = af.poly.deriv().eval_array(s_arr)
    km = sig ** ((m + 1) / 2.0)
    f = km * vals
    fp = km * (dvals + (m + 1) * np.asarray(fam.sigma_prime(s_arr), dtype=float)
               / (2.0 * sig) * vals)
    return kap * (-fp + p * f) + defm.shift_constant * f
