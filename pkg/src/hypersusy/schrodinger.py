"""Change of variable to Schrodinger form.

Each family carries a fixed coordinate map x -> s(x) with ds/dx equal to
(+/-) kappa(s(x)); conjugating by sqrt(kappa * rho) turns the second-order
operators into -d^2/dx^2 + V(x) and the first-order deformed maps into
(+/- d/dx + W(x)) with the superpotential

    W(x) = -tau/(2 kappa) - (m - 1/2) kappa' + kappa sigma^m rho/(gamma + I_m)

evaluated at s = s(x) (plus the constant delta shift when active).  The
upper potential W^2 + sign*W' + lambda is gamma-independent; the partner
W^2 - sign*W' + lambda is the one-parameter family.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import families, riccati
from .errors import OutOfDomain
from .polynomials import DifferentiableValue, associated_function


@dataclass(frozen=True)
class CoordinateMap:
    kind: str
    x_domain: tuple
    sign: int

    def s_of_x(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == families.CONST:
            out = x
        elif self.kind == families.LINEAR:
            out = x * x / 4.0
        elif self.kind == families.ONE_MINUS_S2:
            out = np.cos(x)
        elif self.kind == families.S2_MINUS_ONE:
            out = np.cosh(x)
        elif self.kind == families.S2:
            out = np.exp(x)
        else:
            out = np.sinh(x)
        return out

    def ds_dx(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == families.CONST:
            return np.ones_like(x)
        if self.kind == families.LINEAR:
            return x / 2.0
        if self.kind == families.ONE_MINUS_S2:
            return -np.sin(x)
        if self.kind == families.S2_MINUS_ONE:
            return np.sinh(x)
        if self.kind == families.S2:
            return np.exp(x)
        return np.cosh(x)

    def require_inside(self, x):
        a, b = self.x_domain
        arr = np.asarray(x, dtype=float)
        if not np.all((arr > a) & (arr < b)):
            raise OutOfDomain(f"x={x} outside the coordinate domain {self.x_domain}")


_MAPS = {
    families.CONST: CoordinateMap(families.CONST, (-math.inf, math.inf), +1),
    families.LINEAR: CoordinateMap(families.LINEAR, (0.0, math.inf), +1),
    families.ONE_MINUS_S2: CoordinateMap(families.ONE_MINUS_S2, (0.0, math.pi), -1),
    families.S2_MINUS_ONE: CoordinateMap(families.S2_MINUS_ONE, (0.0, math.inf), +1),
    families.S2: CoordinateMap(families.S2, (-math.inf, math.inf), +1),
    families.S2_PLUS_ONE: CoordinateMap(families.S2_PLUS_ONE, (-math.inf, math.inf), +1),
}


def coordinate_map(kind):
    return _MAPS[kind]


def wavefunction(fam, l, m, x):
    """Psi_{l,m}(x) = sqrt(kappa rho) Phi_{l,m} at s(x)."""
    cmap = coordinate_map(fam.kind)
    cmap.require_inside(x)
    s = float(cmap.s_of_x(x))
    af = associated_function(fam, l, m)
    kap = float(fam.kappa(s))
    rho = families.weight(fam, s)
    return math.sqrt(kap * rho) * af.eval(s).value


def wavefunction_grid(fam, l, m, xs):
    # extreme x may round s(x) onto the closed s-boundary; the decaying
    # sqrt(kappa*rho) factor makes 0 the right limiting value there
    cmap = coordinate_map(fam.kind)
    cmap.require_inside(xs)
    with np.errstate(over="ignore"):
        s = np.asarray(cmap.s_of_x(np.asarray(xs, dtype=float)), dtype=float)
    a, b = fam.interval
    inside = (s > a) & (s < b) & np.isfinite(s)
    out = np.zeros_like(s)
    if np.any(inside):
        af = associated_function(fam, l, m)
        si = s[inside]
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            kap = np.sqrt(np.asarray(fam.sigma(si), dtype=float))
            rho = families.weight(fam, si)
            vals = np.sqrt(kap * rho) * af.values(si)
        out[inside] = np.where(rho == 0.0, 0.0, vals)
    return out


def _w_core(defm, xs):
    """W(x) and dW/dx on a grid, all chain-rule analytic."""
    fam, m = defm.family, defm.m
    cmap = coordinate_map(fam.kind)
    cmap.require_inside(xs)
    xs = np.asarray(xs, dtype=float)
    s = cmap.s_of_x(xs)
    sig = np.asarray(fam.sigma(s), dtype=float)
    sp = np.asarray(fam.sigma_prime(s), dtype=float)
    spp = 2.0 * fam.sigma_lead
    tau = np.asarray(fam.tau(s), dtype=float)
    al = float(fam.alpha)
    kap = np.sqrt(sig)
    g, gp = riccati._core_arrays(defm, s)
    w = -tau / (2.0 * kap) - (m - 0.5) * sp / (2.0 * kap) + kap * g + defm.shift_constant
    # dW/dx = sign * kappa * dF/ds with F the s-space profile of W
    dfds_scaled = (
        -al / 2.0
        + tau * sp / (4.0 * sig)
        - (m - 0.5) * (spp / 2.0 - sp * sp / (4.0 * sig))
        + sp / 2.0 * g
        + sig * gp
    )
    wp = cmap.sign * dfds_scaled
    return w, wp


def superpotential(defm, x):
    """W(x), including the constant shift when the deformation carries delta."""
    w, _ = _w_core(defm, np.array([float(x)]))
    return float(w[0])


def potentials(defm, x):
    """(V_upper, V_partner) at x: W^2 +/- sign*W' + the base eigenvalue."""
    vu, vp = potentials_grid(defm, np.array([float(x)]))
    return float(vu[0]), float(vp[0])


def potentials_grid(defm, xs):
    w, wp = _w_core(defm, xs)
    sign = coordinate_map(defm.family.kind).sign
    lam = defm.lambda_base
    return w * w + sign * wp + lam, w * w - sign * wp + lam


def apply_B(defm, x, fv, which="B"):
    """(+/- d/dx + W) in x-space on a DifferentiableValue."""
    cmap = coordinate_map(defm.family.kind)
    cmap.require_inside(x)
    w = superpotential(defm, x)
    if which == "B":
        return cmap.sign * fv.deriv + w * fv.value
    if which == "B_plus":
        return -cmap.sign * fv.deriv + w * fv.value
    raise ValueError("which must be 'B' or 'B_plus'")


def default_grid(defm, n=1201, v_wall=1e6, kr_floor=1e-14):
    """Trimmed uniform x-grid avoiding coordinate singularities.

    Finite domain edges move inward to 0.05; infinite edges stop where
    kappa*rho drops below kr_floor (wavefunction support exhausted), and
    any edge where the partner-pair potential exceeds v_wall is trimmed
    further.
    """
    cmap = coordinate_map(defm.family.kind)
    a, b = cmap.x_domain
    lo = a + 0.05 if math.isfinite(a) else None
    hi = b - 0.05 if math.isfinite(b) else None

    def kr(x):
        s = float(cmap.s_of_x(x))
        if not defm.family.contains(s):
            return 0.0
        with np.errstate(over="ignore", under="ignore"):
            return float(defm.family.kappa(s)) * families.weight(defm.family, s)

    if lo is None:
        x = -1.0
        while kr(x) > kr_floor and x > -60.0:
            x *= 1.5
        lo = x
    if hi is None:
        x = 1.0
        while kr(x) > kr_floor and x < 60.0:
            x *= 1.5
        hi = x

    def v_ok(x):
        vu, vp = potentials(defm, x)
        return max(abs(vu), abs(vp)) < v_wall

    for _ in range(60):
        if v_ok(lo):
            break
        lo += (hi - lo) * 0.02
    for _ in range(60):
        if v_ok(hi):
            break
        hi -= (hi - lo) * 0.02
    return np.linspace(lo, hi, n)


def grid_frame(defm, xs, levels=()):
    """Column arrays for export: x, s, V_upper, V_partner, W, psi_l...

    psi columns are the wavefunctions of the upper operator (order m+1),
    one per requested level l >= m+1.
    """
    xs = np.asarray(xs, dtype=float)
    cmap = coordinate_map(defm.family.kind)
    w, wp = _w_core(defm, xs)
    lam = defm.lambda_base
    frame = {
        "x": xs,
        "s": cmap.s_of_x(xs),
        "V_upper": w * w + cmap.sign * wp + lam,
        "V_partner": w * w - cmap.sign * wp + lam,
        "W": w,
    }
    for l in levels:
        if l < defm.m + 1:
            raise OutOfDomain(f"psi level must be >= m+1, got l={l}")
        frame[f"psi_{l}"] = wavefunction_grid(defm.family, l, defm.m + 1, xs)
    return frame


CSV_BASE_HEADER = "x,s,V_upper,V_partner,W"


def write_csv(frame, path):
    cols = list(frame.keys())
    header = ",".join(cols)
    rows = np.column_stack([frame[c] for c in cols])
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.12g}" for v in row) + "\n")
    return header


def frame_to_json(frame):
    return {k: [float(v) for v in arr] for k, arr in frame.items()}


def write_json(frame, path):
    with open(path, "w") as fh:
        json.dump(frame_to_json(frame), fh)


_SVG_COLORS = {"V_upper": "#1f77b4", "V_partner": "#d62728", "W": "#2ca02c"}


def write_svg(frame, path, width=640, height=440, pad=50.0):
    """Quick-look line plot of V_upper, V_partner and W as plain SVG paths."""
    xs = frame["x"]
    series = {k: frame[k] for k in ("V_upper", "V_partner", "W")}
    ys = np.concatenate(list(series.values()))
    ys = ys[np.isfinite(ys)]
    y_lo, y_hi = np.percentile(ys, [2.0, 98.0])
    if y_hi <= y_lo:
        y_hi = y_lo + 1.0
    x_lo, x_hi = float(xs[0]), float(xs[-1])

    def px(x):
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def py(y):
        y = min(max(y, y_lo), y_hi)
        return height - pad - (y - y_lo) / (y_hi - y_lo) * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for i, (name, vals) in enumerate(series.items()):
        coords = [
            (px(float(x)), py(float(v)))
            for x, v in zip(xs, vals)
            if math.isfinite(float(v))
        ]
        d = "M " + " L ".join(f"{cx:.2f} {cy:.2f}" for cx, cy in coords)
        color = _SVG_COLORS[name]
        parts.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width - pad - 110}" y="{pad + 16 * (i + 1)}" '
            f'fill="{color}" font-size="13">{name}</text>'
        )
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts))
