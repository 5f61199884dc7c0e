"""Smooth compactly supported weights and their integral transforms.

Contents: the canonical exponential bump on [1,2] with analytic
derivatives; smooth plateau windows; Mellin evaluation; the transform
  wstar(z, w) = int W(y) J_nu(4 pi sqrt(y w + z)) dy
with its two-term oscillatory decomposition; and the holomorphic / Maass
integral transforms attached to a scaled, twisted test function
  phi(x) = exp(+-i alpha x) w0(x/Z) (x/Z)^(i tau).

The Maass-side transform needs (J_{2it} - J_{-2it})/sinh(pi t); via a
Mehler-Sonine representation this equals -(4i/pi) * int_0^inf
cos(x cosh u) cos(2 t u) du, which we evaluate on a bent contour
(real leg, quarter-turn, then parallel to the real axis at height pi/2
where cosh picks up a decaying real exponential).  No complex-order
Bessel function is ever evaluated directly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bessel import BesselKernel, bessel_j, bessel_j_grid
from .errors import ContractError, NumericsError
from .quadrature import fixed_gl, gl_nodes_weights, osc_quad

__all__ = [
    "SmoothWindow", "bump_window", "plateau_window", "mellin_at",
    "bessel_j", "bessel_j_grid", "w_star", "extract_oscillatory_parts",
    "TransformKernel", "kuznetsov_transform_dot", "kuznetsov_transform_tilde",
]

TWO_PI = 2.0 * math.pi
_U_FLOOR = 1.0 / 700.0  # below this, exp(-1/u) * u^(-k) underflows for k <= 8


@dataclass(frozen=True)
class SmoothWindow:
    """Compactly supported smooth weight, optionally modulated by e(eta x).

    value/deriv evaluate the unmodulated base window; calling the window
    includes the modulation factor exp(2 pi i eta x) when eta != 0.
    """

    base_value: Callable[[np.ndarray], np.ndarray]
    base_deriv: Callable[[int, np.ndarray], np.ndarray] | None
    support: tuple[float, float]
    eta: float = 0.0

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        v = self.base_value(x)
        if self.eta == 0.0:
            return v
        return v * np.exp(2j * math.pi * self.eta * x)

    def value(self, x):
        return self.base_value(np.asarray(x, dtype=np.float64))

    def deriv(self, j: int, x):
        """j-th derivative of the modulated window (Leibniz over e(eta x))."""
        if self.base_deriv is None:
            raise ContractError("this window does not provide derivatives")
        if j < 0 or j > 4:
            raise ContractError("derivatives available for 0 <= j <= 4")
        x = np.asarray(x, dtype=np.float64)
        if self.eta == 0.0:
            return self.base_deriv(j, x)
        rot = 2j * math.pi * self.eta
        total = np.zeros(x.shape, dtype=np.complex128)
        for i in range(j + 1):
            total += math.comb(j, i) * self.base_deriv(j - i, x) * rot ** i
        return total * np.exp(rot * x)

    def modulated(self, eta: float) -> "SmoothWindow":
        return SmoothWindow(self.base_value, self.base_deriv, self.support, eta)


def _bump_g_derivs(x: np.ndarray) -> list[np.ndarray]:
    """g = -1/u with u = (x-1)(2-x); returns [g', g'', g''', g''''].

    u' = 3 - 2x, u'' = -2, higher derivatives vanish.
    """
    u = (x - 1.0) * (2.0 - x)
    up = 3.0 - 2.0 * x
    iu = 1.0 / u
    g1 = iu * iu * up
    g2 = -2.0 * iu ** 3 * up * up - 2.0 * iu * iu
    g3 = 6.0 * iu ** 4 * up ** 3 + 12.0 * iu ** 3 * up
    g4 = -24.0 * iu ** 5 * up ** 4 - 72.0 * iu ** 4 * up * up - 24.0 * iu ** 3
    return [g1, g2, g3, g4]


def _bump_value(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    u = (x - 1.0) * (2.0 - x)
    inside = u > _U_FLOOR
    out = np.zeros(x.shape, dtype=np.float64)
    if np.any(inside):
        ui = u[inside]
        out[inside] = np.exp(-1.0 / ui)
    return out


def _bump_deriv(j: int, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if j == 0:
        return _bump_value(x)
    u = (x - 1.0) * (2.0 - x)
    inside = u > _U_FLOOR
    out = np.zeros(x.shape, dtype=np.float64)
    if not np.any(inside):
        return out
    xi = x[inside]
    w = np.exp(-1.0 / u[inside])
    g1, g2, g3, g4 = _bump_g_derivs(xi)
    if j == 1:
        out[inside] = g1 * w
    elif j == 2:
        out[inside] = (g2 + g1 ** 2) * w
    elif j == 3:
        out[inside] = (g3 + 3.0 * g1 * g2 + g1 ** 3) * w
    elif j == 4:
        out[inside] = (g4 + 4.0 * g1 * g3 + 3.0 * g2 ** 2 + 6.0 * g1 ** 2 * g2 + g1 ** 4) * w
    else:
        raise ContractError("derivatives available for 0 <= j <= 4")
    return out


def bump_window(eta: float = 0.0) -> SmoothWindow:
    """The canonical bump exp(-1/((x-1)(2-x))) on (1,2), zero elsewhere."""
    return SmoothWindow(_bump_value, _bump_deriv, (1.0, 2.0), eta)


def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity monotone 0 -> 1 on [0,1] built from the exponential bump."""
    t = np.clip(t, 0.0, 1.0)
    def b(s):
        out = np.zeros_like(s)
        pos = s > _U_FLOOR
        out[pos] = np.exp(-1.0 / s[pos])
        return out
    num = b(t)
    den = num + b(1.0 - t)
    with np.errstate(invalid="ignore"):
        r = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return r


def plateau_window(a: float, b: float, c: float, d: float) -> SmoothWindow:
    """Smooth window: 0 outside (a,d), 1 on [b,c], monotone in between."""
    if not (a < b <= c < d):
        raise ContractError("need a < b <= c < d")

    def value(x):
        x = np.asarray(x, dtype=np.float64)
        rise = _smoothstep((x - a) / (b - a))
        fall = _smoothstep((d - x) / (d - c))
        return rise * fall

    return SmoothWindow(value, None, (a, d))


def mellin_at(window: SmoothWindow, s: complex) -> complex:
    """Mellin transform int W(x) x^(s-1) dx over the window support."""
    s = complex(s)
    lo, hi = window.support

    def integrand(x):
        return window(x) * np.exp((s - 1.0) * np.log(x))

    cycles = abs(s.imag) * math.log(hi / lo) / TWO_PI
    return complex(osc_quad(integrand, lo, hi, cycles=cycles, tol=1e-12))


def w_star(window: SmoothWindow, kappa: int, z: float, w: float,
           tol: float = 1e-10) -> complex:
    """int W(y) J_(kappa-1)(4 pi sqrt(y w + z)) dy over the support of W.

    Requires z >= 4|w| > 0, which keeps the Bessel argument away from the
    origin for either sign of w.
    """
    if not (w != 0.0 and z >= 4.0 * abs(w)):
        raise ContractError("w_star requires z >= 4|w| > 0")
    kernel = BesselKernel.of(kappa - 1)
    lo, hi = window.support

    def integrand(y):
        arg = 4.0 * math.pi * np.sqrt(y * w + z)
        return window(y) * kernel.grid(arg)

    # phase 2 sqrt(yw+z) has derivative w / sqrt(yw+z) <= |w| / sqrt(z/2)
    cycles = (abs(w) / math.sqrt(0.5 * z) + abs(window.eta)) * (hi - lo)
    return complex(osc_quad(integrand, lo, hi, cycles=cycles, tol=tol))


def w_star_grid(window: SmoothWindow, kappa: int, z_grid: np.ndarray, w: float,
                nodes: int = 64) -> np.ndarray:
    """w_star sampled over a z grid with a fixed-node rule (fast path)."""
    z_grid = np.asarray(z_grid, dtype=np.float64)
    if np.any(z_grid < 4.0 * abs(w)) or w == 0.0:
        raise ContractError("w_star requires z >= 4|w| > 0")
    kernel = BesselKernel.of(kappa - 1)
    lo, hi = window.support
    panels = max(1, nodes // 16)
    ys, wqs = [], []
    edges = np.linspace(lo, hi, panels + 1)
    for i in range(panels):
        yy, ww = gl_nodes_weights(edges[i], edges[i + 1], 16)
        ys.append(yy)
        wqs.append(ww)
    y = np.concatenate(ys)
    wq = np.concatenate(wqs)
    wy = window(y)
    args = 4.0 * math.pi * np.sqrt(y[None, :] * w + z_grid[:, None])
    jv = kernel.grid(args)
    return jv @ (wy * wq)


def extract_oscillatory_parts(window: SmoothWindow, kappa: int, w: float,
                              z_grid: np.ndarray, samples: np.ndarray | None = None):
    """Fit wstar samples to  W+ z^(-1/4) e(2 sqrt z) + W- z^(-1/4) e(-2 sqrt z).

    The grid must resolve e(2 sqrt z): spacing <= sqrt(z)/4 locally.  The
    fit is complex least squares over windows of about 1.5 oscillations;
    returns (W+ samples, W- samples, max abs residual), the coefficient
    arrays being window-constant.  `samples` overrides the wstar values
    (used to feed synthetic models in tests).
    """
    z = np.asarray(z_grid, dtype=np.float64)
    if z.ndim != 1 or z.size < 8:
        raise ContractError("need a 1-d grid with at least 8 points")
    if np.any(np.diff(z) <= 0):
        raise ContractError("grid must be strictly increasing")
    spacing = np.diff(z)
    if np.any(spacing > np.sqrt(z[:-1]) / 4.0 * (1.0 + 1e-12)):
        raise ContractError("grid too coarse: need >= 4 points per oscillation of e(2 sqrt z)")

    if samples is None:
        samples = w_star_grid(window, kappa, z, w)
    vals = np.asarray(samples, dtype=np.complex128)
    if vals.shape != z.shape:
        raise ContractError("samples must match the grid")

    phase = 2.0 * np.sqrt(z)  # in cycles
    wplus = np.empty(z.size, dtype=np.complex128)
    wminus = np.empty(z.size, dtype=np.complex128)
    start = 0
    max_resid = 0.0
    degree = 3  # the amplitudes drift slowly; a local cubic absorbs it
    while start < z.size:
        # window of ~2.5 oscillations, enough points for 2(degree+1) unknowns
        end = start + 1
        while end < z.size and (phase[end] - phase[start] < 2.5 or end - start < 4 * (degree + 1)):
            end += 1
        if z.size - end < 4 * (degree + 1):  # absorb the remainder into the last window
            end = z.size
        idx = slice(start, end)
        zz = z[idx]
        npts = zz.size
        deg = min(degree, max(0, npts // 4 - 1))
        b_plus = zz ** -0.25 * np.exp(2j * math.pi * 2.0 * np.sqrt(zz))
        u = (zz - zz.mean()) / max(zz.max() - zz.min(), 1e-300)  # scaled local coordinate
        cols = [b_plus * u ** j for j in range(deg + 1)]
        cols += [np.conj(b_plus) * u ** j for j in range(deg + 1)]
        design = np.stack(cols, axis=1)
        sol, _, rank, sing = np.linalg.lstsq(design, vals[idx], rcond=None)
        if rank < design.shape[1] or sing[-1] < 1e-10 * sing[0]:
            raise NumericsError("ill-conditioned oscillatory fit (grid too coarse)")
        poly_p = sum(sol[j] * u ** j for j in range(deg + 1))
        poly_m = sum(sol[deg + 1 + j] * u ** j for j in range(deg + 1))
        wplus[idx] = poly_p
        wminus[idx] = poly_m
        max_resid = max(max_resid, float(np.max(np.abs(design @ sol - vals[idx]))))
        start = end
    return wplus, wminus, max_resid


@dataclass(frozen=True)
class TransformKernel:
    """phi(x) = exp(sign * i alpha x) w0(x/Z) (x/Z)^(i tau), supported on
    [Z, 2Z] for the canonical bump w0."""

    Z: float
    alpha: float = 0.0
    tau: float = 0.0
    sign: int = +1
    window: SmoothWindow = field(default_factory=bump_window)

    def __post_init__(self):
        if self.Z <= 0:
            raise ContractError("scale Z must be positive")
        if abs(self.alpha) > 0.8:
            raise ContractError("|alpha| <= 4/5 required")
        if self.sign not in (-1, +1):
            raise ContractError("sign must be +-1")

    @property
    def support(self) -> tuple[float, float]:
        lo, hi = self.window.support
        return lo * self.Z, hi * self.Z

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        scaled = x / self.Z
        base = self.window(scaled).astype(np.complex128)
        phase = self.sign * self.alpha * x
        if self.tau != 0.0:
            safe = np.where(scaled > 0, scaled, 1.0)
            phase = phase + self.tau * np.log(safe)
        return base * np.exp(1j * phase)

    def zero(self) -> "TransformKernel":
        """Same shape with an identically-zero window (test hook)."""
        zero_win = SmoothWindow(lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                                None, self.window.support)
        return TransformKernel(self.Z, self.alpha, self.tau, self.sign, zero_win)

    def x_cycles(self) -> float:
        lo, hi = self.support
        return ((1.0 + abs(self.alpha)) / TWO_PI + abs(self.tau) / (TWO_PI * lo + 1e-300)) * (hi - lo)


def kuznetsov_transform_dot(phi: TransformKernel, k: int, tol: float = 1e-10) -> complex:
    """4 i^k int phi(x) J_(k-1)(x) dx / x for even k >= 2."""
    if k < 2 or k % 2:
        raise ContractError("holomorphic transform needs even k >= 2")
    kernel = BesselKernel.of(k - 1)
    lo, hi = phi.support

    def integrand(x):
        return phi(x) * kernel.grid(x) / x

    val = osc_quad(integrand, lo, hi, cycles=phi.x_cycles(), tol=tol)
    return 4.0 * (1j ** k) * complex(val)


def dot_decay_slope(phi: TransformKernel, k_lo: int | None = None,
                    k_hi: int | None = None, npts: int = 12,
                    floor: float = 1e-250) -> dict:
    """Fitted slope of log|dot(k)| against log(1 + k/Z) on [k_lo, k_hi].

    Values are clipped at `floor` before taking logs (the transform
    underflows to exact zero once k is a few multiples of Z); the clip
    only makes the fitted slope less negative.
    """
    Z = phi.Z
    if k_lo is None:
        k_lo = 2 * int(math.ceil(Z))
    if k_hi is None:
        k_hi = 20 * int(math.ceil(Z))
    ks = sorted({2 * int(round(k / 2)) for k in np.geomspace(max(k_lo, 2), k_hi, npts)})
    ks = [k for k in ks if k >= 2]
    mags = []
    for k in ks:
        mags.append(max(abs(kuznetsov_transform_dot(phi, k)), floor))
    lx = np.log1p(np.array(ks, dtype=float) / Z)
    ly = np.log(np.array(mags))
    slope = float(np.polyfit(lx, ly, 1)[0])
    return {"slope": slope, "k": ks, "magnitude": mags}


def _cos_cosh_kernel(x: float, t: float) -> float:
    """int_0^inf cos(x cosh u) cos(2 t u) du via a bent contour (x > 0)."""
    if x <= 0:
        raise ContractError("kernel defined for x > 0")
    # leg 3 becomes negligible once x sinh A >= 40 + pi |t|
    target = (40.0 + math.pi * abs(t)) / x
    A = math.asinh(target)

    def leg1(u):
        return np.exp(1j * x * np.cosh(u)) * np.cos(2.0 * t * u)

    cycles1 = x * math.sinh(A) * A / TWO_PI + 1.0
    i1 = osc_quad(leg1, 0.0, A, cycles=cycles1, tol=1e-12)

    # vertical quarter-turn u = A + i s, s in [0, pi/2]
    s, ws = gl_nodes_weights(0.0, 0.5 * math.pi, 48)
    uu = A + 1j * s
    vals = np.exp(1j * x * np.cosh(uu)) * np.cos(2.0 * t * uu)
    i2 = 1j * np.sum(vals * ws)

    # horizontal leg u = v + i pi/2: cosh -> i sinh v, pure decay
    v_hi = math.asinh(745.0 / x)
    v, wv = gl_nodes_weights(A, max(v_hi, A + 1e-6), 48)
    uu = v + 0.5j * math.pi
    vals = np.exp(-x * np.sinh(v)) * np.cos(2.0 * t * uu)
    i3 = np.sum(vals * wv)

    return float((i1 + i2 + i3).real)


def maass_bessel_kernel(x: float, t: float) -> complex:
    """(J_{2it}(x) - J_{-2it}(x)) / sinh(pi t), continued to t = 0."""
    return -4j / math.pi * _cos_cosh_kernel(x, t)


def kuznetsov_transform_tilde(phi: TransformKernel, t: float, tol: float = 1e-10) -> complex:
    """2 pi i int phi(x) (J_{2it} - J_{-2it})(x) / sinh(pi t) dx / x.

    Evaluates to 8 int phi(x) C(x,t) dx/x with the real cosine kernel C.
    """
    lo, hi = phi.support

    def integrand(x):
        kern = np.array([_cos_cosh_kernel(float(xx), t) for xx in x])
        return phi(x) * kern / x

    cycles = phi.x_cycles() + (hi - lo) / TWO_PI  # kernel itself turns like e^(ix)
    val = osc_quad(integrand, lo, hi, cycles=cycles, tol=tol)
    return 8.0 * complex(val)
