"""Shared numerical kernels.

Everything downstream (Darboux stacks, phase geometry, band solvers) is built
from four primitives:

  * poly_roots        -- all roots of a low-degree polynomial, Newton-polished
  * contour_quad      -- adaptive Gauss-Legendre quadrature along a polyline
                         in the complex plane, with endpoint square-root
                         substitutions for integrable inverse-sqrt singularities
  * cauchy_derivs     -- values and derivatives of an analytic (possibly
                         matrix-valued) function from equispaced samples on a
                         circle, via the Cauchy integral / DFT
  * trace_level_curve -- predictor-corrector tracing of a zero level curve of a
                         harmonic field Re f(lambda)

plus small geometric helpers (winding numbers, two-point square roots, ray
integrals to infinity) shared by the band machinery.
"""

import math
from dataclasses import dataclass, field

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class TraceError(RuntimeError):
    """Level-curve tracing left the search area or exceeded its arc budget."""


# ----------------------------------------------------------------------------
# polynomial roots
# ----------------------------------------------------------------------------

def poly_roots(coeffs, polish=True):
    """All complex roots of a polynomial, highest-degree coefficient first.

    Companion-matrix eigenvalues (np.roots) followed by a few Newton steps per
    root.  Polishing is skipped for (near-)multiple roots, where Newton's
    quadratic convergence is lost anyway and the eigenvalue estimate is as good
    as the conditioning allows.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size < 2:
        raise ValueError("need at least a degree-1 polynomial")
    if c[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    roots = np.roots(c)
    if not polish:
        return roots
    dc = np.polyder(c)
    scale = np.max(np.abs(c))
    for i, r in enumerate(roots):
        for _ in range(3):
            p = np.polyval(c, r)
            dp = np.polyval(dc, r)
            if abs(dp) < 1e-8 * scale * max(1.0, abs(r)) ** (c.size - 2):
                break  # multiple root: leave the eigenvalue estimate alone
            step = p / dp
            r = r - step
            if abs(step) < 1e-15 * max(1.0, abs(r)):
                break
        roots[i] = r
    return roots


# ----------------------------------------------------------------------------
# contours and quadrature
# ----------------------------------------------------------------------------

@dataclass
class Contour:
    """Oriented polyline in the complex plane.

    points         vertices, traversed in order
    closed         whether the last point connects back to the first
    singular_start integrand may blow up like (s - points[0])^(-1/2)
    singular_end   likewise at the far end
    """
    points: np.ndarray
    closed: bool = False
    singular_start: bool = False
    singular_end: bool = False

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=complex).ravel()
        if self.points.size < 2 and not self.closed:
            raise ValueError("contour needs at least two points")

    def segments(self):
        pts = self.points
        segs = list(zip(pts[:-1], pts[1:]))
        if self.closed and pts[0] != pts[-1]:
            segs.append((pts[-1], pts[0]))
        return segs

    def arc_length(self):
        return float(sum(abs(b - a) for a, b in self.segments()))

    def reversed(self):
        return Contour(self.points[::-1], closed=self.closed,
                       singular_start=self.singular_end,
                       singular_end=self.singular_start)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)


def _feval(f, z):
    """Evaluate f on an array of nodes, tolerating scalar-only callables."""
    try:
        out = np.asarray(f(z))
        if out.shape == z.shape:
            return out
    except Exception:
        pass
    return np.array([f(zi) for zi in z])


def _gl_panel(f, a, b):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * np.sum(_GL_W * _feval(f, mid + half * _GL_X))


def _adaptive(f, a, b, tol, depth=0):
    whole = _gl_panel(f, a, b)
    m = 0.5 * (a + b)
    left, right = _gl_panel(f, a, m), _gl_panel(f, m, b)
    err = abs(left + right - whole)
    if err <= tol or depth >= 24:
        if depth >= 24 and err > 100 * tol:
            raise QuadratureError(
                f"panel [{a}, {b}] not converging (err {err:.3e}, tol {tol:.3e})")
        return left + right, err
    lv, le = _adaptive(f, a, m, tol / 2, depth + 1)
    rv, re_ = _adaptive(f, m, b, tol / 2, depth + 1)
    return lv + rv, le + re_


def contour_quad(f, contour, rel_tol=1e-10, return_err=False):
    """Integral of f along a Contour.

    Integrable endpoint singularities of inverse-square-root type are handled
    by the substitution s = p0 + u^2 (p1 - p0), which makes the transformed
    integrand smooth; interior panels use adaptive 15-point Gauss-Legendre
    bisection.  Raises QuadratureError if bisection stalls.
    """
    segs = contour.segments()
    specials = {}
    if contour.singular_start:
        specials[0] = "start"
    if contour.singular_end:
        specials[len(segs) - 1] = "end"

    def seg_integrand(i, a, b):
        kind = specials.get(i)
        if kind is None:
            return lambda u: _seg_f(f, a, b, u), (0.0, 1.0)
        if kind == "start":
            # s = a + u^2 (b - a),  ds = 2 u (b - a) du
            return (lambda u: 2.0 * u * (b - a) * _feval_scalar(f, a + u * u * (b - a)),
                    (0.0, 1.0))
        # s = b + u^2 (a - b): u running 0 -> 1 walks the segment backward,
        # so the Jacobian picks up a sign: ds = -2 u (a - b) du = 2 u (b - a) du
        return (lambda u: 2.0 * u * (b - a) * _feval_scalar(f, b + u * u * (a - b)),
                (0.0, 1.0))

    # crude first pass for the absolute-tolerance scale
    crude = 0.0
    plans = []
    for i, (a, b) in enumerate(segs):
        g, (u0, u1) = seg_integrand(i, a, b)
        plans.append((g, u0, u1))
        crude += abs(_gl_panel(g, u0, u1))
    abs_tol = rel_tol * max(crude, 1e-300)

    total, err = 0.0 + 0.0j, 0.0
    for g, u0, u1 in plans:
        v, e = _adaptive(g, u0, u1, abs_tol / max(len(plans), 1))
        total += v
        err += e
    if return_err:
        return total, err
    return total


def _seg_f(f, a, b, u):
    z = a + u * (b - a)
    return (b - a) * _feval(f, z)


def _feval_scalar(f, z):
    out = _feval(f, z) if isinstance(z, np.ndarray) else f(z)
    return out


def ray_quad(f, start, direction, rel_tol=1e-10):
    """Integral of f from `start` to infinity along a ray.

    Assumes f(s) = O(s^-2) so the tail converges; substitutes
    s = start + d * v/(1-v) with unit d, mapping [0,1) onto the ray.
    """
    d = direction / abs(direction)

    def g(v):
        v = np.asarray(v)
        r = v / (1.0 - v)
        s = start + d * r
        return _feval(f, s) * d / (1.0 - v) ** 2

    val, _ = _adaptive(g, 0.0, 1.0 - 1e-12, rel_tol * max(abs(_gl_panel(g, 0.0, 0.5)), 1e-30))
    return val


# ----------------------------------------------------------------------------
# Cauchy-circle derivatives
# ----------------------------------------------------------------------------

def cauchy_derivs(f, center, radius, order, samples=64):
    """[f(c), f'(c), ..., f^(order)(c)] for f analytic on |z-c| <= radius.

    Uses the trapezoid rule on the circle, i.e. a plain DFT of the samples:
    for analytic f the error decays like (r_analyticity/radius)^-samples, so
    64 points give near-machine accuracy when the circle is well inside the
    analyticity domain.  f may be matrix-valued.
    """
    th = 2.0 * np.pi * np.arange(samples) / samples
    ring = center + radius * np.exp(1j * th)
    vals = np.asarray([np.asarray(f(z), dtype=complex) for z in ring])
    out = []
    for k in range(order + 1):
        phase = np.exp(-1j * k * th).reshape((samples,) + (1,) * (vals.ndim - 1))
        coeff = (vals * phase).mean(axis=0)
        out.append(math.factorial(k) * coeff / radius ** k)
    return out


# ----------------------------------------------------------------------------
# level-curve tracing
# ----------------------------------------------------------------------------

@dataclass
class LevelCurveSpec:
    """What to trace: the zero set of a harmonic field through `seed`.

    field      real-valued F(lambda); the curve is {F = 0}
    seed       point on (or very near) the curve
    step       nominal arc-length step
    terminators  points at which to stop (snapped to exactly)
    fprime     optional analytic derivative f' where F = Re f; the gradient of
               F as a complex number is then conj(f').  Finite differences
               otherwise.
    direction  optional unit-ish complex hint for the initial tangent
    max_arc    arc-length budget before giving up
    """
    field: object
    seed: complex
    step: float
    terminators: tuple = ()
    fprime: object = None
    direction: complex = None
    max_arc: float = None


def _grad(spec, lam):
    if spec.fprime is not None:
        return np.conj(spec.fprime(lam))
    h = spec.step * 1e-4
    fx = (spec.field(lam + h) - spec.field(lam - h)) / (2 * h)
    fy = (spec.field(lam + 1j * h) - spec.field(lam - 1j * h)) / (2 * h)
    return fx + 1j * fy


def _correct(spec, lam):
    """Newton steps along the gradient back onto {F = 0}."""
    for _ in range(30):
        F = spec.field(lam)
        g = _grad(spec, lam)
        ag = abs(g)
        if ag < 1e-13:
            return lam, False
        if abs(F) <= 1e-9 * ag * max(1.0, abs(lam)):
            return lam, True
        lam = lam - F * g / (ag * ag)
    return lam, False


def trace_level_curve(spec):
    """Trace {field = 0} from the seed until a terminator or closure.

    Predictor: step along the tangent (the gradient rotated by 90 degrees).
    Corrector: Newton along the gradient.  The step halves when the turning
    angle per step exceeds 0.2 rad.  A corrector failure (stalled Newton or
    vanishing gradient: a saddle of the field) is handled by restarting the
    trace 10 steps further along the current direction, which jumps over the
    saddle onto the continuing branch.
    """
    lam, ok = _correct(spec, spec.seed)
    if not ok:
        raise TraceError(f"seed {spec.seed} is not near a regular curve point")
    pts = [lam]
    h = spec.step
    max_arc = spec.max_arc if spec.max_arc is not None else 4000 * spec.step
    g = _grad(spec, lam)
    tan = 1j * g / abs(g)
    if spec.direction is not None:
        want = spec.direction / abs(spec.direction)
        if (tan * np.conj(want)).real < 0:
            tan = -tan
    arc = 0.0
    terms = [complex(t) for t in spec.terminators]
    while arc < max_arc:
        # terminator / closure checks
        for t in terms:
            if abs(pts[-1] - t) < 1.5 * h:
                pts.append(t)
                return Contour(np.array(pts))
        if len(pts) > 5 and abs(pts[-1] - pts[0]) < h and arc > 3 * h:
            pts.append(pts[0])
            return Contour(np.array(pts), closed=True)

        pred = pts[-1] + h * tan
        new, ok = _correct(spec, pred)
        if ok:
            gnew = _grad(spec, new)
            tnew = 1j * gnew / abs(gnew)
            if (tnew * np.conj(tan)).real < 0:
                tnew = -tnew
            turn = abs(tnew - tan)
            if turn > 0.2 and h > spec.step / 64:
                h *= 0.5
                continue
            if turn < 0.02 and h < spec.step:
                h *= 2.0
            arc += abs(new - pts[-1])
            pts.append(new)
            tan = tnew
            continue
        # saddle (or other corrector failure): hop over along the tangent
        hop = pts[-1] + 10 * h * tan
        new, ok = _correct(spec, hop)
        if not ok:
            raise TraceError(
                f"corrector failed near {pts[-1]:.6g} and saddle hop did not recover")
        gnew = _grad(spec, new)
        tnew = 1j * gnew / abs(gnew)
        if (tnew * np.conj(tan)).real < 0:
            tnew = -tnew
        arc += abs(new - pts[-1])
        pts.append(new)
        tan = tnew
    raise TraceError("arc-length budget exhausted without meeting a terminator")


# ----------------------------------------------------------------------------
# geometry helpers
# ----------------------------------------------------------------------------

def winding_number(z, vertices):
    """Winding number of the closed polygon `vertices` around z."""
    v = np.asarray(vertices, dtype=complex)
    w = 0.0
    for a, b in zip(v, np.roll(v, -1)):
        w += np.angle((b - z) / (a - z))
    return int(round(w / (2.0 * np.pi)))


def in_triangle(z, a, b, c):
    """True if z lies strictly inside triangle (a, b, c)."""
    def side(p, q, r):
        return ((q - p) * np.conj(r - p)).imag
    d1, d2, d3 = side(a, b, z), side(b, c, z), side(c, a, z)
    return (d1 > 0 and d2 > 0 and d3 > 0) or (d1 < 0 and d2 < 0 and d3 < 0)


def chord_sqrt(lam, u, v):
    """sqrt((lam-u)(lam-v)) with branch cut exactly on the segment [u, v].

    Normalized to behave like lam - (u+v)/2 at infinity.  Written as
    (lam-m) sqrt(1 - (h/(lam-m))^2) with m the midpoint and h the half-chord:
    the principal square root's cut {argument real negative} is hit exactly
    when lam lies on the segment, so the branch is correct everywhere else.
    Not defined on the open segment itself; use explicit side limits there.
    """
    m = 0.5 * (u + v)
    h = 0.5 * (u - v)
    d = lam - m
    return d * np.sqrt(1.0 - (h / d) ** 2)
