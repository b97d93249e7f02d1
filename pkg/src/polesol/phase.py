"""Far-field phase function of the dressed solitons.

In the scaled variables chi = x/n, tau = t/n the solution is governed by

    phi(lambda) = i (lambda chi + lambda^2 tau) + log((lambda - xi*) / (lambda - xi)),

analytic off a branch cut joining xi* to xi and vanishing (in its log part)
at infinity.  This module evaluates phi, its derivatives, the rotated phase
theta = -i phi (real on the real axis), and the critical points of phi,
which organize the entire far-field analysis.
"""

from dataclasses import dataclass

import numpy as np

from .kernels import Contour, poly_roots, winding_number

ON_CUT_TOL = 1e-10
DEGENERATE_TOL = 1e-7
REAL_ROOT_TOL = 1e-9


class OnCutError(ValueError):
    """Evaluation point lies on the logarithm's branch cut."""


def cut_through(xi, x0):
    """Schwarz-symmetric polyline cut xi* -> x0 -> xi crossing R at x0."""
    return Contour([np.conj(xi), complex(x0), xi])


@dataclass(frozen=True)
class PhaseParams:
    """Scaled coordinates (chi, tau), the pole xi, and the log branch cut.

    log_cut defaults to the straight segment from xi* to xi; any
    Schwarz-symmetric polyline joining them defines the same phase up to
    which side of the lens between the cuts carries the 2 pi i jump.
    """
    chi: float
    tau: float
    xi: complex
    log_cut: Contour = None

    def __post_init__(self):
        xi = complex(self.xi)
        if xi.imag <= 0:
            raise ValueError("pole xi must lie in the upper half plane")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "chi", float(self.chi))
        object.__setattr__(self, "tau", float(self.tau))
        cut = self.log_cut
        if cut is None:
            cut = Contour([np.conj(xi), xi])
        pts = cut.points
        if abs(pts[0] - np.conj(xi)) > 1e-9 or abs(pts[-1] - xi) > 1e-9:
            raise ValueError("log_cut must join xi* to xi")
        if np.max(np.abs(np.conj(pts[::-1]) - pts)) > 1e-9:
            raise ValueError("log_cut must be symmetric under conjugation")
        object.__setattr__(self, "log_cut", cut)

    @property
    def alpha(self):
        return self.xi.real

    @property
    def beta(self):
        return self.xi.imag


def _cut_distance(lam, cut):
    d = np.inf
    for a, b in cut.segments():
        ab = b - a
        L2 = abs(ab) ** 2
        s = ((lam - a) * np.conj(ab)).real / L2 if L2 > 0 else 0.0
        s = min(1.0, max(0.0, s))
        d = min(d, abs(lam - (a + s * ab)))
    return d


def phi(lam, p):
    """The phase at lam, branch continuous off p.log_cut, log part -> 0 at oo."""
    lam = complex(lam)
    if _cut_distance(lam, p.log_cut) < ON_CUT_TOL:
        raise OnCutError(f"lambda = {lam} lies on the logarithm branch cut")
    xi = p.xi
    val = (1j * (lam * p.chi + lam * lam * p.tau)
           + np.log((lam - np.conj(xi)) / (lam - xi)))
    # the principal branch is cut along the straight segment [xi*, xi]; moving
    # the cut to the polyline shifts the value by -2 pi i inside the region
    # swept between them (polyline closed by the straight return edge)
    if p.log_cut.points.size > 2:
        w = winding_number(lam, p.log_cut.points)
        if w:
            val -= 2j * np.pi * w
    return val


def phi_prime(lam, p):
    """d phi / d lambda; single-valued (no branch dependence)."""
    lam = complex(lam)
    return (1j * (p.chi + 2.0 * lam * p.tau)
            - 2j * p.beta / ((lam - p.xi) * (lam - np.conj(p.xi))))


def phi_dd(lam, p):
    """Second derivative of phi."""
    lam = complex(lam)
    u = lam - p.alpha
    return 2j * p.tau + 4j * p.beta * u / (u * u + p.beta ** 2) ** 2


@dataclass(frozen=True)
class CriticalData:
    """Critical points of phi, classified and labeled.

    kind is "three-real" (labels lam0 < lam1 < lam2 for tau > 0,
    lam1 < lam2 < lam0 for tau < 0; lam0 is None when tau = 0 and the third
    point sits at infinity), "pair" (lam_plus in the upper half plane,
    lam_minus its conjugate, lam0 the leftover real point or None), or
    "degenerate" (two roots coincide within tolerance).  roots always holds
    the raw root set.
    """
    kind: str
    roots: tuple
    lam0: float = None
    lam1: float = None
    lam2: float = None
    lam_plus: complex = None
    lam_minus: complex = None


def critical_points(p):
    """Solve phi'(lambda) = 0 and label the roots.

    phi' = 0 reduces to a real-coefficient cubic in u = lambda - alpha
    (quadratic when tau = 0, the third root escaping to infinity).
    """
    chi, tau = p.chi, p.tau
    if chi == 0.0 and tau == 0.0:
        raise ValueError("phase is identically degenerate at chi = tau = 0")
    al, be = p.alpha, p.beta
    if tau == 0.0:
        u2 = 2.0 * be / chi - be * be
        u = np.sqrt(complex(u2))
        roots = np.array([al - u, al + u])
    else:
        coeffs = np.array([2.0 * tau,
                           chi + 2.0 * al * tau,
                           2.0 * tau * be * be,
                           (chi + 2.0 * al * tau) * be * be - 2.0 * be])
        roots = poly_roots(coeffs) + al

    roots = tuple(sorted(roots, key=lambda r: (r.real, r.imag)))
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if abs(roots[i] - roots[j]) < DEGENERATE_TOL:
                return CriticalData(kind="degenerate", roots=roots)

    if all(abs(r.imag) <= REAL_ROOT_TOL for r in roots):
        reals = sorted(r.real for r in roots)
        if tau == 0.0:
            return CriticalData(kind="three-real", roots=roots,
                                lam1=reals[0], lam2=reals[1])
        if tau > 0.0:
            lam0, lam1, lam2 = reals
        else:
            lam1, lam2, lam0 = reals
        return CriticalData(kind="three-real", roots=roots,
                            lam0=lam0, lam1=lam1, lam2=lam2)

    plus = max(roots, key=lambda r: r.imag)
    minus = min(roots, key=lambda r: r.imag)
    if abs(minus - np.conj(plus)) > REAL_ROOT_TOL:
        raise ArithmeticError("complex critical points failed to pair up")
    lam0 = None
    if len(roots) == 3:
        (real_root,) = [r for r in roots if r not in (plus, minus)]
        lam0 = real_root.real
    return CriticalData(kind="pair", roots=roots,
                        lam0=lam0, lam_plus=plus, lam_minus=minus)


def theta_and_dd(lam, p):
    """(theta, theta'') at real lam: theta = -i phi is real there.

    theta'' comes from the closed form 2 tau + 4 beta u / (u^2 + beta^2)^2,
    u = lam - alpha; its signs at the interior critical points drive the
    stationary-phase analysis.
    """
    lam = float(lam)
    theta = -1j * phi(lam, p)
    u = lam - p.alpha
    tdd = 2.0 * p.tau + 4.0 * p.beta * u / (u * u + p.beta ** 2) ** 2
    return theta, tdd
