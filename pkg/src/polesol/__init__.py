"""Multiple-pole solitons of the focusing nonlinear Schrodinger equation.

Exact solutions psi^[2n](x,t) built by iterated Darboux transformations at a
single spectral pole xi, plus the four leading-order far-field descriptions
(exponential decay, algebraic decay, non-oscillatory one-band, oscillatory
two-band) valid in the rescaled plane (chi, tau) = (x/n, t/n) as n grows.
"""

from .darboux import SolitonParams, psi_exact, build_stack, nls_residual

__all__ = [
    "SolitonParams", "psi_exact", "build_stack", "nls_residual",
]

__version__ = "0.1.0"
