"""Pure-numpy Darboux level builder (reference backend).

One "level" of the construction takes the dressed fundamental solution
U^[k](lambda; x, t), evaluated spectrally on a small circle around the pole
xi, and produces the rank-structure matrices (Y, Z) of the next dressing
factor

    G^[k](lambda) = I + Y/(lambda - xi) + Z/(lambda - conj(xi)),

together with the solution increment psi^[2k+2] - psi^[2k] = 2i (Y_12 -
conj(Y)_21).  The circle samples are then pushed through G (and, inside the
normalization disk, through the inverse of the same factor frozen at the
origin) so the next level sees U^[k+1].  Everything is scale-invariant in U,
so each level renormalizes the samples by their max modulus to keep the
intermediate products |s|^2, |w| well inside double range even for large
n*(|x| + |t|).
"""

import numpy as np

_S2 = np.array([[0.0, -1j], [1j, 0.0]])
_I2 = np.eye(2, dtype=complex)


def level_from_samples(W, rho, beta, c):
    """(Y, Z, dpsi) of the next dressing factor, from ring samples of U^[k].

    W has shape (M, 2, 2): U^[k] at the points xi + rho*exp(2*pi*i*m/M).
    The samples may carry an arbitrary overall scalar: Y is invariant.
    """
    M = W.shape[0]
    em = np.exp(-2j * np.pi * np.arange(M) / M)
    U = W.mean(axis=0)
    Up = (W * em[:, None, None]).mean(axis=0) / rho
    s = U @ c
    N = float(np.vdot(s, s).real)
    w = c @ (U.T @ _S2 @ Up) @ c
    D = 4.0 * beta * beta * abs(w) ** 2 + N * N
    Y = ((-4.0 * beta * beta * np.conj(w) / D) * (np.outer(s, s) @ _S2)
         + (2j * beta * N / D) * (_S2 @ np.outer(np.conj(s), s) @ _S2))
    Z = _S2 @ np.conj(Y) @ _S2
    dpsi = 2j * (Y[0, 1] - np.conj(Y[1, 0]))
    return Y, Z, dpsi


def build_levels(x, t, xi, c1, c2, n, rho, M, Yo, Zo, origin_mode):
    """All n levels of the dressing at the point (x, t).

    Returns (Ys, Zs, psis) with shapes (n,2,2), (n,2,2), (n,): the dressing
    matrices per level and the running solution values psi^[2(k+1)].

    Yo, Zo are the corresponding matrices of the origin stack (needed for the
    normalization inside the disk); with origin_mode=True the just-computed
    level is its own origin factor, which is the configuration used to build
    the origin stack itself (there U^[k](.; 0, 0) stays the identity).
    """
    th = 2.0 * np.pi * np.arange(M) / M
    ring = xi + rho * np.exp(1j * th)
    c = np.array([c1, c2], dtype=complex)
    beta = xi.imag

    wexp = ring * x + ring * ring * t
    W = np.zeros((M, 2, 2), dtype=complex)
    W[:, 0, 0] = np.exp(-1j * wexp)
    W[:, 1, 1] = np.exp(1j * wexp)
    W /= np.max(np.abs(W))

    dxi = (ring - xi)[:, None, None]
    dxis = (ring - np.conj(xi))[:, None, None]

    Ys = np.empty((n, 2, 2), dtype=complex)
    Zs = np.empty((n, 2, 2), dtype=complex)
    psis = np.empty(n, dtype=complex)
    psi = 0.0 + 0.0j
    for k in range(n):
        Y, Z, dpsi = level_from_samples(W, rho, beta, c)
        psi += dpsi
        Ys[k], Zs[k], psis[k] = Y, Z, psi
        if k == n - 1:
            break
        Yk0, Zk0 = (Y, Z) if origin_mode else (Yo[k], Zo[k])
        G = _I2[None] + Y[None] / dxi + Z[None] / dxis
        G0 = _I2[None] + Yk0[None] / dxi + Zk0[None] / dxis
        det = G0[:, 0, 0] * G0[:, 1, 1] - G0[:, 0, 1] * G0[:, 1, 0]
        G0inv = np.empty_like(G0)
        G0inv[:, 0, 0] = G0[:, 1, 1]
        G0inv[:, 1, 1] = G0[:, 0, 0]
        G0inv[:, 0, 1] = -G0[:, 0, 1]
        G0inv[:, 1, 0] = -G0[:, 1, 0]
        G0inv /= det[:, None, None]
        W = G @ W @ G0inv
        W /= np.max(np.abs(W))
    return Ys, Zs, psis
