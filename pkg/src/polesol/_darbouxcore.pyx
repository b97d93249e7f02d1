# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Darboux level builder.

Exactly mirrors _darbouxpy.build_levels (the numpy reference); selected
automatically by polesol.darboux when the extension compiled.  The whole
construction is chains of 2x2 complex products, which is where the pure
backend loses all its time to per-element numpy dispatch.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, M_PI

cnp.import_array()

ctypedef double complex dc


cdef inline dc cexpi(double re, double im) noexcept:
    # exp(i*(re + i*im)) = exp(-im) * (cos re + i sin re)
    cdef double a = exp(-im)
    return a * cos(re) + 1j * (a * sin(re))


cdef inline double cmag(dc z) noexcept:
    cdef double x = z.real, y = z.imag
    return x * x + y * y


cdef inline void mmul(dc *A, dc *B, dc *C) noexcept:
    # row-major 2x2: C = A @ B
    C[0] = A[0] * B[0] + A[1] * B[2]
    C[1] = A[0] * B[1] + A[1] * B[3]
    C[2] = A[2] * B[0] + A[3] * B[2]
    C[3] = A[2] * B[1] + A[3] * B[3]


def build_levels(double x, double t, dc xi, dc c1, dc c2, int n,
                 double rho, int M, Yo_in, Zo_in, bint origin_mode):
    """Same contract as _darbouxpy.build_levels."""
    cdef cnp.ndarray[dc, ndim=3] Ys = np.empty((n, 2, 2), dtype=complex)
    cdef cnp.ndarray[dc, ndim=3] Zs = np.empty((n, 2, 2), dtype=complex)
    cdef cnp.ndarray[dc, ndim=1] psis = np.empty(n, dtype=complex)
    cdef cnp.ndarray[dc, ndim=3] Yo
    cdef cnp.ndarray[dc, ndim=3] Zo
    if origin_mode:
        Yo = np.zeros((1, 2, 2), dtype=complex)
        Zo = np.zeros((1, 2, 2), dtype=complex)
    else:
        Yo = np.ascontiguousarray(Yo_in, dtype=complex)
        Zo = np.ascontiguousarray(Zo_in, dtype=complex)

    cdef cnp.ndarray[dc, ndim=2] Wbuf = np.empty((M, 4), dtype=complex)
    cdef cnp.ndarray[dc, ndim=1] ring = np.empty(M, dtype=complex)
    cdef cnp.ndarray[dc, ndim=1] em = np.empty(M, dtype=complex)

    cdef dc[:, :] W = Wbuf
    cdef dc[:] rg = ring
    cdef dc[:] emv = em

    cdef int m, k, j
    cdef double th, beta = xi.imag
    cdef dc lam, wex, val
    cdef double mx, a
    cdef dc U[4]
    cdef dc Up[4]
    cdef dc G[4]
    cdef dc G0[4]
    cdef dc G0i[4]
    cdef dc T[4]
    cdef dc Ynew[4]
    cdef dc Znew[4]
    cdef dc Wrow[4]
    cdef dc s0, s1, wq, A00, A01, A10, A11, co1, co2, det
    cdef dc dxi, dxis, psi = 0, dpsi
    cdef double N, D

    for m in range(M):
        th = 2.0 * M_PI * m / M
        lam = xi + rho * (cos(th) + 1j * sin(th))
        rg[m] = lam
        emv[m] = cos(th) - 1j * sin(th)
        wex = lam * x + lam * lam * t
        W[m, 0] = cexpi(-wex.real, -wex.imag)
        W[m, 1] = 0
        W[m, 2] = 0
        W[m, 3] = cexpi(wex.real, wex.imag)
    mx = 0.0
    for m in range(M):
        for j in range(4):
            a = cmag(W[m, j])
            if a > mx:
                mx = a
    mx = mx ** 0.5
    for m in range(M):
        for j in range(4):
            W[m, j] = W[m, j] / mx

    for k in range(n):
        for j in range(4):
            U[j] = 0
            Up[j] = 0
        for m in range(M):
            for j in range(4):
                U[j] = U[j] + W[m, j]
                Up[j] = Up[j] + W[m, j] * emv[m]
        for j in range(4):
            U[j] = U[j] / M
            Up[j] = Up[j] / (M * rho)

        s0 = U[0] * c1 + U[1] * c2
        s1 = U[2] * c1 + U[3] * c2
        N = cmag(s0) + cmag(s1)
        # A = U^T @ sigma2 @ Up, sigma2 = [[0, -i], [i, 0]]
        A00 = U[0] * (-1j * Up[2]) + U[2] * (1j * Up[0])
        A01 = U[0] * (-1j * Up[3]) + U[2] * (1j * Up[1])
        A10 = U[1] * (-1j * Up[2]) + U[3] * (1j * Up[0])
        A11 = U[1] * (-1j * Up[3]) + U[3] * (1j * Up[1])
        wq = c1 * (A00 * c1 + A01 * c2) + c2 * (A10 * c1 + A11 * c2)
        D = 4.0 * beta * beta * cmag(wq) + N * N
        co1 = -4.0 * beta * beta * wq.conjugate() / D
        co2 = 2j * beta * N / D
        # (s s^T) sigma2         = [[i s0 s1, -i s0 s0], [i s1 s1, -i s1 s0]]
        # sigma2 (s* s^T) sigma2 = [[|s1|^2, -s0 s1*], [-s0* s1, |s0|^2]]
        Ynew[0] = co1 * (1j * s0 * s1) + co2 * cmag(s1)
        Ynew[1] = co1 * (-1j * s0 * s0) + co2 * (-s0 * s1.conjugate())
        Ynew[2] = co1 * (1j * s1 * s1) + co2 * (-s0.conjugate() * s1)
        Ynew[3] = co1 * (-1j * s1 * s0) + co2 * cmag(s0)
        # Z = sigma2 conj(Y) sigma2 = [[Y11*, -Y10*], [-Y01*, Y00*]]
        Znew[0] = Ynew[3].conjugate()
        Znew[1] = -Ynew[2].conjugate()
        Znew[2] = -Ynew[1].conjugate()
        Znew[3] = Ynew[0].conjugate()
        dpsi = 2j * (Ynew[1] - Ynew[2].conjugate())
        psi = psi + dpsi
        Ys[k, 0, 0] = Ynew[0]; Ys[k, 0, 1] = Ynew[1]
        Ys[k, 1, 0] = Ynew[2]; Ys[k, 1, 1] = Ynew[3]
        Zs[k, 0, 0] = Znew[0]; Zs[k, 0, 1] = Znew[1]
        Zs[k, 1, 0] = Znew[2]; Zs[k, 1, 1] = Znew[3]
        psis[k] = psi
        if k == n - 1:
            break

        mx = 0.0
        for m in range(M):
            dxi = rg[m] - xi
            dxis = rg[m] - xi.conjugate()
            G[0] = 1 + Ynew[0] / dxi + Znew[0] / dxis
            G[1] = Ynew[1] / dxi + Znew[1] / dxis
            G[2] = Ynew[2] / dxi + Znew[2] / dxis
            G[3] = 1 + Ynew[3] / dxi + Znew[3] / dxis
            if origin_mode:
                G0[0] = G[0]; G0[1] = G[1]; G0[2] = G[2]; G0[3] = G[3]
            else:
                G0[0] = 1 + Yo[k, 0, 0] / dxi + Zo[k, 0, 0] / dxis
                G0[1] = Yo[k, 0, 1] / dxi + Zo[k, 0, 1] / dxis
                G0[2] = Yo[k, 1, 0] / dxi + Zo[k, 1, 0] / dxis
                G0[3] = 1 + Yo[k, 1, 1] / dxi + Zo[k, 1, 1] / dxis
            det = G0[0] * G0[3] - G0[1] * G0[2]
            G0i[0] = G0[3] / det
            G0i[1] = -G0[1] / det
            G0i[2] = -G0[2] / det
            G0i[3] = G0[0] / det
            Wrow[0] = W[m, 0]; Wrow[1] = W[m, 1]
            Wrow[2] = W[m, 2]; Wrow[3] = W[m, 3]
            mmul(G, Wrow, T)
            mmul(T, G0i, Wrow)
            W[m, 0] = Wrow[0]; W[m, 1] = Wrow[1]
            W[m, 2] = Wrow[2]; W[m, 3] = Wrow[3]
            for j in range(4):
                a = cmag(Wrow[j])
                if a > mx:
                    mx = a
        mx = mx ** 0.5
        for m in range(M):
            for j in range(4):
                W[m, j] = W[m, j] / mx

    return np.asarray(Ys), np.asarray(Zs), np.asarray(psis)
