"""Arbitrary-precision Darboux level builder (mpmath).

Same algorithm as _darbouxpy.build_levels.  Double precision loses a few
digits per level to the conditioning of the dressing products, plus
exp(rho * |w'|) digits to cancellation in the Cauchy-circle sums once
n * (|x| + |t|) is large; this tier simply buys the digits back.  Matrices
are flat 4-lists of mpc (mpmath.matrix is far slower).
"""

import mpmath as mp


def build_levels(x, t, xi, c1, c2, n, rho, M, Yo, Zo, origin_mode, dps):
    """Contract of _darbouxpy.build_levels, plus working precision dps.

    Returns lists of flat 4-lists (levels) and a list of mpc psi values;
    entries stay mpmath objects so origin stacks can be cached and reused
    at full precision.
    """
    with mp.workdps(dps):
        xi = mp.mpc(xi)
        c1 = mp.mpc(c1)
        c2 = mp.mpc(c2)
        x = mp.mpf(x)
        t = mp.mpf(t)
        rho = mp.mpf(rho)
        beta = xi.imag
        xis = mp.conj(xi)
        ring = [xi + rho * mp.expjpi(mp.mpf(2 * m) / M) for m in range(M)]
        em = [mp.expjpi(-mp.mpf(2 * m) / M) for m in range(M)]
        W = []
        for lam in ring:
            w = lam * x + lam * lam * t
            e = mp.expj(-w)
            W.append([e, mp.mpc(0), mp.mpc(0), 1 / e])
        mx = max(abs(v) for Wm in W for v in Wm)
        for m in range(M):
            W[m] = [v / mx for v in W[m]]

        Ys, Zs, psis = [], [], []
        psi = mp.mpc(0)
        for k in range(n):
            U = [sum(Wm[j] for Wm in W) / M for j in range(4)]
            Up = [sum(Wm[j] * em[m] for m, Wm in enumerate(W)) / (M * rho)
                  for j in range(4)]
            s0 = U[0] * c1 + U[1] * c2
            s1 = U[2] * c1 + U[3] * c2
            N = mp.re(s0 * mp.conj(s0) + s1 * mp.conj(s1))
            A00 = U[0] * (-1j * Up[2]) + U[2] * (1j * Up[0])
            A01 = U[0] * (-1j * Up[3]) + U[2] * (1j * Up[1])
            A10 = U[1] * (-1j * Up[2]) + U[3] * (1j * Up[0])
            A11 = U[1] * (-1j * Up[3]) + U[3] * (1j * Up[1])
            wq = c1 * (A00 * c1 + A01 * c2) + c2 * (A10 * c1 + A11 * c2)
            D = 4 * beta ** 2 * mp.re(wq * mp.conj(wq)) + N * N
            co1 = -4 * beta ** 2 * mp.conj(wq) / D
            co2 = 2j * beta * N / D
            Y = [co1 * (1j * s0 * s1) + co2 * (s1 * mp.conj(s1)),
                 co1 * (-1j * s0 * s0) + co2 * (-s0 * mp.conj(s1)),
                 co1 * (1j * s1 * s1) + co2 * (-mp.conj(s0) * s1),
                 co1 * (-1j * s1 * s0) + co2 * (s0 * mp.conj(s0))]
            Z = [mp.conj(Y[3]), -mp.conj(Y[2]), -mp.conj(Y[1]), mp.conj(Y[0])]
            psi = psi + 2j * (Y[1] - mp.conj(Y[2]))
            Ys.append(Y)
            Zs.append(Z)
            psis.append(psi)
            if k == n - 1:
                break
            Yk0, Zk0 = (Y, Z) if origin_mode else (Yo[k], Zo[k])
            for m in range(M):
                h = ring[m] - xi
                g = ring[m] - xis
                G = [1 + Y[0] / h + Z[0] / g, Y[1] / h + Z[1] / g,
                     Y[2] / h + Z[2] / g, 1 + Y[3] / h + Z[3] / g]
                G0 = [1 + Yk0[0] / h + Zk0[0] / g, Yk0[1] / h + Zk0[1] / g,
                      Yk0[2] / h + Zk0[2] / g, 1 + Yk0[3] / h + Zk0[3] / g]
                det = G0[0] * G0[3] - G0[1] * G0[2]
                Gi = [G0[3] / det, -G0[1] / det, -G0[2] / det, G0[0] / det]
                Wm = W[m]
                T = [G[0] * Wm[0] + G[1] * Wm[2], G[0] * Wm[1] + G[1] * Wm[3],
                     G[2] * Wm[0] + G[3] * Wm[2], G[2] * Wm[1] + G[3] * Wm[3]]
                W[m] = [T[0] * Gi[0] + T[1] * Gi[2], T[0] * Gi[1] + T[1] * Gi[3],
                        T[2] * Gi[0] + T[3] * Gi[2], T[2] * Gi[1] + T[3] * Gi[3]]
            mx = max(abs(v) for Wm in W for v in Wm)
            for m in range(M):
                W[m] = [v / mx for v in W[m]]
        return Ys, Zs, psis
