"""Tests for the iterated-Darboux construction of psi^[2n]."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polesol import _darbouxpy
from polesol.darboux import (
    HAVE_COMPILED_CORE,
    DarbouxLevel,
    SolitonParams,
    build_stack,
    darboux_step,
    eval_U,
    nls_residual,
    psi_exact,
    psi_grid,
    u0,
)

XI = 1j
C13 = (1.0, 3.0)


def mirror_x(c):
    return (-np.conj(c[1]), -np.conj(c[0]))


def mirror_t(c):
    return (np.conj(c[0]), np.conj(c[1]))


# ----------------------------------------------------------------- parameters

def test_params_validation():
    with pytest.raises(ValueError):
        SolitonParams(xi=1.0 - 0.5j, c=C13, n=1)      # lower half plane
    with pytest.raises(ValueError):
        SolitonParams(xi=2.0, c=C13, n=1)             # real axis
    with pytest.raises(ValueError):
        SolitonParams(xi=XI, c=(0.0, 3.0), n=1)
    with pytest.raises(ValueError):
        SolitonParams(xi=XI, c=(1.0, 0.0), n=1)
    with pytest.raises(ValueError):
        SolitonParams(xi=XI, c=C13, n=-1)
    with pytest.raises(ValueError):
        SolitonParams(xi=XI, c=C13, n=1, precision="half")
    with pytest.raises(ValueError):
        SolitonParams(xi=XI, c=C13, n=1, d0_radius=0.5)   # xi outside disk


def test_params_derived_quantities():
    p = SolitonParams(xi=0.3 + 1.1j, c=C13, n=2)
    assert p.alpha == 0.3
    assert p.beta == 1.1
    assert p.d0_radius == pytest.approx(2.0 * abs(0.3 + 1.1j) + 1.0)


# -------------------------------------------------------- origin amplitude

@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 8])
def test_origin_amplitude_double(n):
    # |c| = sqrt(10), 8 * Im(xi) * c1 * conj(c2) / |c|^2 * n = 2.4 n
    p = SolitonParams(xi=XI, c=C13, n=n)
    got = psi_exact(p, 0.0, 0.0)
    want = 2.4 * n
    assert abs(got - want) <= 1e-9 * want


@pytest.mark.parametrize("n", [10, 12])
def test_origin_amplitude_mp_tier(n):
    p = SolitonParams(xi=XI, c=C13, n=n)     # auto plan routes n >= 10 to mp
    got = psi_exact(p, 0.0, 0.0)
    want = 2.4 * n
    assert abs(got - want) <= 1e-9 * want


def test_origin_amplitude_complex_c():
    c = (1.0 - 2.0j, 0.5 + 1.5j)
    xi = 0.4 + 0.9j
    n = 3
    p = SolitonParams(xi=xi, c=c, n=n)
    want = 8.0 * xi.imag * c[0] * np.conj(c[1]) / (abs(c[0]) ** 2 + abs(c[1]) ** 2) * n
    assert abs(psi_exact(p, 0.0, 0.0) - want) <= 1e-9 * abs(want)


def test_order_zero_is_trivial():
    p = SolitonParams(xi=XI, c=C13, n=0)
    assert psi_exact(p, 1.3, -0.4) == 0
    assert build_stack(p, 1.3, -0.4) == []


# ------------------------------------------------------------- symmetries

def test_x_symmetry_pointwise():
    rng = np.random.default_rng(3)
    xi = 0.3 + 1.1j
    c = (1.0 + 0.5j, -2.0 + 0.3j)
    for n in (1, 2, 4):
        p = SolitonParams(xi=xi, c=c, n=n)
        pm = SolitonParams(xi=-np.conj(xi), c=mirror_x(c), n=n)
        for _ in range(8):
            x = rng.uniform(-3, 3)
            t = rng.uniform(-2, 2)
            assert abs(psi_exact(p, -x, t) - psi_exact(pm, x, t)) < 1e-9


def test_t_symmetry_pointwise():
    rng = np.random.default_rng(4)
    xi = 0.3 + 1.1j
    c = (1.0 + 0.5j, -2.0 + 0.3j)
    for n in (1, 2, 4):
        p = SolitonParams(xi=xi, c=c, n=n)
        pm = SolitonParams(xi=-np.conj(xi), c=mirror_t(c), n=n)
        for _ in range(8):
            x = rng.uniform(-3, 3)
            t = rng.uniform(-2, 2)
            assert abs(psi_exact(p, x, -t) - np.conj(psi_exact(pm, x, t))) < 1e-9


def test_even_profile_for_symmetric_c():
    # c = (1, 1) maps to itself (up to overall scale) under the x reflection,
    # so |psi| is even in x when Re(xi) = 0
    p = SolitonParams(xi=XI, c=(1.0, 1.0), n=2)
    for x, t in ((0.7, 0.4), (1.9, -0.8)):
        assert abs(psi_exact(p, -x, t) - psi_exact(p, x, t)) < 1e-9


def test_scale_invariance_in_c():
    # psi depends on c only through its ray: c -> gamma c leaves it unchanged
    gamma = 0.7 - 1.9j
    p1 = SolitonParams(xi=XI, c=C13, n=2)
    p2 = SolitonParams(xi=XI, c=(gamma * C13[0], gamma * C13[1]), n=2)
    for x, t in ((0.5, 0.3), (-1.2, 0.9)):
        assert abs(psi_exact(p1, x, t) - psi_exact(p2, x, t)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(
    x=st.floats(-2.0, 2.0),
    t=st.floats(-1.0, 1.0),
    alpha=st.floats(-0.5, 0.5),
    beta=st.floats(0.6, 1.4),
    n=st.sampled_from([1, 2]),
)
def test_x_symmetry_property(x, t, alpha, beta, n):
    xi = alpha + 1j * beta
    c = (1.0 + 0.5j, -2.0 + 0.3j)
    p = SolitonParams(xi=xi, c=c, n=n)
    pm = SolitonParams(xi=-np.conj(xi), c=mirror_x(c), n=n)
    assert abs(psi_exact(p, -x, t) - psi_exact(pm, x, t)) < 1e-8


# ----------------------------------------------------------- stack structure

def test_stack_levels_carry_running_solution():
    p = SolitonParams(xi=XI, c=C13, n=4)
    stack = build_stack(p, 0.6, 0.3)
    assert len(stack) == 4
    for k in range(4):
        pk = SolitonParams(xi=XI, c=C13, n=k + 1)
        assert abs(stack[k].psi - psi_exact(pk, 0.6, 0.3)) < 1e-10
    assert abs(stack[-1].psi - psi_exact(p, 0.6, 0.3)) < 1e-12


def test_z_is_sigma2_conjugate_of_y():
    s2 = np.array([[0.0, -1j], [1j, 0.0]])
    p = SolitonParams(xi=0.2 + 0.8j, c=(1.0, -1.0 + 2.0j), n=3)
    for lev in build_stack(p, 0.9, -0.5):
        assert np.max(np.abs(lev.Z - s2 @ np.conj(lev.Y) @ s2)) < 1e-12
        assert np.max(np.abs(lev.Z0 - s2 @ np.conj(lev.Y0) @ s2)) < 1e-12


def test_dressing_factor_structure():
    # Y is rank one and the factor G = I + Y/(lam-xi) + Z/(lam-xi*) is
    # unimodular for every lam: together these let G be inverted by its
    # adjugate with no determinant division
    xi = 0.2 + 0.8j
    p = SolitonParams(xi=xi, c=C13, n=3)
    for lev in build_stack(p, 1.1, 0.4):
        detY = lev.Y[0, 0] * lev.Y[1, 1] - lev.Y[0, 1] * lev.Y[1, 0]
        assert abs(detY) < 1e-12
        for lam in (0.9 - 0.3j, 3.0 + 2.0j):
            G = (np.eye(2) + lev.Y / (lam - xi) + lev.Z / (lam - np.conj(xi)))
            detG = G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]
            assert abs(detG - 1.0) < 1e-12


def test_circle_radius_invariance_of_state():
    # halving the sampling radius leaves the level state (s, w) unchanged
    s2 = np.array([[0.0, -1j], [1j, 0.0]])
    p = SolitonParams(xi=XI, c=C13, n=1)
    stack = build_stack(p, 0.4, 0.3)
    cvec = np.array(C13, dtype=complex)

    def state(rho, M=64):
        th = 2.0 * np.pi * np.arange(M) / M
        ring = p.xi + rho * np.exp(1j * th)
        W = np.stack([eval_U(stack, z, 0.4, 0.3, p) for z in ring])
        em = np.exp(-1j * th)
        U = W.mean(axis=0)
        Up = (W * em[:, None, None]).mean(axis=0) / rho
        s = U @ cvec
        w = cvec @ (U.T @ s2 @ Up) @ cvec
        return s, w

    s1, w1 = state(0.5)
    s2_, w2 = state(0.25)
    assert np.max(np.abs(s1 - s2_)) / np.max(np.abs(s1)) < 1e-10
    assert abs(w1 - w2) / abs(w1) < 1e-10


# ------------------------------------------------------------------ eval_U

def test_eval_u_seed_identity():
    p = SolitonParams(xi=XI, c=C13, n=0)
    U = eval_U([], 0.0, 0.3, -0.2, p)
    assert np.max(np.abs(U - np.eye(2))) == 0


def test_eval_u_seed_minus_identity():
    p = SolitonParams(xi=XI, c=C13, n=0)
    U = eval_U([], 1.0, np.pi, 0.0, p)
    assert np.max(np.abs(U + np.eye(2))) < 1e-12


def test_eval_u_rejects_poles():
    p = SolitonParams(xi=XI, c=C13, n=1)
    stack = build_stack(p, 0.1, 0.1)
    with pytest.raises(ValueError):
        eval_U(stack, p.xi, 0.1, 0.1, p)
    with pytest.raises(ValueError):
        eval_U(stack, np.conj(p.xi), 0.1, 0.1, p)


def test_dressed_u_is_identity_at_origin():
    # the normalization freezes U^[k](.; 0, 0) = I inside the disk
    p = SolitonParams(xi=0.3 + 1.1j, c=(2.0, 1.0 - 1.0j), n=4)
    stack = build_stack(p, 0.0, 0.0)
    for lam in (0.1 + 0.2j, -0.8, 1.1j):
        for k in (1, 2, 4):
            U = eval_U(stack[:k], lam, 0.0, 0.0, p)
            assert np.max(np.abs(U - np.eye(2))) < 1e-9


def test_eval_u_unimodular():
    # det u0 = 1 and every dressing factor is unimodular, so det U = 1
    # on both sides of the disk boundary
    p = SolitonParams(xi=XI, c=C13, n=3)
    stack = build_stack(p, 0.7, 0.2)
    for lam in (0.4 + 0.3j, 2.9j, 4.0 + 1.0j, -5.0):
        U = eval_U(stack, lam, 0.7, 0.2, p)
        det = U[0, 0] * U[1, 1] - U[0, 1] * U[1, 0]
        assert abs(det - 1.0) < 1e-9


def test_inside_outside_factorization():
    # U_in = U_out * G0_1^-1 ... G0_n^-1 with the frozen-origin factors
    p = SolitonParams(xi=XI, c=C13, n=3)
    x, t = 0.7, 0.2
    stack = build_stack(p, x, t)
    lam = 0.5 - 0.4j
    U_in = eval_U(stack, lam, x, t, p)
    U_out = u0(lam, x, t)
    for lev in stack:
        G = (np.eye(2) + lev.Y / (lam - p.xi) + lev.Z / (lam - np.conj(p.xi)))
        U_out = G @ U_out
    right = np.eye(2, dtype=complex)
    for lev in stack:
        G0 = (np.eye(2) + lev.Y0 / (lam - p.xi) + lev.Z0 / (lam - np.conj(p.xi)))
        right = right @ np.linalg.inv(G0)
    assert np.max(np.abs(U_in - U_out @ right)) < 1e-10


# ------------------------------------------------------------- darboux_step

def test_step_matches_bulk_build():
    p = SolitonParams(xi=XI, c=C13, n=4)
    x, t = 0.9, -0.6
    stack = []
    for _ in range(4):
        stack.append(darboux_step(stack, x, t, p))
    bulk = build_stack(p, x, t)
    assert abs(stack[-1].psi - bulk[-1].psi) < 1e-9
    for lev_s, lev_b in zip(stack, bulk):
        assert np.max(np.abs(lev_s.Y - lev_b.Y)) < 1e-9


# ---------------------------------------------------------------- backends

@pytest.mark.skipif(not HAVE_COMPILED_CORE, reason="compiled core not built")
def test_compiled_matches_pure_python():
    from polesol import _darbouxcore
    xi = 0.3 + 1.1j
    args = (0.7, -0.4, xi, 1.0 + 0.5j, -2.0 + 0.3j, 4, 0.6, 64)
    Yo_p, Zo_p, _ = _darbouxpy.build_levels(0.0, 0.0, *args[2:6], 0.6, 64, None, None, True)
    Yo_c, Zo_c, _ = _darbouxcore.build_levels(0.0, 0.0, *args[2:6], 0.6, 64, None, None, True)
    _, _, psis_p = _darbouxpy.build_levels(*args, Yo_p, Zo_p, False)
    _, _, psis_c = _darbouxcore.build_levels(*args, Yo_c, Zo_c, False)
    assert np.max(np.abs(np.asarray(psis_p) - np.asarray(psis_c))) < 1e-10


def test_mp_matches_double():
    pd = SolitonParams(xi=XI, c=C13, n=8, precision="double")
    pm = SolitonParams(xi=XI, c=C13, n=8, precision="mp")
    for x, t in ((8.4, 3.6), (0.5, 0.2), (-3.0, 1.0)):
        assert abs(psi_exact(pd, x, t) - psi_exact(pm, x, t)) < 1e-8


def test_plan_knob_independence():
    # the solution must not depend on sampling resolution or disk radius
    base = SolitonParams(xi=XI, c=C13, n=3)
    alts = [
        SolitonParams(xi=XI, c=C13, n=3, circle_samples=96),
        SolitonParams(xi=XI, c=C13, n=3, d0_radius=5.0),
        SolitonParams(xi=XI, c=C13, n=3, circle_samples=128, d0_radius=4.0),
    ]
    for x, t in ((0.8, 0.5), (-2.1, -0.7)):
        ref = psi_exact(base, x, t)
        for p in alts:
            assert abs(psi_exact(p, x, t) - ref) < 1e-10


# ---------------------------------------------------------------- the PDE

def test_solves_nls():
    p = SolitonParams(xi=XI, c=C13, n=2)
    h = 1e-3
    xs = 0.3 + h * np.arange(-3, 4)
    ts = 0.2 + h * np.arange(-3, 4)
    g = psi_grid(p, xs, ts)
    assert nls_residual(g, h, h) < 1e-3


def test_solves_nls_offset_point():
    p = SolitonParams(xi=0.2 + 0.9j, c=(1.0, -1.0 + 1.0j), n=1)
    h = 1e-3
    xs = -1.1 + h * np.arange(-2, 3)
    ts = 0.7 + h * np.arange(-2, 3)
    g = psi_grid(p, xs, ts)
    assert nls_residual(g, h, h) < 1e-3


def test_residual_rejects_small_grid():
    with pytest.raises(ValueError):
        nls_residual(np.zeros((4, 5), dtype=complex), 1e-3, 1e-3)
    with pytest.raises(ValueError):
        nls_residual(np.zeros((5, 4), dtype=complex), 1e-3, 1e-3)


def test_spatial_decay_of_one_soliton():
    p = SolitonParams(xi=XI, c=C13, n=1)
    assert abs(psi_exact(p, 30.0, 0.0)) < 1e-8
    assert abs(psi_exact(p, -30.0, 0.0)) < 1e-8


def test_grid_shape():
    p = SolitonParams(xi=XI, c=C13, n=1)
    g = psi_grid(p, np.linspace(-1, 1, 5), np.linspace(0, 0.4, 3))
    assert g.shape == (5, 3)
    assert g.dtype == complex
