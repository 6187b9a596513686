"""Independent oracle: the full 3-component thin-shell operator at one wavenumber.

Assembles the surface membrane + bending quadratic forms for Fourier mode k
directly from the change-of-metric and change-of-curvature tensors in
covariant components (zeta_z, zeta_phi, zeta_3), with the azimuthal component
rotated to the real form.  This shares no code path with the scalar
reduction (it never touches the symbol matrices), so it independently
arbitrates the reduced operators' constants.

High-order elements: degree-5 Lagrange for the tangential components and
quintic C^1 Hermite for the normal component; low-order mixed elements lock
badly on curved meridians once the bending term is tiny.
"""

from __future__ import annotations

import numpy as np

from axishell.fem1d import Mesh1D
from axishell.profiles import ShellProfile

LAG_DEGREE = 5
NQ = 12  # Gauss points per element


def _gauss(a: float, b: float, nq: int = NQ):
    x, w = np.polynomial.legendre.leggauss(nq)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def _lagrange_tables(xi_nodes: np.ndarray, xi_eval: np.ndarray):
    """Values and first derivatives of the Lagrange basis at xi_eval."""
    n = len(xi_nodes)
    V = np.zeros((len(xi_eval), n))
    D = np.zeros((len(xi_eval), n))
    for j in range(n):
        c = np.zeros(n)
        c[j] = 1.0
        poly = np.polynomial.polynomial.polyfit(xi_nodes, c, n - 1)
        V[:, j] = np.polynomial.polynomial.polyval(xi_eval, poly)
        D[:, j] = np.polynomial.polynomial.polyval(
            xi_eval, np.polynomial.polynomial.polyder(poly)
        )
    return V, D


def _quintic_hermite_tables(xi_eval: np.ndarray):
    """Quintic C^2-data shapes: value/slope/curvature DOFs at both ends of [0,1]."""
    A = np.zeros((6, 6))
    pw = np.arange(6)
    for col in range(6):
        mono = np.zeros(6)
        mono[col] = 1.0
        d0 = np.polynomial.polynomial.polyder(mono)
        d00 = np.polynomial.polynomial.polyder(mono, 2)
        A[0, col] = np.polynomial.polynomial.polyval(0.0, mono)
        A[1, col] = np.polynomial.polynomial.polyval(0.0, d0)
        A[2, col] = np.polynomial.polynomial.polyval(0.0, d00)
        A[3, col] = np.polynomial.polynomial.polyval(1.0, mono)
        A[4, col] = np.polynomial.polynomial.polyval(1.0, d0)
        A[5, col] = np.polynomial.polynomial.polyval(1.0, d00)
    C = np.linalg.solve(A, np.eye(6))  # columns: monomial coeffs of each shape
    V = np.zeros((len(xi_eval), 6))
    D1 = np.zeros((len(xi_eval), 6))
    D2 = np.zeros((len(xi_eval), 6))
    for j in range(6):
        mono = C[:, j]
        V[:, j] = np.polynomial.polynomial.polyval(xi_eval, mono)
        D1[:, j] = np.polynomial.polynomial.polyval(
            xi_eval, np.polynomial.polynomial.polyder(mono)
        )
        D2[:, j] = np.polynomial.polynomial.polyval(
            xi_eval, np.polynomial.polynomial.polyder(mono, 2)
        )
    return V, D1, D2


def assemble_koiter_mode(profile: ShellProfile, k: float, eps: float, mesh: Mesh1D):
    """(K, M) for the mode-k thin-shell pencil on the mesh (clamped ends)."""
    nodes = mesh.nodes
    n_el = mesh.n_elements
    p = LAG_DEGREE
    n_lag = p * n_el + 1         # Lagrange nodes per tangential component
    n_her = 3 * (n_el + 1)       # Hermite value/slope/curvature triples
    off_p = n_lag
    off_3 = 2 * n_lag
    n_dofs = 2 * n_lag + n_her
    E, nu = profile.E, profile.nu
    xi_nodes = 0.5 * (1.0 - np.cos(np.pi * np.arange(p + 1) / p))  # Chebyshev-Lobatto

    K = np.zeros((n_dofs, n_dofs))
    M = np.zeros((n_dofs, n_dofs))

    for e in range(n_el):
        x0, x1 = nodes[e], nodes[e + 1]
        h = x1 - x0
        zq, wq = _gauss(x0, x1)
        xi = (zq - x0) / h
        VL, DLxi = _lagrange_tables(xi_nodes, xi)
        NL, DL = VL, DLxi / h
        VH, D1H, D2H = _quintic_hermite_tables(xi)
        # physical scaling of slope/curvature DOFs
        scale = np.array([1.0, h, h * h, 1.0, h, h * h])
        NH = VH * scale
        D1Hp = D1H * scale / h
        D2Hp = D2H * scale / h**2

        nq = len(zq)
        jets = np.array([profile.jet(z, 3) for z in zq])
        f, fp, fpp, fppp = jets[:, 0], jets[:, 1], jets[:, 2], jets[:, 3]
        s2 = 1.0 + fp**2
        s = np.sqrt(s2)
        wgt = wq * f * s

        nl, nh = p + 1, 6
        dz = np.s_[0:nl]
        dp = np.s_[nl : 2 * nl]
        d3 = np.s_[2 * nl : 2 * nl + nh]
        nloc = 2 * nl + nh

        def row(values_z=None, values_p=None, values_3=None):
            out = np.zeros((nq, nloc))
            if values_z is not None:
                out[:, dz] = values_z
            if values_p is not None:
                out[:, dp] = values_p
            if values_3 is not None:
                out[:, d3] = values_3
            return out

        col = lambda a: a[:, np.newaxis]  # noqa: E731

        g_zz = row(values_z=DL - col(fp * fpp / s2) * NL, values_3=-col(fpp / s) * NH)
        g_zp = row(values_z=0.5 * k * NL, values_p=0.5 * DL - col(fp / f) * NL)
        g_pp = row(values_z=col(f * fp / s2) * NL, values_p=-k * NL,
                   values_3=col(f / s) * NH)
        # change-of-curvature rows re-derived from the covariant definition
        # (rigid-motion invariant; validated symbolically in the test suite)
        r_zz = row(
            values_z=col(2 * fpp / s**3) * DL
            + col((fppp * s2 - 5 * fp * fpp**2) / s**5) * NL,
            values_3=D2Hp - col(fp * fpp / s2) * D1Hp - col(fpp**2 / s2**2) * NH,
        )
        r_zp = row(
            values_z=col(k * fpp / s**3) * NL,
            values_p=-col(1 / (f * s)) * DL + col(2 * fp / (f**2 * s)) * NL,
            values_3=k * (D1Hp - col(fp / f) * NH),
        )
        r_pp = row(
            values_z=col(fp * (f * fpp - s2) / s**5) * NL,
            values_p=col(2 * k / (f * s)) * NL,
            values_3=-(k**2) * NH + col(f * fp / s2) * D1Hp - col(1 / s2) * NH,
        )

        c_n = nu * E / (1 - nu**2)
        c_s = E / (2 * (1 + nu))
        m_zzzz = c_n / s2**2 + 2 * c_s / s2**2
        m_zzpp = c_n / (s2 * f**2)
        m_pppp = c_n / f**4 + 2 * c_s / f**4
        m_zpzp = c_s / (s2 * f**2)

        def energy(t_zz, t_zp, t_pp, scale_q):
            ke = np.einsum("q,qi,qj->ij", scale_q * m_zzzz * wgt, t_zz, t_zz)
            ke += np.einsum("q,qi,qj->ij", scale_q * m_zzpp * wgt, t_zz, t_pp)
            ke += np.einsum("q,qi,qj->ij", scale_q * m_zzpp * wgt, t_pp, t_zz)
            ke += np.einsum("q,qi,qj->ij", scale_q * m_pppp * wgt, t_pp, t_pp)
            ke += np.einsum("q,qi,qj->ij", 4 * scale_q * m_zpzp * wgt, t_zp, t_zp)
            return ke

        ke = energy(g_zz, g_zp, g_pp, np.ones(nq))
        ke += energy(r_zz, r_zp, r_pp, np.full(nq, eps**2 / 3.0))

        me = np.zeros((nloc, nloc))
        me[dz, dz] = np.einsum("q,qi,qj->ij", wgt / s2, NL, NL)
        me[dp, dp] = np.einsum("q,qi,qj->ij", wgt / f**2, NL, NL)
        me[d3, d3] = np.einsum("q,qi,qj->ij", wgt, NH, NH)

        gdof = np.concatenate([
            p * e + np.arange(nl),
            off_p + p * e + np.arange(nl),
            off_3 + 3 * e + np.arange(6),
        ])
        K[np.ix_(gdof, gdof)] += ke
        M[np.ix_(gdof, gdof)] += me

    # clamped ends: zeta_z, zeta_phi, zeta_3, zeta_3' (end curvature DOFs stay free)
    fixed = {0, n_lag - 1, off_p, off_p + n_lag - 1,
             off_3, off_3 + 1, off_3 + n_her - 3, off_3 + n_her - 2}
    free = np.array([i for i in range(n_dofs) if i not in fixed])
    return K[np.ix_(free, free)], M[np.ix_(free, free)]


def koiter_lambda1(profile: ShellProfile, k: float, eps: float, mesh: Mesh1D) -> float:
    """Lowest thin-shell eigenvalue at mode k via a dense direct solve."""
    import scipy.linalg as sla

    K, M = assemble_koiter_mode(profile, k, eps, mesh)
    w = sla.eigh(K, M, eigvals_only=True, subset_by_index=[0, 0])
    return float(w[0])


def strain_values(profile: ShellProfile, z: float, k: float, field: dict):
    """Pointwise strain components for exact field data (real form).

    ``field`` holds zeta_z, zeta_z', eta_phi, eta_phi', zeta_3, zeta_3',
    zeta_3'' under keys zz, zz1, ep, ep1, z3, z31, z32.  Returns the same
    six components the assembler integrates: (g_zz, g_zp, g_pp, r_zz,
    r_zp, r_pp).  Rigid motions must annihilate all six.
    """
    d = profile.jet(z, 3)
    f, fp, fpp, fppp = d[0], d[1], d[2], d[3]
    s2 = 1.0 + fp**2
    s = np.sqrt(s2)
    zz, zz1 = field["zz"], field["zz1"]
    ep, ep1 = field["ep"], field["ep1"]
    z3, z31, z32 = field["z3"], field["z31"], field["z32"]
    g_zz = zz1 - fp * fpp / s2 * zz - fpp / s * z3
    g_zp = 0.5 * (ep1 + k * zz) - fp / f * ep
    g_pp = -k * ep + f * fp / s2 * zz + f / s * z3
    r_zz = (z32 - fp * fpp / s2 * z31 - fpp**2 / s2**2 * z3
            + 2 * fpp / s**3 * zz1 + (fppp * s2 - 5 * fp * fpp**2) / s**5 * zz)
    r_zp = (k * (z31 - fp / f * z3) + k * fpp / s**3 * zz
            - 1 / (f * s) * ep1 + 2 * fp / (f**2 * s) * ep)
    r_pp = (-(k**2) * z3 + f * fp / s2 * z31 - 1 / s2 * z3
            + 2 * k / (f * s) * ep + fp * (f * fpp - s2) / s**5 * zz)
    return g_zz, g_zp, g_pp, r_zz, r_zp, r_pp
