"""The independent 3-component thin-shell oracle vs the scalar reductions.

The oracle assembles the surface membrane/bending forms directly from the
covariant strain tensors, sharing nothing with the symbol-based reduction.
In the thin limit at the optimal wavenumber scaling it must reproduce the
per-class constants; this arbitrates the toroidal row (see decisions ledger).
"""

import numpy as np

import axishell as ax
from axishell.fem1d import Mesh1D
from koiter1d import koiter_lambda1, strain_values


def rigid_field_data(profile, z, which):
    """Exact real-form field jets of the three rigid motions at z."""
    d = profile.jet(z, 3)
    f, fp, fpp, fppp = d[0], d[1], d[2], d[3]
    s2 = 1.0 + fp**2
    s = np.sqrt(s2)
    if which == 0:  # translation normal to the axis, wavenumber 1
        return 1.0, {
            "zz": fp, "zz1": fpp, "ep": f, "ep1": fp,
            "z3": 1.0 / s, "z31": -fp * fpp / s**3,
            "z32": -(fpp**2 + fp * fppp) / s**3 + 3 * fp**2 * fpp**2 / s**5,
        }
    if which == 1:  # translation along the axis, wavenumber 0
        return 0.0, {
            "zz": 1.0, "zz1": 0.0, "ep": 0.0, "ep1": 0.0,
            "z3": -fp / s, "z31": -fpp / s**3,
            "z32": -fppp / s**3 + 3 * fp * fpp**2 / s**5,
        }
    return 0.0, {  # rotation about the axis, wavenumber 0
        "zz": 0.0, "zz1": 0.0, "ep": f**2, "ep1": 2 * f * fp,
        "z3": 0.0, "z31": 0.0, "z32": 0.0,
    }


def test_rigid_motions_annihilate_all_strains():
    rng = np.random.default_rng(8)
    for mid in "ABDHL":
        profile = ax.preset(mid)
        for z in rng.uniform(*profile.interval, size=12):
            for which in range(3):
                k, field = rigid_field_data(profile, float(z), which)
                strains = strain_values(profile, float(z), k, field)
                scale = max(abs(v) for v in field.values()) + 1.0
                for s_val in strains:
                    assert abs(s_val) <= 1e-13 * scale


def test_oracle_matches_parabolic_constants():
    # lam1/eps converges to the validated constant at the eps^(1/4) rate;
    # mesh pinned inside the float64-stable window (see ledger note)
    for mid, k0, target in (("A", 2.932313, 3.385232), ("B", 2.124700, 3.446390)):
        p = ax.preset(mid)
        mesh = Mesh1D.boundary_graded(p.interval, 64, 1.12)
        errs = []
        for eps in (1e-5, 1e-6, 1e-7):
            lam = koiter_lambda1(p, k0 * eps**-0.25, eps, mesh)
            errs.append(abs(lam / eps / target - 1))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= 5e-3


def test_oracle_matches_gauss_constant():
    eps = 1e-6
    pH = ax.preset("H")
    lam = koiter_lambda1(pH, 0.75901 * eps**-0.4, eps,
                         Mesh1D.uniform(pH.interval, 64))
    a1_hat = (lam - 0.0625) * eps**-0.4
    # eps^(1/5)-level corrections remain at this thickness
    assert abs(a1_hat / 0.607847 - 1) <= 0.08


def test_oracle_arbitrates_toroidal_row():
    # the faithful reduced operator gives (gamma, a1) = (0.857004, 0.707981);
    # the source table prints (0.85935, 0.71500).  The from-first-principles
    # thin-shell system sides with the former (see decisions ledger).
    pD = ax.preset("D")
    mesh = Mesh1D.boundary_graded(pD.interval, 48, 1.12)
    ours = 0.707981
    table = 0.71500
    for eps in (1e-7, 1e-8):
        k = 0.857004 * eps ** (-1 / 3)
        F = (koiter_lambda1(pD, k, eps, mesh) - 0.25) * eps ** (-2 / 3)
        assert abs(F / ours - 1) <= 2e-3
        assert abs(F / table - 1) >= 5e-3


def test_oracle_cross_checks_2d_solver():
    # same (eps, k): the 2D elasticity eigenvalue sits within the expected
    # O(eps)-relative surface-model gap of the thin-shell oracle
    from axishell import lame2d

    for mid, eps, k in [("B", 0.01, 6), ("D", 0.01, 4)]:
        p = ax.preset(mid)
        lam_oracle = koiter_lambda1(p, k, eps, Mesh1D.boundary_graded(p.interval, 64, 1.1))
        mesh2 = lame2d.build_meridian_mesh(p, eps, *lame2d.default_mesh_size(eps))
        rec = lame2d.first_eigenvalue_2d(lame2d.assemble_fourier_lame(mesh2, k))
        assert abs(rec.lambda1 / lam_oracle - 1) <= 0.02
