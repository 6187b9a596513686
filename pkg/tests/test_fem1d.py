"""1D finite elements: oracles, symmetry, convergence."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

import axishell as ax
from axishell import fem1d
from axishell.errors import AdmissibilityError, AssemblyError, GeometryError
from axishell.profiles import ShellProfile

UNIT = ShellProfile("affine", (0.0, 1.0), coeffs=(1.0,))


def beam_reference():
    # clamped-beam characteristic equation cos(k) cosh(k) = 1
    kappa = brentq(lambda x: math.cos(x) * math.cosh(x) - 1.0, 4.0, 5.5, xtol=1e-14)
    return kappa**4


def test_clamped_beam_oracle():
    lam_ref = beam_reference()
    assert abs(lam_ref - 500.564) < 1e-3
    mesh = fem1d.Mesh1D.uniform((0.0, 1.0), 64)
    asm = fem1d.assemble_h20(UNIT, 1.0, 0.0, mesh)
    lam = fem1d.smallest_eigenpairs(asm, m=1)[0].eigenvalue
    assert abs(lam - lam_ref) <= 1e-5 * lam_ref
    assert abs(lam - 500.564) <= 1e-3 + 1e-5 * lam_ref


def test_beam_interval_scaling():
    lam_ref = beam_reference()
    for L in (0.5, 2.0):
        prof = ShellProfile("affine", (0.0, L), coeffs=(1.0,))
        mesh = fem1d.Mesh1D.uniform((0.0, L), 64)
        lam = fem1d.smallest_eigenpairs(
            fem1d.assemble_h20(prof, 1.0, 0.0, mesh), m=1
        )[0].eigenvalue
        assert abs(lam - lam_ref / L**4) <= 1e-5 * lam_ref / L**4


def test_shift_adds_constant():
    mesh = fem1d.Mesh1D.uniform((0.0, 1.0), 32)
    base = fem1d.assemble_h20(UNIT, 1.0, 0.0, mesh)
    shifted = fem1d.assemble_h20(UNIT, 1.0, 2.5, mesh)
    scale = np.abs(base.stiffness).max()
    np.testing.assert_allclose(
        shifted.stiffness, base.stiffness + 2.5 * base.mass, rtol=0, atol=1e-14 * scale
    )
    lam0 = fem1d.smallest_eigenpairs(base, m=1)[0].eigenvalue
    lam1 = fem1d.smallest_eigenpairs(shifted, m=1)[0].eigenvalue
    assert abs(lam1 - lam0 - 2.5) < 1e-8


def test_dirichlet_laplacian():
    prof = ShellProfile("affine", (0.0, math.pi), coeffs=(1.0,))
    mesh = fem1d.Mesh1D.uniform((0.0, math.pi), 64)
    asm = fem1d.assemble_h10(prof, 1.0, 0.0, mesh)
    sols = fem1d.smallest_eigenpairs(asm, m=3)
    np.testing.assert_allclose(
        [s.eigenvalue for s in sols], [1.0, 4.0, 9.0], rtol=1e-5
    )


def test_harmonic_oscillator_oracle():
    # -u'' + (93/256) z^2 u on a large interval: eigenvalues (2l-1) c with
    # c = sqrt(g * Vdd / 2), Vdd = 93/128, g = 1
    c = math.sqrt((93.0 / 128.0) / 2.0)
    prof = ShellProfile("affine", (-12.0, 12.0), coeffs=(1.0,))
    mesh = fem1d.Mesh1D.uniform((-12.0, 12.0), 256)
    asm = fem1d.assemble_h10(prof, 1.0, lambda z: (93.0 / 256.0) * z**2, mesh)
    sols = fem1d.smallest_eigenpairs(asm, m=2)
    assert abs(sols[0].eigenvalue - c) <= 1e-6 * c
    assert abs(sols[1].eigenvalue - 3 * c) <= 1e-5 * c


def test_model_D_second_order_positive():
    res = ax.toroidal_constants(ax.preset("D"))
    assert res.lambda2 > 0.0


def test_exact_symmetry_and_nonnegativity():
    prof = ax.preset("H")
    mesh = fem1d.Mesh1D.uniform(prof.interval, 24)
    asm = fem1d.assemble_h20(prof, 1.0, 0.5, mesh)
    assert np.array_equal(asm.stiffness, asm.stiffness.T)
    assert np.array_equal(asm.mass, asm.mass.T)
    asm2 = fem1d.assemble_h10(prof, 1.0, 0.0, mesh)
    assert np.array_equal(asm2.stiffness, asm2.stiffness.T)
    vals = np.linalg.eigvalsh(asm.stiffness)
    assert vals.min() > 0.0


def test_h4_convergence_order():
    lam_ref = beam_reference()
    errs = []
    for n in (16, 32, 64):
        mesh = fem1d.Mesh1D.uniform((0.0, 1.0), n)
        lam = fem1d.smallest_eigenpairs(
            fem1d.assemble_h20(UNIT, 1.0, 0.0, mesh), m=1
        )[0].eigenvalue
        errs.append(abs(lam - lam_ref))
    order1 = math.log2(errs[0] / errs[1])
    order2 = math.log2(errs[1] / errs[2])
    assert order1 >= 3.7 and order2 >= 3.7


def test_refinement_monotone():
    lams = []
    for n in (16, 32, 64):
        mesh = fem1d.Mesh1D.uniform((0.0, 1.0), n)
        lams.append(
            fem1d.smallest_eigenpairs(fem1d.assemble_h20(UNIT, 1.0, 0.0, mesh), m=1)[0].eigenvalue
        )
    assert lams[1] <= lams[0] * (1 + 1e-12)
    assert lams[2] <= lams[1] * (1 + 1e-12)


def test_assembly_guards():
    mesh = fem1d.Mesh1D.uniform((0.0, 1.0), 8)
    with pytest.raises(AssemblyError):
        fem1d.assemble_h20(UNIT, lambda z: z - 0.5, 0.0, mesh)
    with pytest.raises(AdmissibilityError):
        fem1d.assemble_h10(UNIT, lambda z: 0.2 - z, 0.0, mesh)


def test_mesh_validation_and_grading():
    with pytest.raises(GeometryError):
        fem1d.Mesh1D(np.array([0.0, 0.5, 0.4, 1.0]))
    graded = fem1d.Mesh1D.boundary_graded((0.0, 1.0), 16, 1.2)
    assert len(graded.nodes) == 17
    assert graded.nodes[0] == 0.0 and graded.nodes[-1] == 1.0
    sizes = np.diff(graded.nodes)
    assert sizes[0] < sizes[7]  # finer near the boundary
    assert abs(sizes[0] - sizes[-1]) < 1e-15


def test_eigen_solution_rayleigh_quotient():
    mesh = fem1d.Mesh1D.uniform((0.0, 1.0), 32)
    asm = fem1d.assemble_h20(UNIT, 1.0, 0.0, mesh)
    sol = fem1d.smallest_eigenpairs(asm, m=1)[0]
    x = sol.coefficients
    rq = (x @ asm.stiffness @ x) / (x @ asm.mass @ x)
    assert abs(rq - sol.eigenvalue) <= 1e-10 * sol.eigenvalue
    full = asm.full_vector(x)
    assert full.shape == (asm.n_dofs,)
    assert np.all(full[:2] == 0.0) and np.all(full[-2:] == 0.0)
