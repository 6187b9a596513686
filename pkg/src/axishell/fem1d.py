"""Conforming 1D elements for the reduced operators.

Two discretizations on the profile interval, both under the weighted measure
f(z) s(z) dz and with clamped traces eliminated:

* fourth-order forms on H^2_0 with cubic Hermite elements
  (value + slope unknowns per node),
* second-order forms on H^1_0 with quadratic Lagrange elements.

Assembly is symmetrized by construction: every local block is a Gram-type
product X^T diag(c) X, so the assembled matrices satisfy K == K.T bit for
bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import eig
from .errors import AdmissibilityError, AssemblyError, GeometryError
from .profiles import ShellProfile

__all__ = [
    "Mesh1D",
    "Assembled1D",
    "EigenSolution1D",
    "assemble_h20",
    "assemble_h10",
    "assemble_weighted_mass",
    "smallest_eigenpairs",
]

GAUSS_POINTS = 6  # per element; order-11 exactness


@dataclass(frozen=True)
class Mesh1D:
    """Sorted node coordinates spanning an interval."""

    nodes: np.ndarray
    grading: str = "uniform"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 3:
            raise GeometryError("mesh needs at least two elements")
        if not np.all(np.diff(nodes) > 0):
            raise GeometryError("mesh nodes must be strictly increasing")

    @classmethod
    def uniform(cls, interval, n_elements: int) -> "Mesh1D":
        a, b = interval
        return cls(np.linspace(a, b, n_elements + 1), "uniform")

    @classmethod
    def boundary_graded(cls, interval, n_elements: int, ratio: float = 1.15) -> "Mesh1D":
        """Element sizes growing geometrically from both ends to the middle."""
        if ratio <= 1.0:
            raise GeometryError("grading ratio must exceed 1")
        a, b = interval
        half = n_elements // 2
        rest = n_elements - 2 * half
        sizes_half = ratio ** np.arange(half)
        sizes = np.concatenate([sizes_half, np.full(rest, ratio**half), sizes_half[::-1]])
        sizes *= (b - a) / sizes.sum()
        nodes = np.concatenate([[a], a + np.cumsum(sizes)])
        nodes[-1] = b
        return cls(nodes, f"boundary-graded({ratio})")

    @property
    def n_elements(self) -> int:
        return len(self.nodes) - 1

    @property
    def interval(self):
        return float(self.nodes[0]), float(self.nodes[-1])


@dataclass
class Assembled1D:
    """Assembled pencil plus the bookkeeping to map back to mesh functions."""

    stiffness: np.ndarray
    mass: np.ndarray
    mesh: Mesh1D
    space: str              # "H20" | "H10"
    free_dofs: np.ndarray   # indices into the unconstrained DOF vector
    n_dofs: int

    def __iter__(self):
        return iter((self.stiffness, self.mass))

    def full_vector(self, coeffs: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n_dofs)
        out[self.free_dofs] = coeffs
        return out


@dataclass
class EigenSolution1D:
    eigenvalue: float
    coefficients: np.ndarray  # free-DOF coefficients
    mesh: Mesh1D


def _gauss(a: float, b: float):
    x, w = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w


def _as_callable(coeff):
    if callable(coeff):
        return coeff
    value = float(coeff)
    return lambda z: np.full_like(np.asarray(z, dtype=float), value)


def _sym(a: np.ndarray) -> np.ndarray:
    # floating addition is commutative, so this is exactly symmetric
    return 0.5 * (a + a.T)


def _hermite_shapes(h: float, xi: np.ndarray):
    N = np.stack([
        1 - 3 * xi**2 + 2 * xi**3,
        h * (xi - 2 * xi**2 + xi**3),
        3 * xi**2 - 2 * xi**3,
        h * (-(xi**2) + xi**3),
    ], axis=1)
    D2 = np.stack([
        (-6 + 12 * xi) / h**2,
        (-4 + 6 * xi) / h,
        (6 - 12 * xi) / h**2,
        (-2 + 6 * xi) / h,
    ], axis=1)
    return N, D2


def _quadratic_shapes(h: float, xi: np.ndarray):
    N = np.stack([
        (2 * xi - 1) * (xi - 1),
        4 * xi * (1 - xi),
        xi * (2 * xi - 1),
    ], axis=1)
    D1 = np.stack([
        (4 * xi - 3) / h,
        (4 - 8 * xi) / h,
        (4 * xi - 1) / h,
    ], axis=1)
    return N, D1


def _space_layout(space: str, n_elements: int):
    if space == "H20":
        n_dofs = 2 * (n_elements + 1)
        free = np.arange(2, n_dofs - 2)
        dofs = lambda e: [2 * e, 2 * e + 1, 2 * e + 2, 2 * e + 3]  # noqa: E731
    elif space == "H10":
        n_dofs = 2 * n_elements + 1
        free = np.arange(1, n_dofs - 1)
        dofs = lambda e: [2 * e, 2 * e + 1, 2 * e + 2]  # noqa: E731
    else:
        raise AssemblyError(f"unknown space {space!r}")
    return n_dofs, free, dofs


def assemble_h20(profile: ShellProfile, a4_coeff, shift, mesh: Mesh1D) -> Assembled1D:
    """Fourth-order form on H^2_0 with cubic Hermite elements.

    stiffness = int a4 u'' v'' f s dz + int shift u v f s dz,
    mass      = int u v f s dz.
    Clamped value and slope unknowns at both ends are eliminated.
    """
    a4_fun = _as_callable(a4_coeff)
    shift_fun = _as_callable(shift if shift is not None else 0.0)
    nodes = mesh.nodes
    n_dofs, free, dofs = _space_layout("H20", mesh.n_elements)
    K = np.zeros((n_dofs, n_dofs))
    M = np.zeros((n_dofs, n_dofs))
    for e in range(mesh.n_elements):
        x0, x1 = nodes[e], nodes[e + 1]
        h = x1 - x0
        zq, wq = _gauss(x0, x1)
        N, D2 = _hermite_shapes(h, (zq - x0) / h)
        wgt = profile.weight(zq)
        a4 = np.asarray(a4_fun(zq), dtype=float)
        if np.any(a4 <= 0.0):
            raise AssemblyError(
                f"fourth-order coefficient must be positive (min {a4.min():.3g} "
                f"near z = {zq[int(np.argmin(a4))]:.6g})"
            )
        sh = np.asarray(shift_fun(zq), dtype=float)
        ke = _sym(np.einsum("q,qi,qj->ij", wq * wgt * a4, D2, D2))
        ke += _sym(np.einsum("q,qi,qj->ij", wq * wgt * sh, N, N))
        me = _sym(np.einsum("q,qi,qj->ij", wq * wgt, N, N))
        dof = dofs(e)
        K[np.ix_(dof, dof)] += ke
        M[np.ix_(dof, dof)] += me
    return Assembled1D(
        stiffness=K[np.ix_(free, free)], mass=M[np.ix_(free, free)],
        mesh=mesh, space="H20", free_dofs=free, n_dofs=n_dofs,
    )


def assemble_h10(profile: ShellProfile, g_coeff, potential, mesh: Mesh1D) -> Assembled1D:
    """Second-order form on H^1_0 with quadratic Lagrange elements.

    stiffness = int (g u' v' + V u v) f s dz, mass = int u v f s dz.
    Endpoint values are eliminated; a negative g at any quadrature point is
    an admissibility violation.
    """
    g_fun = _as_callable(g_coeff)
    v_fun = _as_callable(potential if potential is not None else 0.0)
    nodes = mesh.nodes
    n_dofs, free, dofs = _space_layout("H10", mesh.n_elements)
    K = np.zeros((n_dofs, n_dofs))
    M = np.zeros((n_dofs, n_dofs))
    for e in range(mesh.n_elements):
        x0, x1 = nodes[e], nodes[e + 1]
        h = x1 - x0
        zq, wq = _gauss(x0, x1)
        N, D1 = _quadratic_shapes(h, (zq - x0) / h)
        wgt = profile.weight(zq)
        g = np.asarray(g_fun(zq), dtype=float)
        if np.any(g < -1e-12 * max(1.0, float(np.abs(g).max()))):
            raise AdmissibilityError(
                f"second-order coefficient g is negative (min {g.min():.3g} "
                f"near z = {zq[int(np.argmin(g))]:.6g})"
            )
        V = np.asarray(v_fun(zq), dtype=float)
        ke = _sym(np.einsum("q,qi,qj->ij", wq * wgt * g, D1, D1))
        ke += _sym(np.einsum("q,qi,qj->ij", wq * wgt * V, N, N))
        me = _sym(np.einsum("q,qi,qj->ij", wq * wgt, N, N))
        dof = dofs(e)
        K[np.ix_(dof, dof)] += ke
        M[np.ix_(dof, dof)] += me
    return Assembled1D(
        stiffness=K[np.ix_(free, free)], mass=M[np.ix_(free, free)],
        mesh=mesh, space="H10", free_dofs=free, n_dofs=n_dofs,
    )


def assemble_weighted_mass(
    profile: ShellProfile, density, mesh: Mesh1D, space: str
) -> np.ndarray:
    """int density u v f s dz on the free DOFs of the given space."""
    d_fun = _as_callable(density)
    nodes = mesh.nodes
    n_dofs, free, dofs = _space_layout(space, mesh.n_elements)
    A = np.zeros((n_dofs, n_dofs))
    for e in range(mesh.n_elements):
        x0, x1 = nodes[e], nodes[e + 1]
        h = x1 - x0
        zq, wq = _gauss(x0, x1)
        if space == "H20":
            N, _ = _hermite_shapes(h, (zq - x0) / h)
        else:
            N, _ = _quadratic_shapes(h, (zq - x0) / h)
        wgt = profile.weight(zq)
        dens = np.asarray(d_fun(zq), dtype=float)
        ae = _sym(np.einsum("q,qi,qj->ij", wq * wgt * dens, N, N))
        dof = dofs(e)
        A[np.ix_(dof, dof)] += ae
    return A[np.ix_(free, free)]


def smallest_eigenpairs(
    stiffness, mass=None, m: int = 1, mesh: Mesh1D | None = None,
    tol: float = 1e-10, seed: int = 0, x0: np.ndarray | None = None,
    shift: float = 0.0,
) -> list[EigenSolution1D]:
    """m smallest eigenpairs of the assembled pencil (banded shift-invert).

    Accepts either (stiffness, mass, m) matrices or (Assembled1D, m=...).
    """
    if isinstance(stiffness, Assembled1D):
        asm = stiffness
        if mass is not None:
            if isinstance(mass, (int, np.integer)) and m == 1:
                m = int(mass)
            else:
                raise TypeError("pass m as keyword when an Assembled1D is given")
        mesh = asm.mesh
        stiffness, mass = asm.stiffness, asm.mass
    pairs = eig.solve_smallest(
        eig.SymmetricPencil(stiffness, mass), m, shift=shift, tol=tol, seed=seed, x0=x0
    )
    return [
        EigenSolution1D(eigenvalue=float(pairs.values[j]),
                        coefficients=pairs.vectors[:, j], mesh=mesh)
        for j in range(m)
    ]
