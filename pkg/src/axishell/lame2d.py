"""Fourier-decomposed 3D elasticity on the meridian cross-section.

The shell's 3D vibration problem separates over azimuthal modes e^{ik phi};
each mode is a 3-component problem for (u^r, u^phi, u^tau) on the meridian
domain.  With the azimuthal component rotated by i the bilinear form is real
symmetric and splits as A0 + k A1 + k^2 A2, so one assembly per (mesh, eps)
serves the whole wavenumber sweep.

Assembly happens on the parametric rectangle I x (-eps, eps) using the exact
normal-coordinate map (r, tau) = (f + x3/s, z - x3 f'/s) and its Jacobian;
elements are tensor-product Lagrange of degree p (default 6) on curvilinear
quadrilaterals, clamped on the two lateral ends z = z+-.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import asymptotics, eig
from .errors import SolverError, ThicknessError
from .profiles import ShellProfile

__all__ = [
    "MeridianMesh",
    "LameFamily",
    "FourierLameSystem",
    "SweepRecord",
    "KSweepResult",
    "MidlineTrace",
    "build_meridian_mesh",
    "assemble_fourier_lame",
    "first_eigenvalue_2d",
    "k_sweep",
    "midline_mode_trace",
    "default_mesh_size",
]

DEFAULT_DEGREE = 6


def _lobatto_nodes(p: int) -> np.ndarray:
    """Gauss-Lobatto-Legendre nodes on [0, 1]."""
    if p == 1:
        return np.array([0.0, 1.0])
    inner = np.polynomial.legendre.Legendre.basis(p).deriv().roots()
    return 0.5 * (np.concatenate([[-1.0], np.sort(inner.real), [1.0]]) + 1.0)


def _lagrange_tables(nodes: np.ndarray, at: np.ndarray):
    """Values and derivatives of the nodal basis at the given points."""
    n = len(nodes)
    V = np.zeros((len(at), n))
    D = np.zeros((len(at), n))
    for j in range(n):
        ind = np.ones(n, dtype=bool)
        ind[j] = False
        denom = np.prod(nodes[j] - nodes[ind])
        c = np.polynomial.polynomial.polyfromroots(nodes[ind]) / denom
        V[:, j] = np.polynomial.polynomial.polyval(at, c)
        D[:, j] = np.polynomial.polynomial.polyval(
            at, np.polynomial.polynomial.polyder(c)
        )
    return V, D


@dataclass
class MeridianMesh:
    """Parametric-rectangle mesh with the exact geometric map cached."""

    profile: ShellProfile
    eps: float
    n_meridian: int
    n_thickness: int
    geometric_degree: int
    z_breaks: np.ndarray
    t_breaks: np.ndarray
    min_jacobian: float
    edge_geometry: np.ndarray  # (r, tau) samples of cell edges at geometric nodes
    _families: dict = field(default_factory=dict, repr=False, compare=False)


@dataclass
class LameFamily:
    """k-independent pieces: stiffness = A0 + k A1 + k^2 A2, plus the mass."""

    degree: int
    A0: sp.csr_matrix
    A1: sp.csr_matrix
    A2: sp.csr_matrix
    M: sp.csr_matrix
    free: np.ndarray          # free DOFs among the 3 * n_nodes unknowns
    node_z: np.ndarray        # parametric z per scalar node (nz,)
    node_t: np.ndarray        # parametric x3 per scalar node (nt,)
    n_nodes: int

    @property
    def dof_count(self) -> int:
        return len(self.free)


@dataclass
class FourierLameSystem:
    k: int
    eps: float
    stiffness: sp.csr_matrix
    mass: sp.csr_matrix
    family: LameFamily
    mesh: MeridianMesh


@dataclass
class SweepRecord:
    eps: float
    k: int
    lambda1: float
    dof_count: int
    residual: float


@dataclass
class KSweepResult:
    k_opt: int
    lambda1: float
    records: list
    flagged: bool = False
    note: str = ""


@dataclass
class MidlineTrace:
    z: np.ndarray
    u_r: np.ndarray          # normalized to max |u_r| = 1
    argmax_z: float
    half_width: float        # distance where |u_r| falls below e^{-1/2}


def _map_data(profile: ShellProfile, zq: np.ndarray, tq: np.ndarray):
    """Geometry of the normal-coordinate map at (z, x3) points (flattened)."""
    jets = np.array([profile.jet(z, 2) for z in zq])
    f, fp, fpp = jets[:, 0], jets[:, 1], jets[:, 2]
    s2 = 1.0 + fp**2
    s = np.sqrt(s2)
    r = f + tq / s
    tau = zq - tq * fp / s
    r_z = fp - tq * fp * fpp / s**3
    r_t = 1.0 / s
    tau_z = 1.0 - tq * fpp / s**3
    tau_t = -fp / s
    det = r_z * tau_t - r_t * tau_z
    return r, tau, r_z, r_t, tau_z, tau_t, det


def build_meridian_mesh(
    profile: ShellProfile,
    eps: float,
    n_meridian: int = 12,
    n_thickness: int = 2,
    degree: int = 3,
) -> MeridianMesh:
    """Subdivide the parametric rectangle and validate the geometric map.

    ``degree`` is the geometric sampling degree for the cached edge geometry;
    assembly always uses the exact map, so geometry carries no discretization
    error.  A nonpositive Jacobian anywhere means the half-thickness exceeds
    the injectivity range of the normal-coordinate map.
    """
    if n_thickness < 2:
        raise ThicknessError("need at least two cells through the thickness")
    if n_meridian < 1:
        raise ThicknessError("need at least one meridian cell")
    z_breaks = np.linspace(profile.interval[0], profile.interval[1], n_meridian + 1)
    t_breaks = np.linspace(-eps, eps, n_thickness + 1)
    # dense positivity check of |det J|
    zs = np.linspace(profile.interval[0], profile.interval[1], 8 * n_meridian + 1)
    ts = np.linspace(-eps, eps, 8 * n_thickness + 1)
    Z, T = np.meshgrid(zs, ts, indexing="ij")
    *_, det = _map_data(profile, Z.ravel(), T.ravel())
    min_jac = float(np.abs(det).min())
    if np.any(det == 0.0) or det.max() * det.min() < 0:
        raise ThicknessError(
            f"normal-coordinate map degenerates (eps = {eps:g} too large for the "
            "meridian curvature)"
        )
    geo = _lobatto_nodes(degree)
    edges = []
    for zb in z_breaks:
        zq = np.full(len(geo), zb)
        tq = -eps + 2 * eps * geo
        r, tau, *_ = _map_data(profile, zq, tq)
        edges.append(np.stack([r, tau], axis=1))
    return MeridianMesh(
        profile=profile, eps=eps, n_meridian=n_meridian, n_thickness=n_thickness,
        geometric_degree=degree, z_breaks=z_breaks, t_breaks=t_breaks,
        min_jacobian=min_jac, edge_geometry=np.array(edges),
    )


def _build_family(mesh: MeridianMesh, degree: int) -> LameFamily:
    profile = mesh.profile
    E, nu = profile.E, profile.nu
    p = degree
    nq1 = p + 2  # Gauss points per direction: exact through degree 2p + 3
    gx, gw = np.polynomial.legendre.leggauss(nq1)
    gx = 0.5 * (gx + 1.0)
    gw = 0.5 * gw
    ref = _lobatto_nodes(p)
    V1, D1 = _lagrange_tables(ref, gx)

    nz_cells, nt_cells = mesh.n_meridian, mesh.n_thickness
    nz = p * nz_cells + 1
    nt = p * nt_cells + 1
    n_nodes = nz * nt
    n_dofs = 3 * n_nodes

    node_z = np.empty(nz)
    for c in range(nz_cells):
        z0, z1 = mesh.z_breaks[c], mesh.z_breaks[c + 1]
        node_z[p * c : p * (c + 1) + 1] = z0 + (z1 - z0) * ref
    node_t = np.empty(nt)
    for c in range(nt_cells):
        t0, t1 = mesh.t_breaks[c], mesh.t_breaks[c + 1]
        node_t[p * c : p * (c + 1) + 1] = t0 + (t1 - t0) * ref

    c_fac = E / (1.0 - nu * nu)
    a_c = (1.0 - nu) ** 2 / (1.0 - 2.0 * nu)
    b_c = nu * (1.0 - nu) / (1.0 - 2.0 * nu)
    d_c = 0.5 * (1.0 - nu)

    nloc = (p + 1) ** 2
    rows0, cols0 = np.meshgrid(np.arange(3 * nloc), np.arange(3 * nloc), indexing="ij")

    data = {name: [] for name in ("A0", "A1", "A2", "M")}
    rows = {name: [] for name in data}
    cols = {name: [] for name in data}

    for cz in range(nz_cells):
        z0, z1 = mesh.z_breaks[cz], mesh.z_breaks[cz + 1]
        hz = z1 - z0
        for ct in range(nt_cells):
            t0, t1 = mesh.t_breaks[ct], mesh.t_breaks[ct + 1]
            ht = t1 - t0
            zq = z0 + hz * gx
            tq = t0 + ht * gx
            Zq, Tq = np.meshgrid(zq, tq, indexing="ij")
            r, tau, r_z, r_t, tau_z, tau_t, det = _map_data(
                profile, Zq.ravel(), Tq.ravel()
            )
            adet = np.abs(det)
            if adet.min() <= 0.0:
                raise ThicknessError("map Jacobian vanished inside a cell")
            wq = np.outer(gw * hz, gw * ht).ravel() * adet

            # scalar basis tables on the tensor quadrature grid
            N = np.einsum("qi,sj->qsij", V1, V1).reshape(nq1 * nq1, nloc)
            Gz = np.einsum("qi,sj->qsij", D1 / hz, V1).reshape(nq1 * nq1, nloc)
            Gt = np.einsum("qi,sj->qsij", V1, D1 / ht).reshape(nq1 * nq1, nloc)
            inv = 1.0 / det
            Gr = (tau_t * inv)[:, None] * Gz - (tau_z * inv)[:, None] * Gt
            Gtau = (-r_t * inv)[:, None] * Gz + (r_z * inv)[:, None] * Gt

            def blk(w, X, Y):
                return np.einsum("q,qi,qj->ij", w, X, Y)

            K0 = np.zeros((3 * nloc, 3 * nloc))
            K1 = np.zeros_like(K0)
            K2 = np.zeros_like(K0)
            Me = np.zeros_like(K0)
            R, P, T3 = np.s_[0:nloc], np.s_[nloc : 2 * nloc], np.s_[2 * nloc :]

            # k^0 terms
            K0[R, R] = (
                blk(a_c * r * wq, Gr, Gr) + blk(a_c / r * wq, N, N)
                + blk(b_c * wq, Gr, N) + blk(b_c * wq, N, Gr)
                + blk(d_c * r * wq, Gtau, Gtau)
            )
            K0[T3, T3] = blk(a_c * r * wq, Gtau, Gtau) + blk(d_c * r * wq, Gr, Gr)
            B_rt = (
                blk(b_c * r * wq, Gr, Gtau) + blk(b_c * wq, N, Gtau)
                + blk(d_c * r * wq, Gtau, Gr)
            )
            K0[R, T3] = B_rt
            K0[T3, R] = B_rt.T
            K0[P, P] = (
                blk(d_c / r * wq, Gr, Gr) + blk(d_c / r * wq, Gtau, Gtau)
                - blk(2 * d_c / r**2 * wq, Gr, N) - blk(2 * d_c / r**2 * wq, N, Gr)
                + blk(4 * d_c / r**3 * wq, N, N)
            )

            # k^2 terms
            K2[R, R] = blk(d_c / r * wq, N, N)
            K2[T3, T3] = blk(d_c / r * wq, N, N)
            K2[P, P] = blk(a_c / r**3 * wq, N, N)

            # k^1 terms (phi couples to r and tau)
            cpl = a_c + (1.0 - nu)
            B_pr = (
                blk(cpl / r**2 * wq, N, N)
                + blk(b_c / r * wq, N, Gr)
                - blk(d_c / r * wq, Gr, N)
            )
            B_pt = blk(b_c / r * wq, N, Gtau) - blk(d_c / r * wq, Gtau, N)
            K1[P, R] = B_pr
            K1[R, P] = B_pr.T
            K1[P, T3] = B_pt
            K1[T3, P] = B_pt.T

            Me[R, R] = blk(r * wq, N, N)
            Me[T3, T3] = blk(r * wq, N, N)
            Me[P, P] = blk(wq / r, N, N)

            # exact symmetry by construction (floating addition commutes)
            K0 = 0.5 * (K0 + K0.T) * c_fac
            K1 = 0.5 * (K1 + K1.T) * c_fac
            K2 = 0.5 * (K2 + K2.T) * c_fac
            Me = 0.5 * (Me + Me.T)

            # scatter: node (iz, it) -> scalar id iz*nt + it; dof = 3*id + comp
            iz0, it0 = p * cz, p * ct
            ids = ((iz0 + np.arange(p + 1))[:, None] * nt
                   + (it0 + np.arange(p + 1))[None, :]).ravel()
            gdof = np.concatenate([3 * ids, 3 * ids + 1, 3 * ids + 2])
            grows = gdof[rows0.ravel()]
            gcols = gdof[cols0.ravel()]
            for name, local in (("A0", K0), ("A1", K1), ("A2", K2), ("M", Me)):
                rows[name].append(grows)
                cols[name].append(gcols)
                data[name].append(local.ravel())

    mats = {}
    for name in data:
        mats[name] = sp.csr_matrix(
            (np.concatenate(data[name]),
             (np.concatenate(rows[name]), np.concatenate(cols[name]))),
            shape=(n_dofs, n_dofs),
        )
    # clamped lateral ends: all components on the two node columns z = z+-
    clamped_nodes = np.concatenate([np.arange(nt), (nz - 1) * nt + np.arange(nt)])
    fixed = np.concatenate([3 * clamped_nodes, 3 * clamped_nodes + 1,
                            3 * clamped_nodes + 2])
    free = np.setdiff1d(np.arange(n_dofs), fixed)
    for name in mats:
        a = mats[name][free][:, free].tocsr()
        # duplicate summation order in the sparse build can differ between
        # (i, j) and (j, i); re-symmetrize exactly
        mats[name] = (0.5 * (a + a.T)).tocsr()
    return LameFamily(
        degree=p, A0=mats["A0"], A1=mats["A1"], A2=mats["A2"], M=mats["M"],
        free=free, node_z=node_z, node_t=node_t, n_nodes=n_nodes,
    )


def get_family(mesh: MeridianMesh, degree: int = DEFAULT_DEGREE) -> LameFamily:
    if degree not in mesh._families:
        mesh._families[degree] = _build_family(mesh, degree)
    return mesh._families[degree]


def assemble_fourier_lame(
    mesh: MeridianMesh, k: int, degree: int = DEFAULT_DEGREE
) -> FourierLameSystem:
    """Stiffness/mass pair at integer wavenumber k (real symmetric form)."""
    if k != int(k):
        raise SolverError("wavenumber must be an integer")
    fam = get_family(mesh, degree)
    K = (fam.A0 + k * fam.A1 + k * k * fam.A2).tocsr()
    return FourierLameSystem(k=int(k), eps=mesh.eps, stiffness=K, mass=fam.M,
                             family=fam, mesh=mesh)


def first_eigenpair_2d(
    system: FourierLameSystem, shift: float = 0.0, seed: int = 0,
    tol: float = 1e-8, x0: np.ndarray | None = None,
) -> tuple[SweepRecord, np.ndarray]:
    """Smallest eigenpair of the assembled mode; returns (record, eigenvector)."""
    pairs = eig.solve_smallest(
        eig.SymmetricPencil(system.stiffness, system.mass), 1,
        shift=shift, tol=tol, seed=seed, x0=x0,
    )
    rec = SweepRecord(
        eps=system.eps, k=system.k, lambda1=float(pairs.values[0]),
        dof_count=system.family.dof_count, residual=float(pairs.residuals[0]),
    )
    return rec, pairs.vectors[:, 0]


def first_eigenvalue_2d(
    system: FourierLameSystem, shift: float = 0.0, seed: int = 0,
    tol: float = 1e-8,
) -> SweepRecord:
    """Smallest eigenvalue of the assembled mode."""
    rec, _ = first_eigenpair_2d(system, shift=shift, seed=seed, tol=tol)
    return rec


def default_mesh_size(eps: float) -> tuple[int, int]:
    """(n_meridian, n_thickness) defaults by thickness."""
    if eps >= 0.05:
        return 8, 2
    if eps >= 0.02:
        return 12, 2
    return 16, 2


def k_sweep(
    profile: ShellProfile,
    eps: float,
    mesh: MeridianMesh | None = None,
    degree: int = DEFAULT_DEGREE,
    asym=None,
    k_start: int = 0,
    seed: int = 0,
) -> KSweepResult:
    """Sweep integer wavenumbers until the first eigenvalue has clearly turned up.

    Stops after three consecutive increases past the running minimum, or when
    k exceeds 2.5 gamma eps^(-beta) from the 1D prediction.
    """
    if mesh is None:
        nm, nt = default_mesh_size(eps)
        mesh = build_meridian_mesh(profile, eps, nm, nt)
    if asym is None:
        asym = asymptotics.compute(profile)
    k_cap = int(math.ceil(2.5 * asym.gamma * eps ** float(-asym.beta))) + 1
    records = []
    best = (math.inf, -1)
    increases = 0
    warm = None
    k = k_start
    while k <= k_cap:
        system = assemble_fourier_lame(mesh, k, degree)
        rec, vec = first_eigenpair_2d(system, seed=seed, x0=warm)
        warm = vec[:, np.newaxis]
        records.append(rec)
        if rec.lambda1 < best[0]:
            best = (rec.lambda1, k)
            increases = 0
        else:
            increases += 1
            if increases >= 3:
                return KSweepResult(k_opt=best[1], lambda1=best[0], records=records)
        k += 1
    flagged = best[1] in (k_cap, k_start) or increases == 0
    return KSweepResult(
        k_opt=best[1], lambda1=best[0], records=records, flagged=flagged,
        note="no interior minimum before the wavenumber budget" if flagged else "",
    )


def midline_mode_trace(
    system: FourierLameSystem, eigvec: np.ndarray, n_samples: int = 241
) -> MidlineTrace:
    """Radial component along the midline x3 = 0, normalized to max 1.

    The half-width is the distance from the peak at which |u_r| falls below
    e^{-1/2} (averaged over the two sides where available).
    """
    fam = system.family
    mesh = system.mesh
    profile = mesh.profile
    p = fam.degree
    full = np.zeros(3 * fam.n_nodes)
    full[fam.free] = eigvec
    u_r = full[0::3].reshape(len(fam.node_z), len(fam.node_t))

    ref = _lobatto_nodes(p)
    # thickness cell containing x3 = 0 and basis values there
    ct = min(np.searchsorted(mesh.t_breaks, 0.0, side="right") - 1,
             mesh.n_thickness - 1)
    t0, t1 = mesh.t_breaks[ct], mesh.t_breaks[ct + 1]
    xt = (0.0 - t0) / (t1 - t0)
    Vt, _ = _lagrange_tables(ref, np.array([xt]))
    z_lo, z_hi = profile.interval
    zs = np.linspace(z_lo, z_hi, n_samples)
    vals = np.empty(n_samples)
    for i, z in enumerate(zs):
        cz = min(np.searchsorted(mesh.z_breaks, z, side="right") - 1,
                 mesh.n_meridian - 1)
        z0, z1 = mesh.z_breaks[cz], mesh.z_breaks[cz + 1]
        xz = (z - z0) / (z1 - z0)
        Vz, _ = _lagrange_tables(ref, np.array([xz]))
        block = u_r[p * cz : p * cz + p + 1, p * ct : p * ct + p + 1]
        vals[i] = float(Vz[0] @ block @ Vt[0])
    peak = float(np.max(np.abs(vals)))
    if peak == 0.0:
        return MidlineTrace(z=zs, u_r=vals, argmax_z=zs[0], half_width=0.0)
    vals = vals / peak
    i_max = int(np.argmax(np.abs(vals)))
    if vals[i_max] < 0:
        vals = -vals
    thr = math.exp(-0.5)
    widths = []
    below = np.abs(vals) < thr
    left = np.where(below[:i_max])[0]
    if len(left):
        widths.append(zs[i_max] - zs[left[-1]])
    right = np.where(below[i_max + 1 :])[0]
    if len(right):
        widths.append(zs[i_max + 1 + right[0]] - zs[i_max])
    half_width = float(np.mean(widths)) if widths else float(z_hi - z_lo)
    return MidlineTrace(z=zs, u_r=vals, argmax_z=float(zs[i_max]),
                        half_width=half_width)
