"""Pointwise shell geometry, classification, and the potential minimum.

Everything derives from the profile jet: arc-length factor s, the two
principal curvatures, the Gaussian curvature, the concentration potential
H0 = E f''^2 / s^6, the second-order coefficient g of the elliptic reduction,
and the leading bending coefficient B0 = E / (3 (1 - nu^2) f^4).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError
from .jets import Jet
from .profiles import ShellProfile

__all__ = [
    "GeometryFrame",
    "ShellClass",
    "ShellClassTag",
    "H0Minimum",
    "frame_at",
    "classify",
    "locate_H0_minimum",
    "essential_spectrum_range",
    "h0_taylor",
    "g_at",
    "b0_at",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
H0_CONST_RTOL = 1e-10  # relative variation below which H0 counts as constant
MULTI_MIN_ATOL = 1e-8  # minima within this of the global value are branches


class ShellClassTag(enum.Enum):
    CYLINDER = "Cylinder"
    CONE = "Cone"
    TORUS_ELLIPTIC = "TorusElliptic"
    GAUSS_ELLIPTIC = "GaussElliptic"
    AIRY_ELLIPTIC = "AiryElliptic"
    HYPERBOLIC = "Hyperbolic"
    INADMISSIBLE = "Inadmissible"


@dataclass(frozen=True)
class GeometryFrame:
    """All pointwise geometric and reduction quantities at one z."""

    z: float
    f: float
    fp: float
    fpp: float
    fppp: float
    fpppp: float
    s: float
    b_zz: float
    b_pp: float
    K: float
    H0: float
    g: float
    B0: float
    admissible: bool
    E: float
    nu: float

    def jet(self, order: int = 4) -> Jet:
        """Taylor jet of f rebuilt from the stored derivatives."""
        d = [self.f, self.fp, self.fpp, self.fppp, self.fpppp][: order + 1]
        return Jet.from_derivatives(d)


@dataclass(frozen=True)
class H0Minimum:
    """Located minimum of the potential H0 with analytic derivatives."""

    z0: float
    value: float
    d1: float
    d2: float
    boundary: bool
    branches: tuple = field(default=())

    @property
    def multiple(self) -> bool:
        return len(self.branches) > 1


@dataclass(frozen=True)
class ShellClass:
    tag: ShellClassTag
    z0: float | None = None
    boundary_minimum: bool = False
    h0_minimum: H0Minimum | None = None
    detail: str = ""

    @property
    def elliptic(self) -> bool:
        return self.tag in (
            ShellClassTag.TORUS_ELLIPTIC,
            ShellClassTag.GAUSS_ELLIPTIC,
            ShellClassTag.AIRY_ELLIPTIC,
        )


def h0_taylor(profile: ShellProfile, z: float, order: int = 2) -> Jet:
    """H0 = E f''^2 / s^6 as a jet (order 2 needs the f jet to order 4)."""
    fj = profile.taylor(z, order + 2)
    fpp = fj.diff().diff()
    s2 = 1.0 + fj.diff() * fj.diff()
    return profile.E * fpp * fpp / (s2 * s2 * s2)


def g_at(f, fp, fpp, E):
    """Second-order reduction coefficient g = -2E (f f''/s^6 + f^2 f''^2/s^8)."""
    s2 = 1.0 + fp * fp
    s6 = s2 * s2 * s2
    return -2.0 * E * (f * fpp / s6 + f * f * fpp * fpp / (s6 * s2))


def b0_at(f, E, nu):
    """Leading bending coefficient B0 = E / (3 (1 - nu^2) f^4)."""
    return E / (3.0 * (1.0 - nu * nu) * f * f * f * f)


def frame_at(profile: ShellProfile, z: float) -> GeometryFrame:
    """Evaluate the full geometric frame at one coordinate."""
    profile.require_inside(z)
    d = profile.jet(z, 4)
    f, fp, fpp, fppp, fpppp = (float(v) for v in d)
    if f <= 0.0:
        raise GeometryError(f"nonpositive radius f({z}) = {f}")
    s = math.sqrt(1.0 + fp * fp)
    b_zz = fpp / s**3
    b_pp = -1.0 / (f * s)
    K = -fpp / (f * s**4)
    H0 = profile.E * fpp * fpp / s**6
    g = g_at(f, fp, fpp, profile.E)
    B0 = b0_at(f, profile.E, profile.nu)
    admissible = 1.0 + fp * fp + f * fpp >= 0.0
    return GeometryFrame(
        z=z, f=f, fp=fp, fpp=fpp, fppp=fppp, fpppp=fpppp, s=s,
        b_zz=b_zz, b_pp=b_pp, K=K, H0=H0, g=g, B0=B0,
        admissible=admissible, E=profile.E, nu=profile.nu,
    )


def _h0_values(profile: ShellProfile, zs: np.ndarray) -> np.ndarray:
    fpp = np.array([profile.jet(z, 2)[2] for z in zs])
    s2 = 1.0 + profile.df(zs) ** 2
    return profile.E * fpp**2 / s2**3


def _golden_min(fun, a: float, b: float, tol: float) -> float:
    """Golden-section minimum of a unimodal function on [a, b]."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = fun(x2)
    return 0.5 * (a + b)


def locate_H0_minimum(
    profile: ShellProfile, n_samples: int = 1024, tol: float = 1e-10
) -> H0Minimum:
    """Locate all global minimizers of H0 by grid scan plus golden refinement.

    Derivatives at the minimizer come from the exact jet (first derivative
    needs f''', second needs f'''').  Minima within 1e-8 of the global value
    are reported together as branches; the returned top-level fields describe
    the branch at the smallest z.
    """
    z_minus, z_plus = profile.interval
    zs = np.linspace(z_minus, z_plus, n_samples + 1)
    vals = _h0_values(profile, zs)

    def h0(z: float) -> float:
        return h0_taylor(profile, z, 0).value

    candidates: list[tuple[float, bool]] = []
    if vals[0] <= vals[1]:
        candidates.append((z_minus, True))
    if vals[-1] <= vals[-2]:
        candidates.append((z_plus, True))
    interior = np.where((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:]))[0] + 1
    for i in interior:
        lo, hi = zs[i - 1], zs[i + 1]
        z_ref = _golden_min(h0, lo, hi, max(tol, 1e-12))
        # Newton polish on the analytic derivative: golden section alone
        # stalls at the sqrt(eps) noise plateau of H0 comparisons
        for _ in range(8):
            j = h0_taylor(profile, z_ref, 2)
            d1, d2 = j.derivative(1), j.derivative(2)
            if d2 <= 0.0:
                break
            step = d1 / d2
            z_new = min(max(z_ref - step, lo), hi)
            if abs(z_new - z_ref) <= 1e-15 * max(1.0, abs(z_ref)):
                z_ref = z_new
                break
            z_ref = z_new
        candidates.append((z_ref, False))

    branches = []
    for z0, boundary in candidates:
        j = h0_taylor(profile, z0, 2)
        branches.append(
            H0Minimum(
                z0=z0, value=j.value, d1=j.derivative(1), d2=j.derivative(2),
                boundary=boundary,
            )
        )
    global_min = min(b.value for b in branches)
    scale = max(abs(global_min), 1.0e-30)
    kept = sorted(
        (b for b in branches if b.value - global_min <= MULTI_MIN_ATOL * max(1.0, scale)),
        key=lambda b: b.z0,
    )
    # drop near-duplicate locations produced by flat sampled cells
    dedup: list[H0Minimum] = []
    for b in kept:
        if not dedup or abs(b.z0 - dedup[-1].z0) > 1e-7 * (z_plus - z_minus):
            dedup.append(b)
    first = dedup[0]
    return H0Minimum(
        z0=first.z0, value=first.value, d1=first.d1, d2=first.d2,
        boundary=first.boundary, branches=tuple(dedup),
    )


def classify(profile: ShellProfile, n_samples: int = 1024) -> ShellClass:
    """Decide the shell class from the sign of f'' and the shape of H0."""
    if n_samples < 64:
        raise ValueError("classification needs at least 64 samples")
    z_minus, z_plus = profile.interval
    zs = np.linspace(z_minus, z_plus, n_samples + 1)
    jets = np.array([profile.jet(z, 2) for z in zs])
    f, fp, fpp = jets[:, 0], jets[:, 1], jets[:, 2]
    scale = max(1.0, float(np.abs(f).max()))
    tol = 1e-13 * scale

    if np.all(np.abs(fpp) <= tol):
        if np.all(np.abs(fp) <= tol):
            return ShellClass(ShellClassTag.CYLINDER)
        return ShellClass(ShellClassTag.CONE)
    if np.any(fpp > tol):
        return ShellClass(
            ShellClassTag.HYPERBOLIC,
            detail="f'' > 0 somewhere; scalar reduction not applicable",
        )

    # elliptic: f'' < 0 (up to roundoff) everywhere
    h0 = _h0_values(profile, zs)
    h0_span = float(h0.max() - h0.min())
    if h0_span <= H0_CONST_RTOL * max(float(h0.max()), 1e-300):
        adm = 1.0 + fp**2 + f * fpp
        if np.min(adm) < 0.0:
            return ShellClass(
                ShellClassTag.INADMISSIBLE,
                detail="constant potential but azimuthal curvature does not dominate",
            )
        return ShellClass(ShellClassTag.TORUS_ELLIPTIC)

    minimum = locate_H0_minimum(profile, n_samples=max(n_samples, 1024))
    branch = minimum
    z0 = branch.z0
    fr = frame_at(profile, z0)
    if not fr.admissible:
        return ShellClass(
            ShellClassTag.INADMISSIBLE, z0=z0, h0_minimum=minimum,
            detail="admissibility 1 + f'^2 + f f'' >= 0 violated at the minimizer",
        )
    if branch.boundary:
        inward = branch.d1 > 0 if z0 == z_minus else branch.d1 < 0
        if abs(branch.d1) <= 1e-12 or not inward:
            return ShellClass(
                ShellClassTag.INADMISSIBLE, z0=z0, boundary_minimum=True,
                h0_minimum=minimum, detail="degenerate boundary minimum of H0",
            )
        return ShellClass(
            ShellClassTag.AIRY_ELLIPTIC, z0=z0, boundary_minimum=True,
            h0_minimum=minimum,
        )
    if branch.d2 <= 1e-12:
        return ShellClass(
            ShellClassTag.INADMISSIBLE, z0=z0, h0_minimum=minimum,
            detail="degenerate interior minimum of H0",
        )
    return ShellClass(ShellClassTag.GAUSS_ELLIPTIC, z0=z0, h0_minimum=minimum)


def essential_spectrum_range(profile: ShellProfile, n_samples: int = 2048):
    """Range of E b_phi^2 = E / (f^2 s^2) over the interval.

    Sampled min/max with golden-section refinement around the extreme cells.
    """
    z_minus, z_plus = profile.interval
    zs = np.linspace(z_minus, z_plus, n_samples + 1)
    f = profile.f(zs)
    s2 = 1.0 + profile.df(zs) ** 2
    vals = profile.E / (f**2 * s2)

    def sig(z: float) -> float:
        ff = float(profile.f(z))
        ss2 = 1.0 + float(profile.df(z)) ** 2
        return profile.E / (ff * ff * ss2)

    def refine_extremum(idx: int, sign: float) -> float:
        """sig value at the local extremum inside the cells around sample idx."""
        lo = zs[max(idx - 1, 0)]
        hi = zs[min(idx + 1, len(zs) - 1)]
        z_star = _golden_min(lambda z: sign * sig(z), lo, hi, 1e-12)
        return sig(z_star)

    lower = min(float(vals.min()), refine_extremum(int(np.argmin(vals)), +1.0))
    upper = max(float(vals.max()), refine_extremum(int(np.argmax(vals)), -1.0))
    return lower, upper
