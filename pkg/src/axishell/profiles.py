"""Meridian profiles r = f(z) with exact derivative jets.

A profile is one of three closed-form descriptors (polynomial of degree at
most 8, affine, circular arc), so jets of any order are exact.  The five
built-in models A, B, D, H, L cover the cylinder / cone / toroidal / Gauss /
Airy shell types.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GeometryError
from .jets import Jet

__all__ = ["ShellProfile", "preset", "PRESET_IDS"]

MAX_POLY_DEGREE = 8
PRESET_IDS = ("A", "B", "D", "H", "L")


@dataclass(frozen=True)
class ShellProfile:
    """Shell midsurface profile with material constants.

    ``kind`` is one of ``"polynomial"``, ``"affine"`` or ``"circular_arc"``.
    Polynomial/affine store ascending coefficients in ``coeffs``; a circular
    arc stores ``params = (r_center, arc_radius, z_center)`` meaning
    f(z) = r_center + sqrt(arc_radius^2 - (z - z_center)^2).
    """

    kind: str
    interval: tuple[float, float]
    coeffs: tuple[float, ...] = ()
    params: tuple[float, ...] = ()
    E: float = 1.0
    nu: float = 0.3
    r_min_guard: float = 1e-6
    name: str = field(default="", compare=False)

    def __post_init__(self):
        z_minus, z_plus = self.interval
        if not z_minus < z_plus:
            raise GeometryError(f"empty interval {self.interval}")
        if self.E <= 0:
            raise GeometryError("Young modulus must be positive")
        if not (-1.0 < self.nu < 0.5):
            raise GeometryError(f"Poisson ratio {self.nu} outside (-1, 1/2)")
        if self.r_min_guard <= 0:
            raise GeometryError("r_min_guard must be positive")
        if self.kind in ("polynomial", "affine"):
            if not self.coeffs:
                raise GeometryError("polynomial profile needs coefficients")
            if len(self.coeffs) - 1 > MAX_POLY_DEGREE:
                raise GeometryError(
                    f"polynomial degree {len(self.coeffs) - 1} exceeds {MAX_POLY_DEGREE}"
                )
            if self.kind == "affine" and len(self.coeffs) > 2:
                raise GeometryError("affine profile takes at most two coefficients")
        elif self.kind == "circular_arc":
            if len(self.params) != 3:
                raise GeometryError("circular arc needs (r_center, radius, z_center)")
            r_c, radius, z_c = self.params
            if radius <= 0:
                raise GeometryError("arc radius must be positive")
            half = max(abs(z_minus - z_c), abs(z_plus - z_c))
            if half >= radius:
                raise GeometryError("interval leaves the arc's parametrization range")
        else:
            raise GeometryError(f"unknown profile kind {self.kind!r}")
        samples = self.f(np.linspace(z_minus, z_plus, 513))
        fmin = float(samples.min())
        if fmin < self.r_min_guard:
            raise GeometryError(
                f"profile reaches f = {fmin:.6g} below the guard {self.r_min_guard:g}"
            )

    # evaluation ------------------------------------------------------

    def f(self, z):
        """Radius f(z), vectorized."""
        z = np.asarray(z, dtype=float)
        if self.kind in ("polynomial", "affine"):
            return np.polynomial.polynomial.polyval(z, np.asarray(self.coeffs))
        r_c, radius, z_c = self.params
        return r_c + np.sqrt(radius**2 - (z - z_c) ** 2)

    def df(self, z):
        """First derivative f'(z), vectorized."""
        z = np.asarray(z, dtype=float)
        if self.kind in ("polynomial", "affine"):
            der = np.polynomial.polynomial.polyder(np.asarray(self.coeffs))
            return np.polynomial.polynomial.polyval(z, der) * np.ones_like(z)
        r_c, radius, z_c = self.params
        t = z - z_c
        return -t / np.sqrt(radius**2 - t**2)

    def arc_factor(self, z):
        """Arc-length factor sqrt(1 + f'(z)^2), vectorized."""
        return np.sqrt(1.0 + self.df(z) ** 2)

    def weight(self, z):
        """Measure density f(z) * sqrt(1 + f'(z)^2), vectorized."""
        return self.f(z) * self.arc_factor(z)

    def taylor(self, z: float, order: int) -> Jet:
        """Exact Taylor expansion of f at z (descriptor evaluated in jets)."""
        t = Jet.variable(float(z), order)
        if self.kind in ("polynomial", "affine"):
            acc = Jet.constant(0.0, order)
            for c in reversed(self.coeffs):
                acc = acc * t + c
            return acc
        r_c, radius, z_c = self.params
        u = radius**2 - (t - z_c) * (t - z_c)
        return u.sqrt() + r_c

    def jet(self, z: float, order: int = 4) -> np.ndarray:
        """Array [f, f', ..., f^(order)] at z, exact for the descriptor."""
        self.require_inside(z)
        return self.taylor(z, order).derivatives()

    def require_inside(self, z: float) -> None:
        z_minus, z_plus = self.interval
        tol = 1e-12 * (1 + abs(z_minus) + abs(z_plus))
        if not (z_minus - tol <= z <= z_plus + tol):
            raise DomainError(f"z = {z} outside [{z_minus}, {z_plus}]")

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    # serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "interval": list(self.interval),
            "E": self.E,
            "nu": self.nu,
        }
        if self.kind in ("polynomial", "affine"):
            doc["coeffs"] = list(self.coeffs)
        else:
            doc["params"] = list(self.params)
        if self.name:
            doc["name"] = self.name
        return doc

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "ShellProfile":
        kind = doc["kind"]
        kwargs = dict(
            kind=kind,
            interval=tuple(float(v) for v in doc["interval"]),
            E=float(doc.get("E", 1.0)),
            nu=float(doc.get("nu", 0.3)),
            name=doc.get("name", ""),
        )
        if kind in ("polynomial", "affine"):
            kwargs["coeffs"] = tuple(float(v) for v in doc["coeffs"])
        else:
            kwargs["params"] = tuple(float(v) for v in doc["params"])
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "ShellProfile":
        return cls.from_dict(json.loads(text))


def preset(model_id: str) -> ShellProfile:
    """Built-in model profiles, all with E = 1 and nu = 0.3.

    A: cylinder f = 2 on (-1, 1)
    B: cone f = 1.5 - 0.5 z on (-1, 1)
    D: toroidal barrel f = -1 + sqrt(4 - z^2) on (-1, 1)
    H: Gauss barrel f = 1 - z^2/8 - z^4/16 on (-1, 1)
    L: Airy barrel, same f as H on (0.5, 1.5)
    """
    mid = model_id.strip().upper()
    if mid == "A":
        return ShellProfile("affine", (-1.0, 1.0), coeffs=(2.0,), name="A")
    if mid == "B":
        return ShellProfile("affine", (-1.0, 1.0), coeffs=(1.5, -0.5), name="B")
    if mid == "D":
        return ShellProfile("circular_arc", (-1.0, 1.0), params=(-1.0, 2.0, 0.0), name="D")
    if mid == "H":
        return ShellProfile(
            "polynomial", (-1.0, 1.0), coeffs=(1.0, 0.0, -0.125, 0.0, -0.0625), name="H"
        )
    if mid == "L":
        return ShellProfile(
            "polynomial", (0.5, 1.5), coeffs=(1.0, 0.0, -0.125, 0.0, -0.0625), name="L"
        )
    raise GeometryError(f"unknown model id {model_id!r} (expected one of A, B, D, H, L)")
