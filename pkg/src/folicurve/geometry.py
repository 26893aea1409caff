"""Numeric layer: center conversions, pointwise mean curvature, spacelike tests,
and constancy scans over a foliated hypersurface.

Profiles are duck-typed: any object with k_value(t), r_value(t) and
jet_values(t) -> (k, k', k'', r, r', r'') works (see exprlang.ProfileFunctions
and profiles.HermiteProfile).

Orientation convention: H is reported for the unit normal N = -grad f/|grad f|
with f increasing outward from the leaf center.  Under this convention a
vertical cylinder over a geodesic sphere of hyperbolic radius R has
H = -(n-1) coth(R) / n.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

from .identity import (
    GeometrySignature,
    RIEMANNIAN,
    neg_nH_S3,
    s_squared_reduced,
)
from .symexpr import Indeterminate

LEAF_TOL = 1e-9          # membership in the leaf sphere
DEGENERACY_TOL = 1e-14   # |S^2| below this is a degenerate normal

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidSphere(Exception):
    """Sphere data violates k > r > 0 (leaf leaves the open half-space)."""


class DegenerateNormal(Exception):
    """S^2 is not positive: the normal direction is degenerate or non-spacelike."""


class NotOnLeaf(Exception):
    """Point fails the leaf equation beyond tolerance."""


class NullGradient(Exception):
    """The gradient is null: neither spacelike nor timelike."""


class StepTooLarge(Exception):
    """Finite-difference truncation estimate exceeds the requested tolerance."""


@dataclass(frozen=True)
class FoliationJet:
    """2-jet of the Euclidean center/radius profile at height t."""

    t: float
    k: float
    k1: float
    k2: float
    r: float
    r1: float
    r2: float

    @classmethod
    def from_profile(cls, profile, t: float) -> "FoliationJet":
        k, k1, k2, r, r1, r2 = profile.jet_values(t)
        return cls(t=t, k=k, k1=k1, k2=k2, r=r, r1=r1, r2=r2)

    def require_valid(self) -> None:
        if not (self.k > self.r > 0):
            raise InvalidSphere(f"need k > r > 0 at t={self.t}, got k={self.k}, r={self.r}")

    def bindings(self, n: int) -> dict:
        return {
            Indeterminate.KAP: self.k,
            Indeterminate.KAP1: self.k1,
            Indeterminate.KAP2: self.k2,
            Indeterminate.RHO: self.r,
            Indeterminate.RHO1: self.r1,
            Indeterminate.RHO2: self.r2,
            Indeterminate.NU: float(n),
        }


@dataclass(frozen=True)
class HyperbolicCenter:
    K: float
    R: float


@dataclass(frozen=True)
class SurfacePoint:
    x: tuple[float, ...]
    t: float

    @property
    def xn(self) -> float:
        return self.x[-1]


def euclidean_to_hyperbolic(k: float, r: float) -> HyperbolicCenter:
    """K = sqrt(k^2 - r^2), R = ln((k+r)/(k-r)) / 2."""
    if r <= 0 or k <= r:
        raise InvalidSphere(f"need k > r > 0, got k={k}, r={r}")
    return HyperbolicCenter(
        K=math.sqrt(k * k - r * r),
        R=0.5 * math.log((k + r) / (k - r)),
    )


def hyperbolic_to_euclidean(center: HyperbolicCenter) -> tuple[float, float]:
    """Inverse conversion: k = K cosh R, r = K sinh R."""
    if center.K <= 0 or center.R <= 0:
        raise InvalidSphere(f"need K > 0 and R > 0, got K={center.K}, R={center.R}")
    return center.K * math.cosh(center.R), center.K * math.sinh(center.R)


def leaf_residual(p: SurfacePoint, jet: FoliationJet) -> float:
    tangential = sum(c * c for c in p.x[:-1])
    return tangential + (p.xn - jet.k) ** 2 - jet.r ** 2


def _require_on_leaf(p: SurfacePoint, jet: FoliationJet) -> None:
    res = leaf_residual(p, jet)
    if abs(res) > LEAF_TOL:
        raise NotOnLeaf(f"leaf equation residual {res} at x_n={p.xn}, t={p.t}")


def vertical_slot(p: SurfacePoint, jet: FoliationJet) -> float:
    """A = (x_n - k) k' + r r' evaluated at the point."""
    return (p.xn - jet.k) * jet.k1 + jet.r * jet.r1


def mean_curvature_at(
    p: SurfacePoint, jet: FoliationJet, n: int, sig: GeometrySignature
) -> float:
    """H = -(-nH*S^3 value)/(n S^3) via the verified symbolic polynomial."""
    _require_on_leaf(p, jet)
    bindings = jet.bindings(n)
    bindings[Indeterminate.X] = p.xn
    s2 = s_squared_reduced(sig).eval_numeric(bindings)
    if s2 <= DEGENERACY_TOL:
        raise DegenerateNormal(f"S^2 = {s2} at x_n={p.xn} ({sig.label})")
    value = neg_nH_S3(sig).eval_numeric(bindings)
    return -value / (n * s2 * math.sqrt(s2))


def is_spacelike(p: SurfacePoint, jet: FoliationJet) -> bool:
    """Lorentzian test: grad f timelike on the leaf, i.e. A^2 > x_n^2 r^2."""
    _require_on_leaf(p, jet)
    a = vertical_slot(p, jet)
    q = a * a - (p.xn * jet.r) ** 2
    if abs(q) <= DEGENERACY_TOL:
        raise NullGradient(f"null gradient at x_n={p.xn}, t={p.t}")
    return q > 0


def mean_curvature_fd(
    p: SurfacePoint,
    profile,
    n: int,
    sig: GeometrySignature,
    h: float = 1e-4,
    tol: float | None = None,
) -> float:
    """Independent oracle: central differences of the divergence, from pointwise
    f evaluations only.  Second-order accurate in h."""
    if not 1e-6 <= h <= 1e-2:
        raise ValueError(f"h must lie in [1e-6, 1e-2], got {h}")
    if p.xn - h <= 0:
        raise ValueError(f"point too close to the half-space boundary for h={h}")

    eps = sig.epsilon

    def f(y: list[float]) -> float:
        k = profile.k_value(y[n])
        r = profile.r_value(y[n])
        tangential = sum(c * c for c in y[: n - 1])
        return tangential + (y[n - 1] - k) ** 2 - r * r

    def divergence(step: float) -> float:
        def flux(y: list[float]) -> list[float]:
            grad = []
            for m in range(n + 1):
                yp = list(y); yp[m] += step
                ym = list(y); ym[m] -= step
                grad.append((f(yp) - f(ym)) / (2 * step))
            xn = y[n - 1]
            up = [xn * xn * g for g in grad[:n]] + [eps * grad[n]]
            inner = sum(g * u for g, u in zip(grad, up))
            squared = inner if eps > 0 else -inner
            if squared <= 0:
                raise DegenerateNormal(f"gradient not admissible at t={y[n]} ({sig.label})")
            norm = math.sqrt(squared)
            weight = xn ** (-n)
            return [weight * u / norm for u in up]

        base = list(p.x) + [p.t]
        total = 0.0
        for m in range(n + 1):
            yp = list(base); yp[m] += step
            ym = list(base); ym[m] -= step
            total += (flux(yp)[m] - flux(ym)[m]) / (2 * step)
        return p.xn ** n * total

    div = divergence(h)
    if tol is not None:
        fine = divergence(h / 2)
        estimate = abs(div - fine) / 3.0  # Richardson estimate for order 2
        if estimate > tol:
            raise StepTooLarge(f"truncation estimate {estimate} exceeds {tol} at h={h}")
    return -div / n


def leaf_points(jet: FoliationJet, n: int, count: int) -> list[SurfacePoint]:
    """Deterministic low-discrepancy sample of the leaf sphere.

    Golden-ratio angles set x_n = k + r cos(theta); the remaining radius goes
    into x_1 (rotations in the tangential coordinates are isometries, so this
    loses nothing).
    """
    points = []
    for j in range(count):
        u = math.fmod((j + 0.5) * _GOLDEN, 1.0)
        theta = math.pi * u
        xn = jet.k + jet.r * math.cos(theta)
        x1 = jet.r * math.sin(theta)
        coords = (x1,) + (0.0,) * (n - 2) + (xn,)
        points.append(SurfacePoint(x=coords, t=jet.t))
    return points


def dKdt_of_jet(jet: FoliationJet) -> float:
    """d/dt sqrt(k^2 - r^2) = (k k' - r r') / sqrt(k^2 - r^2)."""
    return (jet.k * jet.k1 - jet.r * jet.r1) / math.sqrt(jet.k ** 2 - jet.r ** 2)


@dataclass(frozen=True)
class ScanRow:
    t: float
    x_n: float
    H: float | None
    dKdt: float
    spacelike: bool | None


@dataclass(frozen=True)
class ScanReport:
    signature: str
    n: int
    t_start: float
    t_end: float
    leaves: int
    points_per_leaf: int
    mean_H: float | None
    max_dev: float | None
    max_dKdt: float
    spacelike_fraction: float | None
    rows: list[ScanRow] = field(repr=False)

    def summary(self) -> dict:
        return {
            "signature": self.signature,
            "n": self.n,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "leaves": self.leaves,
            "points_per_leaf": self.points_per_leaf,
            "mean_H": self.mean_H,
            "max_dev": self.max_dev,
            "max_dKdt": self.max_dKdt,
            "spacelike_fraction": self.spacelike_fraction,
        }

    def to_json(self) -> str:
        payload = self.summary()
        payload["rows"] = [
            {"t": row.t, "x_n": row.x_n, "H": row.H, "dKdt": row.dKdt, "spacelike": row.spacelike}
            for row in self.rows
        ]
        return json.dumps(payload)

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["t", "x_n", "H", "dKdt", "spacelike"])
            for row in self.rows:
                writer.writerow([
                    repr(row.t),
                    repr(row.x_n),
                    "" if row.H is None else repr(row.H),
                    repr(row.dKdt),
                    "" if row.spacelike is None else str(row.spacelike).lower(),
                ])


def constancy_scan(
    profile,
    t_range: tuple[float, float],
    n: int,
    sig: GeometrySignature,
    samples: int,
    points_per_leaf: int = 8,
) -> ScanReport:
    """Evaluate H on a leaves x points grid; report the constancy diagnostics."""
    if samples < 1:
        raise ValueError("samples must be positive")
    t0, t1 = t_range
    ts = [t0 + (t1 - t0) * i / (samples - 1) for i in range(samples)] if samples > 1 else [t0]

    rows: list[ScanRow] = []
    values: list[float] = []
    max_dkdt = 0.0
    spacelike_count = 0
    total_points = 0

    for t in ts:
        jet = FoliationJet.from_profile(profile, t)
        jet.require_valid()
        dkdt = dKdt_of_jet(jet)
        max_dkdt = max(max_dkdt, abs(dkdt))
        for point in leaf_points(jet, n, points_per_leaf):
            total_points += 1
            if sig is RIEMANNIAN:
                h_val = mean_curvature_at(point, jet, n, sig)
                rows.append(ScanRow(t, point.xn, h_val, dkdt, None))
                values.append(h_val)
                continue
            try:
                spacelike = is_spacelike(point, jet)
            except NullGradient:
                spacelike = False
            if spacelike:
                h_val = mean_curvature_at(point, jet, n, sig)
                values.append(h_val)
                spacelike_count += 1
                rows.append(ScanRow(t, point.xn, h_val, dkdt, True))
            else:
                rows.append(ScanRow(t, point.xn, None, dkdt, False))

    mean_h = sum(values) / len(values) if values else None
    max_dev = max(abs(v - mean_h) for v in values) if values else None
    fraction = spacelike_count / total_points if sig is not RIEMANNIAN else None
    return ScanReport(
        signature=sig.label,
        n=n,
        t_start=t0,
        t_end=t1,
        leaves=len(ts),
        points_per_leaf=points_per_leaf,
        mean_H=mean_h,
        max_dev=max_dev,
        max_dKdt=max_dkdt,
        spacelike_fraction=fraction,
        rows=rows,
    )
