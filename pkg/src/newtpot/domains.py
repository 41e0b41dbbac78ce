"""Bounded planar domains: discs, axis-aligned ellipses and simple polygons."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError

SHAPES = ("disc", "ellipse", "polygon")
_KEYS = {
    "disc": {"shape", "center", "radius"},
    "ellipse": {"shape", "center", "axes"},
    "polygon": {"shape", "center", "vertices"},
}


def _segments_cross(p, q, r, s) -> bool:
    """Proper or touching intersection of closed segments pq and rs."""

    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if v == 0 else (1 if v > 0 else -1)

    def on_seg(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    o1, o2, o3, o4 = orient(p, q, r), orient(p, q, s), orient(r, s, p), orient(r, s, q)
    if o1 != o2 and o3 != o4:
        return True
    return (
        (o1 == 0 and on_seg(p, q, r))
        or (o2 == 0 and on_seg(p, q, s))
        or (o3 == 0 and on_seg(r, s, p))
        or (o4 == 0 and on_seg(r, s, q))
    )


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _circle_through(points) -> tuple[np.ndarray, float] | None:
    if len(points) == 2:
        c = 0.5 * (points[0] + points[1])
        return c, float(np.linalg.norm(points[0] - c))
    a, b, c = points
    d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
    if abs(d) < 1e-14 * max(1.0, float(np.abs(points).max()) ** 2):
        return None
    sa, sb, sc = a @ a, b @ b, c @ c
    ux = (sa * (b[1] - c[1]) + sb * (c[1] - a[1]) + sc * (a[1] - b[1])) / d
    uy = (sa * (c[0] - b[0]) + sb * (a[0] - c[0]) + sc * (b[0] - a[0])) / d
    centre = np.array([ux, uy])
    return centre, float(np.linalg.norm(a - centre))


@dataclass(frozen=True)
class Domain2D:
    """A planar region; build with :meth:`disc`, :meth:`ellipse` or :meth:`polygon`."""

    shape: str
    center: tuple[float, float] = (0.0, 0.0)
    radius: float | None = None
    axes: tuple[float, float] | None = None
    vertices: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise DomainError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if not all(math.isfinite(c) for c in self.center):
            raise DomainError("center must be finite")
        if self.shape == "disc":
            if self.radius is None or not (math.isfinite(self.radius) and self.radius > 0):
                raise DomainError(f"disc radius must be positive, got {self.radius}")
        elif self.shape == "ellipse":
            if self.axes is None or len(self.axes) != 2 or not all(
                math.isfinite(x) and x > 0 for x in self.axes
            ):
                raise DomainError(f"ellipse semi-axes must be two positive numbers, got {self.axes}")
        else:
            self._check_polygon()

    def _check_polygon(self):
        v = self.vertices
        if v is None or len(v) < 3:
            raise DomainError("a polygon needs at least 3 vertices")
        arr = np.asarray(v, dtype=float)
        if arr.shape != (len(v), 2) or not np.all(np.isfinite(arr)):
            raise DomainError("polygon vertices must be finite (x, y) pairs")
        n = len(arr)
        for i, j in itertools.combinations(range(n), 2):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(arr[i], arr[(i + 1) % n], arr[j], arr[(j + 1) % n]):
                raise DomainError(f"polygon is not simple: edges {i} and {j} intersect")
        if np.any(np.linalg.norm(arr - np.roll(arr, -1, axis=0), axis=1) == 0):
            raise DomainError("polygon has repeated consecutive vertices")
        area = _signed_area(arr)
        if area <= 0:
            raise DomainError("polygon vertices must be counterclockwise with positive area")

    # -- constructors ------------------------------------------------------

    @classmethod
    def disc(cls, radius: float, center=(0.0, 0.0)) -> "Domain2D":
        return cls("disc", tuple(map(float, center)), radius=float(radius))

    @classmethod
    def ellipse(cls, axes, center=(0.0, 0.0)) -> "Domain2D":
        return cls("ellipse", tuple(map(float, center)), axes=tuple(map(float, axes)))

    @classmethod
    def polygon(cls, vertices) -> "Domain2D":
        verts = tuple(tuple(map(float, p)) for p in vertices)
        arr = np.asarray(verts, dtype=float)
        if arr.ndim != 2 or arr.shape[1:] != (2,):
            raise DomainError("polygon vertices must be (x, y) pairs")
        return cls("polygon", tuple(map(float, arr.mean(axis=0))), vertices=verts)

    @classmethod
    def square(cls, side: float, center=(0.0, 0.0)) -> "Domain2D":
        h = 0.5 * side
        cx, cy = center
        return cls.polygon([(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)])

    # -- geometry ----------------------------------------------------------

    @property
    def vertex_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @property
    def area(self) -> float:
        if self.shape == "disc":
            return math.pi * self.radius**2
        if self.shape == "ellipse":
            return math.pi * self.axes[0] * self.axes[1]
        return _signed_area(self.vertex_array)

    @property
    def is_convex(self) -> bool:
        if self.shape != "polygon":
            return True
        v = self.vertex_array
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
        return bool(np.all(cross >= -1e-14 * np.abs(e).max() ** 2))

    @property
    def max_radius(self) -> float:
        """Radius of the smallest disc containing the domain."""
        return self.circumscribed_disc()[1]

    def inscribed_disc(self) -> tuple[tuple[float, float], float]:
        """Largest disc inside the domain (centre, radius); convex polygons only."""
        if self.shape == "disc":
            return self.center, self.radius
        if self.shape == "ellipse":
            return self.center, min(self.axes)
        if not self.is_convex:
            raise DomainError("inscribed disc is only available for convex polygons")
        v = self.vertex_array
        e = np.roll(v, -1, axis=0) - v
        normal = np.column_stack([e[:, 1], -e[:, 0]])
        normal /= np.linalg.norm(normal, axis=1)[:, None]
        # maximise r subject to n_i . x + r <= n_i . v_i (Chebyshev centre)
        a_ub = np.column_stack([normal, np.ones(len(v))])
        b_ub = np.einsum("ij,ij->i", normal, v)
        res = linprog([0.0, 0.0, -1.0], A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * 2 + [(0, None)])
        if not res.success:
            raise DomainError(f"inscribed disc LP failed: {res.message}")
        x, y, r = res.x
        return (float(x), float(y)), float(r)

    def circumscribed_disc(self) -> tuple[tuple[float, float], float]:
        """Smallest enclosing disc (centre, radius)."""
        if self.shape == "disc":
            return self.center, self.radius
        if self.shape == "ellipse":
            return self.center, max(self.axes)
        pts = self.vertex_array
        best = None
        tol = 1e-12 * float(np.abs(pts).max() + 1.0)
        for size in (2, 3):
            for combo in itertools.combinations(pts, size):
                circle = _circle_through(np.array(combo))
                if circle is None:
                    continue
                c, r = circle
                if np.all(np.linalg.norm(pts - c, axis=1) <= r + tol) and (best is None or r < best[1]):
                    best = (c, r)
        c, r = best
        return (float(c[0]), float(c[1])), float(r)

    def contains(self, points, tol: float = 1e-9) -> np.ndarray:
        """Boolean mask of points inside or on the boundary (relative ``tol``)."""
        p = np.atleast_2d(np.asarray(points, dtype=float))
        c = np.asarray(self.center)
        if self.shape == "disc":
            return np.linalg.norm(p - c, axis=1) <= self.radius * (1.0 + tol)
        if self.shape == "ellipse":
            q = (p - c) / np.asarray(self.axes)
            return np.einsum("ij,ij->i", q, q) <= (1.0 + tol) ** 2
        v = self.vertex_array
        w = np.roll(v, -1, axis=0)
        scale = tol * float(np.ptp(v, axis=0).max())
        inside = np.zeros(len(p), dtype=bool)
        on_edge = np.zeros(len(p), dtype=bool)
        for a, b in zip(v, w):
            # ray casting towards +x
            crosses = (a[1] > p[:, 1]) != (b[1] > p[:, 1])
            with np.errstate(divide="ignore", invalid="ignore"):
                xint = a[0] + (p[:, 1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            inside ^= crosses & (p[:, 0] < xint)
            d = b - a
            r = p - a
            t = (r @ d) / (d @ d)
            # perpendicular distance from the cross product: exact for points on axis-aligned edges
            perp = np.abs(d[0] * r[:, 1] - d[1] * r[:, 0]) / math.hypot(*d)
            ends = np.minimum(np.linalg.norm(r, axis=1), np.linalg.norm(p - b, axis=1))
            dist = np.where((t >= 0.0) & (t <= 1.0), perp, ends)
            on_edge |= dist <= scale
        return inside | on_edge

    def boundary_samples(self, count: int = 256) -> np.ndarray:
        """Points on the boundary (polygons: vertices plus evenly spaced edge points)."""
        if count < 3:
            raise DomainError("need at least 3 boundary samples")
        c = np.asarray(self.center)
        if self.shape in ("disc", "ellipse"):
            t = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
            ax = (self.radius, self.radius) if self.shape == "disc" else self.axes
            return c + np.column_stack([ax[0] * np.cos(t), ax[1] * np.sin(t)])
        v = self.vertex_array
        per_edge = max(1, count // len(v))
        s = np.arange(per_edge) / per_edge
        w = np.roll(v, -1, axis=0)
        return np.concatenate([a + s[:, None] * (b - a) for a, b in zip(v, w)])

    def scaled(self, factor: float) -> "Domain2D":
        """Image under x -> factor * x (the centre moves too)."""
        if not factor > 0:
            raise DomainError(f"scale factor must be positive, got {factor}")
        c = (self.center[0] * factor, self.center[1] * factor)
        if self.shape == "disc":
            return Domain2D.disc(self.radius * factor, c)
        if self.shape == "ellipse":
            return Domain2D.ellipse((self.axes[0] * factor, self.axes[1] * factor), c)
        return Domain2D.polygon([(x * factor, y * factor) for x, y in self.vertices])

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        out = {"shape": self.shape, "center": list(self.center)}
        if self.shape == "disc":
            out["radius"] = self.radius
        elif self.shape == "ellipse":
            out["axes"] = list(self.axes)
        else:
            out["vertices"] = [list(p) for p in self.vertices]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Domain2D":
        if not isinstance(data, dict):
            raise DomainError("domain description must be a JSON object")
        shape = data.get("shape")
        if shape not in SHAPES:
            raise DomainError(f"unknown shape {shape!r}; expected one of {SHAPES}")
        extra = set(data) - _KEYS[shape]
        if extra:
            raise DomainError(f"unknown field(s) for {shape}: {sorted(extra)}")
        try:
            center = tuple(float(x) for x in data.get("center", (0.0, 0.0)))
            if len(center) != 2:
                raise DomainError("center must be [x, y]")
            if shape == "disc":
                return cls.disc(float(data["radius"]), center)
            if shape == "ellipse":
                return cls.ellipse(tuple(float(x) for x in data["axes"]), center)
            dom = cls.polygon(data["vertices"])
        except KeyError as exc:
            raise DomainError(f"missing field {exc.args[0]!r} for {shape}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed {shape} description: {exc}") from None
        return dom

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Domain2D":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)
