"""Orthogonal projection of points on a spherical Earth onto a best-fit plane."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, InputError

EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class PlanarFrame:
    """Plane through ``origin`` spanned by ``axis_u`` (east) and ``axis_v`` (north)."""

    origin: np.ndarray
    axis_u: np.ndarray
    axis_v: np.ndarray
    normal: np.ndarray
    rms_residual: float

    def to_dict(self) -> dict:
        return {
            "origin": self.origin.tolist(),
            "axis_u": self.axis_u.tolist(),
            "axis_v": self.axis_v.tolist(),
            "normal": self.normal.tolist(),
            "rms_residual": self.rms_residual,
        }


def _check_latlon(lat, lon):
    lat = np.asarray(lat, dtype=float)
    lon = np.asarray(lon, dtype=float)
    if np.any(~np.isfinite(lat)) or np.any(np.abs(lat) > 90) or np.any(np.abs(lon) > 180):
        raise InputError("latitude must lie in [-90, 90] and longitude in [-180, 180]")
    return lat, lon


def to_ecef(lat_deg, lon_deg, earth_radius_km: float = EARTH_RADIUS_KM) -> np.ndarray:
    """Earth-centered cartesian coordinates (km) of points on a sphere.

    Accepts scalars or arrays; the last axis of the result holds (x, y, z).
    """
    lat, lon = _check_latlon(lat_deg, lon_deg)
    lat, lon = np.radians(lat), np.radians(lon)
    cl = np.cos(lat)
    return earth_radius_km * np.stack([cl * np.cos(lon), cl * np.sin(lon), np.sin(lat)], axis=-1)


def to_latlon(xyz) -> np.ndarray:
    """Inverse of :func:`to_ecef` up to radius: (lat_deg, lon_deg) of each direction."""
    xyz = np.asarray(xyz, dtype=float)
    lat = np.degrees(np.arctan2(xyz[..., 2], np.hypot(xyz[..., 0], xyz[..., 1])))
    lon = np.degrees(np.arctan2(xyz[..., 1], xyz[..., 0]))
    return np.stack([lat, lon], axis=-1)


def fit_plane(points) -> PlanarFrame:
    """Least-squares plane through the centroid of 3D points.

    The normal is the direction of least variance, oriented away from the
    Earth's center when the centroid is off-origin. ``axis_u`` is local east
    at the centroid projected into the plane; ``axis_v = normal x axis_u``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) < 3:
        raise DegenerateGeometryError("plane fit needs at least 3 points in 3D")
    origin = pts.mean(axis=0)
    centered = pts - origin
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(s[0], np.abs(centered).max())
    if s[1] <= 1e-12 * scale:
        raise DegenerateGeometryError("points are collinear")
    normal = vt[2]
    if np.dot(normal, origin) < 0 or (
        np.dot(normal, origin) == 0 and normal[np.argmax(np.abs(normal))] < 0
    ):
        normal = -normal

    lon = np.arctan2(origin[1], origin[0])
    east = np.array([-np.sin(lon), np.cos(lon), 0.0])
    u = east - np.dot(east, normal) * normal
    if np.linalg.norm(u) < 1e-9:
        u = vt[0]
    u = u / np.linalg.norm(u)
    v = np.cross(normal, u)
    v = v / np.linalg.norm(v)
    residual = centered @ normal
    rms = float(np.sqrt(np.mean(residual**2)))
    return PlanarFrame(origin, u, v, normal, rms)


def project(points, frame: PlanarFrame) -> np.ndarray:
    """Planar (x, y) km coordinates of 3D points in ``frame``."""
    rel = np.asarray(points, dtype=float) - frame.origin
    return np.stack([rel @ frame.axis_u, rel @ frame.axis_v], axis=-1)


def great_circle_km(p, q, earth_radius_km: float = EARTH_RADIUS_KM) -> np.ndarray:
    """Great-circle distances between (lat, lon) degree pairs."""
    a, b = to_ecef(*np.moveaxis(np.asarray(p, float), -1, 0)), to_ecef(*np.moveaxis(np.asarray(q, float), -1, 0))
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    return earth_radius_km * np.arctan2(cross, dot)


def project_latlon(latlon, earth_radius_km: float = EARTH_RADIUS_KM):
    """Fit a plane to (lat, lon) points and project them; returns (xy, frame)."""
    latlon = np.asarray(latlon, dtype=float)
    xyz = to_ecef(latlon[:, 0], latlon[:, 1], earth_radius_km)
    frame = fit_plane(xyz)
    return project(xyz, frame), frame


def project_graph(graph):
    """Attach planar coordinates to every vertex of ``graph``; returns (graph, frame)."""
    if not graph.has_geo():
        raise InputError("all vertices need geographic coordinates for projection")
    xy, frame = project_latlon([v.geo for v in graph.vertices])
    return graph.with_planar(xy), frame
