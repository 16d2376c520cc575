"""Circular-arc kernels.

Arcs are described by their curved length ``ell`` and half central angle
``theta``; curvature is ``2*theta/ell`` so a straight segment is simply
``theta == 0`` and no radius ever has to be infinite.
"""

import math

from .errors import NonPositiveRadius


def sinc(theta):
    """sin(theta)/theta, continuous at 0."""
    if abs(theta) < 1e-4:
        t2 = theta * theta
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0
    return math.sin(theta) / theta


def versine_ratio(theta):
    """(1 - cos(theta))/theta, continuous at 0."""
    if abs(theta) < 1e-4:
        t2 = theta * theta
        return theta / 2.0 - theta * t2 / 24.0
    return (1.0 - math.cos(theta)) / theta


def curvature(ell, theta):
    if ell <= 0.0:
        return math.inf if theta > 0.0 else 0.0
    return 2.0 * theta / ell


def radius(ell, theta):
    """Radius of an arc; ``math.inf`` for a straight segment."""
    if theta == 0.0:
        return math.inf
    return ell / (2.0 * theta)


def span_from_length(ell, theta):
    """Chord of an arc of length ``ell`` and half-angle ``theta``."""
    return ell * sinc(theta)


def sagitta_from_length(ell, theta):
    """Rise R(1 - cos theta) of an arc of length ``ell``."""
    return 0.5 * ell * versine_ratio(theta)


def arc_span(R, theta, chord=None):
    """Chord 2 R sin(theta).

    ``R = math.inf`` encodes zero curvature, in which case the straight
    segment's stored ``chord`` is returned unchanged.
    """
    if math.isinf(R):
        if chord is None:
            raise ValueError("zero-curvature arc needs its chord length")
        return chord
    if R <= 0.0:
        raise NonPositiveRadius(f"radius must be positive, got {R!r}")
    return 2.0 * R * math.sin(theta)


def arc_sagitta(R, theta):
    if math.isinf(R):
        return 0.0
    if R <= 0.0:
        raise NonPositiveRadius(f"radius must be positive, got {R!r}")
    return R * (1.0 - math.cos(theta))


def pouch_segment_area(R, theta):
    """Area of the circular segment with radius R and half-angle theta."""
    if math.isinf(R):
        return 0.0
    if R <= 0.0:
        raise NonPositiveRadius(f"radius must be positive, got {R!r}")
    return R * R * (theta - math.sin(theta) * math.cos(theta))


def segment_area_from_length(ell, theta):
    """Segment area in terms of arc length; finite as theta -> 0."""
    if theta == 0.0 or ell == 0.0:
        return 0.0
    R = ell / (2.0 * theta)
    return pouch_segment_area(R, theta)


def polygon_area(points):
    """Shoelace area of a closed polygon (counter-clockwise positive)."""
    total = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * total
