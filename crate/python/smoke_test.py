"""Smoke test for the pyshapeparts extension module."""

import math
import sys

import pyshapeparts as sp


def dumbbell(step=0.01):
    """Two unit lobes joined by a narrow neck, counterclockwise."""
    w, c = 0.06, 1.125
    a = math.asin(w)
    span = 2 * math.pi - 2 * a
    k = int(span / step)
    left = [(-c + math.cos(a + span * s / k), math.sin(a + span * s / k)) for s in range(k + 1)]
    right = [
        (c + math.cos(math.pi + a + span * s / k), math.sin(math.pi + a + span * s / k))
        for s in range(k + 1)
    ]
    pts = left + right
    return pts


def main():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    a = sp.visibility_matrix(square)
    assert a == [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]], a

    pts = sp.resample(dumbbell(), 80)
    assert len(pts) == 80
    r = sp.estimate_radius(pts)
    assert 1 <= r <= 39, r
    d = sp.diffusion_matrix(pts, r)
    assert all(d[i][j] == d[j][i] for i in range(80) for j in range(80))
    clusters, unassigned = sp.extract(d)
    covered = sum(length for _, length, _ in clusters) + len(unassigned)
    assert covered == 80, covered

    assert sp.rand_index([1, 1, 2, 2], [1, 1, 2, 2]) == 1.0

    rec = sp.analyze(dumbbell(), samples=64, null_graphs=20, seed=3)
    again = sp.analyze(dumbbell(), samples=64, null_graphs=20, seed=3)
    assert rec == again
    assert rec["point_count"] == 64 and rec["k"] == len(rec["clusters"])
    assert "samples" not in rec["threshold"]

    try:
        sp.resample(square, 4)
    except sp.ShapePartsError:
        pass
    else:
        raise AssertionError("resampling below 8 points must fail")

    print(f"ok: radius {r}, {len(clusters)} clusters, record k={rec['k']}")


if __name__ == "__main__":
    sys.exit(main())
