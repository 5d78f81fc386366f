"""Smoke test for the tractrix_lab extension module.

Build and install first:

    pip install --no-build-isolation -e crates/python
    python3 python/smoke_test.py
"""

import math

import tractrix_lab as tl


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    circle = tl.Track.circle(2.0)
    assert circle.closed and circle.convex and circle.geometry == "euclidean"
    close(circle.total_length, 4 * math.pi, 1e-12)
    close(circle.area(), 4 * math.pi, 1e-9)

    # equilibrium steering angle: the rear wheel circles at radius sqrt(3)
    rear = tl.rear_track(circle, 1.0, math.pi / 6)
    radius = max(abs(math.hypot(*p) - math.sqrt(3)) for p in rear["points"])
    assert radius < 1e-6, radius

    report = tl.monodromy(circle, 1.0)
    assert report.kind == "hyperbolic"
    close(report.trace, 2 * math.cosh(math.pi * math.sqrt(3)), 1e-6 * report.trace)
    m = report.map
    for a in report.fixed_angles:
        close(math.remainder(m.apply(a) - a, 2 * math.pi), 0.0, 1e-9)

    q = tl.MoebiusMap.rotation(0.4)
    assert q.classify() == "elliptic"
    assert q.compose(q.inverse()).distance(tl.MoebiusMap([[1, 0], [0, 1]])) < 1e-12

    line = tl.Track.line(40.0, start=(0.0, 1.0))
    close(abs(tl.tractrix_area(line, 1.0, math.pi / 2)), math.pi / 2, 1e-6)

    reading = tl.planimeter(tl.Track.ellipse(2.0, 1.0), 20.0, start="centroid")
    close(reading["estimate"], 2 * math.pi, 1e-2)

    menzin = tl.menzin_verify(tl.Track.circle(1.0))
    assert menzin["bound_check"]
    close(menzin["ell0"], 1.0, 1e-5)

    cap = tl.Track.geodesic_circle(math.pi / 3, "spherical")
    hpz = tl.hpz_verify(cap, math.pi / 6)
    assert hpz["applicable"] and hpz["class"] == "hyperbolic"

    n = 64
    s = [2 * math.pi * j / n for j in range(n)]
    ident = tl.loop_identity(1.0, [2 * math.cos(u) for u in s], [math.sin(u) for u in s], list(s))
    close(ident["lhs"], ident["rhs"], 1e-9)

    twice = tl.Track.circle(math.sqrt(3) / 2, traversals=2)
    stars = tl.stargazing_angles(twice, 0.7)
    close(math.remainder(stars[-1] - 0.7, 2 * math.pi), 0.0, 1e-6)

    track = tl.Track.from_json(circle.to_json())
    close(track.total_length, circle.total_length, 0.0)

    try:
        tl.Track.circle(-1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative radius accepted")

    print("tractrix_lab smoke test passed")


if __name__ == "__main__":
    main()
