import pytest

from contactcut.chart import (
    ChartError,
    DoubledSurface,
    PolygonPresentation,
    SurfaceSpec,
    double,
    make_bounded_surface,
)


def test_spec_rejects_disk():
    with pytest.raises(ChartError):
        SurfaceSpec(0, 1)


def test_spec_counts():
    s = SurfaceSpec(1, 2)
    assert s.arc_count == 3
    assert s.euler == -2


def test_annulus_word():
    F = make_bounded_surface(0, 2)
    assert F.word == (("a", 1, 1), ("s", 1), ("a", 1, -1), ("s", 2))
    assert len(F.boundary_circles) == 2


def test_one_holed_torus():
    F = make_bounded_surface(1, 1)
    assert len(F.word) == 8
    assert F.spec.arc_count == 2
    assert len(F.boundary_circles) == 1
    # all four segments on the single circle
    segs = {step.segment for step in F.boundary_circles[0]}
    assert segs == {1, 2, 3, 4}


@pytest.mark.parametrize(
    "p,b",
    [(0, 2), (0, 3), (0, 5), (1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (0, 9)],
)
def test_make_validates(p, b):
    F = make_bounded_surface(p, b)
    m = F.spec.arc_count
    assert m == 2 * p + b - 1
    assert len(F.boundary_circles) == b
    # rebuilding from the same word revalidates cleanly
    G = PolygonPresentation(F.spec, F.word)
    assert G == F


def test_bad_word_rejected():
    spec = SurfaceSpec(0, 2)
    # arc side repeated
    with pytest.raises(ChartError):
        PolygonPresentation(
            spec, (("a", 1, 1), ("s", 1), ("a", 1, 1), ("s", 2))
        )
    # wrong genus announced: glue a1+ to a1- the torus-like way needs p=0,b=2 word;
    # feeding the annulus word with a (1,1)-ish spec has the wrong length
    with pytest.raises(ChartError):
        PolygonPresentation(SurfaceSpec(1, 1), (("a", 1, 1), ("s", 1), ("a", 1, -1), ("s", 2)))


def test_planar_radial_structure():
    # canonical (0, b) chart: arc i joins the outer circle to hole i
    F = make_bounded_surface(0, 3)
    circles = F.boundary_circles
    sizes = sorted(len(c) for c in circles)
    assert sizes == [1, 1, 2]


def test_double_counts():
    for p, b in [(0, 2), (1, 1), (0, 3)]:
        F = make_bounded_surface(p, b)
        S = double(F)
        assert S.genus == F.spec.arc_count
        assert S.dividing_circle_count == b
        assert S.euler == 2 - 2 * S.genus


def test_segments_between_walk():
    F = make_bounded_surface(1, 1)
    circle = F.boundary_circles[0]
    segs = [step.segment for step in circle]
    a = segs[0]
    b = segs[1]
    ccw = F.segments_between(a, b, +1)
    assert len(ccw) == 1
    back = F.segments_between(b, a, -1)
    assert back == tuple(-l for l in reversed(ccw))


def test_boundary_parallel_letters_cross_each_incident_arc_once():
    F = make_bounded_surface(0, 3)
    for ci in range(3):
        letters = F.boundary_parallel_letters(ci)
        assert all(1 <= abs(l) <= 2 for l in letters)
    # outer circle of the radial chart meets both arcs
    outer = max(range(3), key=lambda ci: len(F.boundary_circles[ci]))
    assert sorted(abs(l) for l in F.boundary_parallel_letters(outer)) == [1, 2]
