from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spencerlab.errors import PreconditionError
from spencerlab.microlocal import (
    CovectorSample,
    ConeSpec,
    Region,
    all_roots_real,
    characteristic_ideal,
    classify_mixed,
    cones_intersect_trivially,
    default_grid,
    external_product_char,
    factorization_check,
    is_elliptic,
    is_hyperbolic,
    noncharacteristic_restrict,
    sturm_distinct_real_roots,
)
from spencerlab.poly import MultiPoly
from spencerlab.systems import (
    cauchy_riemann_system,
    dx_system,
    gradient_system,
    heat_system,
    laplace_system,
    make_system,
    tricomi_system,
    wave_system,
)


# -- characteristic ideals -------------------------------------------------------


def test_char_ideal_dx_on_line():
    cv = characteristic_ideal(dx_system(1))
    assert len(cv.ideal.generators) == 1
    assert cv.ideal.generators[0] == MultiPoly.variable(cv.ambient, "xi_x")
    assert cv.dimension == 1  # the zero section over the line


def test_char_ideal_laplace():
    cv = characteristic_ideal(laplace_system())
    xi1 = MultiPoly.variable(cv.ambient, "xi_x")
    xi2 = MultiPoly.variable(cv.ambient, "xi_y")
    assert cv.ideal.generators == [xi1 * xi1 + xi2 * xi2]
    assert cv.dimension == 3
    assert cv.conic


def test_char_ideal_wave():
    cv = characteristic_ideal(wave_system())
    tau = MultiPoly.variable(cv.ambient, "xi_t")
    xi = MultiPoly.variable(cv.ambient, "xi_x")
    assert cv.ideal.generators == [tau * tau - xi * xi]


def test_char_ideal_gradient_zero_section():
    cv = characteristic_ideal(gradient_system())
    assert cv.dimension == 2  # x free, xi = 0
    assert len(cv.ideal.generators) == 2


def test_conicity_all_systems():
    for builder in (laplace_system, wave_system, heat_system, tricomi_system):
        assert characteristic_ideal(builder()).conic


# -- Sturm machinery ---------------------------------------------------------------


def test_sturm_counts():
    # (t-1)(t+2) = t^2 + t - 2
    assert sturm_distinct_real_roots([Fraction(-2), Fraction(1), Fraction(1)]) == 2
    # t^2 + 1
    assert sturm_distinct_real_roots([Fraction(1), Fraction(0), Fraction(1)]) == 0
    # t^2
    assert sturm_distinct_real_roots([Fraction(0), Fraction(0), Fraction(1)]) == 1


def test_real_rootedness_weak_vs_strict():
    double_root = [Fraction(0), Fraction(0), Fraction(1)]  # t^2
    assert all_roots_real(double_root, strict=False)
    assert not all_roots_real(double_root, strict=True)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4))
def test_products_of_linear_factors_are_real_rooted(roots):
    poly = [Fraction(1)]
    for r in roots:
        # multiply by (t - r)
        poly = [Fraction(0)] + poly
        for i in range(len(poly) - 1):
            poly[i] -= r * poly[i + 1]
    assert all_roots_real(poly, strict=False)
    distinct = len(set(roots))
    assert sturm_distinct_real_roots(poly) == distinct


# -- ellipticity ---------------------------------------------------------------------


def test_laplace_elliptic_definite():
    ok, cert = is_elliptic(laplace_system())
    assert ok and cert["kind"] == "definite"


def test_heat_not_elliptic_counterexample():
    ok, cert = is_elliptic(heat_system())
    assert not ok
    assert cert["kind"] == "counterexample"
    assert cert["xi"] == ["1", "0"]


def test_cauchy_riemann_elliptic():
    ok, cert = is_elliptic(cauchy_riemann_system())
    assert ok and cert["kind"] == "saturation"


def test_wave_not_elliptic():
    ok, cert = is_elliptic(wave_system())
    assert not ok


# -- hyperbolicity --------------------------------------------------------------------


def test_wave_hyperbolic_in_time():
    rep = is_hyperbolic(wave_system(), (1, 0))
    assert rep.value is True
    assert rep.certificate["kind"] == "sturm"


def test_laplace_not_hyperbolic():
    rep = is_hyperbolic(laplace_system(), (1, 0))
    assert rep.value is False
    assert rep.certificate["kind"] == "sturm_counterexample"


def test_heat_degenerate():
    rep = is_hyperbolic(heat_system(), (1, 0))
    assert rep.value is None
    assert rep.status == "degenerate"


def test_zero_direction_rejected():
    with pytest.raises(PreconditionError):
        is_hyperbolic(wave_system(), (0, 0))


def test_hyperbolicity_scale_invariant():
    r1 = is_hyperbolic(wave_system(), (1, 0))
    r2 = is_hyperbolic(wave_system(), (3, 0))
    assert r1.value == r2.value is True


def test_elliptic_excludes_hyperbolic():
    grid = default_grid(laplace_system(), seed=3)
    ok, _ = is_elliptic(laplace_system(), grid)
    assert ok
    for theta in ((1, 0), (0, 1), (1, 1)):
        assert is_hyperbolic(laplace_system(), theta, grid).value is not True


# -- classification -----------------------------------------------------------------------


def _tricomi_grid():
    ys = [Fraction(v, 2) for v in (-4, -3, -2, -1, 0, 1, 2, 3, 4, 5)]
    xs = [Fraction(v) for v in range(10)]
    xis = [
        (Fraction(1), Fraction(0)),
        (Fraction(-1), Fraction(0)),
        (Fraction(0), Fraction(1)),
        (Fraction(0), Fraction(-1)),
        (Fraction(1), Fraction(1)),
        (Fraction(1), Fraction(-1)),
        (Fraction(2), Fraction(1)),
        (Fraction(1), Fraction(2)),
    ]
    grid = []
    for x in xs[:10]:
        for y in ys:
            for xi in xis[:8]:
                grid.append(CovectorSample((x, y), xi))
    return grid


def test_tricomi_classification_splits_at_fold():
    sys = tricomi_system()
    grid = _tricomi_grid()
    report = classify_mixed(sys, Region.everywhere(), grid, directions=[(0, 1)])
    for lab, sample in zip(report.labels, grid):
        y = sample.x[1]
        if y > 0:
            assert lab["label"] in ("elliptic", "characteristic")
            # on y > 0 the symbol is definite: never characteristic
            assert lab["label"] == "elliptic"
        elif y < 0:
            assert lab["label"] in ("hyperbolic", "characteristic")
        else:
            assert lab["label"] in ("degenerate", "characteristic")
    assert report.strata["elliptic"] > 0
    assert report.strata["hyperbolic"] > 0


def test_laplace_all_elliptic():
    grid = default_grid(laplace_system(), seed=1)
    report = classify_mixed(laplace_system(), Region.everywhere(), grid)
    assert set(report.strata) == {"elliptic"}


def test_wave_characteristic_covectors_in_cones():
    grid = [
        CovectorSample((0, 0), (1, 1)),
        CovectorSample((0, 0), (1, -1)),
        CovectorSample((0, 0), (-1, 1)),
        CovectorSample((0, 0), (-1, -1)),
        CovectorSample((0, 0), (1, 0)),
    ]
    lam = ConeSpec([(1, 1), (1, -1)], "closed")
    lam_p = ConeSpec([(-1, 1), (-1, -1)], "closed")
    report = classify_mixed(
        wave_system(), Region.everywhere(), grid, directions=[(1, 0)], cones=(lam, lam_p)
    )
    char_labels = [l for l in report.labels if l["label"] == "characteristic"]
    assert len(char_labels) == 4
    assert report.cone_check["union_covers_characteristics"]
    assert report.cone_check["trivial_intersection"]
    assert report.labels[4]["label"] == "hyperbolic"


def test_label_scale_invariance():
    sys = tricomi_system()
    a = CovectorSample((Fraction(0), Fraction(-1)), (Fraction(1), Fraction(1)))
    b = CovectorSample((Fraction(0), Fraction(-1)), (Fraction(3), Fraction(3)))
    report = classify_mixed(sys, Region.everywhere(), [a, b], directions=[(0, 1)])
    assert report.labels[0]["label"] == report.labels[1]["label"]


def test_region_precondition():
    region = Region([(MultiPoly.variable(("x", "y"), "y"), "gt")])
    bad = CovectorSample((0, -1), (1, 0))
    with pytest.raises(PreconditionError):
        classify_mixed(tricomi_system(), region, [bad])


# -- cones -------------------------------------------------------------------------------


def test_cone_membership():
    cone = ConeSpec([(1, 1), (1, -1)], "closed")
    assert cone.contains((1, 0))
    assert cone.contains((2, 1))
    assert not cone.contains((-1, 0))
    assert cone.contains((0, 0))


def test_open_cone_validation():
    with pytest.raises(PreconditionError):
        ConeSpec([(1, 0), (-1, 0)], "open-convex")


def test_cone_trivial_intersection():
    lam = ConeSpec([(1, 1), (1, -1)], "closed")
    lam_p = ConeSpec([(-1, 1), (-1, -1)], "closed")
    assert cones_intersect_trivially(lam, lam_p)
    assert not cones_intersect_trivially(lam, lam)


# -- restriction -------------------------------------------------------------------------


def test_laplace_restrict_to_axis():
    restricted, ok, cert = noncharacteristic_restrict(laplace_system(), [(1, 0)])
    assert ok
    assert restricted is not None
    cv = characteristic_ideal(restricted)
    # pullback symbol of the Laplacian to the x-axis is xi^2
    gen = cv.ideal.generators[0]
    assert gen.total_degree() == 2


def test_wave_restrict_to_initial_slice():
    restricted, ok, cert = noncharacteristic_restrict(wave_system(), [(0, 1)])
    assert ok and restricted is not None


def test_dx_restrict_to_zero_set():
    # d/dx restricted to {x = 0}: conormal dx, sigma(dx) = 1 != 0
    sys = make_system(("x", "y"), ("u",), [[(1, 0, (1, 0))]])
    restricted, ok, cert = noncharacteristic_restrict(sys, [(0, 1)])
    assert ok
    # the pullback symbol vanishes: restriction imposes no conditions on L
    assert restricted.equations == []


def test_characteristic_restriction_detected():
    # d/dy restricted to the y-axis: conormal dx, sigma(s dx) = 0 identically
    sys = make_system(("x", "y"), ("u",), [[(1, 0, (0, 1))]])
    restricted, ok, cert = noncharacteristic_restrict(sys, [(0, 1)])
    assert not ok
    assert cert["kind"] == "violating-conormal"
    assert restricted is None


@settings(max_examples=10, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_elliptic_restriction_noncharacteristic(a, b):
    if a == 0 and b == 0:
        return
    _, ok, _ = noncharacteristic_restrict(laplace_system(), [(a, b)])
    assert ok


# -- products / factorization ----------------------------------------------------------------


def test_external_product_dx_dx():
    cv, ok = external_product_char(dx_system(1), dx_system(1))
    assert ok
    assert cv.dimension == 2  # zero section of T*R^2


def test_external_product_laplace_laplace():
    cv, ok = external_product_char(laplace_system(), laplace_system())
    assert ok
    assert cv.dimension == 3 + 3


def test_external_product_dx_laplace():
    cv, ok = external_product_char(dx_system(1), laplace_system())
    assert ok
    assert cv.dimension == 1 + 3


def test_kunneth_dimension_additivity():
    for a, b in [
        (dx_system(1), wave_system()),
        (wave_system(), wave_system()),
        (laplace_system(), wave_system()),
    ]:
        cva = characteristic_ideal(a)
        cvb = characteristic_ideal(b)
        cv, ok = external_product_char(a, b)
        assert ok
        assert cv.dimension == cva.dimension + cvb.dimension


def test_factorization_dx():
    report = factorization_check(dx_system(1), max_copies=2)
    assert report["all_passed"]


def test_factorization_laplace_and_wave():
    for sys in (laplace_system(), wave_system()):
        report = factorization_check(sys, max_copies=3)
        assert report["all_passed"], report
