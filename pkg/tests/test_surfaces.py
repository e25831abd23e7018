import math

import mpmath
import pytest

from soliton_spectra import surfaces
from soliton_spectra.errors import ValidationError
from soliton_spectra.surfaces import SurfaceData, kv_bound, yang_yau_bound


def kv_oracle(genus, rho=-1):
    with mpmath.workdps(60):
        s15 = mpmath.sqrt(15)
        ceil = -((-5 * genus) // 6)
        num = genus + (33 - 4 * s15) * ceil + 4 * (41 - 5 * s15)
        return -rho * num / (2 * (13 - s15) * (genus - 1))


def test_surface_validation():
    with pytest.raises(ValidationError):
        SurfaceData(1, -1.0)
    with pytest.raises(ValidationError):
        SurfaceData(2, 0.0)
    assert SurfaceData(3, -2.0).area == pytest.approx(4 * math.pi)


def test_yang_yau_examples():
    assert yang_yau_bound(SurfaceData(2, -1.0)) == 4.0
    assert yang_yau_bound(SurfaceData(46, -1.0)) == pytest.approx(16 / 15, rel=1e-15)
    assert yang_yau_bound(SurfaceData(9, -2.0)) == 2 * yang_yau_bound(SurfaceData(9, -1.0))


def test_gauss_bonnet_round_trip():
    for g in range(2, 60):
        s = SurfaceData(g, -0.7)
        assert yang_yau_bound(s) * s.area == pytest.approx(8 * math.pi * ((g + 3) // 2), rel=1e-14)


def test_kv_against_high_precision_oracle():
    for g in range(2, 101):
        assert kv_bound(SurfaceData(g, -1.0)) == pytest.approx(float(kv_oracle(g)), rel=1e-14)


def test_kv_examples():
    assert kv_bound(SurfaceData(46, -1.0)) == pytest.approx(0.992602465595, abs=1e-11)
    assert kv_bound(SurfaceData(41, -1.0)) == pytest.approx(1.01391655769, abs=1e-10)
    assert kv_bound(SurfaceData(2, -1.0)) > yang_yau_bound(SurfaceData(2, -1.0))


def test_kv_scale_invariant():
    for g in (2, 17, 46, 133):
        assert kv_bound(SurfaceData(g, -3.5)) / 3.5 == pytest.approx(kv_bound(SurfaceData(g, -1.0)), rel=1e-15)


def test_relaxed_bound_dominates_exact():
    for g in range(2, 200):
        s = SurfaceData(g, -1.0)
        assert surfaces.kv_bound_relaxed(s) >= kv_bound(s)


def test_threshold_report_against_oracle():
    rep = surfaces.genus_threshold(-1.0, 200)
    oracle_fail = [g for g in range(2, 201) if kv_oracle(g) >= 1]
    assert rep.minimal_genus == max(oracle_fail) + 1 == 42
    assert rep.failing_below_minimal == oracle_fail
    assert rep.first_genus_below == 42
    assert rep.sufficient_holds and rep.relaxed_holds and rep.yang_yau_always_above
    assert not rep.guard_flagged
    assert all(r.best == min(r.yang_yau, r.kv) for r in rep.rows)


def test_threshold_rho_scaling():
    a = surfaces.genus_threshold(-1.0, 120)
    b = surfaces.genus_threshold(-4.0, 120)
    assert a.minimal_genus == b.minimal_genus


def test_threshold_validation():
    with pytest.raises(ValidationError):
        surfaces.genus_threshold(-1.0, 45)
    with pytest.raises(ValidationError):
        surfaces.genus_threshold(1.0, 100)


def test_yang_yau_limit():
    ratio = yang_yau_bound(SurfaceData(10_000, -1.0))
    assert 1.0 < ratio < 1.001
