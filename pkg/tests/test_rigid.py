import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soliton_spectra import rigid
from soliton_spectra.errors import IncompleteSpectrumError, ValidationError
from soliton_spectra.factors import FactorSpectrum, load_factor_spectrum, sphere_spectrum, trivial_factor
from soliton_spectra.spectra import DiscreteSpectrum, ScalarValue, SpectralLine, minkowski_sum

BOLZA = {
    "name": "bolza", "dim": 2, "rho": -1.0,
    "eigenvalues": [{"value": 0.0, "multiplicity": 1}, {"value": 3.8, "multiplicity": 3}],
    "complete_below": 4.0,
}


def table(lines):
    return [(l.value.value(), l.multiplicity) for l in lines]


def synthetic(k, rho, second, mult, cb=None):
    lines = (SpectralLine(ScalarValue.rational(0), 1), SpectralLine(ScalarValue.real(second), mult))
    return FactorSpectrum("synthetic", k, rho, lines, cb if cb is not None else second + 1.0)


def test_shrinker_s2_r2():
    model = rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 1.0)
    s = rigid.rigid_spectrum(model, 2.5)
    assert table(s) == [(0, 1), (1, 2), (2, 6)]
    assert s[2].provenance == ((0, 2), (1, 0))
    assert all(l.value.is_exact for l in s)


def test_bolza_expander():
    model = rigid.SolitonModel(load_factor_spectrum(BOLZA), 4, -1.0)
    s = rigid.rigid_spectrum(model, 3.5)
    assert table(s) == [(2, 1), (3, 2)]
    second = rigid.second_eigenvalue_case(model)
    assert (second.value.value(), second.multiplicity, second.case) == (3, 2, "gaussian")


def test_pure_gaussian_expander():
    model = rigid.SolitonModel(trivial_factor(-1.0), 2, -1.0)
    s = rigid.rigid_spectrum(model, 7.0)
    assert table(s) == [(2, 1), (3, 2), (4, 3), (5, 4), (6, 5)]
    model = rigid.SolitonModel(trivial_factor(-0.5), 3, -0.5)
    s = rigid.rigid_spectrum(model, 4.0)
    assert [l.multiplicity for l in s] == [math.comb(P + 2, 2) for P in range(5)]
    assert [l.value.as_fraction() for l in s] == [Fraction(3 + P, 2) for P in range(5)]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_gaussian_block_equals_repeated_sum(m):
    rho = -1.5
    one_d = DiscreteSpectrum(
        tuple(SpectralLine(ScalarValue.rational(1 + p, abs(rho)), 1, ((0, p),)) for p in range(12)),
        abs(rho) * 13,
    )
    total = one_d
    for _ in range(m - 1):
        total = minkowski_sum(total, one_d)
    block = rigid.gaussian_block(m, rho, total.complete_below)
    offset = abs(rho) * m
    assert table(block) == table(total)
    assert all(l.value.value() == offset + abs(rho) * P for P, l in enumerate(block))


def test_degree_block_multiplicity_counts_multi_indices():
    for m in range(1, 5):
        for P in range(8):
            count = sum(1 for idx in product(range(P + 1), repeat=m) if sum(idx) == P)
            assert rigid.degree_block_multiplicity(P, m) == count


def test_certified_bound_enforced():
    model = rigid.SolitonModel(load_factor_spectrum(BOLZA), 4, -1.0)
    assert model.certified_bound() == 6.0
    with pytest.raises(IncompleteSpectrumError) as info:
        rigid.rigid_spectrum(model, 6.5)
    assert info.value.cutoff == 6.0


def test_model_validation():
    bolza = load_factor_spectrum(BOLZA)
    with pytest.raises(ValidationError):
        rigid.SolitonModel(bolza, 2, -1.0)  # n must exceed k
    with pytest.raises(ValidationError):
        rigid.SolitonModel(bolza, 4, -2.0)  # factor rho mismatch
    with pytest.raises(ValidationError):
        rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 0.0)
    with pytest.raises(ValidationError):
        rigid.second_eigenvalue_case(rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 1.0))


def test_second_eigenvalue_mixed_case():
    # lambda_2 of the factor equals -rho: the Gaussian and factor lines coincide
    model = rigid.SolitonModel(synthetic(2, -1.0, 1.0, 4), 5, -1.0)
    got = rigid.second_eigenvalue_case(model)
    assert (got.value.value(), got.multiplicity, got.case) == (4.0, 7, "mixed")
    line = rigid.first_lines(model, 2)[1]
    assert (line.value.value(), line.multiplicity) == (4.0, 7)


def test_second_eigenvalue_factor_case():
    model = rigid.SolitonModel(synthetic(2, -1.0, 0.5, 2), 4, -1.0)
    got = rigid.second_eigenvalue_case(model)
    assert (got.value.value(), got.multiplicity, got.case) == (2.5, 2, "factor")


@settings(max_examples=250, deadline=None)
@given(
    rho=st.sampled_from([-0.5, -1.0, -1.5, -2.0, -3.0]),
    k=st.integers(1, 4),
    m=st.integers(1, 4),
    offset=st.sampled_from([-0.4, -0.1, 0.0, 0.1, 0.7]),
    mult=st.integers(1, 8),
    extra=st.floats(0.05, 3.0),
)
def test_trichotomy_matches_enumeration(rho, k, m, offset, mult, extra):
    second = -rho * (1 + offset)
    model = rigid.SolitonModel(synthetic(k, rho, second, mult, second + extra), k + m, rho)
    got = rigid.second_eigenvalue_case(model)
    line = rigid.first_lines(model, 2)[1]
    assert got.value == line.value and got.multiplicity == line.multiplicity
    expected_case = "mixed" if offset == 0 else ("gaussian" if offset > 0 else "factor")
    assert got.case == expected_case


@settings(max_examples=60, deadline=None)
@given(k=st.integers(2, 5), m=st.integers(1, 4), rho=st.sampled_from([0.5, 1.0, 2.0, -1.0, -2.0]))
def test_first_line_law(k, m, rho):
    if rho > 0:
        factor = sphere_spectrum(k, rho, 3 * rho)
    else:
        factor = synthetic(k, rho, 2.0 * -rho, 2)
    first = rigid.first_lines(rigid.SolitonModel(factor, k + m, rho), 1)[0]
    expected = 0 if rho > 0 else Fraction(-rho) * m
    assert first.value.as_fraction() == expected and first.multiplicity == 1


def test_normalization_constants():
    s2 = rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 1.0)
    bolza = rigid.SolitonModel(load_factor_spectrum(BOLZA), 4, -1.0)
    assert rigid.normalization_constant(s2).constant == 2.0
    assert rigid.normalization_constant(bolza).constant == -2.0
    for model in (s2, bolza):
        rep = rigid.normalization_constant(model, samples=1000)
        assert rep.constant_to_machine_precision
        assert rigid.soliton_equation_residual(model) == 0.0


def test_sample_points_include_origin():
    y = rigid.sample_points(3, 50, 5.0)
    assert np.all(y[0] == 0)
    assert len(y) == 50


def test_schrodinger_potential():
    expander = rigid.SolitonModel(load_factor_spectrum(BOLZA), 4, -1.0)
    shrinker = rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 1.0)
    p = rigid.schrodinger_potential(expander, 10.0, 101)
    assert p.v0 == -1.0 and p.diverges
    np.testing.assert_allclose(p.values, -1.0 - p.radii**2 / 4, rtol=1e-15)
    q = rigid.schrodinger_potential(shrinker, 10.0, 101)
    assert q.v0 == 1.0 and q.diverges
    assert rigid.schrodinger_potential(expander, 3.0, 7).v0 == p.v0
    with pytest.raises(ValidationError):
        rigid.schrodinger_potential(expander, 3.0, 1)


def test_growth_check():
    expander = rigid.SolitonModel(load_factor_spectrum(BOLZA), 4, -1.0)
    rep = rigid.potential_growth_check(expander, 5.0)
    assert rep["ratio_exact"] and rep["expected_ratio"] == 0.5
    assert rep["upper_bound_holds"] and rep["lower_bound"] == "vacuous"
    shrinker = rigid.SolitonModel(sphere_spectrum(2, 1.0, 3.0), 4, 1.0)
    rep = rigid.potential_growth_check(shrinker, 5.0)
    assert rep["ratio_exact"] and rep["lower_bound"] == "holds"


def test_descriptor():
    d = rigid.EigenfunctionDescriptor.representative(1, 3, 2)
    assert d.multi_index == (3, 0) and d.label() == "v_1*H[3, 0]"
    with pytest.raises(ValidationError):
        rigid.EigenfunctionDescriptor(0, 2, (1, 0))
