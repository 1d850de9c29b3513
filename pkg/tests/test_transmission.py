import cmath

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wgschwarz.errors import DomainError, PmlResonanceError
from wgschwarz.modal import Family, Mode
from wgschwarz.transmission import (
    TransmissionKind,
    TransmissionSpec,
    dtn_symbol,
    impedance_symbol,
    pml_reflection,
    pml_symbol,
    transmission_symbol,
)


def test_impedance_is_mode_independent():
    for fam, r in ((Family.TE, 3.0), (Family.TM, 12.0), (Family.TEM, 0.0)):
        m = Mode.build(fam, 10 + 1j, r)
        assert impedance_symbol(m).lam == -1j * (10 + 1j)


@given(st.floats(0.0, 30.0), st.sampled_from([Family.TE, Family.TM]))
def test_long_pml_tends_to_dtn(r, fam):
    k = 10.0 + 0.5j
    if abs(k * k - r * r) < 1e-3:
        return
    m = Mode.build(fam, k, r)
    assert pml_symbol(m, 10.0, 5.0).lam == pytest.approx(dtn_symbol(m).lam, rel=1e-12)


def test_pml_reflection_magnitude():
    # propagative beta: |q| = exp(-2 beta sigma l)
    q = pml_reflection(8.0, 5.0, 0.1)
    assert abs(q) == pytest.approx(cmath.exp(-8.0).real)


def test_pml_resonance():
    m = Mode.build(Family.TE, 10.0, 6.0)
    # sigma = 0 and beta * l = pi makes q = 1
    with pytest.raises(PmlResonanceError):
        pml_symbol(m, 0.0, cmath.pi / 8.0)


def test_transmission_settings_validation():
    with pytest.raises(DomainError):
        TransmissionSpec.pml(0.0, 1.0)
    with pytest.raises(DomainError):
        TransmissionSpec(TransmissionKind.DTN, sigma=1.0)
    assert TransmissionSpec.pml(5, 0.1).label() == "pml(sigma=5,len=0.1)"


def test_dispatch():
    m = Mode.build(Family.TM, 10.0, 12.0)
    assert transmission_symbol(TransmissionSpec.dtn(), m).lam == -m.kappa
    assert transmission_symbol(TransmissionSpec.pml(5, 0.1), m).lam == pml_symbol(m, 5, 0.1).lam
