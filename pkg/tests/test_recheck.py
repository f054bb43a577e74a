import copy
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2gz.exact_field import SQRT3, FieldElement, format_field, parse_field
from g2gz.polytope import build_width_certificate, cube_polytope, gromov_width_report, gz_halfspaces
from g2gz.recheck import halfspaces_to_text, lattice_to_text, parse_q3, recheck_certificate


def inputs(P):
    return halfspaces_to_text(P.halfspaces), halfspaces_to_text(P.chamber), lattice_to_text(P.lattice.basis)


@pytest.fixture(scope="module")
def serialized():
    r = gromov_width_report(SQRT3)
    cert = json.loads(json.dumps(r.to_dict()["certificate"]))
    return cert, inputs(r.polytope)


def test_accepts_genuine(serialized):
    cert, (hs, ch, basis) = serialized
    res = recheck_certificate(cert, hs, ch, basis)
    assert all(res.values())
    assert {
        "directions_form_lattice_basis",
        "generators_in_polytope",
        "vertex_strict_off_tight_set",
        "vertex_in_open_chamber",
        "generators_in_closed_chamber",
    } <= set(res)


def test_rejects_edited_direction(serialized):
    cert, (hs, ch, basis) = serialized
    bad = copy.deepcopy(cert)
    bad["directions"][0][0] += 1
    assert not all(recheck_certificate(bad, hs, ch, basis).values())


def test_rejects_oversized_simplex(serialized):
    cert, (hs, ch, basis) = serialized
    bad = dict(cert, l=format_field(parse_field(cert["l"]) * 2))
    res = recheck_certificate(bad, hs, ch, basis)
    assert not res["generators_in_polytope"]


def test_rejects_nonpositive_size(serialized):
    cert, (hs, ch, basis) = serialized
    assert not recheck_certificate(dict(cert, l="0/1"), hs, ch, basis)["positive_size"]


def test_rejects_vertex_off_chamber(serialized):
    cert, (hs, ch, basis) = serialized
    bad = dict(cert, vertex=["0/1", "0/1+1/1*sqrt3", "0/1", "0/1", "0/1"])
    res = recheck_certificate(bad, hs, ch, basis)
    assert not res["vertex_in_open_chamber"]


def test_rejects_vertex_outside(serialized):
    cert, (hs, ch, basis) = serialized
    bad = dict(cert, vertex=["0/1", "0/1+1/1*sqrt3", "-2/1", "0/1", "-1/1"])
    assert not recheck_certificate(bad, hs, ch, basis)["vertex_in_polytope"]


@pytest.mark.parametrize("mutate", [
    lambda c: c.pop("l"),
    lambda c: c.update(vertex=["x"] * 5),
    lambda c: c.update(directions=[[1, 0]]),
    lambda c: c.update(l=None),
])
def test_rejects_malformed(serialized, mutate):
    cert, (hs, ch, basis) = serialized
    bad = copy.deepcopy(cert)
    mutate(bad)
    assert not all(recheck_certificate(bad, hs, ch, basis).values())


def test_unimodular_but_wrong_basis(serialized):
    cert, (hs, ch, basis) = serialized
    bad = dict(cert, directions=[[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0],
                                 [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]])
    res = recheck_certificate(bad, hs, ch, basis)
    assert res["directions_form_lattice_basis"]
    assert not res["generators_in_polytope"]


def test_cube_certificate():
    P = cube_polytope(5)
    _, cert = build_width_certificate(P)
    assert all(recheck_certificate(cert.to_dict(), *inputs(P)).values())


fr = st.fractions(max_denominator=1000).filter(lambda q: abs(q) < 10**6)


@given(fr, fr)
def test_parser_agrees_with_field_parser(a, b):
    x = FieldElement(a, b)
    assert parse_q3(format_field(x)) == (x.a, x.b)


@pytest.mark.parametrize("bad", ["", "abc", "1/2x"])
def test_parser_rejects(bad):
    with pytest.raises(ValueError):
        parse_q3(bad)
