import json
from fractions import Fraction

import pytest

from src.core.errors import FieldSchemaError, InvalidInputError
from src.expansion.engine import compute_expansion
from src.expansion.serialization import (
    field_expansion_from_json,
    field_expansion_to_json,
    field_hash,
    scalar_from_json,
    semigroup_from_config,
    trajectory_expansion_from_json,
    trajectory_expansion_to_json,
)


def test_scalars_keep_exactness():
    assert scalar_from_json("3/7") == Fraction(3, 7)
    assert scalar_from_json(2) == Fraction(2)
    assert isinstance(scalar_from_json(0.25), float)
    with pytest.raises(FieldSchemaError):
        scalar_from_json(True)


def test_semigroup_from_stokes_block():
    sg = semigroup_from_config({'stokes': {'dim': 2, 'count': 4}, 'nu': '1/10', 'n_cap': 3})
    assert sg.mus() == [Fraction(1, 10), Fraction(2, 10), Fraction(3, 10)]


def test_semigroup_needs_generators_or_stokes():
    with pytest.raises(InvalidInputError, match="'generators' or 'stokes'"):
        semigroup_from_config({'nu': 1, 'n_cap': 3})


def test_field_from_config_block(closed_form_config, unit_semigroup):
    fe = field_expansion_from_json(closed_form_config['field'], unit_semigroup)
    assert fe.is_exact
    assert fe.order == 8
    assert list(fe.term(1).value([Fraction(2)], 0)) == [3]


def test_missing_leading_term(unit_semigroup):
    data = {
        'type': 'poly', 'dim': 1, 'order': 2,
        'terms': [{'n': 2, 'time_coeffs': [{'monomials': [{'powers': [1], 'coeffs': [1]}]}]}],
    }
    with pytest.raises(FieldSchemaError, match="q_1 is missing"):
        field_expansion_from_json(data, unit_semigroup)


def test_duplicate_term_index(unit_semigroup):
    term = {'n': 1, 'time_coeffs': [{'monomials': []}]}
    with pytest.raises(FieldSchemaError, match="appears twice"):
        field_expansion_from_json({'type': 'poly', 'dim': 1, 'terms': [term, term]}, unit_semigroup)


def test_trig_needs_periods(unit_semigroup):
    with pytest.raises(FieldSchemaError, match="periods"):
        field_expansion_from_json({'type': 'trig', 'dim': 2, 'terms': []}, unit_semigroup)


def test_field_document_survives_json(closed_form_field):
    text = json.dumps(field_expansion_to_json(closed_form_field.with_mean_flow([Fraction(1, 2)])))
    fe = field_expansion_from_json(json.loads(text), closed_form_field.sg)
    assert fe.mean_flow == (Fraction(1, 2),)
    assert fe.term(1).time_coeffs[0].monomials == closed_form_field.term(1).time_coeffs[0].monomials


def test_expansion_document(closed_form_field):
    te = compute_expansion(closed_form_field, [0], 3)
    data = trajectory_expansion_to_json(te, {'note': 'test'})
    assert [entry['mu'] for entry in data['zetas']] == ['1', '2', '3']
    assert data['zetas'][2]['zeta']['coeffs'] == [['-1/6']]
    assert data['provenance']['mode'] == 'exact'
    assert data['provenance']['note'] == 'test'

    restored = trajectory_expansion_from_json(json.loads(json.dumps(data)))
    assert restored.exact
    assert restored.zetas == te.zetas


def test_field_hash_identifies_the_field(closed_form_field, shifted_field):
    fingerprint = field_hash(closed_form_field)
    assert len(fingerprint) == 64
    restored = field_expansion_from_json(json.loads(json.dumps(field_expansion_to_json(closed_form_field))),
                                         closed_form_field.sg)
    assert field_hash(restored) == fingerprint
    assert field_hash(shifted_field) != fingerprint

    te = compute_expansion(closed_form_field, [0], 2)
    assert trajectory_expansion_to_json(te, fe=closed_form_field)['provenance']['field_hash'] == fingerprint
    assert 'field_hash' not in trajectory_expansion_to_json(te)['provenance']
