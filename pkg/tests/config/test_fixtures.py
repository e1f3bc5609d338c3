import pytest
import yaml

from src.config.fixtures import available_fixtures, render_fixture, write_fixtures
from src.config.validation import ValidationError
from src.config.yaml_loader import YamlConfigLoader


def test_available_fixtures():
    assert available_fixtures() == [
        'closed-form-1d', 'degenerate-1d', 'random-2d', 'random-poly', 'shifted-1d', 'taylor-green',
    ]


@pytest.mark.parametrize("name", [
    'closed-form-1d', 'degenerate-1d', 'random-2d', 'random-poly', 'shifted-1d', 'taylor-green',
])
def test_every_fixture_validates(name):
    config = yaml.safe_load(render_fixture(name, seed=4))
    YamlConfigLoader().validate(config)
    assert config['name'] == name


def test_seed_is_substituted():
    config = yaml.safe_load(render_fixture('random-poly', seed=17))
    assert config['seed'] == 17


def test_tolerances_parse_as_numbers():
    config = yaml.safe_load(render_fixture('closed-form-1d'))
    assert isinstance(config['verification']['tol'], float)


def test_unknown_fixture():
    with pytest.raises(ValidationError, match="Unknown fixture 'vortex'"):
        render_fixture('vortex')


def test_write_selected_fixtures(tmp_path):
    paths = write_fixtures(tmp_path / 'fixtures', seed=2, names=['taylor-green'])
    assert [p.name for p in paths] == ['taylor-green.yml']
    assert yaml.safe_load(paths[0].read_text())['output']['directory'] == 'out/taylor-green'
