import pytest

from models.errors import ConfigError
from models.report import Claim
from services import config_service, decomposition_service


@pytest.mark.parametrize('text, claim', [
    ('3', Claim(3, 3)),
    ('3..4', Claim(3, 4)),
    ('5..', Claim(5, None)),
])
def test_parse_claim(text, claim):
    assert config_service.parse_claim(text) == claim


@pytest.mark.parametrize('text', ['x', '4..2', '..3', '-1'])
def test_parse_claim_rejects(text):
    with pytest.raises(ConfigError):
        config_service.parse_claim(text)


def test_parse_config_statements():
    config = config_service.parse_config(
        "# comment\n"
        "prime 3\n"
        "seed 7\n"
        "group G = C9\n"
        "module M = cyclic_quotient(4)   # M_4\n"
        "module N = dual(M) over G\n"
        "check ghost_bounds M window=6 nmax=3 claimed=4 cite=\"cyclic\"\n"
        "check word_identities q=2\n"
        "output results.json\n",
        name='small')
    assert (config.name, config.prime, config.seed, config.output) == ('small', 3, 7, 'results.json')
    assert config.groups == {'G': 'C9'}
    assert config.modules['M'] == ('cyclic_quotient(4)', 'G', 5)
    assert config.modules['N'][1] == 'G'
    first, second = config.checks
    assert (first.kind, first.target, first.line) == ('ghost_bounds', 'M', 7)
    assert first.options == {'window': 6, 'nmax': 3, 'claimed': Claim(4, 4), 'cite': 'cyclic'}
    assert second.options == {'q': 2}


@pytest.mark.parametrize('text, line, column', [
    ("group G = C9\nfrobnicate 3\n", 2, 1),
    ("group G = C9\nmodule N = dual(M)\n", 2, 17),
    ("group G = C9\ncheck classification_row G claimed=4..2\n", 2, 28),
    ("group G = C9\ncheck ghost_bounds X\n", 2, 20),
    ("group G = C9\nmodule M = cyclic_quotient(4\n", 2, None),
    ("  seed x\n", 1, 8),
])
def test_config_errors_carry_position(text, line, column):
    with pytest.raises(ConfigError) as info:
        config_service.parse_config(text)
    assert info.value.line == line
    if column is not None:
        assert info.value.column == column


@pytest.mark.parametrize('text', [
    "module M = trivial\n",
    "group G = C6\n",
    "prime 3\ngroup G = C4\n",
    "group G = C9\nmodule M = frobnicate(2)\n",
    "group G = C9\nmodule M = dual\n",
    "group G = C9\ncheck word_identities\n",
    "group G = C9\ncheck series trivial\n",
    "group G = C9\nmodule M = trivial\ncheck ghost_bounds M window=0\n",
    "group G = C9\nmodule M = trivial\ncheck ghost_bounds M witnesses=some\n",
    "group G = C9\nmodule M = trivial\ncheck ar M testers=M,Z\n",
    "group G = C9\nmodule M = trivial\ncheck series M extra\n",
    "group G = C9\ncheck frobnicate G\n",
])
def test_config_rejects(text):
    with pytest.raises(ConfigError):
        config_service.parse_config(text)


def test_module_expression_tree():
    tree = config_service.parse_module_expr('induce(trivial, xy)')
    assert tree[0] == 'call' and tree[1] == 'induce'
    assert [arg[:2] for arg in tree[2]] == [('ref', 'trivial'), ('ref', 'xy')]


def test_band_expression_keeps_the_polynomial():
    tree = config_service.parse_module_expr('band("ab⁻¹", phi=companion(x^2+x+1))')
    assert tree[2][0][:2] == ('str', 'ab⁻¹')
    assert tree[3]['phi'][:2] == ('poly', 'x^2+x+1')


def test_build_modules():
    config = config_service.parse_config(
        "group C = C9\n"
        "group D = D8\n"
        "group Q = Q8\n"
        "module M = cyclic_quotient(4) over C\n"
        "module MD = dual(M) over C\n"
        "module S = sum(M, trivial) over C\n"
        "module W = omega(M, 1) over C\n"
        "module K = induce(trivial, xy) over D\n"
        "module R = restrict(regular, x) over D\n"
        "module T = tensor(K, trivial) over D\n"
        "module B = band(\"ab⁻¹\", phi=companion(x^2+x+1)) over D\n"
        "module A = word(\"ab⁻¹a⁻¹\") over D\n"
        "module V = induce(trivial, i) over Q\n")
    modules = config_service.build_modules(config)
    dims = {name: m.dim for name, m in modules.items()}
    assert dims == {'M': 4, 'MD': 4, 'S': 5, 'W': 5, 'K': 4, 'R': 8, 'T': 4, 'B': 4, 'A': 4, 'V': 2}
    assert modules['S'].group.name == modules['M'].group.name
    assert decomposition_service.is_isomorphic(modules['M'], modules['MD'])
    assert modules['M'].label == 'M_4'


def test_theta_module():
    config = config_service.parse_config("group G = C4xC4\nmodule T = theta(2, 2)\n")
    assert config_service.build_modules(config)['T'].dim == 4


def test_builder_turns_library_errors_into_config_errors():
    config = config_service.parse_config("group G = C9\nmodule M = cyclic_quotient(12)\n")
    with pytest.raises(ConfigError) as info:
        config_service.build_modules(config)
    assert info.value.line == 2


def test_builder_caches_by_name():
    config = config_service.parse_config("group G = C9\nmodule M = cyclic_quotient(2)\n")
    builder = config_service.ModuleBuilder(config)
    assert builder.module('M') is builder.module('M')
