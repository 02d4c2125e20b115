import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from models.errors import WordError
from models.word import Word
from services import decomposition_service, module_service, report_service, word_service


def _alternating(start, exponents):
    names = ('a', 'b') if start == 'a' else ('b', 'a')
    return Word(tuple((names[i % 2], exp) for i, exp in enumerate(exponents)))


words = st.builds(_alternating, st.sampled_from('ab'), st.lists(st.sampled_from([1, -1]), min_size=1, max_size=9))


@pytest.mark.parametrize('text, length', [
    ('', 0),
    ('1', 0),
    ('ab⁻¹a⁻¹', 3),
    ('ab^-1a^-1', 3),
    ('(ab)^2(ba)^-2', 8),
    ('(ab)^{q/2}a⁻¹', 5),
])
def test_parse_word(text, length):
    assert len(word_service.parse_word(text, {'q': 4})) == length


def test_parse_word_notations_agree():
    assert word_service.parse_word('ab⁻¹a⁻¹') == word_service.parse_word('ab^-1a^-1')
    assert str(word_service.parse_word('ab^-1')) == 'ab⁻¹'


@pytest.mark.parametrize('text', ['aa', 'ab⁻¹b', 'ac', '(ab', 'a^2', '(ab)^q'])
def test_parse_word_rejects(text):
    with pytest.raises(WordError):
        word_service.parse_word(text)


@pytest.mark.parametrize('text', ['aba', 'abab', ''])
def test_band_descriptor_rejects(text):
    with pytest.raises(WordError):
        word_service.band_descriptor(text)


def test_band_descriptor_needs_invertible_automorphism():
    with pytest.raises(WordError):
        word_service.band_descriptor('ab⁻¹', auto=np.array([[0]]))


@pytest.mark.parametrize('poly, p, certified', [
    ('x^2+x+1', 2, True),
    ('x^2+1', 2, True),
    ('x^3+1', 2, False),
    ('x-2', 3, True),
])
def test_companion(poly, p, certified):
    mat, flag = word_service.companion(poly, p)
    assert flag == certified
    assert mat.shape[0] == mat.shape[1]


def test_companion_rejects_root_zero():
    with pytest.raises(WordError):
        word_service.companion('x^2+x', 2)


def test_string_matrices_square_to_zero():
    lm = word_service.string_matrices(word_service.parse_word('ab⁻¹a⁻¹b'))
    assert lm.dim == 5
    assert not np.any(lm.x @ lm.x % 2)
    assert not np.any(lm.y @ lm.y % 2)


@pytest.mark.parametrize('text', ['1', 'a', 'ab', 'ab⁻¹', 'a⁻¹b', 'aba', 'ab⁻¹a⁻¹', 'a⁻¹b⁻¹ab'])
def test_string_modules_over_d8(d8, text):
    word = word_service.parse_word(text)
    m = word_service.string_module(word, group=d8)
    m.validate()
    assert m.dim == len(word) + 1
    assert m.certified_indecomposable
    inverse = word_service.string_module(word.inverse(), group=d8)
    assert decomposition_service.is_isomorphic(m, inverse)


@pytest.mark.parametrize('q, count', [(1, 32), (2, 704)])
def test_admissible_words_up_to_length_eight(q, count):
    words = word_service.admissible_words(q, 8)
    assert len(words) == count
    assert len(set(words)) == count
    paired = word_service.admissible_words(q, 8, pairs=True)
    assert 2 * len(paired) == count
    assert {w.inverse() for w in paired} | set(paired) == set(words)


def _check_inverse_words(group, q):
    for word in word_service.admissible_words(q, 8, pairs=True):
        m = word_service.string_module(word, group=group)
        inverse = word_service.string_module(word.inverse(), group=group)
        assert m.dim == inverse.dim == len(word) + 1, str(word)
        assert decomposition_service.is_isomorphic(m, inverse), str(word)


def test_string_modules_of_inverse_words_over_d8(d8):
    _check_inverse_words(d8, 2)


@pytest.mark.slow
def test_string_modules_of_inverse_words_over_d16(group):
    _check_inverse_words(group('D16'), 4)


def test_string_module_admissibility(d8):
    with pytest.raises(WordError):
        word_service.string_module('abab', group=d8)
    assert not word_service.admissible_string(word_service.parse_word('b⁻¹a⁻¹b⁻¹a⁻¹'), 2)
    assert word_service.admissible_string(word_service.parse_word('aba'), 2)


def test_band_admissibility():
    assert word_service.band_admissibility(word_service.band_descriptor('ab⁻¹'), 2) == 'b'
    projective = word_service.band_descriptor(word_service.parse_word('(ab)^q(ba)^-q', {'q': 2}))
    assert word_service.band_admissibility(projective, 2) == 'c'
    assert word_service.band_admissibility(word_service.band_descriptor('ab'), 2) is None


def test_band_module_with_companion_automorphism(d8):
    auto, certified = word_service.companion('x^2+x+1', 2)
    desc = word_service.band_descriptor('ab⁻¹', auto, 2, auto_certified=certified)
    m = word_service.band_module(desc, group=d8)
    assert m.dim == 4
    assert m.certified_indecomposable
    assert len(decomposition_service.decompose(m).parts) == 1


def test_inadmissible_band_is_rejected(d8):
    with pytest.raises(WordError):
        word_service.band_module(word_service.band_descriptor('ab'), group=d8)


@pytest.mark.parametrize('q, entries', [(1, 2 + 2 * 16), (2, 4 + 2 * 352)])
def test_word_identities(q, entries):
    results = report_service.word_identities(q)
    # two identities per word pair up to length eight besides the band checks
    assert len(results) == entries
    assert all(results.values())


@pytest.mark.slow
def test_word_identities_q4():
    results = report_service.word_identities(4)
    assert results['induced_is_half_band']
    assert all(results.values())


def test_lambda_prime_module(group):
    g = group('C3xC3')
    m = word_service.lambda_prime_module(word_service.parse_word('ab⁻¹'), g)
    m.validate()
    assert m.dim == 3
    w_shape = word_service.lambda_prime_module(word_service.parse_word('a⁻¹b'), g)
    assert not decomposition_service.is_isomorphic(m, w_shape)
    with pytest.raises(WordError):
        word_service.lambda_prime_module(word_service.parse_word('ab'), g)


def test_canonical_forms():
    word = word_service.parse_word('ab⁻¹a⁻¹')
    assert word_service.same_canonical_form(word, word.inverse())
    band = word_service.band_descriptor('ab⁻¹a⁻¹b')
    rotated = word_service.band_descriptor(band.word.rotate(1))
    assert word_service.same_canonical_form(band, rotated)
    assert not word_service.same_canonical_form(word, band)


@seed(11)
@settings(max_examples=50)
@given(words)
def test_split_peaks_of_strings(word):
    split = word_service.split_peaks(word)
    assert word_service.verify_split(split)
    assert split.cokernel_dim == len(split.pieces) - 1
    for piece in split.pieces:
        for i in range(len(piece) - 1):
            assert not (piece.is_direct(i) and not piece.is_direct(i + 1))


@seed(12)
@settings(max_examples=50)
@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=4).map(lambda exps: exps + [-1, 1]))
def test_split_peaks_of_bands(exponents):
    word = _alternating('a', exponents if len(exponents) % 2 == 0 else exponents + [1])
    try:
        desc = word_service.band_descriptor(word)
    except WordError:
        return
    split = word_service.split_peaks(desc)
    assert word_service.verify_split(split)
    assert split.opened is not None


def test_split_to_group(d8):
    split = word_service.split_peaks('ab⁻¹a⁻¹')
    incl, coker = word_service.split_to_group(split, d8)
    assert coker.cod.dim == 1
    assert (incl.dom.dim, incl.cod.dim) == (4, 5)
    assert not np.any(incl.then(coker).mat)
