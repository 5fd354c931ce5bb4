import pytest

from nongalois.words import Word, WordSyntaxError, commutator, iterated_commutator, parse_word

NAMES = ("a", "b", "c")


def test_parse_basic():
    w = parse_word("a b^-1 c^3", NAMES)
    assert w.letters == ((0, 1), (1, -1), (2, 3))
    assert parse_word("1", NAMES) == Word()


def test_parse_commutators():
    a, b = Word.gen(0), Word.gen(1)
    assert parse_word("[a,b]", NAMES) == commutator(a, b)
    assert parse_word("[a,[a,b]]", NAMES) == iterated_commutator(2, a, b)
    assert parse_word("(a b)^2", NAMES).letters == ((0, 1), (1, 1), (0, 1), (1, 1))
    assert parse_word("[a,b]^-1", NAMES) == commutator(a, b).inverse()


@pytest.mark.parametrize("text", ["a d", "a^x", "a^1.5", "[a,b", "a)", "a $"])
def test_parse_rejects(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text, NAMES)


def test_word_algebra():
    w = parse_word("a b a^-1", NAMES)
    assert (w * w.inverse()).normalized() == Word()
    assert w.exponent_vector(3).tolist() == [0, 1, 0]
    assert (w**-2).exponent_vector(3).tolist() == [0, -2, 0]
    assert iterated_commutator(0, Word.gen(0), Word.gen(1)) == Word.gen(1)


def test_substitute_and_format():
    w = parse_word("a b^2", NAMES)
    img = w.substitute([Word.gen(1), Word.gen(2), Word.gen(0)])
    assert img.format(NAMES) == "b c^2"
    assert Word().format(NAMES) == "1"
    assert parse_word(w.format(NAMES), NAMES) == w
