import itertools
import random

from riskrank.corpus import FACTORS
from riskrank.textsim import jaccard, tokenize


def test_tokenize_two_word_phrase():
    assert tokenize("Working posture") == {"working", "posture"}


def test_tokenize_hyphen_is_a_separator():
    assert tokenize("Effort-reward imbalance") == {"effort", "reward", "imbalance"}


def test_tokenize_empty_input():
    assert tokenize("") == frozenset()
    assert tokenize("!!! --- ") == frozenset()


def test_tokenize_idempotent_on_joined_output():
    toks = tokenize("Pace of work")
    assert tokenize(" ".join(sorted(toks))) == toks


def test_jaccard_identical_sets():
    assert jaccard(frozenset("ab"), frozenset("ab")) == 1.0


def test_jaccard_disjoint_sets():
    assert jaccard(frozenset("ab"), frozenset("cd")) == 0.0


def test_jaccard_partial_overlap():
    assert jaccard(frozenset("ab"), frozenset("bc")) == 1 / 3


def test_jaccard_both_empty_defined_as_zero():
    assert jaccard(frozenset(), frozenset()) == 0.0


def test_jaccard_symmetry_and_range_on_random_sets():
    rng = random.Random(7)
    vocab = [f"w{i}" for i in range(12)]
    for _ in range(300):
        a = frozenset(rng.sample(vocab, rng.randint(0, 6)))
        b = frozenset(rng.sample(vocab, rng.randint(0, 6)))
        s = jaccard(a, b)
        assert s == jaccard(b, a)
        assert 0.0 <= s <= 1.0
        assert (s == 1.0) == (a == b and len(a) > 0)


def test_no_corpus_phrase_shares_a_token_with_any_label_word():
    # This is what collapses the token classifier onto the first category.
    labels = [tokenize(c) for c in
              ("personal", "workplace", "psychosocial", "organizational", "biomechanical")]
    for _, text, _ in FACTORS:
        toks = tokenize(text)
        assert all(jaccard(toks, lt) == 0.0 for lt in labels)


def test_corpus_tokenization_matches_simple_word_split():
    # Phrases contain no clitics or intra-word punctuation, so the
    # alphanumeric-run rule equals a whitespace word split.
    for _, text, _ in FACTORS:
        assert tokenize(text) == frozenset(w.lower() for w in text.split())
