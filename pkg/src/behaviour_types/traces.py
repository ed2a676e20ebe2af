"""Trace behaviours: prefix-closed finite languages over a finite alphabet.

Parallel composition interleaves words, the preorder compares a language
against the subsequence closure of another, and the meet intersects both
closures over the shared alphabet.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from ._naming import check_action
from .errors import ResourceLimitError

DEFAULT_WORD_LIMIT = 100_000


def _word_key(word):
    return (len(word), word)


def prefixes(word):
    return [word[:k] for k in range(len(word) + 1)]


def prefix_close(words):
    closed = {()}
    for w in words:
        closed.update(prefixes(w))
    return closed


def maximal_words(words):
    """Words of a prefix-closed set that are not a proper prefix of another."""
    inner = set()
    for w in words:
        if w:
            inner.add(w[:-1])
    return [w for w in words if w not in inner]


@dataclass(frozen=True)
class Traces:
    """A pair (alphabet, words) with ``words`` prefix-closed and containing ε.

    Words are tuples of action names.  Non-prefix-closed input is closed on
    construction and ``normalized`` records that this happened.
    """

    alphabet: frozenset
    words: frozenset
    normalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        alphabet = frozenset(check_action(a) for a in self.alphabet)
        words = set()
        for w in self.words:
            if isinstance(w, str):
                w = tuple(w.split())
            w = tuple(w)
            for letter in w:
                if letter not in alphabet:
                    raise ValueError(f"letter {letter!r} of word {w!r} not in alphabet")
            words.add(w)
        closed = prefix_close(words)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "words", frozenset(closed))
        if closed != words:
            object.__setattr__(self, "normalized", True)

    @cached_property
    def sorted_words(self):
        return sorted(self.words, key=_word_key)

    @cached_property
    def maximal(self):
        return sorted(maximal_words(self.words), key=_word_key)

    def size(self):
        return len(self.words) + len(self.alphabet)

    def __repr__(self):
        ws = " ".join(repr(" ".join(w)) for w in self.sorted_words)
        return f"Traces({{{' '.join(sorted(self.alphabet))}}}, {ws})"


def traces(alphabet, words):
    return Traces(frozenset(alphabet), frozenset(words))


def subsequence(v, w):
    """True iff ``v`` embeds order-preservingly into ``w``."""
    it = iter(w)
    return all(letter in it for letter in v)


def project(word, alphabet):
    return tuple(x for x in word if x in alphabet)


def subsequences(word):
    out = set()
    n = len(word)
    for k in range(n + 1):
        for idx in combinations(range(n), k):
            out.add(tuple(word[i] for i in idx))
    return out


def subseq_closure(alphabet, words):
    """All words over ``alphabet`` that are subsequences of some word in ``words``."""
    if not words:
        return set()
    alphabet = frozenset(alphabet)
    projected = {project(w, alphabet) for w in words}
    # subsequences of a subsequence add nothing
    tops = [w for w in projected if not any(w != u and subsequence(w, u) for u in projected)]
    out = set()
    for w in tops:
        out |= subsequences(w)
    return out


def parallel(b1, b2, limit=DEFAULT_WORD_LIMIT):
    """Interleaving of two trace behaviours.

    Words are generated letter by letter while tracking every split of the
    current word into a word of ``b1`` and a word of ``b2``.
    """
    letters = sorted(b1.alphabet | b2.alphabet)
    t1, t2 = b1.words, b2.words
    result = {()}
    frontier = [((), frozenset({((), ())}))]
    while frontier:
        nxt = []
        for word, splits in frontier:
            for x in letters:
                ext = set()
                for u, v in splits:
                    if u + (x,) in t1:
                        ext.add((u + (x,), v))
                    if v + (x,) in t2:
                        ext.add((u, v + (x,)))
                if ext:
                    w = word + (x,)
                    result.add(w)
                    nxt.append((w, frozenset(ext)))
                    if len(result) > limit:
                        raise ResourceLimitError(
                            f"interleaving exceeds {limit} words")
        frontier = nxt
    return Traces(b1.alphabet | b2.alphabet, frozenset(result))


def sem_leq(b1, b2):
    if not b1.alphabet <= b2.alphabet:
        return False
    pending = [w for w in b1.maximal if w not in b2.words]
    if not pending:
        return True
    targets = {project(w, b1.alphabet) for w in b2.maximal}
    return all(any(subsequence(w, v) for v in targets) for w in pending)


sim_leq = sem_leq


def meet(b1, b2):
    common = b1.alphabet & b2.alphabet
    words = subseq_closure(common, b1.words) & subseq_closure(common, b2.words)
    return Traces(common, frozenset(words))


def zero():
    return Traces(frozenset(), frozenset({()}))
