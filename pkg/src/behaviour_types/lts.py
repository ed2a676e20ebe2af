"""Labelled transition systems whose transitions carry interactions.

An interaction is a non-empty frozenset of action names.  Besides the
behaviour-type operations (parallel, simulation preorder, meet, zero) this
module holds the SOS-defined operators: BIP interaction models, the binary
synchronisation operator ``gamma_sync`` and general rule sets that may carry
negative premises.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product

import numpy as np
from scipy import sparse

from ._naming import check_action, check_state, interaction, label_key, product_names
from .errors import ArityError, PreconditionError


def _transition_key(t):
    return (t[0], label_key(t[1]), t[2])


@dataclass(frozen=True)
class Lts:
    """A triple (states, alphabet, transitions).

    ``transitions`` is a set of ``(source, label, target)`` triples where
    ``label`` is a non-empty frozenset of actions drawn from ``alphabet``.
    """

    states: tuple
    alphabet: frozenset
    transitions: frozenset = field(default=frozenset())

    def __post_init__(self):
        states = tuple(sorted({check_state(s) for s in self.states}))
        if not states:
            raise ValueError("an LTS needs at least one state")
        alphabet = frozenset(check_action(a) for a in self.alphabet)
        known = set(states)
        trans = set()
        for src, label, dst in self.transitions:
            label = interaction(label)
            if not label <= alphabet:
                raise ValueError(f"label {sorted(label)} not within alphabet {sorted(alphabet)}")
            if src not in known or dst not in known:
                raise ValueError(f"transition {src} -> {dst} uses an unknown state")
            trans.add((src, label, dst))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", frozenset(trans))

    @cached_property
    def sorted_transitions(self):
        return sorted(self.transitions, key=_transition_key)

    @cached_property
    def out(self):
        """state -> list of (label, target)."""
        table = {s: [] for s in self.states}
        for src, label, dst in self.sorted_transitions:
            table[src].append((label, dst))
        return table

    def size(self):
        return len(self.states) + len(self.transitions) + len(self.alphabet)


def lts(states, alphabet, transitions=()):
    return Lts(tuple(states), frozenset(alphabet), frozenset(
        (s, interaction(l), d) for s, l, d in transitions))


def zero():
    return Lts(("1",), frozenset(), frozenset())


def parallel(b1, b2):
    """Maximal interaction: left moves, right moves and joint moves labelled a ∪ b."""
    names = product_names(b1.states, b2.states)
    trans = set()
    for (p, q), name in names.items():
        for a, p2 in b1.out[p]:
            trans.add((name, a, names[p2, q]))
        for b, q2 in b2.out[q]:
            trans.add((name, b, names[p, q2]))
        for a, p2 in b1.out[p]:
            for b, q2 in b2.out[q]:
                trans.add((name, a | b, names[p2, q2]))
    return Lts(tuple(names.values()), b1.alphabet | b2.alphabet, frozenset(trans))


def parallel_all(behaviours):
    return reduce(parallel, behaviours)


def meet(b1, b2):
    """Synchronous product keeping only overlapping labels, labelled a ∩ b."""
    names = product_names(b1.states, b2.states)
    trans = set()
    for (p, q), name in names.items():
        for a, p2 in b1.out[p]:
            for b, q2 in b2.out[q]:
                c = a & b
                if c:
                    trans.add((name, c, names[p2, q2]))
    return Lts(tuple(names.values()), b1.alphabet & b2.alphabet, frozenset(trans))


def _simulation_matrix(b1, b2):
    """Greatest relation R ⊆ Q1×Q2 such that every move q1 -a-> q1' is
    answered by some q2 -b-> q2' with a ⊆ b and q1' R q2'.

    Works on boolean matrices: for each label ``a`` of ``b1`` the matrix
    ``E_a[q2, q2']`` marks moves of ``b2`` whose label contains ``a``.
    Pairs are deleted until nothing changes.
    """
    i1 = {s: i for i, s in enumerate(b1.states)}
    i2 = {s: i for i, s in enumerate(b2.states)}
    n1, n2 = len(i1), len(i2)
    rel = np.ones((n1, n2), dtype=bool)
    if not b1.transitions:
        return rel

    by_label2 = defaultdict(lambda: ([], []))
    for src, label, dst in b2.transitions:
        rows, cols = by_label2[label]
        rows.append(i2[src])
        cols.append(i2[dst])
    groups1 = defaultdict(lambda: ([], []))
    for src, label, dst in b1.transitions:
        srcs, dsts = groups1[label]
        srcs.append(i1[src])
        dsts.append(i1[dst])

    steps = []
    for a, (srcs, dsts) in groups1.items():
        rows, cols = [], []
        for b, (r, c) in by_label2.items():
            if a <= b:
                rows.extend(r)
                cols.extend(c)
        moves = sparse.csr_matrix(
            (np.ones(len(rows), dtype=np.float32), (rows, cols)), shape=(n2, n2))
        steps.append((moves, np.array(srcs), np.array(dsts)))

    while True:
        bad = np.zeros((n1, n2), dtype=bool)
        for moves, srcs, dsts in steps:
            # answered[t, q2]: q2 has a covering move into a state related to dst(t)
            answered = (moves @ rel[dsts].T.astype(np.float32)).T > 0
            np.logical_or.at(bad, srcs, ~answered)
        new = rel & ~bad
        if np.array_equal(new, rel):
            return rel
        rel = new


@dataclass(frozen=True)
class SimRelation:
    pairs: frozenset

    def total_on(self, states):
        covered = {p for p, _ in self.pairs}
        return all(s in covered for s in states)

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)


def max_simulation(b1, b2):
    """The maximal simulation of ``b1`` by ``b2``; requires A1 ⊆ A2."""
    if not b1.alphabet <= b2.alphabet:
        raise PreconditionError(
            f"alphabet {sorted(b1.alphabet)} not included in {sorted(b2.alphabet)}")
    rel = _simulation_matrix(b1, b2)
    rows, cols = np.nonzero(rel)
    return SimRelation(frozenset(
        (b1.states[i], b2.states[j]) for i, j in zip(rows.tolist(), cols.tolist())))


def sem_leq(b1, b2):
    if not b1.alphabet <= b2.alphabet:
        return False
    return bool(_simulation_matrix(b1, b2).any(axis=1).all())


sim_leq = sem_leq


def minimize(b):
    """A small LTS equivalent to ``b`` under mutual simulation.

    Simulation-equivalent states are merged, then every transition that is
    dominated by another one from the same state (smaller label, simulated
    target) is dropped.
    """
    pre = _simulation_matrix(b, b)
    eq = pre & pre.T
    rep = {s: b.states[int(np.argmax(eq[i]))] for i, s in enumerate(b.states)}
    quotient = Lts(
        tuple(sorted(set(rep.values()))), b.alphabet,
        frozenset((rep[s], l, rep[d]) for s, l, d in b.transitions))
    pre = _simulation_matrix(quotient, quotient)
    idx = {s: i for i, s in enumerate(quotient.states)}
    kept = set()
    for s in quotient.states:
        moves = quotient.out[s]
        for label, dst in moves:
            dominated = any(
                (label2, dst2) != (label, dst) and label <= label2 and pre[idx[dst], idx[dst2]]
                for label2, dst2 in moves)
            if not dominated:
                kept.add((s, label, dst))
    return Lts(quotient.states, quotient.alphabet, frozenset(kept))


def bip_operator(gamma, args, arity=None):
    """Apply the BIP interaction model ``gamma`` to ``args``.

    A global move labelled ``a ∈ gamma`` exists whenever some non-empty set of
    components moves with labels whose union is exactly ``a`` while all other
    components stay put.
    """
    if arity is not None and len(args) != arity:
        raise ArityError(f"operator of arity {arity} applied to {len(args)} behaviours")
    gamma = [interaction(a) for a in sorted(gamma, key=label_key)]
    names = product_names(*[b.states for b in args])
    alphabet = frozenset().union(*[b.alphabet for b in args])
    trans = set()
    for state, name in names.items():
        for a in gamma:
            options = []
            for b, q in zip(args, state):
                options.append([None] + [(l, d) for l, d in b.out[q] if l <= a])
            for choice in product(*options):
                labels = [c[0] for c in choice if c is not None]
                if not labels or frozenset().union(*labels) != a:
                    continue
                target = tuple(q if c is None else c[1] for q, c in zip(state, choice))
                trans.add((name, a, names[target]))
    return Lts(tuple(names.values()), alphabet, frozenset(trans))


def gamma_sync(a, b1, b2):
    """Binary operator enforcing synchronisation of the interaction ``a``.

    Labels disjoint from ``a`` interleave (alone or jointly).  The interaction
    fires when every component whose alphabet meets ``a`` moves with exactly
    its share ``a ∩ A_i`` and the others stay put; it needs at least one
    participant and is labelled with the part of ``a`` inside A1 ∪ A2.
    """
    a = interaction(a)
    names = product_names(b1.states, b2.states)
    alphabet = b1.alphabet | b2.alphabet
    share1, share2 = a & b1.alphabet, a & b2.alphabet
    label = a & alphabet
    trans = set()
    for (p, q), name in names.items():
        free1 = [(l, d) for l, d in b1.out[p] if not l & a]
        free2 = [(l, d) for l, d in b2.out[q] if not l & a]
        for l, p2 in free1:
            trans.add((name, l, names[p2, q]))
        for l, q2 in free2:
            trans.add((name, l, names[p, q2]))
        for (l1, p2), (l2, q2) in product(free1, free2):
            trans.add((name, l1 | l2, names[p2, q2]))
        if not label:
            continue
        opts1 = [d for l, d in b1.out[p] if l == share1] if share1 else [p]
        opts2 = [d for l, d in b2.out[q] if l == share2] if share2 else [q]
        for p2, q2 in product(opts1, opts2):
            trans.add((name, label, names[p2, q2]))
    return Lts(tuple(names.values()), alphabet, frozenset(trans))


@dataclass(frozen=True)
class SosRule:
    """One rule: per-position premise label (``None`` = stay put), per-position
    forbidden labels, and the conclusion label (the union of the premises)."""

    premises: tuple
    negatives: tuple = ()
    conclusion: frozenset = None

    def __post_init__(self):
        premises = tuple(None if p is None else interaction(p) for p in self.premises)
        negatives = self.negatives or tuple(() for _ in premises)
        if len(negatives) != len(premises):
            raise ArityError("negative premises must be given for every position")
        negatives = tuple(
            tuple(sorted({interaction(l) for l in ls}, key=label_key)) for ls in negatives)
        labels = [p for p in premises if p is not None]
        if not labels:
            raise ValueError("a rule needs at least one positive premise")
        union = frozenset().union(*labels)
        conclusion = union if self.conclusion is None else interaction(self.conclusion)
        if conclusion != union:
            raise ValueError(
                f"conclusion {sorted(conclusion)} is not the union of the premise labels")
        object.__setattr__(self, "premises", premises)
        object.__setattr__(self, "negatives", negatives)
        object.__setattr__(self, "conclusion", conclusion)

    @property
    def has_negatives(self):
        return any(self.negatives)

    def sort_key(self):
        return (
            tuple(() if p is None else label_key(p) for p in self.premises),
            tuple(tuple(label_key(l) for l in ls) for ls in self.negatives),
        )


@dataclass(frozen=True)
class SosRuleSet:
    arity: int
    rules: tuple = ()
    negative: bool = False

    def __post_init__(self):
        if self.arity < 1:
            raise ArityError("rule sets need a positive arity")
        rules = tuple(sorted(set(self.rules), key=SosRule.sort_key))
        for r in rules:
            if len(r.premises) != self.arity:
                raise ArityError(f"rule with {len(r.premises)} positions in a rule set of arity {self.arity}")
            if r.has_negatives and not self.negative:
                raise ValueError("negative premises need a rule set flagged negative")
        object.__setattr__(self, "rules", rules)

    @classmethod
    def from_bip(cls, gamma, arity):
        """The positive rules that define ``bip_operator(gamma, ·)``."""
        rules = set()
        for a in gamma:
            a = interaction(a)
            parts = [None] + [frozenset(c) for c in _nonempty_subsets(a)]
            for choice in product(parts, repeat=arity):
                labels = [c for c in choice if c is not None]
                if labels and frozenset().union(*labels) == a:
                    rules.add(SosRule(choice))
        return cls(arity, tuple(rules))


def _nonempty_subsets(s):
    items = sorted(s)
    for mask in range(1, 1 << len(items)):
        yield [items[i] for i in range(len(items)) if mask >> i & 1]


def sos_operator(rules, args):
    if len(args) != rules.arity:
        raise ArityError(f"rule set of arity {rules.arity} applied to {len(args)} behaviours")
    names = product_names(*[b.states for b in args])
    alphabet = frozenset().union(*[b.alphabet for b in args])
    trans = set()
    for state, name in names.items():
        enabled = [{l for l, _ in b.out[q]} for b, q in zip(args, state)]
        for rule in rules.rules:
            if any(l in enabled[j] for j, ls in enumerate(rule.negatives) for l in ls):
                continue
            options = []
            for b, q, p in zip(args, state, rule.premises):
                options.append([q] if p is None else [d for l, d in b.out[q] if l == p])
            for target in product(*options):
                trans.add((name, rule.conclusion, names[target]))
    return Lts(tuple(names.values()), alphabet, frozenset(trans))


@dataclass(frozen=True)
class NegativePremiseFixture:
    b1: Lts
    b1prime: Lts
    rules: SosRuleSet
    args_leq: bool
    images_leq: bool

    def apply(self, b):
        return sos_operator(self.rules, [b])


def negative_premise_counterexample():
    """Two behaviours with B1 ≼ B1′ whose images under a unary rule with a
    negative premise are no longer ordered."""
    b1 = lts(("p0", "p1"), ("a", "b"), [("p0", "a", "p1")])
    b1prime = lts(("p0", "p1"), ("a", "b"), [("p0", "a", "p1"), ("p0", "b", "p1")])
    rules = SosRuleSet(1, (SosRule(({"a"},), (({"b"},),)),), negative=True)
    return NegativePremiseFixture(
        b1, b1prime, rules,
        args_leq=sem_leq(b1, b1prime),
        images_leq=sem_leq(sos_operator(rules, [b1]), sos_operator(rules, [b1prime])),
    )
