"""Coalgebras for the non-deterministic functors

    F ::= Id | L | F x F | F^A | Pw(F)

with L a finite join-semilattice with bottom and A a finite alphabet.

Functor values are plain Python data:

===========  =====================================================
functor      value
===========  =====================================================
``Id``       a state (any hashable; pairs are 2-tuples)
``Const``    a lattice element (str)
``Prod``     a 2-tuple ``(left, right)``
``Exp``      a tuple aligned with the sorted exponent alphabet
``Pow``      a frozenset of body values
===========  =====================================================
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product

from ._naming import check_action, check_state, product_names
from .errors import (CertificationError, InstanceMismatchError, ResourceLimitError,
                     ShapeError)

WITNESS_CANDIDATE_LIMIT = 16


@dataclass(frozen=True)
class Lattice:
    """A finite join-semilattice with bottom given by its join table."""

    name: str
    elements: tuple
    bottom: str
    table: frozenset = field(default=frozenset(), repr=False)

    @classmethod
    def from_joins(cls, name, elements, bottom, joins=None):
        """Build a lattice from the joins of distinct non-bottom pairs.

        Joins with bottom and with the element itself are implied.
        """
        elements = tuple(elements)
        full = {}
        for x in elements:
            full[x, x] = x
            full[bottom, x] = full[x, bottom] = x
        for (x, y), z in (joins or {}).items():
            for key in ((x, y), (y, x)):
                if full.get(key, z) != z:
                    raise ValueError(f"conflicting joins for {x}, {y}")
                full[key] = z
        lat = cls(name, elements, bottom, frozenset(full.items()))
        lat.validate()
        return lat

    @cached_property
    def join_map(self):
        return dict(self.table)

    def join(self, x, y):
        return self.join_map[x, y]

    def leq(self, x, y):
        return self.join(x, y) == y

    def validate(self):
        els = self.elements
        if not els or len(set(els)) != len(els):
            raise ValueError(f"lattice {self.name} needs distinct elements")
        if self.bottom not in els:
            raise ValueError(f"bottom {self.bottom} of lattice {self.name} is not an element")
        j = self.join_map
        for x, y in product(els, els):
            if (x, y) not in j:
                raise ValueError(f"lattice {self.name}: join of {x} and {y} undefined")
            if j[x, y] not in els:
                raise ValueError(f"lattice {self.name}: join of {x} and {y} is not an element")
            if j[x, y] != j[y, x]:
                raise ValueError(f"lattice {self.name}: join not commutative at {x}, {y}")
        for x in els:
            if j[x, x] != x or j[self.bottom, x] != x:
                raise ValueError(f"lattice {self.name}: idempotence or bottom fails at {x}")
        for x, y, z in product(els, els, els):
            if j[j[x, y], z] != j[x, j[y, z]]:
                raise ValueError(f"lattice {self.name}: join not associative at {x}, {y}, {z}")

    def explicit_joins(self):
        """Joins of distinct non-bottom pairs, each unordered pair once."""
        out = {}
        for x, y in combinations(self.elements, 2):
            if self.bottom not in (x, y):
                out[x, y] = self.join(x, y)
        return out


BOOL = Lattice.from_joins("B", ("0", "1"), "0", {("0", "1"): "1"})
TRIVIAL = Lattice.from_joins("1", ("*",), "*")
BUILTIN_LATTICES = {"B": BOOL, "1": TRIVIAL}


class Functor:
    """Base class of functor syntax trees."""

    def __str__(self):
        from .formats import show_functor
        return show_functor(self)


@dataclass(frozen=True)
class Id(Functor):
    pass


@dataclass(frozen=True)
class Const(Functor):
    lattice: Lattice


@dataclass(frozen=True)
class Prod(Functor):
    left: Functor
    right: Functor


@dataclass(frozen=True)
class Exp(Functor):
    alphabet: tuple
    body: Functor

    def __post_init__(self):
        alphabet = tuple(sorted({check_action(a) for a in self.alphabet}))
        if not alphabet:
            raise ValueError("exponent alphabets must be non-empty")
        object.__setattr__(self, "alphabet", alphabet)


@dataclass(frozen=True)
class Pow(Functor):
    body: Functor


def lattices_of(F):
    match F:
        case Const(lat):
            return {lat.name: lat}
        case Prod(l, r):
            return {**lattices_of(l), **lattices_of(r)}
        case Exp(_, body) | Pow(body):
            return lattices_of(body)
    return {}


def depth(F):
    match F:
        case Prod(l, r):
            return 1 + max(depth(l), depth(r))
        case Exp(_, body) | Pow(body):
            return 1 + depth(body)
    return 0


def check_value(F, v, carrier):
    """Raise ShapeError unless ``v`` is an element of F(carrier)."""
    match F:
        case Id():
            if v not in carrier:
                raise ShapeError(f"{v!r} is not a state of the carrier")
        case Const(lat):
            if v not in lat.elements:
                raise ShapeError(f"{v!r} is not an element of lattice {lat.name}")
        case Prod(l, r):
            if not isinstance(v, tuple) or len(v) != 2:
                raise ShapeError(f"{v!r} is not a pair")
            check_value(l, v[0], carrier)
            check_value(r, v[1], carrier)
        case Exp(alphabet, body):
            if not isinstance(v, tuple) or len(v) != len(alphabet):
                raise ShapeError(f"{v!r} is not a table over {alphabet}")
            for x in v:
                check_value(body, x, carrier)
        case Pow(body):
            if not isinstance(v, frozenset):
                raise ShapeError(f"{v!r} is not a finite set")
            for x in v:
                check_value(body, x, carrier)
        case _:
            raise ShapeError(f"unknown functor {F!r}")


def functor_map(F, h, v):
    """F(h)(v): relabel the states inside ``v`` through ``h``."""
    if not callable(h):
        h = h.__getitem__
    match F:
        case Id():
            return h(v)
        case Const():
            return v
        case Prod(l, r):
            return (functor_map(l, h, v[0]), functor_map(r, h, v[1]))
        case Exp(_, body):
            return tuple(functor_map(body, h, x) for x in v)
        case Pow(body):
            return frozenset(functor_map(body, h, x) for x in v)
    raise ShapeError(f"unknown functor {F!r}")


def states_in(F, v):
    """States occurring in a value."""
    match F:
        case Id():
            return {v}
        case Const():
            return set()
        case Prod(l, r):
            return states_in(l, v[0]) | states_in(r, v[1])
        case Exp(_, body) | Pow(body):
            out = set()
            for x in v:
                out |= states_in(body, x)
            return out
    raise ShapeError(f"unknown functor {F!r}")


def value_size(F, v):
    match F:
        case Id() | Const():
            return 1
        case Prod(l, r):
            return value_size(l, v[0]) + value_size(r, v[1])
        case Exp(_, body) | Pow(body):
            return 1 + sum(value_size(body, x) for x in v)
    raise ShapeError(f"unknown functor {F!r}")


def enumerate_values(F, carrier, limit=100_000):
    """Every element of F(carrier) for a finite carrier."""
    match F:
        case Id():
            return list(carrier)
        case Const(lat):
            return list(lat.elements)
        case Prod(l, r):
            return list(product(enumerate_values(l, carrier, limit), enumerate_values(r, carrier, limit)))
        case Exp(alphabet, body):
            inner = enumerate_values(body, carrier, limit)
            if len(inner) ** len(alphabet) > limit:
                raise ResourceLimitError("too many functor values to enumerate")
            return list(product(inner, repeat=len(alphabet)))
        case Pow(body):
            inner = enumerate_values(body, carrier, limit)
            if 2 ** len(inner) > limit:
                raise ResourceLimitError("too many functor values to enumerate")
            return [frozenset(c) for k in range(len(inner) + 1) for c in combinations(inner, k)]
    raise ShapeError(f"unknown functor {F!r}")


@dataclass(frozen=True)
class Coalgebra:
    """A carrier together with a structure map ``state -> F(carrier)``."""

    functor: Functor
    carrier: tuple
    structure: dict

    def __post_init__(self):
        carrier = tuple(sorted({check_state(s) for s in self.carrier}))
        structure = dict(self.structure)
        if set(structure) != set(carrier):
            raise ShapeError("the structure map must be defined exactly on the carrier")
        known = set(carrier)
        for s in carrier:
            check_value(self.functor, structure[s], known)
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "structure", structure)

    __hash__ = None

    def __call__(self, s):
        return self.structure[s]

    def size(self):
        return len(self.carrier) + sum(value_size(self.functor, v) for v in self.structure.values())


def _same_functor(c1, c2):
    if c1.functor != c2.functor:
        raise InstanceMismatchError(f"coalgebras over different functors: {c1.functor} and {c2.functor}")


def rel_lift(F, rel, x, y):
    """x ≤_R^F y (one-sided lifting; ∀∃ at powersets)."""
    match F:
        case Id():
            return (x, y) in rel
        case Const(lat):
            return lat.leq(x, y)
        case Prod(l, r):
            return rel_lift(l, rel, x[0], y[0]) and rel_lift(r, rel, x[1], y[1])
        case Exp(_, body):
            return all(rel_lift(body, rel, a, b) for a, b in zip(x, y))
        case Pow(body):
            return all(any(rel_lift(body, rel, a, b) for b in y) for a in x)
    raise ShapeError(f"unknown functor {F!r}")


def rel_lift2(F, rel, x, y):
    """Two-sided lifting: equality on lattices, Egli–Milner on powersets."""
    match F:
        case Id():
            return (x, y) in rel
        case Const():
            return x == y
        case Prod(l, r):
            return rel_lift2(l, rel, x[0], y[0]) and rel_lift2(r, rel, x[1], y[1])
        case Exp(_, body):
            return all(rel_lift2(body, rel, a, b) for a, b in zip(x, y))
        case Pow(body):
            return (all(any(rel_lift2(body, rel, a, b) for b in y) for a in x)
                    and all(any(rel_lift2(body, rel, a, b) for a in x) for b in y))
    raise ShapeError(f"unknown functor {F!r}")


def _gfp(c1, c2, lift):
    rel = set(product(c1.carrier, c2.carrier))
    changed = True
    while changed:
        changed = False
        for s, t in sorted(rel):
            if not lift(c1.functor, rel, c1(s), c2(t)):
                rel.discard((s, t))
                changed = True
    return frozenset(rel)


def max_sim_relation(c1, c2):
    _same_functor(c1, c2)
    return _gfp(c1, c2, rel_lift)


def sim_leq(c1, c2):
    rel = max_sim_relation(c1, c2)
    covered = {s for s, _ in rel}
    return all(s in covered for s in c1.carrier)


def bisim_gfp(c1, c2):
    """Greatest relation closed under two-sided lifting, by naive deletion."""
    _same_functor(c1, c2)
    return _gfp(c1, c2, rel_lift2)


def bisim_blocks(*coalgebras):
    """Partition refinement on the disjoint union of ``coalgebras``.

    Returns ``{(index, state): block}``; two states are bisimilar iff they
    end up in the same block.
    """
    F = coalgebras[0].functor
    nodes = [(i, s) for i, c in enumerate(coalgebras) for s in c.carrier]
    block = {n: 0 for n in nodes}
    count = 1
    while True:
        sigs = {}
        new = {}
        for i, s in nodes:
            h = lambda t, i=i: block[i, t]
            key = (block[i, s], functor_map(F, h, coalgebras[i](s)))
            new[i, s] = sigs.setdefault(key, len(sigs))
        block = new
        if len(sigs) == count:
            return block
        count = len(sigs)


def bisim_relation(c1, c2):
    _same_functor(c1, c2)
    block = bisim_blocks(c1, c2)
    return frozenset(
        (s, t) for s in c1.carrier for t in c2.carrier if block[0, s] == block[1, t])


def _zips(G, rel, x, y):
    """All z ∈ G(R) projecting onto x and y."""
    match G:
        case Id():
            return [(x, y)] if (x, y) in rel else []
        case Const():
            return [x] if x == y else []
        case Prod(l, r):
            return list(product(_zips(l, rel, x[0], y[0]), _zips(r, rel, x[1], y[1])))
        case Exp(_, body):
            return list(product(*[_zips(body, rel, a, b) for a, b in zip(x, y)]))
        case Pow(body):
            cands = sorted({z for a in x for b in y for z in _zips(body, rel, a, b)}, key=repr)
            if len(cands) > WITNESS_CANDIDATE_LIMIT:
                raise ResourceLimitError("too many candidate witness values")
            out = []
            p1 = lambda r: r[0]
            p2 = lambda r: r[1]
            for k in range(len(cands) + 1):
                for sub in combinations(cands, k):
                    z = frozenset(sub)
                    if (functor_map(G, p1, z) == x and functor_map(G, p2, z) == y):
                        out.append(z)
            return out
    raise ShapeError(f"unknown functor {G!r}")


def _max_witness_value(F, rel, x, y):
    match F:
        case Id():
            if (x, y) not in rel:
                raise CertificationError(f"pair {(x, y)!r} is missing from the relation")
            return (x, y)
        case Const():
            if x != y:
                raise CertificationError(f"lattice values {x!r} and {y!r} differ")
            return x
        case Prod(l, r):
            return (_max_witness_value(l, rel, x[0], y[0]), _max_witness_value(r, rel, x[1], y[1]))
        case Exp(_, body):
            return tuple(_max_witness_value(body, rel, a, b) for a, b in zip(x, y))
        case Pow(body):
            return frozenset(z for a in x for b in y for z in _zips(body, rel, a, b))
    raise ShapeError(f"unknown functor {F!r}")


def _first(r):
    return r[0]


def _second(r):
    return r[1]


def certify(F, rel, witness, f1, f2):
    """Check that both projections are homomorphisms from (R, witness)."""
    for r in rel:
        g = witness[r]
        if functor_map(F, _first, g) != f1(r[0]) or functor_map(F, _second, g) != f2(r[1]):
            return False
        if not states_in(F, g) <= rel:
            return False
    return True


def witness_max(F, rel, f1, f2):
    """The ⊔-greatest witness map on the bisimulation ``rel``.

    Lattice and state parts are forced; at powersets every value of G(R)
    whose projections land in the two component sets is included.
    """
    rel = frozenset(rel)
    g = {r: _max_witness_value(F, rel, f1(r[0]), f2(r[1])) for r in rel}
    if not certify(F, rel, g, f1, f2):
        raise CertificationError("relation is not a bisimulation: projections are not exact")
    return g


def witness_join(F, x, y):
    """Pointwise ⊔ of two witness values."""
    match F:
        case Id() | Const():
            if x != y:
                raise CertificationError("witness values differ at a forced position")
            return x
        case Prod(l, r):
            return (witness_join(l, x[0], y[0]), witness_join(r, x[1], y[1]))
        case Exp(_, body):
            return tuple(witness_join(body, a, b) for a, b in zip(x, y))
        case Pow():
            return x | y
    raise ShapeError(f"unknown functor {F!r}")


@dataclass(frozen=True)
class BisimWitness:
    relation: frozenset
    witness: dict

    __hash__ = None

    def check(self, c1, c2):
        return certify(c1.functor, self.relation, self.witness, c1, c2)

    def __bool__(self):
        return bool(self.relation)


def max_bisimulation(c1, c2):
    """Maximal bisimulation between ``c1`` and ``c2`` with its certified
    maximal witness (both empty when no pair is bisimilar)."""
    rel = bisim_relation(c1, c2)
    g = witness_max(c1.functor, rel, c1, c2)
    result = BisimWitness(rel, g)
    if not result.check(c1, c2):
        raise CertificationError("maximal witness failed certification")
    return result


def sem_leq(c1, c2):
    rel = bisim_relation(c1, c2)
    covered = {s for s, _ in rel}
    return all(s in covered for s in c1.carrier)


def meet(c1, c2):
    """The coalgebra (R, g) on the maximal bisimulation and its maximal witness."""
    bis = max_bisimulation(c1, c2)
    names = product_names(c1.carrier, c2.carrier)
    structure = {names[r]: functor_map(c1.functor, names, g) for r, g in bis.witness.items()}
    return Coalgebra(c1.functor, tuple(structure), structure)


def sync(F, x, y):
    """x ⋈ y : F(X) × F(Y) -> F(X × Y)."""
    match F:
        case Id():
            return (x, y)
        case Const(lat):
            return lat.join(x, y)
        case Prod(l, r):
            return (sync(l, x[0], y[0]), sync(r, x[1], y[1]))
        case Exp(_, body):
            return tuple(sync(body, a, b) for a, b in zip(x, y))
        case Pow(body):
            return frozenset(sync(body, a, b) for a in x for b in y)
    raise ShapeError(f"unknown functor {F!r}")


def parallel(c1, c2):
    _same_functor(c1, c2)
    F = c1.functor
    names = product_names(c1.carrier, c2.carrier)
    structure = {
        names[s, t]: functor_map(F, names, sync(F, c1(s), c2(t)))
        for s, t in names}
    return Coalgebra(F, tuple(structure), structure)


def zero_value(F):
    match F:
        case Id():
            return "*"
        case Const(lat):
            return lat.bottom
        case Prod(l, r):
            return (zero_value(l), zero_value(r))
        case Exp(alphabet, body):
            return tuple(zero_value(body) for _ in alphabet)
        case Pow(body):
            return frozenset({zero_value(body)})
    raise ShapeError(f"unknown functor {F!r}")


def zero(F):
    return Coalgebra(F, ("*",), {"*": zero_value(F)})


def choice(c1, c2):
    """Coproduct: disjoint union of carriers, states tagged ``1.`` and ``2.``."""
    _same_functor(c1, c2)
    F = c1.functor
    structure = {}
    for tag, c in (("1", c1), ("2", c2)):
        inj = lambda s, tag=tag: f"{tag}.{s}"
        for s in c.carrier:
            structure[inj(s)] = functor_map(F, inj, c(s))
    return Coalgebra(F, tuple(structure), structure)


def minimize(c):
    """Quotient by bisimilarity; each block keeps its least state name."""
    if not c.carrier:
        return c
    block = bisim_blocks(c)
    rep = {}
    for s in c.carrier:
        rep.setdefault(block[0, s], s)
    h = lambda s: rep[block[0, s]]
    structure = {s: functor_map(c.functor, h, c(s)) for s in rep.values()}
    return Coalgebra(c.functor, tuple(structure), structure)


@dataclass(frozen=True)
class NaturalityResult:
    ok: bool
    checked: int
    counterexample: tuple = None

    def __bool__(self):
        return self.ok


def naturality_check(F, h1, h2, xs, ys, combine=None):
    """Check F(h1 × h2)(x ⋈ y) = F(h1)(x) ⋈ F(h2)(y) on all sampled pairs.

    ``combine`` replaces the built-in ⋈ for user-supplied binary combinators.
    """
    combine = combine or (lambda x, y: sync(F, x, y))
    if not callable(h1):
        h1 = h1.__getitem__
    if not callable(h2):
        h2 = h2.__getitem__
    hh = lambda p: (h1(p[0]), h2(p[1]))
    n = 0
    for x in xs:
        for y in ys:
            n += 1
            lhs = functor_map(F, hh, combine(x, y))
            rhs = combine(functor_map(F, h1, x), functor_map(F, h2, y))
            if lhs != rhs:
                return NaturalityResult(False, n, (x, y))
    return NaturalityResult(True, n)
