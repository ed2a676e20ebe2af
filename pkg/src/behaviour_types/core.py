"""The behaviour-type abstraction and the algebra of composition operators.

A behaviour type bundles a parallel operator, two preorders, a meet and a
zero.  ``behaviour_type(b)`` returns the bundle for a concrete value, so
generic code never dispatches on classes itself.

Operators are immutable descriptors evaluated by ``apply_operator``.
"""
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations, permutations

from . import coalgebra as co
from . import lts as lt
from . import traces as tr
from ._naming import interaction
from .errors import ArityError, InstanceMismatchError, PreconditionError


class BehaviourType:
    """Operations of one instance: ∥, ⊑, ≼, ⊗ and 0."""

    kind = None

    def parallel(self, b1, b2):
        raise NotImplementedError

    def sim_leq(self, b1, b2):
        raise NotImplementedError

    def sem_leq(self, b1, b2):
        raise NotImplementedError

    def meet(self, b1, b2):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def minimize(self, b):
        return b

    def equiv(self, b1, b2):
        return self.sem_leq(b1, b2) and self.sem_leq(b2, b1)

    def accepts(self, b):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash(self.kind)


class TracesType(BehaviourType):
    kind = "traces"

    parallel = staticmethod(tr.parallel)
    sim_leq = staticmethod(tr.sim_leq)
    sem_leq = staticmethod(tr.sem_leq)
    meet = staticmethod(tr.meet)
    zero = staticmethod(tr.zero)

    def accepts(self, b):
        return isinstance(b, tr.Traces)


class LtsType(BehaviourType):
    kind = "lts"

    parallel = staticmethod(lt.parallel)
    sim_leq = staticmethod(lt.sim_leq)
    sem_leq = staticmethod(lt.sem_leq)
    meet = staticmethod(lt.meet)
    zero = staticmethod(lt.zero)
    minimize = staticmethod(lt.minimize)

    def accepts(self, b):
        return isinstance(b, lt.Lts)


class CoalgebraType(BehaviourType):
    kind = "coalgebra"

    def __init__(self, functor):
        self.functor = functor

    parallel = staticmethod(co.parallel)
    sim_leq = staticmethod(co.sim_leq)
    sem_leq = staticmethod(co.sem_leq)
    meet = staticmethod(co.meet)
    minimize = staticmethod(co.minimize)

    def zero(self):
        return co.zero(self.functor)

    def accepts(self, b):
        return isinstance(b, co.Coalgebra) and b.functor == self.functor


TRACES = TracesType()
LTS = LtsType()


def behaviour_type(b):
    if isinstance(b, tr.Traces):
        return TRACES
    if isinstance(b, lt.Lts):
        return LTS
    if isinstance(b, co.Coalgebra):
        return CoalgebraType(b.functor)
    raise InstanceMismatchError(f"{type(b).__name__} is not a behaviour")


def common_type(behaviours):
    behaviours = list(behaviours)
    if not behaviours:
        raise ArityError("no behaviours given")
    bt = behaviour_type(behaviours[0])
    for b in behaviours[1:]:
        if not bt.accepts(b):
            raise InstanceMismatchError(
                f"cannot mix {bt.kind} with {behaviour_type(b).kind} behaviours")
    return bt


def equiv(b1, b2):
    return common_type([b1, b2]).equiv(b1, b2)


def sem_leq(b1, b2):
    return common_type([b1, b2]).sem_leq(b1, b2)


def sim_leq(b1, b2):
    return common_type([b1, b2]).sim_leq(b1, b2)


def parallel(b1, b2):
    return common_type([b1, b2]).parallel(b1, b2)


def meet(b1, b2):
    return common_type([b1, b2]).meet(b1, b2)


# -- operator descriptors ---------------------------------------------------

class Operator:
    """Base class of operator descriptors."""

    arity = 0
    lts_only = False

    @property
    def structurally_symmetric(self):
        return False

    def __call__(self, *args):
        return apply_operator(self, list(args))

    def __str__(self):
        from .formats import show_operator
        return show_operator(self)


def _check_arity(n):
    if not isinstance(n, int) or n < 1:
        raise ArityError(f"arity must be a positive integer, got {n!r}")


@dataclass(frozen=True)
class Parallel(Operator):
    n: int = 2

    def __post_init__(self):
        _check_arity(self.n)

    @property
    def arity(self):
        return self.n

    @property
    def structurally_symmetric(self):
        return True


@dataclass(frozen=True)
class BipGamma(Operator):
    """The BIP interaction model over the interaction set ``gamma``."""

    gamma: frozenset
    n: int = 2
    lts_only = True

    def __post_init__(self):
        _check_arity(self.n)
        object.__setattr__(self, "gamma", frozenset(interaction(a) for a in self.gamma))

    @property
    def arity(self):
        return self.n

    @property
    def structurally_symmetric(self):
        return True


@dataclass(frozen=True)
class GammaSync(Operator):
    """Binary operator forcing the actions of ``a`` to happen together."""

    a: frozenset
    lts_only = True

    def __post_init__(self):
        object.__setattr__(self, "a", interaction(self.a))

    arity = 2

    @property
    def structurally_symmetric(self):
        return True


@dataclass(frozen=True)
class SosRules(Operator):
    rules: lt.SosRuleSet
    lts_only = True

    @property
    def arity(self):
        return self.rules.arity


@dataclass(frozen=True)
class Compose(Operator):
    """outer ∘_i inner, of arity n + m - 1."""

    outer: Operator
    inner: Operator
    i: int = 1

    def __post_init__(self):
        if not 1 <= self.i <= self.outer.arity:
            raise ArityError(f"position {self.i} outside 1..{self.outer.arity}")

    @property
    def arity(self):
        return self.outer.arity + self.inner.arity - 1

    @property
    def lts_only(self):
        return self.outer.lts_only or self.inner.lts_only


@dataclass(frozen=True)
class OpMeet(Operator):
    left: Operator
    right: Operator

    def __post_init__(self):
        if self.left.arity != self.right.arity:
            raise ArityError(
                f"meet of operators with arities {self.left.arity} and {self.right.arity}")

    @property
    def arity(self):
        return self.left.arity

    @property
    def lts_only(self):
        return self.left.lts_only or self.right.lts_only

    @property
    def structurally_symmetric(self):
        return self.left.structurally_symmetric and self.right.structurally_symmetric


@dataclass(frozen=True)
class ArityExtend(Operator):
    inner: Operator
    m: int

    def __post_init__(self):
        _check_arity(self.m)
        if self.m < self.inner.arity:
            raise ArityError(f"cannot extend an operator of arity {self.inner.arity} to {self.m}")

    @property
    def arity(self):
        return self.m

    @property
    def lts_only(self):
        return self.inner.lts_only

    @property
    def structurally_symmetric(self):
        return True


@dataclass(frozen=True)
class ArityReduce(Operator):
    """Pads ``inner`` with zero behaviours down to arity ``m``.

    ``symmetry`` records why padding is sound: ``"structural"`` when the
    inner descriptor is symmetric by construction, ``"asserted"`` when the
    caller vouched for it.
    """

    inner: Operator
    m: int
    asserted_symmetric: bool = False
    symmetry: str = field(default="", compare=False)

    def __post_init__(self):
        _check_arity(self.m)
        if self.m > self.inner.arity:
            raise ArityError(f"cannot reduce an operator of arity {self.inner.arity} to {self.m}")
        if self.inner.structurally_symmetric:
            symmetry = "structural"
        elif self.asserted_symmetric:
            symmetry = "asserted"
        else:
            raise PreconditionError(
                "arity reduction needs a symmetric operator; pass asserted_symmetric=True "
                "after checking it")
        object.__setattr__(self, "symmetry", symmetry)

    @property
    def arity(self):
        return self.m

    @property
    def lts_only(self):
        return self.inner.lts_only

    @property
    def structurally_symmetric(self):
        return self.inner.structurally_symmetric


def _fold_meet(bt, behaviours, compact):
    def step(x, y):
        out = bt.meet(x, y)
        return bt.minimize(out) if compact else out
    return reduce(step, behaviours)


def _parallel_all(bt, behaviours, compact=False):
    def step(x, y):
        out = bt.parallel(x, y)
        return bt.minimize(out) if compact else out
    return reduce(step, behaviours)


def apply_operator(op, args, compact=True):
    """Evaluate ``op`` on ``args``.

    With ``compact`` the intermediate terms of arity extension are quotiented
    by simulation equivalence (LTS) or bisimilarity (coalgebras), which keeps
    products small and changes results only up to ≃.
    """
    args = list(args)
    if len(args) != op.arity:
        raise ArityError(f"operator of arity {op.arity} applied to {len(args)} behaviours")
    bt = common_type(args)
    if op.lts_only and bt.kind != "lts":
        raise InstanceMismatchError(f"{type(op).__name__} applies to LTS behaviours only")
    return _apply(op, args, bt, compact)


def _apply(op, args, bt, compact):
    match op:
        case Parallel():
            return _parallel_all(bt, args)
        case BipGamma(gamma):
            return lt.bip_operator(gamma, args)
        case GammaSync(a):
            return lt.gamma_sync(a, args[0], args[1])
        case SosRules(rules):
            return lt.sos_operator(rules, args)
        case Compose(outer, inner, i):
            n, m = outer.arity, inner.arity
            nested = _apply(inner, args[n - 1:n + m - 1], bt, compact)
            return _apply(outer, args[:i - 1] + [nested] + args[i - 1:n - 1], bt, compact)
        case OpMeet(left, right):
            return bt.meet(_apply(left, args, bt, compact), _apply(right, args, bt, compact))
        case ArityExtend(inner, m):
            return _extend(inner, args, bt, compact)
        case ArityReduce(inner, m):
            padded = args + [bt.zero() for _ in range(inner.arity - m)]
            return _apply(inner, padded, bt, compact)
    raise PreconditionError(f"unknown operator {op!r}")


def _placements(inner, m):
    """Index tuples fed to ``inner``; the remaining indices run in parallel.

    All ordered tuples of distinct indices stand in for the m! permutations
    (permutations that agree on the first n positions differ only in the
    order of the parallel tail).  A structurally symmetric inner operator
    only needs one ordering per subset.
    """
    n = inner.arity
    if inner.structurally_symmetric:
        return list(combinations(range(m), n))
    return list(permutations(range(m), n))


def _extend(inner, args, bt, compact):
    m = len(args)
    terms = []
    for idx in _placements(inner, m):
        chosen = [args[i] for i in idx]
        rest = [args[i] for i in range(m) if i not in idx]
        term = _apply(inner, chosen, bt, compact)
        if rest:
            term = _parallel_all(bt, [term] + rest, compact)
        terms.append(bt.minimize(term) if compact else term)
    return _fold_meet(bt, terms, compact)


def extend_literal(inner, args, compact=True):
    """↑m f evaluated over every one of the m! permutations of the arguments.

    Meant for cross-checking small cases.  Without ``compact`` the meet of
    the m! terms has (∏|Q_i|)^(m!) states, so only tiny inputs are feasible.
    """
    args = list(args)
    bt = common_type(args)
    n = inner.arity
    if len(args) < n:
        raise ArityError(f"cannot extend an operator of arity {n} to {len(args)}")
    terms = []
    for sigma in permutations(range(len(args))):
        perm = [args[i] for i in sigma]
        term = _apply(inner, perm[:n], bt, compact)
        terms.append(_parallel_all(bt, [term] + perm[n:], compact))
    return _fold_meet(bt, terms, compact)


def show_pair(f1, f2):
    from .formats import show_operator
    return f"{show_operator(f1)} vs {show_operator(f2)}"


def op_compose(f1, f2, i):
    return Compose(f1, f2, i)


def op_meet(f1, f2):
    return OpMeet(f1, f2)


def arity_extend(f, m):
    return ArityExtend(f, m)


def arity_reduce(f, m, asserted_symmetric=False):
    return ArityReduce(f, m, asserted_symmetric)


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    checked: int
    counterexample: tuple = None

    def __bool__(self):
        return self.holds


def op_sem_leq_sampled(f1, f2, samples):
    """f1 ≼ f2 on every sample tuple.

    Only a semi-decision: a True verdict means no sampled refutation.
    """
    if f1.arity != f2.arity:
        raise ArityError(f"operators of arity {f1.arity} and {f2.arity} are not comparable")
    n = 0
    for sample in samples:
        sample = list(sample)
        if len(sample) != f1.arity:
            raise ArityError(f"sample of size {len(sample)} for operators of arity {f1.arity}")
        n += 1
        if not sem_leq(apply_operator(f1, sample), apply_operator(f2, sample)):
            return OrderVerdict(False, n, tuple(sample))
    return OrderVerdict(True, n)


def bip_sem_leq(f1, f2):
    """Exact order between two BIP operators of the same arity: γ1 ⊆ γ2."""
    if not (isinstance(f1, BipGamma) and isinstance(f2, BipGamma)):
        raise PreconditionError("the exact order is only available for BipGamma operators")
    if f1.arity != f2.arity:
        raise ArityError(f"operators of arity {f1.arity} and {f2.arity} are not comparable")
    return f1.gamma <= f2.gamma


def is_symmetric_sampled(f, samples):
    for sample in samples:
        sample = list(sample)
        base = apply_operator(f, sample)
        for sigma in permutations(range(len(sample))):
            if not equiv(base, apply_operator(f, [sample[i] for i in sigma])):
                return False
    return True


def canonical_order(behaviours):
    from .formats import serialize_behaviour
    keyed = {}
    for b in behaviours:
        keyed.setdefault(serialize_behaviour(b), b)
    return [keyed[k] for k in sorted(keyed)]


def symmetrize(f, behaviours, asserted_symmetric=False):
    """f̃ on a finite set: f adjusted to the set's size, applied in canonical order."""
    items = canonical_order(behaviours)
    if not items:
        raise ArityError("symmetrize needs a non-empty set of behaviours")
    k = len(items)
    if not (f.structurally_symmetric or asserted_symmetric):
        raise PreconditionError("symmetrize needs a symmetric operator")
    if k > f.arity:
        g = ArityExtend(f, k)
    elif k < f.arity:
        g = ArityReduce(f, k, asserted_symmetric)
    else:
        g = f
    return apply_operator(g, items)
