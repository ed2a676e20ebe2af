"""Random generators and law suites for behaviour types and operators.

Every suite is deterministic in its seed.  A law draws its inputs from a
``Sampler``, then ``check`` returns ``None`` (pass), ``VACUOUS`` (premise
not met) or the name of the failing clause.  Failing inputs are shrunk by
deletion and stored in the text format so they can be re-checked later.
"""
import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from . import coalgebra as co
from . import core
from . import lts as lt
from . import traces as tr
from .errors import PreconditionError

VACUOUS = "vacuous"
ACTIONS = ("a", "b", "c")


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str = "lts"
    seed: int = 0
    samples: int = 200
    max_states: int = 3
    max_alphabet: int = 3
    max_words: int = 6
    max_word_length: int = 3
    max_transitions: int = 4
    max_depth: int = 3
    functor: co.Functor = None

    def __post_init__(self):
        if self.kind not in ("traces", "lts", "coalgebra"):
            raise PreconditionError(f"unknown instance kind {self.kind!r}")
        limits = {"max_states": 4, "max_alphabet": 3, "max_words": 12, "max_depth": 3}
        for name in ("samples", "max_states", "max_alphabet", "max_words",
                     "max_word_length", "max_transitions", "max_depth"):
            value = getattr(self, name)
            if value < 1 or value > limits.get(name, value):
                raise PreconditionError(f"{name}={value} outside its bounds")
        if self.kind == "coalgebra":
            if self.functor is None:
                raise PreconditionError("coalgebra generation needs a functor")
            if co.depth(self.functor) > self.max_depth:
                raise PreconditionError("functor deeper than max_depth")


# -- generators -------------------------------------------------------------

def _random_subset(rng, items, min_size=0):
    items = list(items)
    k = rng.randint(min_size, len(items))
    return sorted(rng.sample(items, k))


def gen_traces(rng, cfg, actions=None):
    actions = list(actions or ACTIONS[:cfg.max_alphabet])
    alphabet = _random_subset(rng, actions, min_size=1 if rng.random() < 0.9 else 0)
    words = set()
    if alphabet:
        for _ in range(rng.randint(0, 3)):
            w = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, cfg.max_word_length)))
            if len(tr.prefix_close(words | {w})) <= cfg.max_words:
                words.add(w)
    return tr.traces(alphabet, words)


def gen_label(rng, alphabet):
    return frozenset(_random_subset(rng, alphabet, min_size=1))


def gen_lts(rng, cfg, actions=None, prefix="s"):
    actions = list(actions or ACTIONS[:cfg.max_alphabet])
    states = [f"{prefix}{i}" for i in range(rng.randint(1, cfg.max_states))]
    alphabet = _random_subset(rng, actions, min_size=1 if rng.random() < 0.9 else 0)
    trans = set()
    if alphabet:
        for _ in range(rng.randint(0, cfg.max_transitions)):
            trans.add((rng.choice(states), gen_label(rng, alphabet), rng.choice(states)))
    return lt.lts(states, alphabet, trans)


def random_value(rng, F, carrier):
    match F:
        case co.Id():
            return rng.choice(carrier)
        case co.Const(lat):
            return rng.choice(lat.elements)
        case co.Prod(l, r):
            return (random_value(rng, l, carrier), random_value(rng, r, carrier))
        case co.Exp(alphabet, body):
            return tuple(random_value(rng, body, carrier) for _ in alphabet)
        case co.Pow(body):
            return frozenset(random_value(rng, body, carrier) for _ in range(rng.randint(0, 2)))
    raise PreconditionError(f"unknown functor {F!r}")


def gen_coalgebra(rng, cfg, functor=None):
    F = functor or cfg.functor
    carrier = [f"s{i}" for i in range(rng.randint(1, cfg.max_states))]
    return co.Coalgebra(F, tuple(carrier), {s: random_value(rng, F, carrier) for s in carrier})


def gen_behaviour(cfg, rng=None):
    """One behaviour of ``cfg.kind``; with no ``rng`` the draw is seeded by ``cfg.seed``."""
    rng = rng or random.Random(cfg.seed)
    if cfg.kind == "traces":
        return gen_traces(rng, cfg)
    if cfg.kind == "lts":
        return gen_lts(rng, cfg)
    return gen_coalgebra(rng, cfg)


def gen_gamma(rng, actions=ACTIONS, max_size=3):
    labels = [frozenset(c) for k in range(1, len(actions) + 1) for c in combinations(actions, k)]
    return frozenset(rng.sample(labels, rng.randint(1, max_size)))


# -- mutations --------------------------------------------------------------
# ``down`` and ``up`` aim at B' ≼ B and B ≼ B'; ``sim_up`` at B ⊑ B';
# ``variant`` at B' ≃ B.  Callers still check the premise.

def _fresh(names, stem):
    i = 0
    while f"{stem}{i}" in names:
        i += 1
    return f"{stem}{i}"


def down(rng, b):
    if isinstance(b, tr.Traces):
        maximal = [w for w in b.maximal if w]
        if not maximal:
            return b
        w = rng.choice(maximal)
        return tr.Traces(b.alphabet, b.words - {w})
    if isinstance(b, lt.Lts):
        trans = list(b.sorted_transitions)
        if not trans:
            return b
        t = rng.choice(trans)
        rest = b.transitions - {t}
        if len(t[1]) > 1 and rng.random() < 0.5:
            smaller = frozenset(rng.sample(sorted(t[1]), len(t[1]) - 1))
            rest = rest | {(t[0], smaller, t[2])}
        return lt.Lts(b.states, b.alphabet, rest)
    return _coalgebra_down(rng, b)


def _coalgebra_down(rng, c):
    """A subcoalgebra: the part reachable from one state."""
    if not c.carrier:
        return c
    start = rng.choice(c.carrier)
    seen, todo = {start}, [start]
    while todo:
        s = todo.pop()
        for t in co.states_in(c.functor, c(s)):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    keep = sorted(seen)
    return co.Coalgebra(c.functor, tuple(keep), {s: c(s) for s in keep})


def up(rng, b, actions=ACTIONS):
    if isinstance(b, tr.Traces):
        extra = [x for x in actions if x not in b.alphabet]
        alphabet = set(b.alphabet)
        if extra and rng.random() < 0.3:
            alphabet.add(rng.choice(extra))
        w = rng.choice(b.sorted_words)
        word = list(w)
        pos = rng.randint(0, len(word))
        word.insert(pos, rng.choice(sorted(alphabet)) if alphabet else None)
        if word[pos] is None:
            return tr.Traces(frozenset(alphabet), b.words)
        return tr.Traces(frozenset(alphabet), b.words | {tuple(word)})
    if isinstance(b, lt.Lts):
        alphabet = set(b.alphabet)
        extra = [x for x in actions if x not in alphabet]
        if extra and (not alphabet or rng.random() < 0.3):
            alphabet.add(rng.choice(extra))
        trans = set(b.transitions)
        choice = rng.random()
        if trans and choice < 0.5:
            t = rng.choice(b.sorted_transitions)
            trans.discard(t)
            trans.add((t[0], t[1] | gen_label(rng, sorted(alphabet)), t[2]))
        else:
            trans.add((rng.choice(b.states), gen_label(rng, sorted(alphabet)), rng.choice(b.states)))
        return lt.Lts(b.states, frozenset(alphabet), frozenset(trans))
    if not b.carrier:
        return b
    other = co.Coalgebra(b.functor, tuple(b.carrier),
                         {s: random_value(rng, b.functor, list(b.carrier)) for s in b.carrier})
    return co.choice(b, other)


def _grow_value(rng, F, v, carrier):
    match F:
        case co.Id():
            return v
        case co.Const(lat):
            return lat.join(v, rng.choice(lat.elements))
        case co.Prod(l, r):
            return (_grow_value(rng, l, v[0], carrier), _grow_value(rng, r, v[1], carrier))
        case co.Exp(_, body):
            return tuple(_grow_value(rng, body, x, carrier) for x in v)
        case co.Pow(body):
            return v | {random_value(rng, body, carrier)}
    raise PreconditionError(f"unknown functor {F!r}")


def sim_up(rng, b):
    if not isinstance(b, co.Coalgebra):
        return up(rng, b)
    if not b.carrier:
        return b
    s = rng.choice(b.carrier)
    structure = dict(b.structure)
    structure[s] = _grow_value(rng, b.functor, b(s), list(b.carrier))
    return co.Coalgebra(b.functor, b.carrier, structure)


def variant(rng, b):
    """A behaviour ≃ b built by a local rewrite."""
    if isinstance(b, tr.Traces):
        return tr.Traces(b.alphabet, b.words | {w for w in tr.subseq_closure(b.alphabet, b.words)
                                                if rng.random() < 0.5})
    if isinstance(b, lt.Lts):
        trans = list(b.sorted_transitions)
        if trans and rng.random() < 0.6:
            s, label, d = rng.choice(trans)
            if len(label) > 1:
                smaller = frozenset(rng.sample(sorted(label), rng.randint(1, len(label) - 1)))
                return lt.Lts(b.states, b.alphabet, b.transitions | {(s, smaller, d)})
        q = rng.choice(b.states)
        copy = _fresh(set(b.states), q + "c")
        extra = {(copy, l, d) for s, l, d in b.transitions if s == q}
        return lt.Lts(b.states + (copy,), b.alphabet, b.transitions | extra)
    if not b.carrier:
        return b
    q = rng.choice(b.carrier)
    copy = _fresh(set(b.carrier), q + "c")
    structure = dict(b.structure)
    structure[copy] = b(q)
    return co.Coalgebra(b.functor, b.carrier + (copy,), structure)


# -- deletions for shrinking --------------------------------------------------

def _value_deletions(F, v):
    match F:
        case co.Prod(l, r):
            for x in _value_deletions(l, v[0]):
                yield (x, v[1])
            for y in _value_deletions(r, v[1]):
                yield (v[0], y)
        case co.Exp(_, body):
            for i, x in enumerate(v):
                for y in _value_deletions(body, x):
                    yield v[:i] + (y,) + v[i + 1:]
        case co.Pow(body):
            for x in sorted(v, key=repr):
                yield v - {x}
            for x in sorted(v, key=repr):
                for y in _value_deletions(body, x):
                    yield (v - {x}) | {y}


def deletions(b):
    """Smaller behaviours obtained by deleting one piece of ``b``."""
    if isinstance(b, tr.Traces):
        for w in b.maximal:
            if w:
                yield tr.Traces(b.alphabet, b.words - {w})
        used = {x for w in b.words for x in w}
        for x in sorted(b.alphabet - used):
            yield tr.Traces(b.alphabet - {x}, b.words)
    elif isinstance(b, lt.Lts):
        for t in b.sorted_transitions:
            yield lt.Lts(b.states, b.alphabet, b.transitions - {t})
        busy = {s for s, _, _ in b.transitions} | {d for _, _, d in b.transitions}
        if len(b.states) > 1:
            for q in b.states:
                if q not in busy:
                    yield lt.Lts(tuple(s for s in b.states if s != q), b.alphabet, b.transitions)
        used = set().union(*[l for _, l, _ in b.transitions]) if b.transitions else set()
        for x in sorted(b.alphabet - used):
            yield lt.Lts(b.states, b.alphabet - {x}, b.transitions)
    elif isinstance(b, co.Coalgebra):
        for s in b.carrier:
            for v in _value_deletions(b.functor, b(s)):
                structure = dict(b.structure)
                structure[s] = v
                yield co.Coalgebra(b.functor, b.carrier, structure)
        if len(b.carrier) > 1:
            for q in b.carrier:
                if not any(q in co.states_in(b.functor, b(s)) for s in b.carrier if s != q):
                    keep = tuple(s for s in b.carrier if s != q)
                    yield co.Coalgebra(b.functor, keep, {s: b(s) for s in keep})


def size_of(b):
    return b.size()


def shrink(inputs, fails, budget=300):
    """Greedy deletion: keep any single deletion under which ``fails`` still holds."""
    inputs = list(inputs)
    tried = 0
    progress = True
    while progress and tried < budget:
        progress = False
        for i, b in enumerate(inputs):
            for smaller in deletions(b):
                tried += 1
                candidate = inputs[:i] + [smaller] + inputs[i + 1:]
                if fails(candidate):
                    inputs = candidate
                    progress = True
                    break
                if tried >= budget:
                    break
            if progress or tried >= budget:
                break
    return inputs


# -- laws -------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    law_id: str
    clause: str
    inputs: tuple
    size: int
    operator: str = ""
    position: int = 0

    def behaviours(self):
        from .formats import parse
        return [parse(text).body for text in self.inputs]


@dataclass
class LawReport:
    law_id: str
    samples: int
    seed: int
    violations: list = field(default_factory=list)
    vacuous: int = 0
    unrecorded: int = 0
    elapsed: float = 0.0

    @property
    def passed(self):
        return not self.violations

    @property
    def failures(self):
        return len(self.violations) + self.unrecorded

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.law_id} {status} n={self.samples} seed={self.seed}"


@dataclass(frozen=True)
class Law:
    law_id: str
    draw: object
    check: object


class Sampler:
    def __init__(self, cfg, rng, actions=ACTIONS):
        self.cfg = cfg
        self.rng = rng
        self.actions = actions

    def gen(self):
        return gen_behaviour(self.cfg, self.rng)

    def down(self, b):
        return down(self.rng, b)

    def up(self, b):
        return up(self.rng, b, self.actions)

    def sim_up(self, b):
        return sim_up(self.rng, b)

    def variant(self, b):
        return variant(self.rng, b)


def _eq(bt, x, y):
    return bt.equiv(x, y)


def _law(law_id, draw):
    def wrap(check):
        return Law(law_id, draw, check)
    return wrap


def _three(s):
    return (s.gen(), s.gen(), s.gen())


def _one(s):
    return (s.gen(),)


def _two(s):
    return (s.gen(), s.gen())


@_law("monoid.assoc", _three)
def _assoc(bt, b):
    x, y, z = b
    return None if _eq(bt, bt.parallel(bt.parallel(x, y), z), bt.parallel(x, bt.parallel(y, z))) \
        else "(B1∥B2)∥B3 ≄ B1∥(B2∥B3)"


@_law("monoid.comm", _two)
def _comm(bt, b):
    x, y = b
    return None if _eq(bt, bt.parallel(x, y), bt.parallel(y, x)) else "B1∥B2 ≄ B2∥B1"


@_law("monoid.zero-neutral", _one)
def _neutral(bt, b):
    (x,) = b
    z = bt.zero()
    if not _eq(bt, bt.parallel(x, z), x):
        return "B∥0 ≄ B"
    if not _eq(bt, bt.parallel(z, x), x):
        return "0∥B ≄ B"
    return None


@_law("sim.zero-bottom", _one)
def _zero_bottom(bt, b):
    return None if bt.sim_leq(bt.zero(), b[0]) else "0 ⋢ B"


@_law("sim.refl", _one)
def _sim_refl(bt, b):
    return None if bt.sim_leq(b[0], b[0]) else "B ⋢ B"


@_law("sem.refl", _one)
def _sem_refl(bt, b):
    return None if bt.sem_leq(b[0], b[0]) else "B ⋠ B"


def _chain_sim(s):
    mid = s.gen()
    return (s.down(mid), mid, s.sim_up(mid))


def _chain_sem(s):
    mid = s.gen()
    return (s.down(mid), mid, s.up(mid))


@_law("sim.trans", _chain_sim)
def _sim_trans(bt, b):
    x, y, z = b
    if not (bt.sim_leq(x, y) and bt.sim_leq(y, z)):
        return VACUOUS
    return None if bt.sim_leq(x, z) else "B1 ⊑ B2 ⊑ B3 but B1 ⋢ B3"


@_law("sem.trans", _chain_sem)
def _sem_trans(bt, b):
    x, y, z = b
    if not (bt.sem_leq(x, y) and bt.sem_leq(y, z)):
        return VACUOUS
    return None if bt.sem_leq(x, z) else "B1 ≼ B2 ≼ B3 but B1 ⋠ B3"


def _ctx_sim(s):
    b2 = s.gen()
    return (s.gen(), b2, s.sim_up(b2))


def _ctx_sem(s):
    b2 = s.gen()
    return (s.gen(), b2, s.up(b2))


@_law("sim.par-preserve", _ctx_sim)
def _sim_par(bt, b):
    b1, b2, b3 = b
    if not bt.sim_leq(b2, b3):
        return VACUOUS
    return None if bt.sim_leq(bt.parallel(b1, b2), bt.parallel(b1, b3)) \
        else "B2 ⊑ B3 but B1∥B2 ⋢ B1∥B3"


@_law("sem.par-preserve", _ctx_sem)
def _sem_par(bt, b):
    b1, b2, b3 = b
    if not bt.sem_leq(b2, b3):
        return VACUOUS
    return None if bt.sem_leq(bt.parallel(b1, b2), bt.parallel(b1, b3)) \
        else "B2 ≼ B3 but B1∥B2 ⋠ B1∥B3"


@_law("meet.lower-bound", _two)
def _lower(bt, b):
    x, y = b
    m = bt.meet(x, y)
    if not bt.sem_leq(m, x):
        return "B1⊗B2 ⋠ B1"
    if not bt.sem_leq(m, y):
        return "B1⊗B2 ⋠ B2"
    return None


def _glb_draw(s):
    x, y = s.gen(), s.gen()
    base = core.behaviour_type(x).meet(x, y) if s.rng.random() < 0.5 else x
    c = base
    for _ in range(s.rng.randint(0, 2)):
        c = s.down(c)
    return (c, x, y)


@_law("meet.glb", _glb_draw)
def _glb(bt, b):
    c, x, y = b
    if not (bt.sem_leq(c, x) and bt.sem_leq(c, y)):
        return VACUOUS
    return None if bt.sem_leq(c, bt.meet(x, y)) else "C ≼ B1, C ≼ B2 but C ⋠ B1⊗B2"


@_law("meet.idem", _one)
def _idem(bt, b):
    return None if _eq(bt, bt.meet(b[0], b[0]), b[0]) else "B⊗B ≄ B"


@_law("meet.comm", _two)
def _meet_comm(bt, b):
    x, y = b
    return None if _eq(bt, bt.meet(x, y), bt.meet(y, x)) else "B1⊗B2 ≄ B2⊗B1"


@_law("meet.assoc", _three)
def _meet_assoc(bt, b):
    x, y, z = b
    return None if _eq(bt, bt.meet(bt.meet(x, y), z), bt.meet(x, bt.meet(y, z))) \
        else "(B1⊗B2)⊗B3 ≄ B1⊗(B2⊗B3)"


BEHAVIOUR_LAWS = (
    _assoc, _comm, _neutral, _zero_bottom, _sim_refl, _sem_refl, _sim_trans, _sem_trans,
    _sim_par, _sem_par, _lower, _glb, _idem, _meet_comm, _meet_assoc,
)


@_law("dist.meet-par", _three)
def _dist(bt, b):
    x, y, z = b
    lhs = bt.parallel(bt.meet(x, y), z)
    rhs = bt.meet(bt.parallel(x, z), bt.parallel(y, z))
    return None if _eq(bt, lhs, rhs) else "(B1⊗B2)∥B3 ≄ (B1∥B3)⊗(B2∥B3)"


LAWS = {law.law_id: law for law in BEHAVIOUR_LAWS + (_dist,)}


def _serialize_inputs(inputs):
    from .formats import serialize_behaviour
    return tuple(serialize_behaviour(b, f"B{i + 1}") for i, b in enumerate(inputs))


def _record(report, law_id, clause, inputs, fails, operator="", position=0):
    small = shrink(inputs, fails)
    clause = fails(small) or clause
    report.violations.append(Violation(
        law_id, clause, _serialize_inputs(small), sum(size_of(b) for b in small),
        operator, position))


def _finish(report, start):
    report.violations.sort(key=lambda v: (v.size, v.inputs))
    report.elapsed = time.perf_counter() - start
    return report


def run_law(law, cfg, prefix="", sampler=None, max_violations=5):
    """Run one law for ``cfg.samples`` draws."""
    rng = random.Random(f"{cfg.seed}:{law.law_id}")
    sampler = sampler or Sampler(cfg, rng)
    sampler.rng = rng
    report = LawReport(prefix + law.law_id, cfg.samples, cfg.seed)
    start = time.perf_counter()
    for _ in range(cfg.samples):
        inputs = law.draw(sampler)
        bt = core.common_type(inputs)
        verdict = law.check(bt, inputs)
        if verdict == VACUOUS:
            report.vacuous += 1
        elif verdict is not None and len(report.violations) < max_violations:
            def fails(candidate, law=law):
                v = law.check(core.common_type(candidate), candidate)
                return v if v not in (None, VACUOUS) else None
            _record(report, report.law_id, verdict, inputs, fails)
        elif verdict is not None:
            report.unrecorded += 1
    return _finish(report, start)


def check_behaviour_type_laws(kind, cfg=None, functor=None, laws=None):
    """Every behaviour-type law for one instance; one report per law."""
    cfg = cfg or GeneratorConfig(kind=kind, functor=functor)
    if cfg.kind != kind:
        raise PreconditionError(f"config is for {cfg.kind}, not {kind}")
    prefix = f"{kind}/" if kind != "coalgebra" else f"coalgebra[{cfg.functor}]/"
    selected = [LAWS[l] for l in laws] if laws else BEHAVIOUR_LAWS
    return [run_law(law, cfg, prefix) for law in selected]


def recheck(violation):
    """Re-run the law of a stored violation; returns the failing clause or None."""
    behaviours = violation.behaviours()
    if violation.operator:
        from .formats import parse_operator
        op = parse_operator(violation.operator)
        law_id = violation.law_id.rsplit("/", 1)[-1]
        verdict = OPERATOR_CHECKS[law_id](op, behaviours, violation.position)
    else:
        law = LAWS[violation.law_id.rsplit("/", 1)[-1]]
        verdict = law.check(core.common_type(behaviours), behaviours)
    return None if verdict in (None, VACUOUS) else verdict


# -- operator laws --------------------------------------------------------------
# Inputs are (B1, …, Bn, B̃); B̃ replaces the argument at ``position``.

def _op_bound(op, inputs, position=0):
    args = list(inputs[:-1])
    bt = core.common_type(args)
    whole = core._parallel_all(bt, args)
    return None if bt.sim_leq(core.apply_operator(op, args), whole) else "f(B⃗) ⋢ B1∥…∥Bn"


def _replaced(inputs, position):
    args = list(inputs[:-1])
    swapped = args[:position] + [inputs[-1]] + args[position + 1:]
    return args, swapped


def _op_sem(op, inputs, position=0):
    args, swapped = _replaced(inputs, position)
    bt = core.common_type(inputs)
    if not bt.sem_leq(args[position], inputs[-1]):
        return VACUOUS
    before = core.apply_operator(op, args)
    after = core.apply_operator(op, swapped)
    return None if bt.sem_leq(before, after) else f"B{position + 1} ≼ B̃ but f(…) ⋠ f(…B̃…)"


def _op_congruence(op, inputs, position=0):
    args, swapped = _replaced(inputs, position)
    bt = core.common_type(inputs)
    if not bt.equiv(args[position], inputs[-1]):
        return VACUOUS
    before = core.apply_operator(op, args)
    after = core.apply_operator(op, swapped)
    return None if bt.equiv(before, after) else f"B{position + 1} ≃ B̃ but f(…) ≄ f(…B̃…)"


OPERATOR_CHECKS = {
    "op.sim-bound": _op_bound,
    "op.sem-preserve": _op_sem,
    "op.congruence": _op_congruence,
}


def _op_draw(op, sampler, law_id, position):
    args = [sampler.gen() for _ in range(op.arity)]
    if law_id == "op.congruence":
        new = sampler.variant(args[position])
    else:
        new = sampler.up(args[position])
    return args + [new]


def check_operator_laws(op, cfg, laws=None, max_violations=5):
    """Both composition-operator conditions plus ≃-congruence for ``op``.

    Each sample replaces the argument at a random position.
    """
    from .formats import show_operator
    op_text = show_operator(op)
    reports = []
    for law_id in laws or list(OPERATOR_CHECKS):
        rng = random.Random(f"{cfg.seed}:{law_id}:{op_text}")
        sampler = Sampler(cfg, rng)
        report = LawReport(f"{op_text}/{law_id}", cfg.samples, cfg.seed)
        start = time.perf_counter()
        check = OPERATOR_CHECKS[law_id]
        for _ in range(cfg.samples):
            position = rng.randrange(op.arity)
            inputs = _op_draw(op, sampler, law_id, position)
            verdict = check(op, inputs, position)
            if verdict == VACUOUS:
                report.vacuous += 1
            elif verdict is not None:
                if len(report.violations) >= max_violations:
                    report.unrecorded += 1
                    continue

                def fails(candidate, check=check, position=position):
                    v = check(op, candidate, position)
                    return v if v not in (None, VACUOUS) else None
                _record(report, report.law_id, verdict, inputs, fails, op_text, position)
        reports.append(_finish(report, start))
    return reports


# -- probes ---------------------------------------------------------------------

def _disjoint_sampler(cfg, rng):
    """Triples whose components use pairwise disjoint alphabets."""
    class Disjoint(Sampler):
        def __init__(self):
            super().__init__(cfg, rng)
            self.turn = 0

        def gen(self):
            self.turn = self.turn % 3 + 1
            actions = tuple(f"{x}{self.turn}" for x in ACTIONS[:cfg.max_alphabet])
            if cfg.kind == "traces":
                return gen_traces(self.rng, cfg, actions)
            return gen_lts(self.rng, cfg, actions)
    return Disjoint()


def distributivity_probe(kind, cfg=None, regime="shared"):
    """Search for (B1⊗B2)∥B3 ≄ (B1∥B3)⊗(B2∥B3).

    ``regime="disjoint"`` draws the three components over disjoint
    alphabets; ``"shared"`` uses one common action pool.
    """
    cfg = cfg or GeneratorConfig(kind=kind)
    if regime not in ("shared", "disjoint"):
        raise PreconditionError(f"unknown regime {regime!r}")
    if regime == "disjoint" and kind == "coalgebra":
        raise PreconditionError("coalgebras carry no alphabet to separate")
    sampler = _disjoint_sampler(cfg, None) if regime == "disjoint" else None
    return run_law(_dist, cfg, prefix=f"{kind}/{regime}/", sampler=sampler)


def _bip_sampler(cfg, rng):
    return Sampler(GeneratorConfig(kind="lts", seed=cfg.seed, samples=cfg.samples,
                                   max_states=min(cfg.max_states, 3),
                                   max_transitions=cfg.max_transitions), rng)


def _gamma_pair(rng):
    g1 = gen_gamma(rng)
    g2 = gen_gamma(rng)
    if rng.random() < 0.5:
        g2 = g2 | g1
    return g1, g2


@dataclass
class BipPairResult:
    gamma1: frozenset
    gamma2: frozenset
    included: bool
    sampled_leq: bool
    meet_mismatch: int
    counterexample: tuple = None


def bip_order_probe(cfg=None, pairs=100, arity=2):
    """Compare the sampled order of BIP operators with γ-inclusion and their
    operator meet with the intersection of γ sets.

    Returns three reports: ``bip.order-forward`` (γ1 ⊆ γ2 must never be
    refuted), ``bip.order-refute`` (γ1 ⊄ γ2 must be refuted by some sample)
    and ``bip.meet-intersection`` (meet ≃ intersection on every sample),
    plus the per-pair results.
    """
    cfg = cfg or GeneratorConfig(kind="lts")
    rng = random.Random(f"{cfg.seed}:bip-order")
    sampler = _bip_sampler(cfg, rng)
    forward = LawReport("bip.order-forward", 0, cfg.seed)
    refute = LawReport("bip.order-refute", 0, cfg.seed)
    meet_rep = LawReport("bip.meet-intersection", 0, cfg.seed)
    results = []
    start = time.perf_counter()
    for _ in range(pairs):
        g1, g2 = _gamma_pair(rng)
        f1, f2 = core.BipGamma(g1, arity), core.BipGamma(g2, arity)
        inter = core.BipGamma(g1 & g2, arity)
        both = core.OpMeet(f1, f2)
        samples = [[sampler.gen() for _ in range(arity)] for _ in range(cfg.samples)]
        verdict = core.op_sem_leq_sampled(f1, f2, samples)
        mismatches = 0
        for args in samples:
            meet_rep.samples += 1
            if not core.equiv(core.apply_operator(both, args), core.apply_operator(inter, args)):
                mismatches += 1
                if len(meet_rep.violations) < 5:
                    def fails(candidate, both=both, inter=inter):
                        ok = core.equiv(core.apply_operator(both, candidate),
                                        core.apply_operator(inter, candidate))
                        return None if ok else "f1⊗f2 ≄ γ1∩γ2"
                    _record(meet_rep, meet_rep.law_id, "f1⊗f2 ≄ γ1∩γ2", args, fails,
                            f"{core.show_pair(f1, f2)}")
                else:
                    meet_rep.unrecorded += 1
        included = g1 <= g2
        results.append(BipPairResult(g1, g2, included, verdict.holds, mismatches,
                                     verdict.counterexample))
        target = forward if included else refute
        target.samples += 1
        if included and not verdict.holds:
            _record(forward, forward.law_id, "γ1 ⊆ γ2 but sampled f1 ⋠ f2",
                    list(verdict.counterexample), lambda c: None, core.show_pair(f1, f2))
        if not included and verdict.holds:
            refute.unrecorded += 1
    for rep in (forward, refute, meet_rep):
        _finish(rep, start)
    return [forward, refute, meet_rep], results


def extension_isotony_probe(cfg=None, pairs=10, ms=(3, 4), arity=2):
    """γ1 ⊆ γ2 implies ↑m BipGamma(γ1) ≼ ↑m BipGamma(γ2) on samples."""
    cfg = cfg or GeneratorConfig(kind="lts", samples=5, max_states=2, max_transitions=2)
    rng = random.Random(f"{cfg.seed}:isotony")
    sampler = _bip_sampler(cfg, rng)
    report = LawReport("extend.isotony", 0, cfg.seed)
    start = time.perf_counter()
    for _ in range(pairs):
        g1 = gen_gamma(rng)
        g2 = g1 | gen_gamma(rng)
        f1, f2 = core.BipGamma(g1, arity), core.BipGamma(g2, arity)
        for m in ms:
            e1, e2 = core.ArityExtend(f1, m), core.ArityExtend(f2, m)
            for _ in range(cfg.samples):
                args = [sampler.gen() for _ in range(m)]
                report.samples += 1
                if not core.sem_leq(core.apply_operator(e1, args), core.apply_operator(e2, args)):
                    report.violations.append(Violation(
                        report.law_id, "↑m f1 ⋠ ↑m f2", _serialize_inputs(args),
                        sum(size_of(b) for b in args), core.show_pair(e1, e2)))
    return _finish(report, start)


def run_suite(kind, seed=0, samples=200, functor=None):
    """Behaviour-type laws for one instance plus the ∥ operator laws."""
    cfg = GeneratorConfig(kind=kind, seed=seed, samples=samples, functor=functor)
    reports = check_behaviour_type_laws(kind, cfg)
    reports += check_operator_laws(core.Parallel(2), cfg)
    return reports
