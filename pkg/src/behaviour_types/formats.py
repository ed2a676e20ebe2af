"""Text format for behaviours, functors, lattices, rule sets and operators.

A ``.bt`` file holds a sequence of documents::

    traces T { alphabet: a b; words: "" "a b"; }
    lts L { states: p0 p1; alphabet: a b; trans: p0 -{a,b}-> p1; }
    lattice L3 { elements: bot x y top; bottom: bot; join: x y = top; }
    functor F = (B2 x Pw(Id))^{a,b}
    coalgebra C : Pw(Id) { states: s t; s -> {s, t}; t -> {}; }
    rules R arity 1 negative { rule 1{a} !1{b} => {a}; }
    op f1 = extend(gamma{a1 a2}, 4)

``#`` starts a comment.  ``serialize`` produces the canonical text: sorted
actions, words, states and transitions, one line per document when it is
short, otherwise one field per line.
"""
import re
from dataclasses import dataclass, field

from . import coalgebra as co
from . import core
from . import lts as lt
from . import traces as tr
from ._naming import STATE_RE, label_key, show_label
from .errors import BehaviourTypeError, FormatError

KINDS = ("traces", "lts", "coalgebra", "functor", "rules", "operator", "lattice")
LINE_WIDTH = 72

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) |
    (?P<nl>\n) |
    (?P<comment>\#[^\n]*) |
    (?P<string>"[^"\n]*") |
    (?P<punct>-\{|->|=>|[{}()\[\];:,=^!]) |
    (?P<ident>[A-Za-z0-9_.*]+)
""", re.VERBOSE)

_IDENT_RE = re.compile(r"^[A-Za-z0-9_.*]+$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormatError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            value = m.group()
            if kind == "string":
                value = value[1:-1]
            tokens.append(Token(kind, value, line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


@dataclass(frozen=True)
class Document:
    kind: str
    name: str
    body: object
    warnings: tuple = field(default=(), compare=False)

    __hash__ = None


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0
        self.lattices = dict(co.BUILTIN_LATTICES)
        self.functors = {}
        self.rules = {}
        self.operators = {}

    # token helpers
    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return FormatError(message, tok.line, tok.column)

    def at(self, text):
        return self.tok.kind in ("punct", "ident") and self.tok.text == text

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")

    def ident(self, what="identifier"):
        tok = self.tok
        if tok.kind != "ident":
            raise self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.pos += 1
        return tok.text

    def name(self, what="name"):
        """An identifier or a quoted string."""
        tok = self.tok
        if tok.kind == "string":
            self.pos += 1
            return tok.text
        return self.ident(what)

    def integer(self):
        tok = self.tok
        text = self.ident("integer")
        if not text.isdigit():
            raise self.error(f"expected integer, found {text!r}", tok)
        return int(text)

    def idents_until(self, stop):
        out = []
        while not self.at(stop):
            out.append(self.ident())
            self.accept(",")
        return out

    def guard(self, tok, fn, *args):
        """Run a constructor, turning validation errors into positioned ones."""
        try:
            return fn(*args)
        except FormatError:
            raise
        except (BehaviourTypeError, ValueError, TypeError) as exc:
            raise self.error(str(exc), tok) from None

    # documents
    def documents(self):
        docs = []
        while self.tok.kind != "eof":
            docs.append(self.document())
        return docs

    def document(self):
        tok = self.tok
        kind = self.ident("document kind")
        handler = {
            "traces": self.traces_doc, "lts": self.lts_doc, "lattice": self.lattice_doc,
            "functor": self.functor_doc, "coalgebra": self.coalgebra_doc,
            "rules": self.rules_doc, "op": self.operator_doc,
        }.get(kind)
        if handler is None:
            raise self.error(f"unknown document kind {kind!r}", tok)
        return handler()

    def field_header(self, key):
        self.expect(key)
        self.expect(":")

    def traces_doc(self):
        name = self.name()
        self.expect("{")
        self.field_header("alphabet")
        alphabet = self.idents_until(";")
        self.expect(";")
        self.field_header("words")
        words = []
        start = self.tok
        while not self.at(";"):
            tok = self.tok
            if tok.kind != "string":
                raise self.error("words are written as quoted strings")
            self.pos += 1
            words.append(tuple(tok.text.split()))
        self.expect(";")
        self.expect("}")
        b = self.guard(start, tr.traces, alphabet, words)
        warnings = ("word set was not prefix-closed and has been closed",) if b.normalized else ()
        return Document("traces", name, b, warnings)

    def label(self):
        """Body of ``{a,b}`` after the opening brace."""
        tok = self.tok
        actions = self.idents_until("}")
        self.expect("}")
        if not actions:
            raise self.error("interaction labels must be non-empty", tok)
        return frozenset(actions)

    def lts_doc(self):
        name = self.name()
        self.expect("{")
        start = self.tok
        self.field_header("states")
        states = []
        while not self.at(";"):
            states.append(self.name("state"))
        self.expect(";")
        self.field_header("alphabet")
        alphabet = self.idents_until(";")
        self.expect(";")
        self.field_header("trans")
        trans = []
        while not self.at(";"):
            src = self.name("state")
            self.expect("-{")
            label = self.label()
            self.expect("->")
            dst = self.name("state")
            trans.append((src, label, dst))
            if not self.accept(","):
                break
        self.expect(";")
        self.expect("}")
        return Document("lts", name, self.guard(start, lt.lts, states, alphabet, trans))

    def lattice_doc(self):
        tok = self.tok
        name = self.ident("lattice name")
        if name in self.lattices or name in ("Id", "Pw", "x") or re.fullmatch(r"B\d+", name):
            raise self.error(f"lattice name {name!r} is reserved or already declared", tok)
        self.expect("{")
        self.field_header("elements")
        elements = self.idents_until(";")
        self.expect(";")
        self.field_header("bottom")
        bottom = self.ident("bottom element")
        self.expect(";")
        joins = {}
        if self.at("join"):
            self.field_header("join")
            while not self.at(";"):
                x = self.ident()
                y = self.ident()
                self.expect("=")
                joins[x, y] = self.ident()
                if not self.accept(","):
                    break
            self.expect(";")
        self.expect("}")
        lat = self.guard(tok, co.Lattice.from_joins, name, elements, bottom, joins)
        self.lattices[name] = lat
        return Document("lattice", name, lat)

    def functor_doc(self):
        name = self.ident("functor name")
        self.expect("=")
        F = self.functor()
        self.functors[name] = F
        return Document("functor", name, F)

    # functor grammar: F := P ('x' P)* ; P := A ('^' '{' acts '}')* ;
    # A := Id | Pw(F) | (F) | lattice | B<k> | functor name
    def functor(self):
        F = self.functor_power()
        while self.accept("x"):
            F = co.Prod(F, self.functor_power())
        return F

    def functor_power(self):
        F = self.functor_atom()
        while self.accept("^"):
            tok = self.tok
            self.expect("{")
            acts = self.idents_until("}")
            self.expect("}")
            F = self.guard(tok, co.Exp, tuple(acts), F)
        return F

    def functor_atom(self):
        tok = self.tok
        if self.accept("("):
            F = self.functor()
            self.expect(")")
            return F
        word = self.ident("functor")
        if word == "Id":
            return co.Id()
        if word == "Pw":
            self.expect("(")
            F = self.functor()
            self.expect(")")
            return co.Pow(F)
        m = re.fullmatch(r"B(\d+)", word)
        if m:
            k = int(m.group(1))
            if k < 1:
                raise self.error("B0 is not a lattice", tok)
            F = co.Const(co.BOOL)
            for _ in range(k - 1):
                F = co.Prod(F, co.Const(co.BOOL))
            return F
        if word in self.functors:
            return self.functors[word]
        if word in self.lattices:
            return co.Const(self.lattices[word])
        raise self.error(f"unknown functor or lattice {word!r}", tok)

    def coalgebra_doc(self):
        name = self.name()
        self.expect(":")
        F = self.functor()
        self.expect("{")
        start = self.tok
        self.field_header("states")
        states = []
        while not self.at(";"):
            states.append(self.name("state"))
        self.expect(";")
        structure = {}
        while not self.at("}"):
            tok = self.tok
            s = self.name("state")
            self.expect("->")
            if s in structure:
                raise self.error(f"state {s!r} defined twice", tok)
            structure[s] = self.value(F)
            self.expect(";")
        self.expect("}")
        return Document("coalgebra", name, self.guard(start, co.Coalgebra, F, tuple(states), structure))

    def value(self, F):
        tok = self.tok
        match F:
            case co.Id():
                return self.name("state")
            case co.Const(lat):
                v = self.ident("lattice element")
                if v not in lat.elements:
                    raise self.error(f"{v!r} is not an element of lattice {lat.name}", tok)
                return v
            case co.Prod(l, r):
                self.expect("(")
                x = self.value(l)
                self.expect(",")
                y = self.value(r)
                self.expect(")")
                return (x, y)
            case co.Exp(alphabet, body):
                self.expect("[")
                table = {}
                while not self.at("]"):
                    key_tok = self.tok
                    a = self.ident("action")
                    if a not in alphabet or a in table:
                        raise self.error(f"unexpected or repeated table entry {a!r}", key_tok)
                    self.expect(":")
                    table[a] = self.value(body)
                    if not self.accept(","):
                        break
                self.expect("]")
                if set(table) != set(alphabet):
                    raise self.error(f"table must cover exactly {{{', '.join(alphabet)}}}", tok)
                return tuple(table[a] for a in alphabet)
            case co.Pow(body):
                self.expect("{")
                items = set()
                while not self.at("}"):
                    items.add(self.value(body))
                    if not self.accept(","):
                        break
                self.expect("}")
                return frozenset(items)
        raise self.error(f"unknown functor {F!r}", tok)

    def rule_set(self):
        tok = self.tok
        self.expect("arity")
        arity = self.integer()
        negative = self.accept("negative")
        self.expect("{")
        rules = []
        while not self.at("}"):
            rules.append(self.rule(arity))
            self.expect(";")
        self.expect("}")
        return self.guard(tok, lt.SosRuleSet, arity, tuple(rules), negative)

    def rule(self, arity):
        tok = self.tok
        self.expect("rule")
        premises = [None] * arity
        negatives = [[] for _ in range(arity)]
        while not self.at("=>"):
            neg = self.accept("!")
            pos_tok = self.tok
            i = self.integer()
            if not 1 <= i <= arity:
                raise self.error(f"position {i} outside 1..{arity}", pos_tok)
            self.expect("{")
            label = self.label()
            if neg:
                negatives[i - 1].append(label)
            elif premises[i - 1] is not None:
                raise self.error(f"two positive premises at position {i}", pos_tok)
            else:
                premises[i - 1] = label
        self.expect("=>")
        self.expect("{")
        conclusion = self.label()
        return self.guard(tok, lt.SosRule, tuple(premises),
                          tuple(tuple(ls) for ls in negatives), conclusion)

    def rules_doc(self):
        name = self.ident("rule set name")
        rs = self.rule_set()
        self.rules[name] = rs
        return Document("rules", name, rs)

    def operator_doc(self):
        name = self.ident("operator name")
        self.expect("=")
        op = self.operator()
        self.operators[name] = op
        return Document("operator", name, op)

    def operator(self):
        tok = self.tok
        word = self.ident("operator")
        g = lambda fn, *a: self.guard(tok, fn, *a)
        if word == "parallel":
            self.expect("(")
            n = self.integer()
            self.expect(")")
            return g(core.Parallel, n)
        if word == "bip":
            self.expect("{")
            gamma = []
            while not self.at("}"):
                gamma.append(frozenset(self.idents_until_any((";", "}"))))
                self.accept(";")
            self.expect("}")
            self.expect("arity")
            return g(core.BipGamma, frozenset(gamma), self.integer())
        if word == "gamma":
            self.expect("{")
            return g(core.GammaSync, self.label())
        if word == "sos":
            if self.accept("("):
                ref_tok = self.tok
                ref = self.ident("rule set name")
                self.expect(")")
                if ref not in self.rules:
                    raise self.error(f"unknown rule set {ref!r}", ref_tok)
                return core.SosRules(self.rules[ref])
            return core.SosRules(self.rule_set())
        if word in ("extend", "reduce", "meet", "compose"):
            self.expect("(")
            first = self.operator()
            self.expect(",")
            if word == "meet":
                out = g(core.OpMeet, first, self.operator())
            elif word == "compose":
                second = self.operator()
                self.expect(",")
                out = g(core.Compose, first, second, self.integer())
            elif word == "extend":
                out = g(core.ArityExtend, first, self.integer())
            else:
                m = self.integer()
                asserted = self.accept(",") and (self.expect("asserted") or True)
                out = g(core.ArityReduce, first, m, bool(asserted))
            self.expect(")")
            return out
        if word in self.operators:
            return self.operators[word]
        raise self.error(f"unknown operator {word!r}", tok)

    def idents_until_any(self, stops):
        out = []
        while not any(self.at(s) for s in stops):
            out.append(self.ident())
            self.accept(",")
        return out


def parse_all(text):
    """Every document of ``text`` in order, lattice declarations included."""
    return _Parser(text).documents()


def parse(text):
    """The single behaviour, functor, rule set or operator document of ``text``.

    Lattice declarations (and functor or rule set definitions referenced by
    the final document) may precede it; the last document is returned.
    """
    docs = [d for d in parse_all(text) if d.kind != "lattice"]
    if not docs:
        raise FormatError("no document found", 1, 1)
    return docs[-1]


def parse_operator(text):
    doc = parse(text if text.lstrip().startswith(("op ", "rules ")) else f"op _ = {text}")
    if doc.kind != "operator":
        raise FormatError(f"expected an operator, found a {doc.kind} document", 1, 1)
    return doc.body


# -- serialization ----------------------------------------------------------

def show_name(s):
    if _IDENT_RE.match(s):
        return s
    if not STATE_RE.match(s):
        raise FormatError(f"cannot serialize name {s!r}")
    return f'"{s}"'


def show_functor(F):
    match F:
        case co.Id():
            return "Id"
        case co.Const(lat):
            return lat.name
        case co.Prod(l, r):
            right = show_functor(r)
            if isinstance(r, co.Prod):
                right = f"({right})"
            return f"{show_functor(l)} x {right}"
        case co.Exp(alphabet, body):
            base = show_functor(body)
            if isinstance(body, co.Prod):
                base = f"({base})"
            return f"{base}^{{{','.join(alphabet)}}}"
        case co.Pow(body):
            return f"Pw({show_functor(body)})"
    raise FormatError(f"unknown functor {F!r}")


def show_value(F, v):
    match F:
        case co.Id():
            return show_name(v)
        case co.Const():
            return v
        case co.Prod(l, r):
            return f"({show_value(l, v[0])}, {show_value(r, v[1])})"
        case co.Exp(alphabet, body):
            return "[" + ", ".join(f"{a}: {show_value(body, x)}" for a, x in zip(alphabet, v)) + "]"
        case co.Pow(body):
            return "{" + ", ".join(sorted(show_value(body, x) for x in v)) + "}"
    raise FormatError(f"unknown functor {F!r}")


def _block(head, fields):
    """``head { f1; f2; }`` on one line if short, else one field per line."""
    one = f"{head} {{ " + " ".join(f + ";" for f in fields) + " }"
    if len(one) <= LINE_WIDTH and "\n" not in one:
        return one
    return f"{head} {{\n" + "".join(f"  {f};\n" for f in fields) + "}"


def _field(key, items, sep=" "):
    return f"{key}:" + (" " + sep.join(items) if items else "")


def _show_traces(name, b):
    words = ['"' + " ".join(w) + '"' for w in b.sorted_words]
    return _block(f"traces {show_name(name)}", [
        _field("alphabet", sorted(b.alphabet)), _field("words", words)])


def _show_lts(name, b):
    trans = [f"{show_name(s)} -{show_label(l)}-> {show_name(d)}" for s, l, d in b.sorted_transitions]
    fields = [_field("states", [show_name(s) for s in b.states]),
              _field("alphabet", sorted(b.alphabet))]
    one = _block(f"lts {show_name(name)}", fields + [_field("trans", trans, ", ")])
    if "\n" not in one:
        return one
    tail = "trans:" + "".join(f"\n    {t}," for t in trans).rstrip(",")
    return _block(f"lts {show_name(name)}", fields + [tail])


def _show_lattice(lat):
    joins = [f"{x} {y} = {z}" for (x, y), z in sorted(lat.explicit_joins().items())]
    fields = [_field("elements", list(lat.elements)), f"bottom: {lat.bottom}"]
    if joins:
        fields.append(_field("join", joins, ", "))
    return _block(f"lattice {lat.name}", fields)


def _show_coalgebra(name, c):
    fields = [_field("states", [show_name(s) for s in c.carrier])]
    fields += [f"{show_name(s)} -> {show_value(c.functor, c(s))}" for s in c.carrier]
    body = f"coalgebra {show_name(name)} : {show_functor(c.functor)} {{\n"
    return body + "".join(f"  {f};\n" for f in fields) + "}"


def show_rule(rule):
    parts = []
    for i, (p, negs) in enumerate(zip(rule.premises, rule.negatives), start=1):
        if p is not None:
            parts.append(f"{i}{show_label(p)}")
        parts.extend(f"!{i}{show_label(l)}" for l in negs)
    return f"rule {' '.join(parts)} => {show_label(rule.conclusion)}"


def show_rule_set(rs):
    head = f"arity {rs.arity}" + (" negative" if rs.negative else "")
    rules = [show_rule(r) for r in rs.rules]
    if not rules:
        return f"{head} {{ }}"
    one = f"{head} {{ " + " ".join(r + ";" for r in rules) + " }"
    if len(one) <= LINE_WIDTH:
        return one
    return f"{head} {{\n" + "".join(f"  {r};\n" for r in rules) + "}"


def show_operator(op):
    match op:
        case core.Parallel(n):
            return f"parallel({n})"
        case core.BipGamma(gamma, n):
            inner = "; ".join(" ".join(label_key(a)) for a in sorted(gamma, key=label_key))
            return f"bip{{{inner}}} arity {n}"
        case core.GammaSync(a):
            return f"gamma{show_label(a)}"
        case core.SosRules(rules):
            return f"sos {show_rule_set(rules)}"
        case core.Compose(outer, inner, i):
            return f"compose({show_operator(outer)}, {show_operator(inner)}, {i})"
        case core.OpMeet(left, right):
            return f"meet({show_operator(left)}, {show_operator(right)})"
        case core.ArityExtend(inner, m):
            return f"extend({show_operator(inner)}, {m})"
        case core.ArityReduce(inner, m, asserted):
            suffix = ", asserted" if asserted else ""
            return f"reduce({show_operator(inner)}, {m}{suffix})"
    raise FormatError(f"unknown operator {op!r}")


def _main_text(doc):
    name, body = doc.name, doc.body
    match doc.kind:
        case "traces":
            return _show_traces(name, body)
        case "lts":
            return _show_lts(name, body)
        case "coalgebra":
            return _show_coalgebra(name, body)
        case "functor":
            return f"functor {name} = {show_functor(body)}"
        case "lattice":
            return _show_lattice(body)
        case "rules":
            return f"rules {name} {show_rule_set(body)}"
        case "operator":
            return f"op {name} = {show_operator(body)}"
    raise FormatError(f"unknown document kind {doc.kind!r}")


def _functor_of(doc):
    if doc.kind == "coalgebra":
        return doc.body.functor
    if doc.kind == "functor":
        return doc.body
    return None


def serialize_all(docs):
    """Canonical text of several documents, newline-terminated.

    User lattices used by functors are declared once, before first use.
    """
    seen = set()
    chunks = []
    for doc in docs:
        if doc.kind == "lattice":
            if doc.name in seen:
                continue
            seen.add(doc.name)
        F = _functor_of(doc)
        if F is not None:
            user = {n: l for n, l in co.lattices_of(F).items()
                    if n not in co.BUILTIN_LATTICES and n not in seen}
            for n in sorted(user):
                chunks.append(_show_lattice(user[n]))
            seen |= set(user)
        chunks.append(_main_text(doc))
    return "".join(c + "\n" for c in chunks)


def serialize(doc):
    """Canonical text of one document, preceded by the lattices it needs."""
    return serialize_all([doc])


def behaviour_document(b, name="B"):
    kind = core.behaviour_type(b).kind
    return Document(kind, name, b)


def serialize_behaviour(b, name="B"):
    return serialize(behaviour_document(b, name))


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def load_all(path):
    with open(path, encoding="utf-8") as fh:
        return parse_all(fh.read())
