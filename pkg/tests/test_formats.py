import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from behaviour_types import coalgebra as co
from behaviour_types import core, formats
from behaviour_types import lts as lt
from behaviour_types import traces as tr
from behaviour_types.axioms import GeneratorConfig, gen_behaviour
from behaviour_types.errors import FormatError

from strategies import systems, trace_sets

FIXTURES = Path(formats.__file__).parent / "fixtures"
CORPUS = sorted(FIXTURES.glob("*.bt"))


def roundtrip(text):
    once = formats.serialize_all(formats.parse_all(text))
    twice = formats.serialize_all(formats.parse_all(once))
    return once, twice


class TestParse:
    def test_traces(self):
        doc = formats.parse('traces B { alphabet: a b; words: "" "a"; }')
        assert doc.kind == "traces" and doc.name == "B"
        assert doc.body == tr.traces("ab", ["a"])

    def test_lts_zero(self):
        assert formats.parse("lts Z { states: q1; alphabet:; trans:; }").body == \
            lt.lts(["q1"], ())

    def test_lts_transitions(self):
        doc = formats.parse("lts L { states: p q; alphabet: a b; trans: p -{a,b}-> q, q -{a}-> q; }")
        assert doc.body == lt.lts(["p", "q"], "ab", [("p", "a b", "q"), ("q", "a", "q")])

    def test_functor_powers_expand(self):
        F = formats.parse("functor F = (B2 x Pw(Id))^{a,b}").body
        B = co.Const(co.BOOL)
        assert F == co.Exp(("a", "b"), co.Prod(co.Prod(B, B), co.Pow(co.Id())))

    def test_functor_product_is_left_associative(self):
        F = formats.parse("functor F = B x B x Id").body
        assert F == co.Prod(co.Prod(co.Const(co.BOOL), co.Const(co.BOOL)), co.Id())

    def test_trivial_lattice(self):
        assert formats.parse("functor F = 1 x Id").body == co.Prod(co.Const(co.TRIVIAL), co.Id())

    def test_user_lattice(self):
        text = ("lattice L3 { elements: lo mid hi; bottom: lo; join: mid hi = hi; }\n"
                "coalgebra C : L3 x Pw(Id) { states: s; s -> (mid, {s}); }")
        c = formats.parse(text).body
        assert c("s") == ("mid", frozenset({"s"}))

    def test_coalgebra_values(self):
        text = "coalgebra M : (B x Id)^{a,b} { states: s t; s -> [a: (1, t), b: (0, s)]; t -> [a: (0, t), b: (0, t)]; }"
        c = formats.parse(text).body
        assert c("s") == (("1", "t"), ("0", "s"))

    def test_operators(self):
        assert formats.parse_operator("op f1 = extend(gamma{a1 a2}, 4)") == \
            core.ArityExtend(core.GammaSync({"a1", "a2"}), 4)
        assert formats.parse_operator("op g = bip{a b} arity 2") == core.BipGamma([{"a", "b"}], 2)
        assert formats.parse_operator("bip{ a b; c } arity 2") == core.BipGamma([{"a", "b"}, {"c"}], 2)
        assert formats.parse_operator("compose(parallel(2), parallel(3), 1)").arity == 4
        assert formats.parse_operator("reduce(parallel(3), 2)") == core.ArityReduce(core.Parallel(3), 2)

    def test_operator_names_resolve(self):
        text = "op f1 = gamma{a1 a2}\nop f2 = gamma{a3 a4}\nop m = meet(f1, f2)"
        assert formats.parse_operator(text) == core.OpMeet(core.GammaSync({"a1", "a2"}),
                                                           core.GammaSync({"a3", "a4"}))

    def test_rules(self):
        text = "rules R arity 1 negative { rule 1{a} !1{b} => {a}; }"
        rules = formats.parse(text).body
        assert rules == lt.SosRuleSet(1, (lt.SosRule(({"a"},), (({"b"},),)),), negative=True)

    def test_closure_warning(self):
        doc = formats.parse('traces B { alphabet: a b; words: "a b"; }')
        assert doc.warnings and ("a",) in doc.body.words


class TestErrors:
    @pytest.mark.parametrize("text, where", [
        ("lts X { states: a; alphabet: a; trans: a -{}-> a; }", "1:"),
        ("traces B { alphabet: a; words: \"b\"; }", "1:"),
        ("lts X {\n  states: a;\n  alphabet a;\n}", "3:"),
        ("op f = meet(parallel(2), parallel(3))", "1:"),
        ("op f = extend(nope, 3)", "1:"),
        ("functor F = Pw(Id", "1:"),
        ("coalgebra C : Pw(Id) { states: s; s -> t; }", "1:"),
        ("lattice L { elements: x y z; bottom: x; join:; }", "1:"),
    ])
    def test_positioned(self, text, where):
        with pytest.raises(FormatError) as info:
            formats.parse_all(text)
        assert str(info.value).startswith(where)

    def test_unterminated_string(self):
        with pytest.raises(FormatError):
            formats.parse_all('traces B { alphabet: a; words: "a; }')


class TestSerialize:
    def test_traces_zero(self):
        assert formats.serialize_behaviour(tr.zero()) == 'traces B { alphabet:; words: ""; }\n'

    def test_product_names(self):
        out = formats.serialize_behaviour(lt.parallel(
            lt.lts(["p0"], "a"), lt.lts(["q0"], "b")))
        assert "p0.q0" in out

    def test_long_documents_break_lines(self):
        b = lt.lts(["p0", "p1"], "ab", [("p0", "a", "p1"), ("p1", "b", "p0")])
        lines = formats.serialize_behaviour(b, "L").splitlines()
        assert lines[0] == "lts L {" and lines[-1] == "}"

    def test_user_lattice_emitted_once(self):
        text = (FIXTURES / "machines.coalgebra.bt").read_text()
        out = formats.serialize_all(formats.parse_all(text))
        assert out.count("lattice ") == text.count("lattice ")

    @given(trace_sets())
    def test_traces_roundtrip(self, b):
        assert formats.parse(formats.serialize_behaviour(b)).body == b

    @given(systems())
    def test_lts_roundtrip(self, b):
        assert formats.parse(formats.serialize_behaviour(b)).body == b

    @settings(max_examples=60)
    @given(st.sampled_from(["Pw(Id)", "(B x Id)^{a,b}", "B x B x Pw(Id)^{a,b}", "Pw(B x Id)"]),
           st.integers(0, 10**6))
    def test_coalgebra_roundtrip(self, text, seed):
        F = formats.parse(f"functor F = {text}").body
        c = gen_behaviour(GeneratorConfig(kind="coalgebra", functor=F), random.Random(seed))
        back = formats.parse(formats.serialize_behaviour(c)).body
        assert back.functor == c.functor and back.structure == c.structure

    @given(st.sampled_from([
        "parallel(2)", "bip{a b; c} arity 3", "gamma{a1 a2}", "extend(gamma{a1 a2}, 4)",
        "meet(bip{a} arity 2, bip{b} arity 2)", "compose(parallel(2), gamma{a b}, 2)",
        "reduce(parallel(3), 1)", "reduce(extend(gamma{x y}, 3), 2)",
        "sos arity 2 { rule 1{a} 2{b} => {a,b}; }",
    ]))
    def test_operator_roundtrip(self, text):
        op = formats.parse_operator(text)
        doc = formats.Document("operator", "f", op)
        assert formats.parse_operator(formats.serialize(doc)) == op


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.name)
def test_corpus_is_canonical(path):
    text = path.read_text()
    once, twice = roundtrip(text)
    assert once == twice == text
