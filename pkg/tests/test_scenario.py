from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegaint.errors import DuplicateName, ScenarioSyntaxError, UnknownReference
from omegaint.fixtures import FIXTURES, fixture_text
from omegaint.scenario import KINDS, Block, Entry, List, Num, Ref, Scenario, Str, parse_scenario, print_scenario

SAMPLE = '''
# a comment
form omega {
  order = 1
  chart = "UX"
  expr = "v*d1(u)^2"
}
check c1 { type = "main"  form = omega  params = [[1, 0], [1, -1/2],] ; }
'''


def test_parse_sample():
    sc = parse_scenario(SAMPLE)
    assert [b.name for b in sc.blocks] == ["omega", "c1"]
    c1 = sc.block("c1")
    assert c1.get("form") == Ref("omega")
    assert c1.get("params") == List((List((Num(1), Num(0))), List((Num(1), Num(Fraction(-1, 2))))))
    assert c1.get("form").pos.line == 8
    assert sc.checks == [c1] and sc.forms[0].keys() == ["order", "chart", "expr"]


@pytest.mark.parametrize("text, cls, line, col", [
    ('form a { x = 1 }\nform a { }', DuplicateName, 2, 1),
    ('form a { x = 1  x = 2 }', DuplicateName, 1, 17),
    ('check c { form = nope }', UnknownReference, 1, 18),
    ('thing a { }', ScenarioSyntaxError, 1, 1),
    ('form a { x = [1 2] }', ScenarioSyntaxError, 1, 17),
    ('form a { x = }', ScenarioSyntaxError, 1, 14),
    ('form a {\n  x = @ }', ScenarioSyntaxError, 2, 7),
    ('form a { x = 1', ScenarioSyntaxError, 1, 15),
])
def test_errors_have_positions(text, cls, line, col):
    with pytest.raises(cls) as info:
        parse_scenario(text)
    assert (info.value.line, info.value.col) == (line, col)


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_round_trip(name):
    sc = parse_scenario(fixture_text(name))
    assert parse_scenario(print_scenario(sc)) == sc


idents = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)
leaves = st.one_of(
    st.builds(Str, st.text(st.characters(blacklist_categories=("Cs",)), max_size=10)),
    st.builds(Num, st.fractions(max_denominator=20)),
)
values = st.recursive(leaves, lambda kids: st.builds(lambda xs: List(tuple(xs)), st.lists(kids, max_size=4)),
                      max_leaves=10)


@st.composite
def scenarios(draw):
    names = draw(st.lists(idents, min_size=1, max_size=4, unique=True))
    blocks = []
    for i, n in enumerate(names):
        keys = draw(st.lists(idents, max_size=4, unique=True))
        entries = []
        for k in keys:
            v = draw(values)
            if i and draw(st.booleans()):
                v = Ref(names[draw(st.integers(0, i - 1))])
            entries.append(Entry(k, v))
        blocks.append(Block(draw(st.sampled_from(KINDS)), n, tuple(entries)))
    return Scenario(tuple(blocks))


@given(scenarios())
def test_print_parse_round_trip(sc):
    text = print_scenario(sc)
    assert parse_scenario(text) == sc
    assert print_scenario(parse_scenario(text)) == text
