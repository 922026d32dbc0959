import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbrevise.props import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    FormulaSyntaxError,
    Not,
    Or,
    UnknownAtomError,
    Vocabulary,
    VocabularyTooLarge,
    World,
    desugar,
    minterm,
    models,
    parse_formula,
    render,
    satisfies,
)

from conftest import ALPHA_QRS


def bits(ws):
    return {w.bits for w in ws}


def test_world_order_matches_truth_vectors(qr, qrs):
    assert [w.bits for w in qr.worlds()] == ["11", "10", "01", "00"]
    assert [w.bits for w in qrs.worlds()] == ["111", "110", "101", "100", "011", "010", "001", "000"]
    assert qrs.world("111").index == 0
    assert qrs.world("000").index == 7


def test_vocabulary_validation():
    with pytest.raises(ValueError):
        Vocabulary([])
    with pytest.raises(ValueError):
        Vocabulary(["q", "q"])
    with pytest.raises(ValueError):
        Vocabulary(["true"])
    with pytest.raises(VocabularyTooLarge):
        Vocabulary([f"a{i}" for i in range(11)])
    assert Vocabulary([f"a{i}" for i in range(11)], max_atoms=11).n_worlds == 2048


def test_parse_nested_formula(qrs):
    f = parse_formula(ALPHA_QRS, qrs)
    q, r, s = Atom("q"), Atom("r"), Atom("s")
    assert f == Or(And(q, r), And(And(q, Not(r)), s))


def test_parse_constants_and_precedence(qr):
    assert parse_formula("true", qr) == TRUE
    assert parse_formula("false") == FALSE
    # ! binds tighter than &, & tighter than |
    assert parse_formula("!q & r | q", qr) == Or(And(Not(Atom("q")), Atom("r")), Atom("q"))


@pytest.mark.parametrize("text, pos", [("(q &", 4), ("q r", 2), ("q $ r", 2), (")", 0), ("", 0)])
def test_syntax_errors_carry_position(qr, text, pos):
    with pytest.raises(FormulaSyntaxError) as exc:
        parse_formula(text, qr)
    assert exc.value.position == pos


def test_unknown_atom(qr):
    with pytest.raises(UnknownAtomError):
        parse_formula("q & s", qr)


def test_satisfies_example(qrs, alpha_qrs):
    assert satisfies(qrs.world("111"), alpha_qrs, qrs)
    assert not satisfies(qrs.world("100"), alpha_qrs, qrs)
    assert all(satisfies(w, TRUE, qrs) for w in qrs.worlds())


def test_models(qr, qrs, alpha_qrs):
    assert bits(models(alpha_qrs, qrs)) == {"111", "110", "101"}
    assert models(FALSE, qr) == frozenset()
    assert bits(models(parse_formula("q", qr), qr)) == {"11", "10"}


def test_minterm_has_single_model(qrs):
    for w in qrs.worlds():
        assert models(minterm(w, qrs), qrs) == {w}


# --- properties over random formulas ---


def formulas(atoms):
    leaves = st.one_of(st.sampled_from([Atom(a) for a in atoms]), st.sampled_from([TRUE, FALSE]))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            sub.map(Not),
            st.tuples(sub, sub).map(lambda t: And(*t)),
            st.tuples(sub, sub).map(lambda t: Or(*t)),
        ),
        max_leaves=10,
    )


V4 = Vocabulary(["a", "b", "c", "d"])


@settings(max_examples=200, deadline=None)
@given(formulas(V4.atoms), formulas(V4.atoms))
def test_models_are_boolean_algebra(f, g):
    W = frozenset(V4.worlds())
    assert models(Not(f), V4) == W - models(f, V4)
    assert models(And(f, g), V4) == models(f, V4) & models(g, V4)
    assert models(Or(f, g), V4) == models(f, V4) | models(g, V4)


@settings(max_examples=200, deadline=None)
@given(formulas(V4.atoms))
def test_render_parse_round_trip(f):
    assert parse_formula(render(f), V4) == f


@settings(max_examples=100, deadline=None)
@given(formulas(V4.atoms))
def test_desugaring_preserves_models(f):
    core = desugar(f, V4)

    def only_core(g):
        if isinstance(g, Atom):
            return True
        if isinstance(g, (Or, Const)):
            return False
        if isinstance(g, Not):
            return only_core(g.arg)
        return only_core(g.left) and only_core(g.right)

    assert only_core(core)
    assert models(core, V4) == models(f, V4)


def test_world_bits_round_trip():
    for n in range(1, 5):
        for i in range(2**n):
            w = World(i, n)
            assert World.from_bits(w.bits) == w
            assert [w.truth(k) for k in range(n)] == [b == "1" for b in w.bits]
