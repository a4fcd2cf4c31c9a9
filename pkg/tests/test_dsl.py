import pytest
from hypothesis import given, settings, strategies as st

from rhs_actions.dsl import Node, elaborate, normalize, parse_group_spec, tokenize
from rhs_actions.errors import BudgetError, ElaborationError, InputError, SpecSyntaxError
from rhs_actions.groups import is_isomorphic


def test_parse_examples():
    assert parse_group_spec("C(12)") == Node("cyclic", (12,))
    assert parse_group_spec("Q(8) x C(3)") == Node("product", (), (Node("quaternion", (8,)), Node("cyclic", (3,))))
    node = parse_group_spec("quot(Q(40,3,1), Z(2))")
    assert node.kind == "quotient" and node.params == (2,)
    assert node.children[0] == Node("quaternion", (40, 3, 1))
    assert elaborate(node).order == 60


def test_elaborate_examples():
    V = elaborate("D(4)")
    assert V.order == 4 and V.exponent == 2
    assert elaborate("quot(Q(8), Z)").order == 4
    with pytest.raises(ElaborationError):
        elaborate("Q(6)")


def test_perm_specs():
    G = elaborate("perm[(0 1 2 3)]")
    assert G.order == 4
    S3 = elaborate("perm[(0 1);(0 1 2)]")
    assert is_isomorphic(S3, elaborate("D(6)"))[0]
    assert elaborate("perm[(0,1,2)]").order == 3


@pytest.mark.parametrize("text,offset", [("O(47,1,1)", 2), ("C(", 2), ("C(3) x", 6), ("X(3)", 0), ("C(3)) ", 4),
                                         ("quot(C(4), Y)", 11), ("", 0)])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(SpecSyntaxError) as info:
        parse_group_spec(text)
    assert info.value.offset == offset


def test_offsets_are_bytes():
    toks = tokenize("C(3) x C(4)")
    assert [t.offset for t in toks][:4] == [0, 1, 2, 3]
    with pytest.raises(SpecSyntaxError) as info:
        parse_group_spec("C(3) é")
    assert info.value.offset == 5


def test_elaboration_paths():
    with pytest.raises(ElaborationError) as info:
        elaborate("C(2) x Q(6)")
    assert info.value.path == "$.1"
    with pytest.raises(ElaborationError) as info:
        elaborate("quot(C(2) x C(2), Z)")
    assert info.value.path == "$"
    with pytest.raises(ElaborationError):
        elaborate("quot(C(2) x C(2), Z(2))")
    with pytest.raises(ElaborationError):
        elaborate("perm[(0 1)(1 2)]")


def test_budget_passes_through():
    with pytest.raises(BudgetError):
        elaborate("C(100000)")


def test_errors_are_input_errors():
    assert issubclass(SpecSyntaxError, InputError) and issubclass(ElaborationError, InputError)


atoms = st.one_of(
    st.integers(1, 12).map(lambda n: f"C({n})"),
    st.sampled_from([4, 6, 8, 10]).map(lambda n: f"D({n})"),
    st.sampled_from([8, 12, 16]).map(lambda n: f"Q({n})"),
    st.sampled_from(["BT", "Q(40,3,1)", "O(48,1,1)", "SL(2,3)", "perm[(0 1 2)]", "perm[(0 1);(2 3)]"]),
)
specs = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(" x ".join),
        inner.map(lambda s: f"quot({s}, Z)"),
    ),
    max_leaves=3,
)


@settings(max_examples=120, deadline=None)
@given(specs)
def test_round_trip(text):
    ast = parse_group_spec(text)
    canon = normalize(ast)
    again = parse_group_spec(canon)
    # a product nested inside a product is flattened by the grammar
    assert normalize(again) == canon
    spaced = canon.replace("(", " ( ").replace(",", " , ")
    assert normalize(parse_group_spec(spaced)) == canon


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="CDQOZxquotperSLBTI()[],; 0123456789é", max_size=20))
def test_fuzz_never_crashes(text):
    try:
        G = elaborate(text)
    except (InputError, BudgetError):
        return
    assert G.order >= 1
