import math
import re

import pytest
from hypothesis import given, strategies as st

from cyclicdeg import config
from cyclicdeg.config import OrderBoundError
from cyclicdeg.specparse import (
    A4,
    Cyclic,
    Dihedral,
    Modular,
    Product,
    Quasidihedral,
    Quaternion,
    SemidirectCyclic,
    SpecConstraintError,
    SpecSyntaxError,
    build,
    build_spec,
    parse,
)


def test_product_example():
    assert parse("Zsd(7,3,2) x Z5") == Product((SemidirectCyclic(7, 3, 2), Cyclic(5)))


def test_atoms():
    assert parse("D8") == Dihedral(8)
    assert parse("Q16") == Quaternion(16)
    assert parse("SD32") == Quasidihedral(32)
    assert parse("M(3,3)") == Modular(3, 3)
    assert parse("A4") == A4()
    assert parse("S3") == Dihedral(6)


def test_whitespace_is_ignored():
    assert parse("  Zsd( 7 , 3 ,2 )x   Z5 ").render() == "Zsd(7,3,2) x Z5"


def test_products_flatten():
    e = parse("Z2 x Z3 x Z5")
    assert isinstance(e, Product) and len(e.factors) == 3
    assert e.order == 30


def test_constraint_error_names_the_condition():
    with pytest.raises(SpecConstraintError) as info:
        parse("Zsd(7,3,3)")
    assert "3^3 = 6 (mod 7)" in str(info.value)
    assert info.value.offset == 0


def test_quaternion_order_constraint():
    with pytest.raises(SpecConstraintError) as info:
        parse("Z2 x Q12")
    assert "2^t" in str(info.value)
    assert info.value.offset == 5


@pytest.mark.parametrize("text", ["SD8", "D7", "D2", "M(2,3)", "M(4,3)", "Z0", "Q4"])
def test_constraint_violations(text):
    with pytest.raises(SpecConstraintError):
        parse(text)


@pytest.mark.parametrize("text,offset", [
    ("", 0), ("X5", 0), ("Z", 1), ("Zsd(7,3)", 7), ("D8 x", 4), ("D8 D8", 3),
    ("M(3;3)", 3), ("Z5 x x Z3", 5), ("Zé5", 1), ("éZ5", 0), ("Z5 é", 3),
])
def test_syntax_error_offsets(text, offset):
    with pytest.raises(SpecSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_offsets_are_byte_offsets():
    with pytest.raises(SpecSyntaxError) as info:
        parse("Z5 x éé")
    assert info.value.offset == 5
    with pytest.raises(SpecSyntaxError) as info:
        parse("é")
    assert info.value.offset == 0


def test_syntax_errors_take_precedence_over_constraints():
    with pytest.raises(SpecSyntaxError):
        parse("Zsd(7,3,3) x #")


def test_build_shares_tables():
    assert build_spec("D8 x Z3") is build_spec("D8  x Z3")


def test_build_checks_order_bound(monkeypatch):
    monkeypatch.setattr(config.settings, "max_order", 50)
    with pytest.raises(OrderBoundError):
        build(parse("D8 x Z7"))


def test_built_product_spec():
    G = build_spec("Zsd(7,3,2) x Z5")
    assert G.order == 105
    assert G.spec == "Zsd(7,3,2) x Z5"


# ---- properties --------------------------------------------------------------

def _pow2(lo, hi):
    return st.integers(lo, hi).map(lambda t: 2 ** t)


def _semidirect():
    @st.composite
    def make(draw):
        m = draw(st.integers(1, 30))
        n = draw(st.integers(1, 12))
        units = [k for k in range(1, max(m, 2)) if m == 1 or (pow(k, n, m) == 1 and math.gcd(k, m) == 1)]
        return SemidirectCyclic(m, n, draw(st.sampled_from(units or [1])))
    return make()


atoms = st.one_of(
    st.integers(1, 500).map(Cyclic),
    st.integers(2, 60).map(lambda h: Dihedral(2 * h)),
    _pow2(3, 8).map(Quaternion),
    _pow2(4, 8).map(Quasidihedral),
    st.sampled_from([Modular(2, 4), Modular(2, 6), Modular(3, 3), Modular(5, 3), Modular(7, 4)]),
    st.just(A4()),
    _semidirect(),
)

exprs = st.lists(atoms, min_size=1, max_size=4).map(lambda fs: fs[0] if len(fs) == 1 else Product(tuple(fs)))


@given(exprs)
def test_round_trip(expr):
    text = expr.render()
    again = parse(text)
    assert again == expr
    assert again.render() == text


@given(exprs, st.data())
def test_whitespace_variants_parse_the_same(expr, data):
    # pad around punctuation only; spaces inside a keyword or number split it
    pieces = re.split(r"([(),x])", expr.render().replace(" ", ""))
    spaced = "".join(p + " " * data.draw(st.integers(0, 2)) for p in pieces)
    assert parse(spaced) == expr


JUNK = st.sampled_from(list("#!?;:%&*=+[]{}<>|~@$^é\\/'\"`"))


@given(exprs, st.data())
def test_junk_character_reports_its_offset(expr, data):
    text = expr.render()
    positions = [i for i, c in enumerate(text) if not c.isspace()]
    i = data.draw(st.sampled_from(positions))
    junk = data.draw(JUNK)
    mutated = text[:i] + junk + text[i + 1:]
    with pytest.raises(SpecSyntaxError) as info:
        parse(mutated)
    assert info.value.offset == len(mutated[:i].encode("utf-8"))
