import json

import _linkhom as lh


def test_words_and_expansion():
    w = lh.Word("[x, y z]")
    assert len(w) == 6
    assert str(lh.Word(str(w))) == str(w)
    s = lh.expand("[x,y]", lh.RepeatPolicy.no_repeat())
    assert not s.is_one() and len(s) == 3
    assert lh.expand("x x^-1", lh.RepeatPolicy.plus()).is_one()


def test_borromean():
    b = lh.borromean()
    assert len(b) == 3
    assert b.lk(0, 1) == 0
    assert lh.mu_bar(b, [1, 2], 0) == 1
    assert not lh.is_h_trivial(b)
    wit = json.loads(lh.h_trivial_witness(b))
    assert abs(wit["coefficient"]) == 1


def test_link_json_round_trip():
    b = lh.borromean()
    text = b.to_json()
    assert lh.Link.from_json(text).to_json() == text
    p = lh.fig3_pattern()
    assert lh.Pattern.from_json(p.to_json()).to_json() == p.to_json()


def test_patterns_and_satellites():
    wh = lh.whitehead_pattern()
    assert lh.is_h_trivial(lh.with_meridian(wh))
    assert lh.is_h_trivial_in_torus(wh)
    fig3 = lh.fig3_pattern()
    assert lh.is_h_trivial(lh.with_meridian(fig3))
    assert not lh.is_h_trivial_in_torus(fig3)
    good = lh.motivating_example(lh.fig3_pattern(), lh.fig3_pattern())
    assert len(good) == 5


def test_elementary_and_decompose():
    ess = lh.elementary_link("A", "essential")
    assert not lh.is_h_trivial(ess)
    ht = lh.elementary_link("A", "htrivial")
    assert lh.is_h_trivial(ht)
    d = json.loads(lh.decompose("ln[x, y z, y z, w]"))
    assert d["ok"] and len(d["terms"]) == 1
    assert d["terms"][0]["basic"]["a"] == "y"
