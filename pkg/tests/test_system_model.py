import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from contextuality import (
    Bunch,
    ValidationError,
    bunch,
    connection,
    is_deterministic,
    is_simply_consistently_connected,
    is_strongly_consistently_connected,
    make_system,
    marginal,
    validate_system,
)
from contextuality.system_model import outcomes

from systems import HALF, c2_1, c2_2, example1, pr2, random_consistent_mixture, \
    random_deterministic, random_simple_not_strong


def raw_single(pmf):
    return {"contents": ["q"], "contexts": [{"id": "c", "contents": ["q"], "pmf": pmf}]}


class TestValidate:
    def test_example1_layout(self):
        s = example1()
        assert len(s.contents) == 4 and len(s.contexts) == 5
        assert len(s.relation) == 12

    def test_smallest_system_is_deterministic(self):
        s = validate_system(raw_single({"+": "1"}))
        assert is_deterministic(s)
        assert s.bunches[0].pmf == {(1,): 1}

    def test_rejects_bad_normalisation(self):
        with pytest.raises(ValidationError, match="sum"):
            validate_system(raw_single({"+": "1/2", "-": "1/3"}))

    @pytest.mark.parametrize("raw", [
        {"contents": ["q", "q"], "contexts": [{"id": "c", "contents": ["q"], "pmf": {"+": 1}}]},
        {"contents": ["q"], "contexts": [{"id": "c", "contents": ["q"], "pmf": {"+": 1}},
                                         {"id": "c", "contents": ["q"], "pmf": {"+": 1}}]},
        raw_single({"+": "3/2", "-": "-1/2"}),
        {"contents": ["q"], "contexts": [{"id": "c", "contents": ["r"], "pmf": {"+": 1}}]},
        {"contents": ["q", "r"], "contexts": [{"id": "c", "contents": ["q"], "pmf": {"+": 1}}]},
        {"contents": ["q"], "contexts": []},
        raw_single({"++": 1}),
        raw_single({"+": 0.5, "-": 0.5}),
        raw_single({"x": 1}),
    ], ids=["dup-content", "dup-context", "negative", "unknown-content", "unmeasured",
            "empty-relation", "bad-arity", "float", "bad-symbol"])
    def test_rejects(self, raw):
        with pytest.raises(ValidationError):
            validate_system(raw)

    def test_declared_relation_is_checked(self):
        raw = raw_single({"+": 1})
        assert validate_system({**raw, "relation": [["q", "c"]]})
        with pytest.raises(ValidationError, match="relation"):
            validate_system({**raw, "relation": [["q", "d"]]})

    def test_missing_entries_are_zero(self):
        s = validate_system(raw_single({"-": 1}))
        assert s.bunches[0].prob("+") == 0


def test_bunch_lookup():
    s = c2_1()
    assert bunch(s, "c1").contents == ("q1", "q2")
    single = validate_system(raw_single({"+": HALF, "-": HALF}))
    assert bunch(single, "c").size == 1
    with pytest.raises(KeyError):
        bunch(s, "nope")


def test_connection():
    conn = connection(example1(), "q1")
    assert conn.contexts == ("c1", "c3", "c4", "c5")
    single = validate_system(raw_single({"+": HALF, "-": HALF}))
    assert len(connection(single, "q")) == 1
    det = make_system(["a", "b"], {"c": (["a", "b"], {"++": 1})})
    assert connection(det, "a").members == (("c", 1),)
    with pytest.raises(KeyError):
        connection(det, "z")


class TestMarginal:
    def test_uniform(self):
        b = Bunch("c", ("a", "b"), {o: F(1, 4) for o in outcomes(2)})
        assert marginal(b, ["a"]) == {(-1,): HALF, (1,): HALF}

    def test_point_mass(self):
        b = Bunch("c", ("a", "b"), {"++": 1})
        assert marginal(b, ["b"]) == {(1,): 1}

    def test_pr_style_is_uniform(self):
        b = Bunch("c", ("a", "b"), {"++": HALF, "--": HALF})
        assert marginal(b, ["a"]) == marginal(b, ["b"]) == {(-1,): HALF, (1,): HALF}

    def test_reorders(self):
        b = Bunch("c", ("a", "b"), {"+-": 1})
        assert marginal(b, ["b", "a"]) == {(-1, 1): 1}

    def test_unknown_subset(self):
        with pytest.raises(ValueError):
            marginal(Bunch("c", ("a",), {"+": 1}), ["z"])


@st.composite
def random_bunch(draw):
    k = draw(st.integers(1, 4))
    weights = draw(st.lists(st.integers(0, 9), min_size=2 ** k, max_size=2 ** k)
                   .filter(lambda w: sum(w) > 0))
    total = sum(weights)
    names = tuple(f"x{i}" for i in range(k))
    return Bunch("c", names, {o: F(w, total) for o, w in zip(outcomes(k), weights)})


@settings(max_examples=100, deadline=None)
@given(random_bunch(), st.data())
def test_marginal_composes(b, data):
    outer = data.draw(st.lists(st.sampled_from(b.contents), unique=True, min_size=1))
    inner = data.draw(st.lists(st.sampled_from(outer), unique=True, min_size=1))
    two_step = marginal(Bunch("m", tuple(outer), marginal(b, outer)), inner)
    assert two_step == marginal(b, inner)
    assert sum(two_step.values()) == 1


class TestConnectedness:
    def test_c2_1_consistent(self):
        assert is_simply_consistently_connected(c2_1())

    def test_c2_2_violates_at_q2(self):
        res = is_simply_consistently_connected(c2_2())
        assert not res
        assert res.violations == [("q2", ("c1", "c2"))]

    def test_single_context(self):
        s = make_system(["a", "b"], {"c": (["a", "b"], {"+-": HALF, "-+": HALF})})
        assert is_simply_consistently_connected(s) and is_strongly_consistently_connected(s)

    def test_example1_strong(self):
        assert is_strongly_consistently_connected(example1())

    def test_pr_pair_simple_not_strong(self):
        res = is_strongly_consistently_connected(pr2())
        assert is_simply_consistently_connected(pr2())
        assert not res and res.violations == [(("q1", "q2"), ("c1", "c2"))]

    def test_deterministic_equal_values(self):
        assert is_strongly_consistently_connected(c2_1())


def test_is_deterministic():
    from contextuality import enumerate_realizations, epistemic_mixture, liar_system
    assert is_deterministic(c2_2())
    assert not is_deterministic(epistemic_mixture(enumerate_realizations(liar_system(3))))
    assert not is_deterministic(validate_system(raw_single({"+": HALF, "-": HALF})))


def test_strong_implies_simple_on_generated_systems():
    rng = random.Random(7)
    gens = [lambda: random_deterministic(rng), lambda: random_consistent_mixture(rng)[0],
            lambda: random_simple_not_strong(rng)]
    for gen in itertools.islice(itertools.cycle(gens), 150):
        s = gen()
        if is_strongly_consistently_connected(s):
            assert is_simply_consistently_connected(s)


def test_connection_matches_marginals():
    rng = random.Random(3)
    for s in [example1(), c2_2(), pr2()] + [random_consistent_mixture(rng)[0]
                                           for _ in range(20)]:
        for q in s.contents:
            for c, p in connection(s, q).members:
                assert marginal(bunch(s, c), [q]).get((1,), 0) == p
