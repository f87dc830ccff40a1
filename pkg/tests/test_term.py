"""Term parsing, substitution, matching, unification, and anti-unification."""

import random

import pytest

from mdlgauge.sampling import random_ground_term, seeded
from mdlgauge.term import (
    Abstraction,
    ArityMismatch,
    Node,
    Substitution,
    TermSyntaxError,
    Var,
    instantiate,
    is_ground,
    lgg,
    lgg_with_witnesses,
    match_term,
    parse_abstraction,
    parse_term,
    render_abstraction,
    render_substitution,
    render_term,
    term_size,
    unify,
)
from support import all_patterns, all_trees, subsumes

HYPOT = Abstraction("hypot", ("a", "b"), parse_term("(+ (* ?a ?a) (* ?b ?b))"))


def random_pattern(rng: random.Random, size: int, var_names: tuple[str, ...]):
    """A random term whose leaves are sometimes metavariables."""
    label = rng.choice("fgh")
    if size == 1:
        if rng.random() < 0.4:
            return Var(rng.choice(var_names))
        return Node(rng.choice("abc"))
    arity = rng.randint(1, min(3, size - 1))
    cuts = sorted(rng.sample(range(1, size - 1), arity - 1)) if arity > 1 else []
    bounds = [0] + cuts + [size - 1]
    return Node(
        label,
        tuple(
            random_pattern(rng, bounds[i + 1] - bounds[i], var_names)
            for i in range(arity)
        ),
    )


# ---------------------------------------------------------------------------
# parse / render


def test_parse_nested():
    t = parse_term("(+ (* r r) (* (f s) (f s)))")
    assert term_size(t) == 9
    assert isinstance(t, Node) and t.label == "+"


def test_parse_var():
    assert parse_term("?a") == Var("a")


def test_render_basics():
    assert render_term(Var("a")) == "?a"
    assert render_term(Node("f", (Var("x"),))) == "(f ?x)"
    assert render_term(Node("leaf")) == "leaf"


def test_roundtrip_random_terms():
    rng = seeded("roundtrip")
    for _ in range(1000):
        t = random_ground_term(rng, rng.randint(1, 12))
        assert parse_term(render_term(t)) == t


def test_roundtrip_random_patterns():
    rng = random.Random("roundtrip-patterns")
    for _ in range(1000):
        t = random_pattern(rng, rng.randint(1, 10), ("x", "y", "z"))
        assert parse_term(render_term(t)) == t


@pytest.mark.parametrize("bad", ["", "(f", "f)", "(f ?)", "(?x a)", "((f) g)", "f g", "( )"])
def test_parse_errors(bad):
    with pytest.raises(TermSyntaxError) as err:
        parse_term(bad)
    assert err.value.pos >= 0


# ---------------------------------------------------------------------------
# instantiate


def test_instantiate_hypot():
    y = instantiate(HYPOT, [parse_term("r"), parse_term("(f s)")])
    assert y == parse_term("(+ (* r r) (* (f s) (f s)))")


def test_instantiate_hypot_perturbed():
    y2 = instantiate(HYPOT, [parse_term("r"), parse_term("(f (+ s 1))")])
    assert y2 == parse_term("(+ (* r r) (* (f (+ s 1)) (f (+ s 1))))")


def test_instantiate_zero_params():
    a = Abstraction("const", (), parse_term("(f a b)"))
    assert instantiate(a, []) == a.body


def test_instantiate_arity_mismatch():
    with pytest.raises(ArityMismatch):
        instantiate(HYPOT, [parse_term("r")])


def test_abstraction_validation():
    with pytest.raises(ValueError):
        Abstraction("bad", ("a", "a"), Var("a"))
    with pytest.raises(ValueError):
        Abstraction("bad", ("a",), parse_term("(f ?a ?b)"))


def test_abstraction_file_roundtrip():
    text = render_abstraction(HYPOT)
    back = parse_abstraction(text, "hypot")
    assert back.params == HYPOT.params and back.body == HYPOT.body


def test_abstraction_file_errors():
    with pytest.raises(TermSyntaxError):
        parse_abstraction("(f ?a)")  # missing params line
    with pytest.raises(TermSyntaxError):
        parse_abstraction("params: a\n(f ?a)")  # parameter without '?'
    with pytest.raises(ValueError):
        parse_abstraction("params: ?a\n(f ?a ?b)")  # ?b undeclared


# ---------------------------------------------------------------------------
# match


def test_match_hypot_fragment():
    got = match_term(HYPOT.body, parse_term("(+ (* r r) (* (f s) (f s)))"))
    assert got is not None
    assert got.bindings == {"a": parse_term("r"), "b": parse_term("(f s)")}
    assert render_substitution(got) == "{?a -> r, ?b -> (f s)}"


def test_match_bare_var():
    for text in ("r", "(f s)", "(+ (* r r) s)"):
        t = parse_term(text)
        got = match_term(Var("x"), t)
        assert got is not None and got.bindings == {"x": t}


def test_match_inconsistent_repeat():
    assert match_term(parse_term("(* ?a ?a)"), parse_term("(* r s)")) is None


def test_match_requires_ground_target():
    with pytest.raises(ValueError):
        match_term(Var("x"), Var("y"))


def test_match_soundness_random():
    rng = random.Random("match-sound")
    for _ in range(300):
        pattern = random_pattern(rng, rng.randint(1, 9), ("x", "y"))
        args = {v: random_ground_term(rng, rng.randint(1, 4)) for v in ("x", "y")}
        target = Substitution(args).apply(pattern)
        got = match_term(pattern, target)
        assert got is not None
        assert got.apply(pattern) == target


# ---------------------------------------------------------------------------
# unify


def test_unify_identical():
    t = parse_term("(+ (* r r) (* (f s) (f s)))")
    got = unify(t, t)
    assert got is not None and len(got) == 0
    assert render_substitution(got) == "{}"


def test_unify_occurs_check():
    assert unify(Var("x"), parse_term("(f ?x)")) is None
    assert unify(parse_term("(g ?x (f ?x))"), parse_term("(g ?y ?y)")) is None


def test_unify_example():
    t1 = parse_term("(f ?x (g ?y))")
    t2 = parse_term("(f (h ?z) (g ?z))")
    got = unify(t1, t2)
    assert got is not None
    assert got.apply(t1) == got.apply(t2)
    assert got.bindings == {"x": parse_term("(h ?z)"), "y": Var("z")}


def test_unify_clash():
    assert unify(parse_term("(f a)"), parse_term("(f b)")) is None
    assert unify(parse_term("(f a)"), parse_term("(g a)")) is None
    assert unify(parse_term("(f a)"), parse_term("(f a a)")) is None


def test_unify_symmetry():
    rng = random.Random("unify-sym")
    agree = 0
    for _ in range(300):
        t1 = random_pattern(rng, rng.randint(1, 8), ("x", "y"))
        t2 = random_pattern(rng, rng.randint(1, 8), ("y", "z"))
        r12, r21 = unify(t1, t2), unify(t2, t1)
        assert (r12 is None) == (r21 is None)
        if r12 is not None:
            assert r12.apply(t1) == r12.apply(t2)
            assert r21.apply(t1) == r21.apply(t2)
            agree += 1
    assert agree > 20  # sanity: the generator does produce unifiable pairs


def test_unify_result_is_idempotent():
    rng = random.Random("unify-idem")
    for _ in range(200):
        ancestor = random_pattern(rng, rng.randint(2, 8), ("x", "y"))
        rho = Substitution(
            {
                v: random_pattern(rng, rng.randint(1, 4), (f"n{k}",))
                for k, v in enumerate(("x", "y"))
            }
        )
        got = unify(ancestor, rho.apply(ancestor))
        assert got is not None
        assert got.is_idempotent()


def test_mgu_factoring_from_shared_ancestor():
    rng = random.Random("mgu-factor")
    for i in range(500):
        ancestor = random_pattern(rng, rng.randint(2, 9), ("x", "y", "z"))
        planted = Substitution(
            {
                v: random_pattern(rng, rng.randint(1, 4), (f"f{i}_{k}",))
                for k, v in enumerate(("x", "y", "z"))
            }
        )
        instance = planted.apply(ancestor)
        mgu = unify(ancestor, instance)
        assert mgu is not None
        assert mgu.apply(ancestor) == mgu.apply(instance)
        # the planted unifier factors through the mgu
        assert subsumes(mgu.apply(ancestor), instance)


# ---------------------------------------------------------------------------
# lgg


def test_lgg_of_equal_terms():
    t = parse_term("(f (g a) b)")
    a = lgg([t, t])
    assert a.params == () and a.body == t


def test_lgg_root_mismatch():
    a = lgg([parse_term("(f a b)"), parse_term("(g a b)")])
    assert isinstance(a.body, Var) and len(a.params) == 1


def test_lgg_shares_variables_for_equal_tuples():
    a = lgg([parse_term("(f a a)"), parse_term("(f b b)")])
    assert a.body == Node("f", (Var("v0"), Var("v0")))
    b = lgg([parse_term("(f a a)"), parse_term("(f b c)")])
    assert b.body == Node("f", (Var("v0"), Var("v1")))


def test_lgg_matches_every_input():
    rng = random.Random("lgg-match")
    for _ in range(200):
        terms = [random_ground_term(rng, rng.randint(1, 7)) for _ in range(rng.randint(1, 4))]
        a = lgg(terms)
        for t in terms:
            assert match_term(a.body, t) is not None


def test_lgg_witnesses_reproduce_inputs():
    rng = random.Random("lgg-wit")
    for _ in range(200):
        terms = [random_ground_term(rng, rng.randint(1, 7)) for _ in range(rng.randint(1, 4))]
        a, wits = lgg_with_witnesses(terms)
        for t, args in zip(terms, wits):
            assert instantiate(a, args) == t


def test_lgg_minimality_brute_force():
    """No enumerable generalization sits strictly between the lgg and the
    inputs: every pattern matching both inputs also subsumes the lgg body."""
    labels = ("f", "a", "b")
    rng = random.Random("lgg-min")
    enumerated = {
        n: all_patterns(n, labels, ("u", "v", "w")) for n in range(1, 5)
    }
    for _ in range(12):
        t1 = rng.choice(all_trees(rng.randint(1, 4), labels))
        t2 = rng.choice(all_trees(rng.randint(1, 4), labels))
        body = lgg([t1, t2]).body
        for n, patterns in enumerated.items():
            for g in patterns:
                if match_term(g, t1) is not None and match_term(g, t2) is not None:
                    assert subsumes(g, body), (
                        f"{render_term(g)} generalizes both inputs but not "
                        f"{render_term(body)}"
                    )


def test_lgg_requires_ground_inputs():
    with pytest.raises(ValueError):
        lgg([Var("x")])
    with pytest.raises(ValueError):
        lgg([])


def test_substitution_rejects_self_reference():
    with pytest.raises(ValueError):
        Substitution({"x": parse_term("(f ?x)")})
