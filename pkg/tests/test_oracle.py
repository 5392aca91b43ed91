import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import builders as b
from skewalg.algebra import PosetData, build_incidence_algebra, cyclic_group_algebra, semisimple_split, \
    truncated_polynomial
from skewalg.groups import generate_group
from skewalg.oracle import (
    RepTypeOracle,
    builtin_algebra_verdict,
    builtin_poset_verdict,
    find_full_crown,
    group_verdict,
    poset_hash,
)


def chain(n):
    return PosetData(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def tree(arms):
    """Star-shaped poset: a centre below chains of the given lengths."""
    els, rel = ["c"], []
    for a, length in enumerate(arms):
        prev = "c"
        for i in range(length):
            x = f"{a}.{i}"
            els.append(x)
            rel.append((prev, x))
            prev = x
    return PosetData(els, rel)


class TestPosetVerdicts:
    def test_chain(self):
        assert builtin_poset_verdict(chain(5))[0] == "finite"

    @pytest.mark.parametrize("arms,answer", [
        ([1, 1, 1], "finite"),  # D4
        ([1, 2, 2], "finite"),  # E6
        ([1, 2, 4], "finite"),  # E8
        ([2, 2, 2], "infinite"),  # extended E6
        ([1, 1, 1, 1], "infinite"),  # extended D4
    ])
    def test_trees(self, arms, answer):
        assert builtin_poset_verdict(tree(arms))[0] == answer

    def test_crown(self):
        assert builtin_poset_verdict(b.crown_poset(3))[0] == "infinite"

    def test_disconnected(self):
        assert builtin_poset_verdict(PosetData([1, 2]))[0] == "unknown"

    def test_contains_full_crown(self):
        p, _ = b.pendant_square()
        v, why = builtin_poset_verdict(p)
        assert v == "infinite" and "crown" in why
        assert sorted(p.elements[i] for i in find_full_crown(p)) == [1, 2, 3, 4]

    def test_no_rule(self):
        # a square with a top and a bottom: no full crown, not a tree
        p = PosetData(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
        assert find_full_crown(p) is None
        assert builtin_poset_verdict(p)[0] == "unknown"


class TestAlgebraVerdicts:
    def test_semisimple(self):
        assert builtin_algebra_verdict(semisimple_split(3, 5))[0] == "finite"

    def test_truncated(self):
        assert builtin_algebra_verdict(truncated_polynomial(4, 5))[0] == "finite"

    def test_nakayama(self):
        assert builtin_algebra_verdict(b.rotation_example().algebra)[0] == "finite"

    def test_group_algebra_uses_sylow(self):
        a = cyclic_group_algebra(4, 2)
        assert builtin_algebra_verdict(a)[0] == "finite"


class TestGroupVerdict:
    def test_cyclic_sylow(self):
        assert group_verdict(b.cyclic(4), 2)[0] == "finite"

    def test_klein_four(self):
        v4 = generate_group([0, 1, 2, 3], [[1, 0, 3, 2], [2, 3, 0, 1]])
        assert group_verdict(v4, 2)[0] == "infinite"
        assert group_verdict(v4, 3)[0] == "finite"


class TestDataFile:
    def test_lookup_by_canonical_form(self, tmp_path):
        square = {"elements": ["0", "a", "b", "1"], "leq": [["0", "a"], ["0", "b"], ["a", "1"], ["b", "1"]],
                  "type": "finite"}
        path = tmp_path / "o.json"
        path.write_text(json.dumps({"posets": [square]}))
        oracle = RepTypeOracle.from_file(str(path))
        relabelled = PosetData([4, 3, 2, 1], [(4, 2), (4, 3), (2, 1), (3, 1)])
        res = oracle.poset(relabelled)
        assert res["answer"] == "finite" and res["reason"] == "data file"

    def test_builtin_without_data(self):
        res = RepTypeOracle().poset(chain(3))
        assert res["oracle"] == "built-in" and "poset_hash" not in res

    def test_algebra_fingerprint_entry(self):
        from skewalg.algebra import fingerprint

        a = build_incidence_algebra(PosetData(["0", "a", "b", "1"],
                                              [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]), 5)
        a.meta.pop("kind", None)
        oracle = RepTypeOracle({"algebras": [{"fingerprint": {"dim": fingerprint(a)["dim"]}, "type": "finite"}]})
        assert oracle.algebra(a)["answer"] == "finite"

    def test_bad_type(self):
        with pytest.raises(ValueError):
            RepTypeOracle({"posets": [{"elements": [1], "type": "tame"}]})


@st.composite
def random_posets(draw):
    n = draw(st.integers(1, 6))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35]
    perm = list(range(n))
    rng.shuffle(perm)
    return PosetData(list(range(n)), rel), perm


class TestProperties:
    @given(random_posets())
    @settings(max_examples=40)
    def test_hash_invariant_under_relabelling(self, pair):
        p, perm = pair
        n = len(p)
        rel = [(perm[i], perm[j]) for i in range(n) for j in range(n) if i != j and p.leq[i, j]]
        q = PosetData(list(range(n)), rel)
        assert poset_hash(p) == poset_hash(q)
        assert builtin_poset_verdict(p)[0] == builtin_poset_verdict(q)[0]
