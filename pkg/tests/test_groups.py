import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import builders as b
import reference as ref
from skewalg import linalg as la
from skewalg.algebra import PosetData, build_incidence_algebra, truncated_polynomial, truncated_polynomial_iso
from skewalg.errors import GroupTooLarge, InvalidPermutation, InvalidPrime, NotAPosetAction
from skewalg.groups import (
    extend_from_generators,
    fixed_subalgebra,
    generate_group,
    idempotent_orbits,
    is_cyclic,
    is_free_on_idempotents,
    poset_action,
    poset_permutations,
    sylow_subgroup,
    trivial_action,
    trivial_group,
    verify_action,
)


def fixed_dim_oracle(act):
    """Nullity of the stacked (g - 1) matrices, ranked by sympy."""
    a = act.algebra
    rows = []
    for m in act.maps:
        d = la.reduce(m - la.eye(a.dim, a.char), a.char)
        rows.extend(d.tolist())
    return ref.nullity(rows, a.char, a.dim)


class TestGroups:
    def test_cyclic_five(self):
        g = generate_group([1, 2, 3, 4, 5], [[2, 3, 4, 5, 1]])
        assert g.order == 5 and is_cyclic(g)

    def test_s3(self):
        g = generate_group([1, 2, 3], [[2, 1, 3], [1, 3, 2]])
        assert g.order == 6 and not is_cyclic(g)

    def test_dict_generators(self):
        g = generate_group(["a", "b", "c"], [{"a": "b", "b": "a"}])
        assert g.order == 2

    def test_multiplication_is_composition(self):
        g = generate_group([0, 1, 2], [[1, 2, 0], [1, 0, 2]])
        for i in range(g.order):
            for j in range(g.order):
                k = g.mul(i, j)
                assert all(g.elements[k][x] == g.elements[i][g.elements[j][x]] for x in range(3))
            assert g.mul(i, g.inv(i)) == 0

    def test_trivial(self):
        assert trivial_group().order == 1

    def test_non_bijection(self):
        with pytest.raises(InvalidPermutation):
            generate_group([1, 2, 3], [[1, 1, 2]])

    def test_wrong_length(self):
        with pytest.raises(InvalidPermutation):
            generate_group([1, 2, 3], [[1, 2]])

    def test_cap(self):
        with pytest.raises(GroupTooLarge):
            generate_group(list(range(6)), [[1, 2, 3, 4, 5, 0], [1, 0, 2, 3, 4, 5]], cap=100)


class TestSylow:
    @pytest.mark.parametrize("p,order", [(2, 2), (3, 3), (5, 1), (0, 1)])
    def test_s3(self, p, order):
        g = generate_group([1, 2, 3], [[2, 1, 3], [1, 3, 2]])
        assert sylow_subgroup(g, p).order == order

    def test_s4_sylow_two(self):
        g = generate_group([0, 1, 2, 3], [[1, 2, 3, 0], [1, 0, 2, 3]])
        s = sylow_subgroup(g, 2)
        assert s.order == 8 and not is_cyclic(s)

    def test_bad_prime(self):
        with pytest.raises(InvalidPrime):
            sylow_subgroup(b.cyclic(4), 4)


class TestActions:
    def test_swap_valid(self):
        ex = b.swap_example()
        assert verify_action(ex.action, require_e_closed=True) == []

    def test_rotation_orbit(self):
        ex = b.rotation_example()
        orb = idempotent_orbits(ex.action)
        assert orb.orbits == [[0, 1, 2, 3, 4]]
        assert ex.algebra.eq(orb.epsilon, ex.algebra.idempotents[0])

    def test_crown_orbits(self):
        ex = b.poset_instance(b.crown_poset(3), [[3, 4, 5, 6, 1, 2]], 3)
        orbs = idempotent_orbits(ex.action).orbits
        labels = [sorted(ex.algebra.labels[i] for i in o) for o in orbs]
        assert labels == [["1_1", "1_3", "1_5"], ["1_2", "1_4", "1_6"]]

    def test_freeness(self):
        assert is_free_on_idempotents(b.rotation_example().action) == (True, None)
        ok, wit = is_free_on_idempotents(b.a2_trivial_example(2).action)
        assert not ok and wit == (1, 0)
        assert is_free_on_idempotents(b.poset_instance(b.crown_poset(3), [[3, 4, 5, 6, 1, 2]], 3).action)[0]

    def test_non_automorphism_detected(self):
        a = truncated_polynomial(3, 5)
        g = b.cyclic(2)
        m = la.asarray([[1, 0, 0], [0, 1, 0], [0, 0, 4]], 5)  # X -> X, X^2 -> -X^2
        problems = verify_action(extend_from_generators(a, g, [m]))
        assert any("product" in x for x in problems)

    def test_scaling_automorphism(self):
        a = truncated_polynomial(3, 5)
        g = b.cyclic(4)
        m = la.asarray([[1, 0, 0], [0, 2, 0], [0, 0, 4]], 5)  # X -> 2X, order 4 mod 5
        act = extend_from_generators(a, g, [m])
        assert verify_action(act) == []
        assert fixed_subalgebra(act)[0].dim == 1

    def test_poset_action_must_preserve_order(self):
        p = PosetData([1, 2], [(1, 2)])
        g = generate_group([1, 2], [[2, 1]])
        with pytest.raises(NotAPosetAction):
            poset_permutations(p, g)

    def test_superset_domain_gives_non_faithful_action(self):
        p = PosetData(["p"], [])
        dom = ["p", "a", "b", "c", "d", "e"]
        g = generate_group(dom, [["p", "b", "c", "d", "e", "a"]])
        assert g.order == 5
        assert poset_permutations(p, g) == [(0,)] * 5
        act = poset_action(build_incidence_algebra(p, 5), g)
        assert not is_free_on_idempotents(act)[0]


class TestFixedSubalgebra:
    def test_rotation(self):
        ex = b.rotation_example()
        sub, emb = fixed_subalgebra(ex.action)
        assert sub.dim == 2
        a = ex.algebra
        arrows = [i for i, d in enumerate(a.degrees) if d == 1]
        arrow_sum = a.zero()
        arrow_sum[arrows] = 1
        assert ref.rank(np.stack([a.unit, arrow_sum] + [emb[:, c] for c in range(2)]).tolist(), 5, a.dim) == 2
        assert truncated_polynomial_iso(sub) is not None

    def test_swap(self):
        sub, _ = fixed_subalgebra(b.swap_example().action)
        assert sub.dim == 2 and truncated_polynomial_iso(sub) is not None

    def test_trivial_action(self):
        a = b.a2(3)
        g = b.cyclic(2)
        assert fixed_subalgebra(trivial_action(a, g))[0].dim == 3

    @pytest.mark.parametrize("ex", [b.rotation_example(), b.swap_example(), b.cycle_rotation(6, 2, 3),
                                    b.two_loops_swap(5), b.kronecker_pair_swap(2)], ids=lambda e: e.name)
    def test_dim_matches_oracle(self, ex):
        assert fixed_subalgebra(ex.action)[0].dim == fixed_dim_oracle(ex.action)


@st.composite
def crown_actions(draw):
    k = draw(st.integers(2, 5))
    step = draw(st.sampled_from([s for s in range(0, 2 * k, 2)]))
    char = draw(st.sampled_from([2, 3, 5]))
    els = list(range(1, 2 * k + 1))
    gen = [els[(i + step) % (2 * k)] for i in range(2 * k)]
    return b.poset_instance(b.crown_poset(k), [gen], char)


class TestProperties:
    @given(crown_actions())
    def test_poset_actions_are_valid(self, ex):
        assert verify_action(ex.action, require_e_closed=True) == []

    @given(crown_actions())
    def test_fixed_dim_matches_oracle(self, ex):
        assert fixed_subalgebra(ex.action)[0].dim == fixed_dim_oracle(ex.action)

    @given(crown_actions())
    def test_orbits_partition(self, ex):
        orbs = idempotent_orbits(ex.action).orbits
        flat = sorted(i for o in orbs for i in o)
        assert flat == list(range(len(ex.algebra.idempotents)))
        free, _ = is_free_on_idempotents(ex.action)
        assert free == all(len(o) == ex.group.order for o in orbs)
