import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import builders as b
import reference as ref
from skewalg import linalg as la
from skewalg.algebra import truncated_polynomial
from skewalg.errors import GradingInconsistent, NotDegreeOneGenerated, NotGradePreserving, PreconditionFailed
from skewalg.groups import extend_from_generators, trivial_action
from skewalg.koszul import (
    abar_reduction,
    degree_zero_part,
    degree_zero_skew_module,
    ext_dim_table,
    grade_algebra,
    grade_skew,
    graded_module,
    is_koszul_up_to,
    koszul_transfer_check,
    minimal_graded_resolution,
    splitting_property,
)
from skewalg.modules import regular_module
from skewalg.skew import tensor_group_algebra


def trivial_pair(m, char):
    a = truncated_polynomial(m, char)
    g = b.cyclic(m)
    return grade_algebra(a), g, trivial_action(a, g)


def oracle_ext(alg, mod, smax):
    return ref.ext_dims_free(alg.mult.tolist(), alg.unit.tolist(), mod.mats.tolist(), mod.mats.tolist(), smax,
                             alg.char)


class TestGrading:
    def test_trivial_c2_components(self):
        ga, g, act = trivial_pair(2, 2)
        gs = grade_skew(ga, g, act)
        assert gs.component_dims == [2, 2]
        a0, _ = gs.degree_zero()
        assert a0.dim == 2

    def test_swap_preserves_path_length(self):
        ex = b.swap_example()
        gs = grade_skew(grade_algebra(ex.algebra), ex.group, ex.action)
        assert gs.component_dims == [4, 4]

    def test_degree_mixing_action(self):
        a = truncated_polynomial(3, 5)
        g = b.cyclic(5)  # X -> X + X^2 has order 5 in characteristic 5
        m = la.asarray([[1, 0, 0], [0, 1, 0], [0, 1, 1]], 5)
        act = extend_from_generators(a, g, [m])
        with pytest.raises(NotGradePreserving):
            grade_skew(grade_algebra(a), g, act)

    def test_inconsistent_degrees(self):
        with pytest.raises(GradingInconsistent):
            grade_algebra(truncated_polynomial(3, 5), [0, 1, 1])

    def test_not_generated_in_degree_one(self):
        with pytest.raises(NotDegreeOneGenerated):
            grade_algebra(truncated_polynomial(3, 5), [0, 2, 4])

    def test_wrong_length(self):
        with pytest.raises(GradingInconsistent):
            grade_algebra(truncated_polynomial(2, 5), [0])

    def test_splitting_property(self):
        ga, g, act = trivial_pair(2, 2)
        assert splitting_property(grade_skew(ga, g, act))["holds"]


class TestResolutions:
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_generation_degrees(self, m):
        ga = grade_algebra(truncated_polynomial(m, 5))
        tr = minimal_graded_resolution(ga, degree_zero_part(ga), 5)
        assert [d[0] for d in tr.generation_degrees] == ref.koszul_generation_degrees(m, 5)

    def test_projective_module_has_length_zero(self):
        ga = grade_algebra(truncated_polynomial(2, 3))
        m = graded_module(ga, regular_module(ga.algebra), [0, 1])
        tr = minimal_graded_resolution(ga, m, 3)
        assert tr.length == 0 and tr.generation_degrees == [[0]]

    def test_linear_kernel_in_jp(self):
        ga = grade_algebra(truncated_polynomial(2, 3))
        tr = minimal_graded_resolution(ga, degree_zero_part(ga), 3)
        assert all(tr.kernel_in_jp)


class TestKoszul:
    def test_dual_numbers(self):
        v = is_koszul_up_to(grade_algebra(truncated_polynomial(2, 7)), 8)
        assert v.outcome == "LinearThrough(8)"
        assert all(v.projective_flags)

    def test_cubic(self):
        v = is_koszul_up_to(grade_algebra(truncated_polynomial(3, 7)), 8)
        assert v.outcome == "FailsAt(2, 3)"

    def test_a2_is_koszul(self):
        assert is_koszul_up_to(grade_algebra(b.a2(5)), 4).linear

    @pytest.mark.parametrize("m,char,outcome", [(2, 2, "LinearThrough(4)"), (3, 3, "FailsAt(2, 3)")])
    def test_transfer(self, m, char, outcome):
        ga, g, act = trivial_pair(m, char)
        r = koszul_transfer_check(ga, g, act, 4)
        assert r["agree"] and r["base"]["outcome"] == r["skew"]["outcome"] == outcome

    def test_transfer_swap(self):
        ex = b.swap_example()
        r = koszul_transfer_check(grade_algebra(ex.algebra), ex.group, ex.action, 6)
        assert r["agree"] and r["skew"]["outcome"] == "LinearThrough(6)"


class TestAbar:
    def test_dual_numbers_group_algebra(self):
        ga, g, act = trivial_pair(2, 2)
        gs = grade_skew(ga, g, act)
        bar, report = abar_reduction(gs, 4)
        assert bar.algebra.dim == 2 and bar.component_dims == [1, 1]
        assert report["comparison"]["agree"]
        assert report["comparison"]["Abar"] == "LinearThrough(4)"


class TestExt:
    def test_dual_numbers(self):
        ga, g, act = trivial_pair(2, 2)
        gs = grade_skew(ga, g, act)
        m = degree_zero_skew_module(gs)
        out = ext_dim_table(ga, gs, m, m, 4)
        assert out["base"] == [1, 1, 1, 1, 1] and out["skew"] == [2, 2, 2, 2, 2]

    def test_a2(self):
        ex = b.a2_trivial_example(2)
        ga = grade_algebra(ex.algebra)
        gs = grade_skew(ga, ex.group, ex.action)
        m = degree_zero_skew_module(gs)
        out = ext_dim_table(ga, gs, m, m, 4)
        assert out["base"] == [2, 1, 0, 0, 0] and out["skew"] == [4, 2, 0, 0, 0]

    def test_against_free_resolution_oracle(self):
        ex = b.swap_example()
        ga = grade_algebra(ex.algebra)
        gs = grade_skew(ga, ex.group, ex.action)
        m = degree_zero_skew_module(gs)
        out = ext_dim_table(ga, gs, m, m, 3)
        assert out["skew"] == oracle_ext(gs.algebra, tensor_group_algebra(m, gs.skew), 3)
        assert out["identity_holds"]

    def test_non_koszul_module_rejected(self):
        ga, g, act = trivial_pair(3, 3)
        gs = grade_skew(ga, g, act)
        m = degree_zero_skew_module(gs)
        with pytest.raises(PreconditionFailed):
            ext_dim_table(ga, gs, m, m, 3)


class TestProperties:
    @given(st.integers(2, 4), st.sampled_from([2, 3, 5]), st.integers(2, 5))
    @settings(max_examples=20)
    def test_verdict_monotone_in_bound(self, m, char, n):
        ga = grade_algebra(truncated_polynomial(m, char))
        short, long = is_koszul_up_to(ga, n - 1), is_koszul_up_to(ga, n)
        if long.linear:
            assert short.linear
        if not short.linear:
            assert not long.linear and long.fail_step == short.fail_step

    @given(st.sampled_from([(2, 2), (2, 3), (3, 3), (2, 5)]), st.integers(2, 4))
    @settings(max_examples=10)
    def test_transfer_agrees(self, mc, n):
        ga, g, act = trivial_pair(*mc)
        assert koszul_transfer_check(ga, g, act, n)["agree"]
