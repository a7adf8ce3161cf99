import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfkit.algebra import (
    ASSOCIATIVE,
    ConformalAlgebra,
    GenElement,
    LIE,
    abelian,
    check_associativity,
    check_axioms,
    check_jacobi,
    check_skew_symmetry,
    element_text,
    product_eval,
)
from cfkit.poly import D, L1, L2, MultiPoly

from helpers import assoc4_doc, load_fixture, sv_doc, vir_algebra, wab_doc

d = MultiPoly.var(D)
l = MultiPoly.var(L1)
m = MultiPoly.var(L2)

d_polys = st.builds(
    lambda c0, c1: c0 + c1 * d,
    st.fractions(min_value=-3, max_value=3, max_denominator=2),
    st.fractions(min_value=-3, max_value=3, max_denominator=2),
)

affine = st.sampled_from([l, m, l + m, -l - d, -m - d, -l - m - d])


def bad_vir():
    return ConformalAlgebra(LIE, ("L",), (((d + 3 * l,),),))


class TestProductEval:
    def test_vir_bracket(self):
        vir = vir_algebra()
        L = vir.basis_element(0)
        assert product_eval(vir, L, L, l).coords == (d + 2 * l,)

    def test_left_derivation_argument(self):
        vir = vir_algebra()
        L = vir.basis_element(0)
        out = product_eval(vir, GenElement((d,)), L, l)
        assert out.coords == (-l * (d + 2 * l),)

    def test_skew_parameter(self):
        vir = vir_algebra()
        L = vir.basis_element(0)
        assert product_eval(vir, L, L, -l - d).coords == (-(d + 2 * l),)

    def test_rejects_nonaffine_parameter(self):
        vir = vir_algebra()
        L = vir.basis_element(0)
        with pytest.raises(ValueError):
            product_eval(vir, L, L, l * l)

    def test_rejects_rank_mismatch(self):
        vir = vir_algebra()
        with pytest.raises(ValueError):
            product_eval(vir, GenElement((d, d)), vir.basis_element(0), l)

    @given(p=d_polys, s=affine)
    @settings(max_examples=50, deadline=None)
    def test_left_sesquilinearity(self, p, s):
        sv = sv_doc().find("algebra", "SV")
        x = sv.element({"Y": p, "L": 1})
        y = sv.element({"M": 1, "N": d})
        scaled = product_eval(sv, x.scale(p), y, s)
        plain = product_eval(sv, x, y, s).scale(p.substitute(D, -s))
        assert scaled.coords == plain.coords

    @given(p=d_polys, s=affine)
    @settings(max_examples=50, deadline=None)
    def test_right_sesquilinearity(self, p, s):
        sv = sv_doc().find("algebra", "SV")
        x = sv.element({"Y": 1, "N": 2})
        y = sv.element({"M": d, "L": 1})
        scaled = product_eval(sv, x, y.scale(p), s)
        plain = product_eval(sv, x, y, s).scale(p.substitute(D, d + s))
        assert scaled.coords == plain.coords


class TestSkewSymmetry:
    def test_vir_passes(self):
        assert check_skew_symmetry(vir_algebra()).passed

    def test_corrupted_table_residual(self):
        report = check_skew_symmetry(bad_vir())
        assert not report.passed
        assert report.violations[0].residual.coords == (-d,)

    def test_abelian_passes(self):
        assert check_skew_symmetry(abelian(LIE, ("A", "B", "C"))).passed

    @pytest.mark.parametrize("algebra", [vir_algebra(), bad_vir()])
    def test_table_level_restatement(self, algebra):
        # pass iff c_ij(d, l) == -c_ji(d, -l-d) entrywise
        n = algebra.rank
        table_ok = all(
            algebra.table[i][j][k]
            == -algebra.table[j][i][k].substitute(L1, -l - d)
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )
        assert check_skew_symmetry(algebra).passed == table_ok

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            check_skew_symmetry(abelian(ASSOCIATIVE, ("A",)))


class TestJacobi:
    def test_vir_passes(self):
        assert check_jacobi(vir_algebra()).passed

    def test_current_algebra_passes(self):
        cur = load_fixture("cur2").find("algebra", "Cur2")
        assert check_jacobi(cur).passed

    def test_wab_passes(self):
        alg = wab_doc(1, 2).find("algebra", "Wab")
        assert check_jacobi(alg).passed

    def test_corrupted_table_fails(self):
        assert not check_jacobi(bad_vir()).passed

    @given(
        coeffs=st.lists(d_polys, min_size=12, max_size=12),
        s=st.just(None),
    )
    @settings(max_examples=25, deadline=None)
    def test_residual_vanishes_on_arbitrary_elements(self, coeffs, s):
        sv = sv_doc().find("algebra", "SV")
        x = GenElement(tuple(coeffs[0:4]))
        y = GenElement(tuple(coeffs[4:8]))
        z = GenElement(tuple(coeffs[8:12]))
        lhs = product_eval(sv, x, product_eval(sv, y, z, m), l)
        mid = product_eval(sv, product_eval(sv, x, y, l), z, l + m)
        rhs = product_eval(sv, y, product_eval(sv, x, z, l), m)
        assert (lhs - mid - rhs).is_zero


class TestAssociativity:
    def test_four_generator_example_passes(self):
        alg = assoc4_doc().find("algebra", "E4")
        assert check_associativity(alg).passed

    def test_zero_product_passes(self):
        assert check_associativity(abelian(ASSOCIATIVE, ("A", "B"))).passed

    def test_corrupted_fails(self):
        alg = load_fixture("negative").find("algebra", "BadE")
        report = check_associativity(alg)
        assert not report.passed

    def test_kind_mismatch(self):
        with pytest.raises(ValueError):
            check_associativity(vir_algebra())


class TestCheckAxioms:
    def test_dispatch(self):
        assert check_axioms(vir_algebra()).passed
        assert check_axioms(abelian(LIE, ("A", "B", "C"))).passed
        assert check_axioms(sv_doc().find("algebra", "SV")).passed
        assert check_axioms(assoc4_doc().find("algebra", "E4")).passed
        assert not check_axioms(bad_vir()).passed


class TestElementText:
    def test_rendering(self):
        vir = vir_algebra()
        assert element_text(GenElement((3 * d + 6 * l,)), vir.basis) == "(3*d + 6*l) L"
        assert element_text(GenElement((MultiPoly.zero(),)), vir.basis) == "0"
        assert element_text(GenElement((MultiPoly.const(1),)), vir.basis) == "L"
