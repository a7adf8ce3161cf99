from fractions import Fraction

import pytest

from cfkit.actions import build_bicrossed
from cfkit.algebra import GenElement, check_axioms
from cfkit.constraints import grid_values
from cfkit.deform import (
    DeformationMap,
    Morphism,
    apply_map,
    check_deformation_map,
    check_equivalence,
    check_morphism,
    deformed_algebra,
    graph_embedding_check,
    identity_morphism,
    is_isomorphism,
    search_equivalence_diagonal,
    zero_map,
)
from cfkit.poly import D, L1, MultiPoly

from helpers import assoc4_doc, nfold_doc, sv_doc, vir_algebra, wab_doc

d = MultiPoly.var(D)
l = MultiPoly.var(L1)


def wab_map(a, b, c):
    doc = wab_doc(a, b, c)
    return doc, doc.find("matched", "WP"), doc.find("defmap", "phi")


class TestApplyMap:
    def test_d_linearity(self):
        _, pair, phi = wab_map(1, 0, 3)
        out = apply_map(phi, GenElement((d,)))
        assert out.coords == (3 * d,)

    def test_zero_map(self):
        pair = wab_doc(1, 0).find("matched", "WP")
        assert apply_map(zero_map(pair), pair.Q.basis_element(0)).is_zero

    def test_sv_family_image(self):
        doc = sv_doc(a=2, b=1)
        phi = doc.find("defmap", "phiab")
        out = apply_map(phi, GenElement((MultiPoly.const(1), MultiPoly.zero())))
        assert out.coords == (MultiPoly.const(2), d + 1)

    def test_dimension_mismatch(self):
        _, pair, phi = wab_map(1, 0, 3)
        with pytest.raises(ValueError):
            apply_map(phi, GenElement((d, d)))


class TestCheckDeformationMap:
    @pytest.mark.parametrize("c", [1, -2, Fraction(1, 2)])
    def test_scalar_map_passes_when_admissible(self, c):
        _, pair, phi = wab_map(1, 0, c)
        assert check_deformation_map(pair, phi).passed

    def test_scalar_map_fails_otherwise(self):
        _, pair, phi = wab_map(2, 0, 1)
        report = check_deformation_map(pair, phi)
        assert not report.passed
        assert report.violations[0].residual.coords == (d + 2 * l,)

    def test_zero_map_always_passes(self):
        for doc_pair in [
            wab_doc(2, 0).find("matched", "WP"),
            sv_doc().find("matched", "SVP"),
            assoc4_doc().find("matched", "AP"),
        ]:
            assert check_deformation_map(doc_pair, zero_map(doc_pair)).passed

    @pytest.mark.parametrize("a,b", [(1, 0), (2, 1), (0, 1)])
    def test_sv_family_passes(self, a, b):
        doc = sv_doc(a=a, b=b)
        pair = doc.find("matched", "SVP")
        assert check_deformation_map(pair, doc.find("defmap", "phiab")).passed

    def test_four_generator_family_passes(self):
        doc = assoc4_doc(p=1, q=1)
        pair = doc.find("matched", "AP")
        assert check_deformation_map(pair, doc.find("defmap", "phi2")).passed

    def test_four_generator_relation_required(self):
        doc = assoc4_doc(p=1, q=1, r=1, s=2)  # p*s != q*r
        pair = doc.find("matched", "AP")
        assert not check_deformation_map(pair, doc.find("defmap", "phi4")).passed


class TestDeformedAlgebra:
    def test_wab_table(self):
        _, pair, phi = wab_map(1, 0, 3)
        twisted = deformed_algebra(pair, phi)
        assert twisted.table[0][0] == (3 * (d + 2 * l),)

    def test_zero_map_is_identity(self):
        pair = sv_doc().find("matched", "SVP")
        assert deformed_algebra(pair, zero_map(pair)) == pair.Q

    def test_sv_table(self):
        doc = sv_doc(a=2, b=1)
        pair = doc.find("matched", "SVP")
        twisted = deformed_algebra(pair, doc.find("defmap", "phiab"))
        y, m = 0, 1
        assert twisted.table[y][y] == (2 * (d + 2 * l), d + 2 * l)
        assert twisted.table[y][m] == (MultiPoly.zero(), 2 * d + 2)
        assert twisted.table[m][m] == (MultiPoly.zero(), MultiPoly.zero())

    def test_four_generator_table(self):
        doc = assoc4_doc(p=1, q=1)
        pair = doc.find("matched", "AP")
        twisted = deformed_algebra(pair, doc.find("defmap", "phi2"))
        assert twisted == doc.find("algebra", "Q1")

    @pytest.mark.parametrize("a,b", [(1, 0), (2, 1), (0, 1)])
    def test_passing_map_gives_valid_algebra(self, a, b):
        doc = sv_doc(a=a, b=b)
        pair = doc.find("matched", "SVP")
        phi = doc.find("defmap", "phiab")
        assert check_deformation_map(pair, phi).passed
        assert check_axioms(deformed_algebra(pair, phi)).passed

    def test_random_admissible_maps_give_valid_algebras(self):
        # every constant map on the three-generator family is admissible
        for scalars in [(1, 2, 3), (-1, 0, Fraction(1, 2)), (0, 0, -5)]:
            doc = nfold_doc(a1=scalars[0], a2=scalars[1], a3=scalars[2])
            pair = doc.find("matched", "NP")
            phi = doc.find("defmap", "phi3")
            assert check_deformation_map(pair, phi).passed
            assert check_axioms(deformed_algebra(pair, phi)).passed


class TestGraphEmbedding:
    def test_wab(self):
        _, pair, phi = wab_map(1, 0, 1)
        assert graph_embedding_check(pair, phi).passed

    def test_zero_map(self):
        pair = sv_doc().find("matched", "SVP")
        assert graph_embedding_check(pair, zero_map(pair)).passed

    def test_sv_family(self):
        doc = sv_doc(a=2, b=1)
        pair = doc.find("matched", "SVP")
        assert graph_embedding_check(pair, doc.find("defmap", "phiab")).passed

    def test_assoc_family(self):
        doc = assoc4_doc(p=1, q=2, r=Fraction(3, 2), s=3)
        pair = doc.find("matched", "AP")
        assert graph_embedding_check(pair, doc.find("defmap", "phi4")).passed


class TestMorphism:
    def test_embedding_into_rank_one(self):
        doc = wab_doc(1, 0, c=3)
        emb = doc.find("morphism", "emb")
        assert check_morphism(emb).passed
        assert is_isomorphism(emb)

    def test_unscaled_map_fails(self):
        doc = wab_doc(1, 0, c=3)
        qc = doc.find("algebra", "Qc")
        vir = doc.find("algebra", "VirR")
        bad = Morphism(qc, vir, ((MultiPoly.const(1),),))
        assert not check_morphism(bad).passed

    def test_identity(self):
        vir = vir_algebra()
        assert check_morphism(identity_morphism(vir)).passed
        assert is_isomorphism(identity_morphism(vir))

    def test_multiplication_by_d_is_not_invertible(self):
        from cfkit.algebra import LIE, abelian

        ab = abelian(LIE, ("W",))
        h = Morphism(ab, ab, ((d,),))
        assert check_morphism(h).passed
        assert not is_isomorphism(h)

    def test_sv_rescaling(self):
        doc = sv_doc(a=2, b=1)
        iso = doc.find("morphism", "iso")
        assert check_morphism(iso).passed
        assert is_isomorphism(iso)

    def test_assoc_rescalings(self):
        for q, s in [(2, 3), (3, 2)]:
            doc = assoc4_doc(q=q, s=s)
            assert is_isomorphism(doc.find("morphism", "psiBD"))
        for q in (2, 3):
            doc = assoc4_doc(q=q)
            assert is_isomorphism(doc.find("morphism", "psiB"))

    def test_unit_triangular_candidate_is_isomorphism(self):
        doc = assoc4_doc()
        theta = doc.find("morphism", "theta")
        assert check_morphism(theta).passed
        assert is_isomorphism(theta)


class TestEquivalence:
    def test_reflexive(self):
        for a, b in [(1, 0), (2, 1), (0, 1)]:
            doc = sv_doc(a=a, b=b)
            pair = doc.find("matched", "SVP")
            phi = doc.find("defmap", "phiab")
            alpha = identity_morphism(pair.Q)
            assert check_equivalence(pair, phi, phi, alpha).passed

    def test_witness_for_scaled_twist(self):
        doc = sv_doc(a=0, b=5)
        pair = doc.find("matched", "SVP")
        phi = doc.find("defmap", "psib")
        psi = doc.find("defmap", "psi1")
        witnesses = search_equivalence_diagonal(pair, phi, psi, grid_values(25, 1))
        assert len(witnesses) == 1
        alpha = witnesses[0]
        assert alpha.matrix[0][0] == MultiPoly.const(5)
        assert alpha.matrix[1][1] == MultiPoly.const(25)
        # symmetry: the inverse scaling witnesses the reverse equivalence
        inverse = Morphism(
            pair.Q,
            pair.Q,
            (
                (MultiPoly.const(Fraction(1, 5)), MultiPoly.zero()),
                (MultiPoly.zero(), MultiPoly.const(Fraction(1, 25))),
            ),
        )
        assert check_equivalence(pair, psi, phi, inverse).passed

    def test_no_diagonal_witness_for_zero_twist(self):
        doc = sv_doc(a=0, b=0)
        pair = doc.find("matched", "SVP")
        psi1 = doc.find("defmap", "psi1")
        zero = doc.find("defmap", "zero")
        assert search_equivalence_diagonal(pair, psi1, zero, grid_values(3, 2)) == []
        assert search_equivalence_diagonal(pair, zero, psi1, grid_values(3, 2)) == []

    def test_rejects_singular_alpha(self):
        doc = sv_doc()
        pair = doc.find("matched", "SVP")
        phi = doc.find("defmap", "zero")
        singular = Morphism(
            pair.Q,
            pair.Q,
            (
                (MultiPoly.const(1), MultiPoly.zero()),
                (MultiPoly.zero(), MultiPoly.zero()),
            ),
        )
        with pytest.raises(ValueError):
            check_equivalence(pair, phi, phi, singular)

    def test_transitivity_on_witnessed_triple(self):
        # b = 5 ~ b = 1 by diag(5, 25) and b = 1 ~ b = 3 maps compose
        doc5 = sv_doc(a=0, b=5)
        pair = doc5.find("matched", "SVP")
        phi5 = doc5.find("defmap", "psib")
        psi1 = doc5.find("defmap", "psi1")
        phi3 = sv_doc(a=0, b=3).find("defmap", "psib")

        def diag(p, q):
            return Morphism(
                pair.Q,
                pair.Q,
                (
                    (MultiPoly.const(Fraction(p)), MultiPoly.zero()),
                    (MultiPoly.zero(), MultiPoly.const(Fraction(q))),
                ),
            )

        assert check_equivalence(pair, phi5, psi1, diag(5, 25)).passed
        assert check_equivalence(pair, psi1, phi3, diag(Fraction(1, 3), Fraction(1, 9))).passed
        composed = diag(Fraction(5, 3), Fraction(25, 9))
        assert check_equivalence(pair, phi5, phi3, composed).passed


class TestBicrossedInterplay:
    def test_graph_is_complement_shape(self):
        # the embedded graph splits off R: its Q part is the identity
        doc = sv_doc(a=1, b=1)
        pair = doc.find("matched", "SVP")
        phi = doc.find("defmap", "phiab")
        big = build_bicrossed(pair)
        twisted = deformed_algebra(pair, phi)
        nr = pair.R.rank
        embed = tuple(
            tuple(phi.matrix[i])
            + tuple(
                MultiPoly.const(1) if j == i else MultiPoly.zero()
                for j in range(pair.Q.rank)
            )
            for i in range(pair.Q.rank)
        )
        morph = Morphism(twisted, big, embed)
        assert check_morphism(morph).passed
