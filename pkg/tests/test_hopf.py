"""Tests for the Hopf *-algebra presentations: bialgebra axioms, antipode,
star structure, the Cayley transform, the deformation isomorphism, the
degeneracy witness for the K family, and group classical limits."""
import pytest

from qlob import hopf
from qlob.membership import Certificate, member
from qlob.ncalg import flatten
from qlob.poisson import check_jacobi
from qlob.report import PASS, FAIL, INCONCLUSIVE
from qlob.scalars import Scalar


def _status(rep):
    return {r.id: r.status for r in rep}


class TestBuild:
    @pytest.mark.parametrize("name", ["A", "K", "N", "SUq", "SLh"])
    def test_builds(self, name):
        H = hopf.build(name)
        assert len(H.pres.relations) >= 5
        assert set(H.gens) == set(H.eps_table)

    def test_k_variants_differ_in_one_relation(self):
        Kp = hopf.build("K", "printed")
        Ki = hopf.build("K", "ih")
        diff = [i for i, (r, s) in enumerate(
            zip(Kp.pres.relations, Ki.pres.relations)) if r != s]
        assert len(diff) == 1

    def test_counit_annihilates_relations(self):
        for name in ("A", "N", "SUq", "SLh"):
            H = hopf.build(name)
            assert all(H.eps(rel).is_zero for rel in H.pres.relations)


class TestSuites:
    @pytest.mark.parametrize("name", ["A", "N", "SUq", "SLh"])
    def test_suite_fully_certifies(self, name, hopf_suites):
        rep = hopf_suites[name]
        assert rep.ok, [r.id for r in rep if r.status != PASS]

    @pytest.mark.parametrize("name", ["A", "N", "SUq", "SLh"])
    def test_membership_passes_carry_certificates(self, name, hopf_suites):
        rep = hopf_suites[name]
        with_cert = [r for r in rep if r.cert_obj is not None]
        assert with_cert
        for r in with_cert:
            cert, pres = r.cert_obj
            assert isinstance(cert, Certificate)

    @pytest.mark.parametrize("variant", ["printed", "ih"])
    def test_k_suite_has_definite_outcomes(self, variant, hopf_suites):
        # every check reports either a certificate or an explicit
        # residual; nothing is silently dropped
        rep = hopf_suites[f"K:{variant}"]
        assert not rep.has_fail
        for r in rep:
            if r.status == INCONCLUSIVE:
                assert r.residual, r.id

    @pytest.mark.parametrize("variant", ["printed", "ih"])
    def test_k_last_relation_outcome_reported(self, variant, hopf_suites):
        rep = hopf_suites[f"K:{variant}"]
        last = len(hopf.build("K", variant).pres.relations) - 1
        r = rep.by_id(f"hopf.K.antipode.rel{last}")
        assert r.status in (PASS, INCONCLUSIVE)
        assert r.certificate or r.residual

    def test_negative_control(self, negative_ctrl):
        assert negative_ctrl.ok


class TestCayleyAndIso:
    def test_cayley(self, cayley_report):
        st = _status(cayley_report)
        assert st["cayley.h_at_q1"] == PASS
        assert all(v == PASS for k, v in st.items() if k.startswith(
            "cayley.eps."))
        # per-variant relation transports report definite outcomes
        assert not cayley_report.has_fail

    def test_slh_iso(self, slh_iso_report):
        assert slh_iso_report.ok, [
            r.id for r in slh_iso_report if r.status != PASS]


class TestKDegeneracy:
    @pytest.mark.parametrize("variant", ["printed", "ih"])
    def test_witness_replays(self, variant, k_degeneracy_reports):
        rep = k_degeneracy_reports[variant]
        assert rep.ok, [r.id for r in rep if r.status != PASS]

    @pytest.mark.parametrize("variant", ["printed", "ih"])
    def test_witness_is_degree_two(self, variant, k_degeneracy_reports):
        r = k_degeneracy_reports[variant].by_id(
            f"k_degeneracy.{variant}.element")
        assert r.status == PASS


class TestGroupLimits:
    @pytest.mark.parametrize("name,family", [
        ("A", "A"), ("K", "K"), ("SLh", "N")])
    def test_limit_matches_table(self, name, family, group_limits):
        derived, rep = group_limits[name]
        assert rep.ok, [r.id for r in rep if r.status != PASS]

    @pytest.mark.parametrize("name", ["A", "K", "SLh"])
    def test_derived_table_jacobi(self, name, group_limits):
        derived, _ = group_limits[name]
        assert check_jacobi(derived).ok
