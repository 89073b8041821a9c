"""Shared session-scoped report caches.

The heavy symbolic verifications (embeddings, coactions, Hopf suites,
classical limits) are computed once per test session and shared between
the per-module tests and the acceptance gate.
"""
import pytest


@pytest.fixture(scope="session")
def hopf_suites():
    from qlob import hopf
    out = {name: hopf.hopf_suite(name, degree=4)
           for name in ("A", "N", "SUq", "SLh")}
    out["K:printed"] = hopf.hopf_suite("K", degree=4, k_variant="printed")
    out["K:ih"] = hopf.hopf_suite("K", degree=4, k_variant="ih")
    return out


@pytest.fixture(scope="session")
def negative_ctrl():
    from qlob import hopf
    return hopf.negative_control(degree=6)


@pytest.fixture(scope="session")
def cayley_report():
    from qlob import hopf
    return hopf.cayley_check(degree=4)


@pytest.fixture(scope="session")
def slh_iso_report():
    from qlob import hopf
    return hopf.slh_iso_check(degree=4)


@pytest.fixture(scope="session")
def k_degeneracy_reports():
    from qlob import hopf
    return {v: hopf.k_degeneracy_report(v) for v in ("printed", "ih")}


@pytest.fixture(scope="session")
def group_limits():
    from qlob import hopf
    return {name: hopf.group_classical_limit(name)
            for name in ("A", "K", "SLh")}


@pytest.fixture(scope="session")
def star_reports():
    from qlob import qspace
    return {f: qspace.star_report(f) for f in ("A", "K", "N")}


@pytest.fixture(scope="session")
def variant_ctrl():
    from qlob import qspace
    return qspace.variant_controls()


@pytest.fixture(scope="session")
def embedding_reports():
    from qlob import qspace
    return {f: qspace.verify_embedding(f) for f in ("A", "K", "N")}


@pytest.fixture(scope="session")
def coaction_reports():
    from qlob import qspace
    return {f: qspace.verify_coaction(f) for f in ("A", "K", "N")}


@pytest.fixture(scope="session")
def space_limits():
    from qlob import qspace
    return {f: qspace.space_classical_limit(f) for f in ("A", "K", "N")}
