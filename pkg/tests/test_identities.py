import pytest

from bc1lab.identities import ELLIPTIC_IDS, POTENTIAL_IDS, IdentityId, evaluate_v_identity, verify_identity


@pytest.mark.parametrize("ident", list(IdentityId), ids=lambda i: i.value)
def test_identity_holds(ident, skew_torus):
    rec = verify_identity(ident, 12, seed=7, torus=skew_torus)
    assert rec.samples_accepted == 12
    assert rec.passed, (rec.tag, rec.max_residual)


def test_tags_partition():
    assert set(ELLIPTIC_IDS) | set(POTENTIAL_IDS) == set(IdentityId)
    assert not set(ELLIPTIC_IDS) & set(POTENTIAL_IDS)


def test_same_seed_same_record(torus):
    a = verify_identity(IdentityId.A34, 10, seed=3, torus=torus)
    b = verify_identity(IdentityId.A34, 10, seed=3, torus=torus)
    assert a.max_residual == b.max_residual
    assert a.samples_attempted == b.samples_attempted


def test_potential_identity_with_explicit_couplings(nu, nu_bar, torus):
    ident = next(iter(POTENTIAL_IDS))
    rec = evaluate_v_identity(ident, 8, 1, nu, nu_bar, torus)
    assert rec.suite == "potential_v" and rec.passed


def test_elliptic_identity_rejected_by_potential_runner(nu, nu_bar, torus):
    ident = next(iter(ELLIPTIC_IDS))
    with pytest.raises(ValueError):
        evaluate_v_identity(ident, 2, 1, nu, nu_bar, torus)
