"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

from __future__ import annotations

from functools import lru_cache

import pytest

from carnotkit import claims

CRITERIA = {
    "c01_free_algebras": claims.free_algebras,
    "c02_wedge_identities": claims.wedge_identities,
    "c03_model_space_verdicts": claims.model_space_verdicts,
    "c04_model_m_jacobi_constraints": claims.model_m_constraints,
    "c05_holonomy_dichotomy": claims.holonomy_dichotomy_claim,
    "c06_rolling_sum_generation": claims.rolling_sum_claim,
    "c07_rolling_sum_isomorphism_sign": claims.rolling_isomorphism_claim,
    "c08_equivariant_maps": claims.appendix_claim,
    "c09_frame_lift_tangent_cone": claims.step_two_claim,
    "c10_growth_rigidity": claims.growth_rigidity_claim,
}


@lru_cache(maxsize=None)
def outcome(name: str) -> claims.ClaimResult:
    return CRITERIA[name]()


def report(res: claims.ClaimResult, capsys) -> None:
    with capsys.disabled():
        print()
        print(res.line())
        for d in res.details[:10]:
            print("    " + d)


@pytest.mark.parametrize("name", sorted(CRITERIA))
def test_criterion(name, capsys):
    res = outcome(name)
    report(res, capsys)
    assert res.passed, "\n".join(res.details)


def test_c03_heisenberg_and_engel_witness_shapes():
    res = outcome("c03_model_space_verdicts")
    assert res.data["heisenberg(2)"]["dims"] == (5, 6)
    assert res.data["engel"]["dims"] == (1, 2)
    assert res.data["ideal_dim_n3"] == 5


def test_c04_trial_count():
    res = outcome("c04_model_m_jacobi_constraints")
    assert res.data["perturbation_trials"] == 5 * 5 * 8 * 2


def test_c07_sign_is_minus_one():
    res = outcome("c07_rolling_sum_isomorphism_sign")
    assert res.data["sign"] == -1
    # only the trials with rho1 rho2 != 0 distinguish the signs
    assert res.data["n=2 (1,-1) s=+1"] is False and res.data["n=3 (2,1) s=+1"] is False
    assert res.data["n=2 (1,0) s=+1"] is True


def test_suite_order_matches_criteria():
    assert [fn for fn in claims.ALL_CLAIMS] == [CRITERIA[k] for k in sorted(CRITERIA)]
