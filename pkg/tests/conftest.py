import functools

import numpy as np
import pytest

from eipack import fusion, rho, subspaces
from eipack.numerics import Field

GOLDEN = __import__("pathlib").Path(__file__).parent / "golden"

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k:>2}: {detail}")


@functools.lru_cache(maxsize=None)
def rho_eitff(r, field, seed=None):
    """EITFF_F(2r, r, rho_F(r) + 2) from the maximal family; a seed turns
    the simplex by a random rotation."""
    R = rho.build_rho(r, field)
    if seed is None:
        B = rho.simplex_from_basis(R, len(R) + 1)
    else:
        B = rho.random_simplex(R, len(R) + 1, np.random.default_rng(seed))
    return rho.eitff_from_simplex(B)


@functools.lru_cache(maxsize=None)
def ei_zoo():
    """Named equi-isoclinic sequences with alpha < 1 and n >= 3."""
    R, C = Field.REAL, Field.COMPLEX
    z = {
        "rho R r=1": rho_eitff(1, R),
        "rho R r=2": rho_eitff(2, R),
        "rho R r=4": rho_eitff(4, R),
        "rho R r=8": rho_eitff(8, R),
        "rho C r=1": rho_eitff(1, C),
        "rho C r=2": rho_eitff(2, C),
        "rho C r=3": rho_eitff(3, C),
        "rho C r=4": rho_eitff(4, C),
        "rho C r=5": rho_eitff(5, C),
        "ei3 (5,2,1/2)": subspaces.construct_ei3(5, 2, 0.5),
        "ei3 (8,3,0.6)": subspaces.construct_ei3(8, 3, 0.6),
        "ei3 (7,3,0.7)": subspaces.construct_ei3(7, 3, 0.7),
        "counterexample r=3": rho.counterexample_eitff(3, R),
        "counterexample r=6": rho.counterexample_eitff(6, R),
        "naimark of trivial R(2,2,3)": fusion.naimark_complement(fusion.trivial_eitff(R, 2, 3)),
        "hoggar of C(2,1,4)": fusion.hoggar_c_to_r(rho_eitff(1, C)),
        "R(4,2,4) in R^5": rho_eitff(2, R).embed(5),
        "dsum R(4,2,4)+R(4,2,4)": fusion.direct_sum(rho_eitff(2, R), rho_eitff(2, R)),
    }
    return z


def ei_ids():
    return list(ei_zoo())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
