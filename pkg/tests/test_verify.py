import json

import pytest

from dalat.basis import basis_poly
from dalat.lattice import LatticePoint
from dalat.scalar import GR
from dalat.verify import CHECKS, check_names, verify_all


def corrupted(n, z):
    v = basis_poly(n, z, exact=True)
    # one wrong table entry
    return v + GR(1) if (n, z) == (3, LatticePoint(2, 1)) else v


def test_registry_names_are_unique():
    names = check_names()
    assert len(names) == len(set(names)) == len(CHECKS)
    assert "si3" in names


def test_fault_injection_flags_si3():
    rep = verify_all("quick", basis=corrupted, only=["si3", "dbar-factor"])
    assert "si3" in rep["failed"] and not rep["passed"]
    clean = verify_all("quick", only=["si3", "dbar-factor"])
    assert clean["passed"]


def test_unknown_profile():
    with pytest.raises(ValueError):
        verify_all("slow")


def test_crashing_check_is_recorded():
    def broken(n, z):
        raise RuntimeError("boom")
    rep = verify_all("quick", basis=broken, only=["si3"])
    assert rep["failed"] == ["si3"] and "boom" in rep["checks"][0]["detail"]["error"]


@pytest.mark.slow
def test_quick_profile_report():
    rep = verify_all("quick")
    assert json.loads(json.dumps(rep)) == rep
    assert [c["name"] for c in rep["checks"]] == check_names()
    # z^(n)(3) = C(3, n) vanishes for n > 3, so the root test has no limit there
    assert rep["failed"] == ["hadamard"]
