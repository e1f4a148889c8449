"""Shared fixtures: canonical instances built once per session."""

import numpy as np
import pytest

from cotwist.correspondence import (Config, SymplecticConstruction, build_instance,
                                    full_report, prepare_instance)
from cotwist.dual_algebras import build_A1_A2_star
from cotwist.groups import build_elementary_abelian_symplectic, double_cosets
from cotwist.twist import symplectic_twist


def make_config(p, gens, seed=0):
    return Config(SymplecticConstruction(p=p, n=1, gamma_generators=gens), seed=seed)


UNIPOTENT = [[[1, 1], [0, 1]]]
DIAG_12 = [[[1, 0], [0, 2]]]


@pytest.fixture(scope="session")
def p3_pair():
    """(group, bicharacter) for (Z/3)^2."""
    return build_elementary_abelian_symplectic(3, 1)


@pytest.fixture(scope="session")
def p3_twist(p3_pair):
    h, sigma = p3_pair
    return symplectic_twist(h, sigma)


@pytest.fixture(scope="session")
def p3_duals(p3_twist):
    """(A1*, A2*, rho1, rho2) on the standalone (Z/3)^2."""
    return build_A1_A2_star(p3_twist)


@pytest.fixture(scope="session")
def p3_diag_bundle():
    """Instance, context, and double cosets for p=3, gamma=diag(1,2)."""
    inst = build_instance(make_config(3, DIAG_12))
    ctx = prepare_instance(inst, seed=0)
    zs = double_cosets(inst.G, inst.H)
    return inst, ctx, zs


@pytest.fixture(scope="session")
def p3_unipotent_report():
    return full_report(make_config(3, UNIPOTENT))


@pytest.fixture(scope="session")
def p3_diag_report():
    return full_report(make_config(3, DIAG_12))


@pytest.fixture(scope="session")
def p5_diag_bundle():
    inst = build_instance(make_config(5, DIAG_12))
    ctx = prepare_instance(inst, seed=0)
    zs = double_cosets(inst.G, inst.H)
    return inst, ctx, zs


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print the one-line-per-criterion acceptance summary."""
    import sys

    # use the module instance pytest actually executed, never a fresh import
    module = None
    for name, mod in sys.modules.items():
        if name.rpartition(".")[2] == "test_acceptance" and hasattr(mod, "RESULTS"):
            module = mod
            if mod.RESULTS:
                break
    if module is None:
        return
    CRITERIA, RESULTS = module.CRITERIA, module.RESULTS
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(CRITERIA):
        status, detail = RESULTS.get(num, ("NOT RUN", ""))
        line = f"criterion {num}: {status} — {CRITERIA[num]}"
        if detail:
            line += f" ({detail})"
        tr.write_line(line)
