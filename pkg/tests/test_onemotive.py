from fractions import Fraction

import pytest

from periodmotives.numfield import Matrix
from periodmotives.onemotive import (
    AbelianDatum,
    MotiveError,
    OneMotive,
    cartier_dual_motive,
    cartier_identification,
    hom_motives,
    ker_u,
    kummer_motive,
    lattice_motive,
    realize_BdR,
    realize_dRB,
    realize_morphism,
    realize_with_torsion,
    torsion_parts,
    torus_motive,
    universal_extension_dims,
    weight_filtration,
)
from periodmotives.perimod import (
    cartier_dual_triple,
    dual,
    hom_group,
    period_cohomology,
)
from periodmotives.periodring import ABELIAN_PERIOD, ELLIPTIC_LOG, SymbolRegistry, parse_scalar

REG = SymbolRegistry.with_primes((2, 3, 5))


def S(rows, reg=REG):
    return Matrix([[parse_scalar(x, reg) for x in r] for r in rows], len(rows), len(rows[0]))


def elliptic_registry():
    reg = SymbolRegistry.with_primes((2, 3), freeze=False)
    for n in ("w1", "w2", "e1", "e2"):
        reg.add_symbol(n, ABELIAN_PERIOD)
    for n in ("z", "zeta"):
        reg.add_symbol(n, ELLIPTIC_LOG)
    reg.add_relation("w1*e2", "w2*e1 + 2pi_i")
    return reg.freeze()


ELL = AbelianDatum(1, (("w1", "w2"), ("e1", "e2")))


# -- golden realizations ------------------------------------------------------


def test_torus_and_lattice_realizations():
    assert realize_BdR(torus_motive(1), REG).omega == S([["2pi_i"]])
    assert realize_BdR(lattice_motive(2), REG).omega == S([["1", "0"], ["0", "1"]])


@pytest.mark.parametrize("a,log", [(2, "log2"), (3, "log3"), (-1, "1/2*2pi_i"), (Fraction(1, 2), "-log2")])
def test_kummer_golden(a, log):
    T = realize_BdR(kummer_motive(a), REG)
    assert T.omega == S([["2pi_i", log], ["0", "1"]])


def test_abelian_realization_and_dims():
    reg = elliptic_registry()
    M = OneMotive(1, 1, ((3,),), abelian=ELL, u_abelian=(("z", "zeta"),))
    T = realize_BdR(M, reg)
    assert T.omega[1, 3] == parse_scalar("z", reg) and T.omega[2, 3] == parse_scalar("zeta", reg)
    assert universal_extension_dims(M) == (2, 4)
    assert T.iso


def test_weight_filtration():
    M = OneMotive(1, 1, ((3,),), abelian=ELL)
    W = weight_filtration(M)
    assert W.motives[-2].torus_rank == 1 and W.motives[-2].lattice_rank == 0
    assert W.motives[-1].genus == 1
    assert [W.lattices.at(w).rank for w in (-2, -1, 0)] == [1, 3, 4]


def test_invalid_motives():
    with pytest.raises(MotiveError):
        OneMotive(1, 1, ((0,),))
    with pytest.raises(MotiveError):
        OneMotive(1, 2, ((2,),))
    with pytest.raises(MotiveError):
        OneMotive(0, 1, ((3,),), lattice_torsion=(2,))


# -- torsion ---------------------------------------------------------------


def test_torsion_parts_sign():
    M = OneMotive(0, 1, ((-1,),), lattice_torsion=(2,))
    parts = torsion_parts(M)
    assert parts.tor.lattice_torsion == ()
    assert parts.F == (2,)
    assert parts.fr.lattice_rank == 0 and parts.fr.torus_rank == 1


def test_torsion_in_kernel():
    M = OneMotive(1, 1, ((2, 1),), lattice_torsion=(3,))
    parts = torsion_parts(M)
    assert parts.tor.lattice_torsion == (3,)
    T = realize_with_torsion(M, REG)
    assert T.torsion == (3,)
    assert ker_u(M, REG).invariants() == (0, (3,))


# -- hom and ker u ---------------------------------------------------------


def test_hom_examples():
    assert hom_motives(kummer_motive(2), kummer_motive(4), REG).rank == 1
    assert hom_motives(kummer_motive(2), kummer_motive(3), REG).rank == 0
    assert hom_motives(torus_motive(1), kummer_motive(5), REG).rank == 1


def test_ker_u_examples():
    assert ker_u(kummer_motive(2), REG).free_rank == 0
    assert ker_u(kummer_motive(1), REG).free_rank == 1
    k = ker_u(OneMotive(2, 1, ((2, 4),)), REG)
    assert k.lattice.vectors() == [(2, -1)]
    assert ker_u(kummer_motive(-1), REG).lattice.vectors() == [(2,)]


def test_ker_u_abelian():
    reg = elliptic_registry()
    M = OneMotive(1, 0, (), abelian=ELL, u_abelian=(("w1", "e1"),))
    assert ker_u(M, reg).free_rank == 1  # a lattice point maps to 0 in A
    N = OneMotive(1, 0, (), abelian=ELL, u_abelian=(("z", "zeta"),))
    assert ker_u(N, reg).free_rank == 0
    assert period_cohomology(realize_BdR(N, reg)).rank == 0


PAIRS = [
    (kummer_motive(2), kummer_motive(4)),
    (kummer_motive(4), kummer_motive(2)),
    (kummer_motive(-1), kummer_motive(1)),
    (OneMotive(2, 1, ((2, 3),)), kummer_motive(6)),
    (kummer_motive(6), OneMotive(1, 2, ((2,), (3,)))),
]


@pytest.mark.parametrize("M,N", PAIRS)
def test_functoriality(M, N):
    TM, TN = realize_BdR(M, REG), realize_BdR(N, REG)
    h = hom_motives(M, N, REG)
    for F, G in h.pairs:
        phi = realize_morphism(M, N, F, G, REG, TM, TN)
        assert phi.commutes()
    assert hom_group(TM, TN).invariants() == h.invariants()


def test_realize_composite():
    A, B, C = kummer_motive(2), kummer_motive(4), kummer_motive(16)
    TA, TB, TC = (realize_BdR(x, REG) for x in (A, B, C))
    (F1, G1), = hom_motives(A, B, REG).pairs
    (F2, G2), = hom_motives(B, C, REG).pairs
    f = realize_morphism(A, B, F1, G1, REG, TA, TB)
    g = realize_morphism(B, C, F2, G2, REG, TB, TC)
    gf = realize_morphism(A, C, F2 @ F1, G2 @ G1, REG, TA, TC)
    assert g.compose(f).phi_Z == gf.phi_Z and g.compose(f).phi_K == gf.phi_K


# -- Cartier ---------------------------------------------------------------


@pytest.mark.parametrize("M", [kummer_motive(2), OneMotive(2, 1, ((2, 3),)), OneMotive(1, 2, ((2,), (-1,)))])
def test_cartier_identification(M):
    Ms = cartier_dual_motive(M)
    assert cartier_dual_motive(Ms).u_torus == M.u_torus
    T = cartier_dual_triple(realize_BdR(M, REG))
    R = realize_BdR(Ms, REG)
    P = cartier_identification(M)
    P_s = P.map(lambda x: parse_scalar(str(x), REG))
    assert R.omega @ P_s == P_s @ T.omega
    tpi = parse_scalar("2pi_i", REG)
    assert T.omega == dual(realize_BdR(M, REG)).omega.scale(tpi)


def test_realize_dRB_lattice():
    T = realize_dRB(lattice_motive(1), REG)
    assert T.omega == S([["1/2pi_i"]])
