import pytest

from periodmotives.numfield import Lattice, Matrix
from periodmotives.onemotive import kummer_motive, lattice_motive, realize_BdR, torus_motive
from periodmotives.perimod import (
    COHOMOLOGICAL,
    PeriodTriple,
    TripleError,
    TripleMorphism,
    biext_group,
    cartier_dual_triple,
    check_hodge_preservation,
    check_weight_preservation,
    circ_dual,
    dual,
    find_isomorphism,
    hom_group,
    period_cohomology,
    tate,
    tate_twist,
    tensor,
    varsigma,
    varsigma_inverse,
)
from periodmotives.periodring import SymbolRegistry, parse_scalar

REG = SymbolRegistry.with_primes((2, 3, 5))


def T(rows, **kw):
    return PeriodTriple(REG, [[parse_scalar(x, REG) for x in r] for r in rows], **kw)


def Z(r):
    return tate(r, REG)


def K(a):
    return realize_BdR(kummer_motive(a), REG)


SUITE = [
    Z(0), Z(1), Z(-1), Z(2),
    K(2), K(4), K(3), K(1), K(-1),
    T([["log2"]]),
    T([["1", "log3"], ["0", "2pi_i"]]),
    T([["2pi_i", "log2", "log3"], ["0", "1", "0"], ["0", "0", "1"]]),
    T([["log2", "0"], ["0", "log2"]]),
]


def perm_matrix(perm):
    n = len(perm)
    return Matrix([[int(perm[j] == i) for j in range(n)] for i in range(n)], n, n)


# -- examples ----------------------------------------------------------------


def test_tate_objects():
    assert Z(1).omega == Matrix([[parse_scalar("2pi_i", REG)]], 1, 1)
    assert tate_twist(Z(1), -1).same_as(Z(0))
    assert tensor(Z(1), Z(1)).same_as(Z(2))


def test_hom_examples():
    assert hom_group(Z(0), Z(1)).is_zero()
    assert hom_group(Z(1), Z(1)).rank == 1
    h = hom_group(K(2), K(4))
    assert h.rank == 1
    assert h.generators[0].phi_Z == Matrix([[2, 0], [0, 1]], 2, 2)


def test_period_cohomology_examples():
    assert period_cohomology(Z(0)).rank == 1
    assert period_cohomology(Z(1)).rank == 0
    assert period_cohomology(K(1)).rank == 1


def test_dual_matrix():
    D = dual(K(2))
    assert D.omega == Matrix([[parse_scalar(x, REG) for x in r] for r in
                              [["1/2pi_i", "0"], ["-log2/2pi_i", "1"]]], 2, 2)


def test_biext_examples():
    assert biext_group(Z(1), Z(1)).rank == 0
    L = realize_BdR(lattice_motive(1), REG)
    G = realize_BdR(torus_motive(1), REG)
    assert biext_group(L, G).rank == 1
    assert biext_group(G, G).rank == 0


def test_biext_alternating_part():
    L2 = realize_BdR(lattice_motive(2), REG)
    res = biext_group(L2, L2)
    assert "alternating" in res.extra
    for v in res.extra["alternating"].vectors():
        assert v[1] == -v[2] and v[0] == v[3] == 0


def test_torsion_hom():
    A = PeriodTriple(REG, [[parse_scalar("1", REG)]], torsion=(4,))
    B = PeriodTriple(REG, [[parse_scalar("1", REG)]], torsion=(6,))
    h = hom_group(A, B)
    assert h.rank == 1 and h.torsion == (2, 6)


def test_shape_and_iso_errors():
    with pytest.raises(TripleError):
        T([["log2", "log2"], ["log2", "log2"]], require_iso=True)
    with pytest.raises(TripleError):
        hom_group(Z(0), varsigma(Z(1)))


def test_cohomological_side():
    C = varsigma(K(2))
    assert C.side == COHOMOLOGICAL
    assert varsigma_inverse(C).same_as(K(2))
    assert hom_group(varsigma(K(2)), varsigma(K(4))).rank == hom_group(K(2), K(4)).rank
    assert circ_dual(K(2)).omega == K(2).omega.T


# -- properties --------------------------------------------------------------


@pytest.mark.parametrize("i", range(len(SUITE)))
def test_generators_commute_and_filtrations(i):
    H = SUITE[i]
    for G in SUITE:
        if G.free_rank * H.free_rank > 9:
            continue
        h = hom_group(H, G)
        for f in h.generators:
            assert isinstance(f, TripleMorphism) and f.commutes()
            if H.weights and G.weights:
                assert check_weight_preservation(f)
            if H.hodge is not None and G.hodge is not None:
                assert check_hodge_preservation(f)


@pytest.mark.parametrize("i", range(len(SUITE)))
def test_duality_swaps_hom(i):
    H = SUITE[i]
    for G in SUITE[:9]:
        a = hom_group(H, G)
        b = hom_group(dual(G), dual(H))
        assert a.invariants() == b.invariants()


def test_tensor_associative_and_unital():
    A, B, C = K(2), Z(1), K(3)
    left = tensor(tensor(A, B), C)
    right = tensor(A, tensor(B, C))
    # same index order (a, b, c) on both sides: the identity reindexing
    n = left.free_rank
    assert find_isomorphism(left, right, hints=[Matrix.identity(n)]) is not None
    # commutativity needs an honest permutation
    AB, BA = tensor(A, C), tensor(C, A)
    P = perm_matrix([0, 2, 1, 3])
    f, g = find_isomorphism(AB, BA, hints=[P])
    assert f.phi_Z == P and (f.compose(g)).phi_Z == Matrix.identity(4)
    assert find_isomorphism(tensor(A, Z(0)), A, hints=[Matrix.identity(2)]) is not None


@pytest.mark.parametrize("q", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("i", range(9))
def test_twist_matches_hom_from_tate(q, i):
    H = SUITE[i]
    assert period_cohomology(tate_twist(H, q)).invariants() == hom_group(Z(-q), H).invariants()


@pytest.mark.parametrize("i", [4, 5, 6, 8, 10])
def test_cartier_involution(i):
    H = SUITE[i]
    HH = cartier_dual_triple(cartier_dual_triple(H))
    assert find_isomorphism(HH, H, hints=[Matrix.identity(H.free_rank), -Matrix.identity(H.free_rank)])


def test_lattice_hom_saturated():
    h = hom_group(K(2), K(4))
    assert isinstance(h.lattice, Lattice) and h.lattice.is_saturated()
