import dataclasses

import numpy as np
import pytest

from periodmotives.numfield import Lattice
from periodmotives.onemotive import OneMotive, hom_motives, kummer_motive, realize_BdR, torus_motive
from periodmotives.oracle import lattice_mask, motive_hom_oracle, triple_hom_oracle
from periodmotives.perimod import PeriodTriple, hom_group, tate
from periodmotives.periodring import SymbolRegistry, parse_scalar

REG = SymbolRegistry.with_primes((2, 3))


def K(a):
    return realize_BdR(kummer_motive(a), REG)


def test_lattice_mask():
    L = Lattice([(2, 0), (1, 3)], 2)
    X = np.array([[2, 0], [1, 3], [3, 3], [1, 0], [0, 6], [0, 3]])
    assert list(lattice_mask(L, X)) == [L.contains(tuple(r)) for r in X.tolist()]


TRIPLE_PAIRS = [
    (tate(0, REG), tate(1, REG)),
    (tate(1, REG), tate(1, REG)),
    (K(2), K(4)),
    (K(4), K(2)),
    (K(-1), K(1)),
    (tate(1, REG), K(3)),
    (PeriodTriple(REG, [[parse_scalar("log2", REG)]]), PeriodTriple(REG, [[parse_scalar("2*log2", REG)]])),
]


@pytest.mark.parametrize("H,G", TRIPLE_PAIRS)
def test_triple_oracle_agrees(H, G):
    rep = triple_hom_oracle(H, G, hom_group(H, G), B=5)
    assert rep.agrees, rep.mismatches[:5]
    assert rep.solutions == rep.lattice_points


def test_triple_oracle_detects_wrong_lattice():
    H, G = K(2), K(4)
    h = hom_group(H, G)
    fake = dataclasses.replace(h, lattice=Lattice.zero(4))
    assert not triple_hom_oracle(H, G, fake, B=2).agrees


MOTIVE_PAIRS = [
    (kummer_motive(2), kummer_motive(4)),
    (kummer_motive(2), kummer_motive(3)),
    (kummer_motive(-1), kummer_motive(1)),
    (torus_motive(1), kummer_motive(6)),
    (OneMotive(2, 1, ((2, 4),)), kummer_motive(2)),
]


@pytest.mark.parametrize("M,N", MOTIVE_PAIRS)
def test_motive_oracle_agrees(M, N):
    rep = motive_hom_oracle(M, N, hom_motives(M, N, REG), B=5)
    assert rep.agrees, rep.mismatches[:5]


def test_motive_oracle_detects_wrong_lattice():
    M, N = kummer_motive(2), kummer_motive(4)
    h = hom_motives(M, N, REG)
    fake = dataclasses.replace(h, lattice=Lattice([(2, 2)], 2))
    assert not motive_hom_oracle(M, N, fake, B=3).agrees
