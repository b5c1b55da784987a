import itertools
import random
from fractions import Fraction

import pytest

from bpadams.arith import delta_p, val_p
from bpadams.adamsk import CongruenceVector
from bpadams.lattice import (CongruenceSystem, LatticeError, SolutionLattice,
                             lattice_eq, lattice_leq, p_fractional_part,
                             sandwich_check, solve, triangularize)


def test_p_fractional_part():
    assert p_fractional_part(3, Fraction(5)) == 0
    assert p_fractional_part(3, Fraction(-1, 3)) == Fraction(2, 3)
    assert p_fractional_part(3, Fraction(7, 9)) == Fraction(7, 9)
    assert p_fractional_part(3, Fraction(5, 6)) == Fraction(1, 3)  # 5/6 = 1/3 + 1/2
    assert p_fractional_part(2, Fraction(5, 6)) == Fraction(1, 2)


def test_solve_single_row_example():
    lat = solve(CongruenceSystem(3, 1, ((Fraction(-1, 3), Fraction(1, 3)),)))
    assert lat.columns() == [(1, 1), (0, 3)]
    assert lat.pivots() == (0, 1)
    # oracle: enumerate residues on the box {0..8}^2
    for mu in itertools.product(range(9), repeat=2):
        satisfied = (mu[1] - mu[0]) % 3 == 0
        assert lat.contains([Fraction(x) for x in mu]) == satisfied


def test_solve_empty_and_integral_systems():
    lat = solve(CongruenceSystem(5, 2, ()))
    assert lat.columns() == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    lat2 = solve(CongruenceSystem(5, 2, ((1, 2, 3), (0, 1, 0))))
    assert lattice_eq(lat, lat2)


def _random_system(rng, p, n, rows=3, denom_power=2):
    out = []
    for _ in range(rows):
        row = [Fraction(rng.randint(-8, 8), p ** rng.randint(0, denom_power))
               for _ in range(n + 1)]
        out.append(tuple(row))
    return CongruenceSystem(p, n, tuple(out))


def test_solve_soundness_and_completeness():
    rng = random.Random(41)
    for _ in range(15):
        p = rng.choice([2, 3])
        n = rng.randint(0, 2)
        sys = _random_system(rng, p, n)
        lat = solve(sys)
        for col in lat.columns():
            assert sys.satisfied_by(col)
        E = max(lat.pivots()) + 1
        box = range(p**E)
        if p**E <= 9:
            points = itertools.product(box, repeat=n + 1)
        else:
            points = ([rng.randrange(p**E) for _ in range(n + 1)] for _ in range(60))
        for mu in points:
            mu = [Fraction(x) for x in mu]
            assert sys.satisfied_by(mu) == lat.contains(mu)


def test_pivot_invariance_under_shuffles_and_units():
    rng = random.Random(43)
    for _ in range(12):
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 3)
        sys = _random_system(rng, p, n, rows=4)
        lat = solve(sys)
        rows = list(sys.rows)
        rng.shuffle(rows)
        scaled = []
        for row in rows:
            unit_num = rng.choice([1, 2, 4, 7, -1, -3])
            while unit_num % p == 0:
                unit_num += 1
            scaled.append(tuple(x * unit_num for x in row))
        lat2 = solve(CongruenceSystem(p, n, tuple(scaled)))
        assert lat.pivots() == lat2.pivots()
        assert lattice_eq(lat, lat2)


def test_triangularize_preserves_solutions():
    rng = random.Random(47)
    for _ in range(10):
        p = rng.choice([2, 3])
        n = rng.randint(0, 3)
        sys = _random_system(rng, p, n)
        tri = triangularize(sys)
        assert len(tri.rows) == n + 1
        for r, row in enumerate(tri.rows):
            assert all(x == 0 for x in row[r + 1:])
        assert lattice_eq(solve(sys), solve(tri))


def test_lattice_eq_examples():
    lat = solve(CongruenceSystem(3, 1, ((Fraction(-1, 3), Fraction(1, 3)),)))
    assert lattice_leq(lat, lat) and lattice_eq(lat, lat)
    neg = solve(CongruenceSystem(3, 1, ((Fraction(1, 3), Fraction(-1, 3)),)))
    assert lattice_eq(lat, neg)
    # a unit multiple of the same row gives the same lattice
    unit = solve(CongruenceSystem(3, 1, ((Fraction(-2, 3), Fraction(2, 3)),)))
    assert lattice_eq(lat, unit)
    # strictly finer lattice
    finer = solve(CongruenceSystem(3, 1, ((Fraction(-1, 9), Fraction(1, 9)),)))
    assert lattice_leq(finer, lat) and not lattice_leq(lat, finer)


def test_dimension_mismatch_rejected():
    a = solve(CongruenceSystem(3, 1, ()))
    b = solve(CongruenceSystem(3, 2, ()))
    with pytest.raises(LatticeError):
        lattice_leq(a, b)
    with pytest.raises(LatticeError):
        CongruenceSystem(3, 2, ((Fraction(1), Fraction(1)),))


def _conforming_row(rng, p, r):
    budget = delta_p(p, r)
    entries = []
    for _ in range(r):
        entries.append(Fraction(rng.randint(-2 * p, 2 * p), p**budget))
    unit = rng.choice([u for u in range(1, 2 * p + 2) if u % p])
    entries.append(Fraction(unit, p**budget))
    return CongruenceVector(p, r, tuple(entries), budget)


def test_sandwich_trivial_and_perturbed():
    rng = random.Random(53)
    for p in (2, 3):
        for n in range(1, 6):
            base = [_conforming_row(rng, p, r) for r in range(n)]
            cn = _conforming_row(rng, p, n)
            res = sandwich_check(p, base, cn, cn)
            assert res.status == "equal" and res.equal
            # unit multiple plus integral combination of earlier rows
            unit = rng.choice([u for u in range(1, 2 * p + 2) if u % p])
            entries = [unit * x for x in cn.entries]
            for r, vec in enumerate(base):
                z = rng.randint(-3, 3)
                for i in range(r + 1):
                    entries[i] += z * vec.entries[i]
            cn_hat = CongruenceVector(p, n, tuple(entries), cn.budget)
            res = sandwich_check(p, base, cn, cn_hat)
            assert res.status == "equal" and res.equal, (p, n)


def test_sandwich_hypothesis_violation_reported():
    rng = random.Random(59)
    p, n = 3, 2
    base = [_conforming_row(rng, p, r) for r in range(n)]
    cn = _conforming_row(rng, p, n)
    weak_entries = list(cn.entries)
    weak_entries[n] = Fraction(1, p ** (cn.budget - 1))  # weakened pivot
    weak = CongruenceVector(p, n, tuple(weak_entries), cn.budget)
    res = sandwich_check(p, base, cn, weak)
    assert res.status == "hypothesis_violation" and not res.equal


def test_solution_lattice_serialization():
    lat = solve(CongruenceSystem(3, 1, ((Fraction(-1, 3), Fraction(1, 3)),)))
    js = lat.to_jsonable()
    assert js["pivots"] == [0, 1]
    assert js["basis_columns"] == [["1", "1"], ["0", "3"]]
