from fractions import Fraction
from pathlib import Path

import pytest

from gwrubber.oracles import (
    ch_recursion,
    cycle_type,
    golden_tables,
    hurwitz_bruteforce,
    irreducible_ch,
    kontsevich_recursion,
    point_count,
    severi_degree,
)
from gwrubber.cli import run


def test_kontsevich_first_values():
    assert kontsevich_recursion(6) == [1, 1, 12, 620, 87304, 26312976]


def test_kontsevich_empty():
    assert kontsevich_recursion(0) == []


def test_severi_quartics():
    # classical degrees of the Severi varieties of plane quartics
    assert [severi_degree(4, k, (), (4,)) for k in range(7)] == [1, 27, 225, 675, 666, 378, 105]


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_all_simple_rational_row_is_kontsevich(d):
    delta = (d - 1) * (d - 2) // 2
    assert ch_recursion(d, delta, (), (d,), irreducible=True) == kontsevich_recursion(d)[-1]


def test_anchors():
    assert ch_recursion(1, 0, (), (1,)) == 1
    assert ch_recursion(2, 1, (), (2,)) == 3
    # nodal cubics through 8 points
    assert ch_recursion(3, 1, (), (3,)) == 12


def test_tangent_conics():
    # conics through 4 points tangent to a line at an unspecified point
    assert ch_recursion(2, 0, (), (0, 1)) == 2
    # ... and at a fixed point on it
    assert ch_recursion(2, 0, (0, 1), ()) == 1


def test_irreducible_differs_from_severi_when_reducible_curves_exist():
    # two lines through 4 points: 3 reducible nodal conics
    assert severi_degree(2, 1, (), (2,)) == 3
    assert irreducible_ch(2, 1, (), (2,)) == 0


def test_point_count():
    assert point_count(3, 0, (3,)) == 9
    assert point_count(2, 1, (0, 1)) == 3


def test_ch_rejects_bad_profile():
    with pytest.raises(ValueError):
        ch_recursion(3, 0, (1,), (1,))


def test_cycle_type():
    assert cycle_type((1, 2, 0, 3)) == (3, 1)


@pytest.mark.parametrize(
    "d,mu,r,expected",
    [
        (1, (1,), 0, Fraction(1)),
        (2, (2,), 1, Fraction(1, 2)),
        (2, (1, 1), 2, Fraction(1, 2)),
        (3, (3,), 2, Fraction(1)),
        (3, (1, 1, 1), 2, Fraction(1, 2)),
    ],
)
def test_hurwitz_small(d, mu, r, expected):
    assert hurwitz_bruteforce(d, mu, r) == expected


def test_hurwitz_one_part_formula():
    # a fixed d-cycle has d^{d-2} minimal factorizations (Denes); there are (d-1)! d-cycles
    for d in range(2, 6):
        tuples = d ** (d - 2)
        n_cycles = _fact(d - 1)
        assert hurwitz_bruteforce(d, (d,), d - 1) == Fraction(tuples * n_cycles, _fact(d))


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def test_hurwitz_rejects_non_partition():
    with pytest.raises(ValueError):
        hurwitz_bruteforce(3, (2,), 1)


GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("name", ["kontsevich.txt", "caporaso_harris.txt", "hurwitz.txt"])
def test_golden_tables_unchanged(name):
    assert golden_tables()[name] == (GOLDEN / name).read_text()


def test_oracle_tables_command_writes_golden_files(tmp_path):
    assert run(["oracle", "tables", "--output-dir", str(tmp_path)]) == 0
    for path in GOLDEN.iterdir():
        assert (tmp_path / path.name).read_bytes() == path.read_bytes()
