import pytest

from oracles import p_sylow_exponents, residue_units
from tmod.errors import UnsupportedFieldError
from tmod.quadclass import AbGroup, QuadField
from tmod.rayclass import ray_class_group, residue_unit_group, tp_structure, tp_structure_full
from tmod.torsion import rk2_T2, rk4_T2, t2_order


def _field(m):
    return QuadField.from_radicand(m)


def _unit_images(d, mod):
    """Images of the roots of unity of an imaginary field in Z[w]/(mod), w as in residue_units."""
    if d == -1:
        return [(1, 0), (mod - 1, 0), (0, 1), (0, mod - 1)]
    if d == -3:
        # w = (1 + sqrt(-3))/2 is a primitive 6th root of unity
        out, x = [], (1, 0)
        for _ in range(6):
            out.append(x)
            a, b = x
            x = ((a * 0 + b * -1) % mod, (a + b) % mod)
        return out
    return [(1, 0), (mod - 1, 0)]


def _brute_ray_class(d, p, n):
    """p-part of (O/p^n)^x / roots of unity, valid when the class number is 1."""
    mod = p**n
    units, mul = residue_units(d, mod)
    roots = _unit_images(d, mod)
    canon = {}
    for u in units:
        canon[u] = min(mul(u, r) for r in roots)
    reps = sorted(set(canon.values()))
    qmul = lambda x, y: canon[mul(x, y)]
    return p_sylow_exponents(reps, qmul, canon[(1, 0)], p)


@pytest.mark.parametrize("d,p,n", [(-7, 2, 3), (-1, 2, 3), (-2, 2, 4), (-3, 2, 3), (-11, 3, 2),
                                   (2, 3, 2), (5, 5, 2), (-1, 5, 2), (13, 3, 2)])
def test_residue_units_match_enumeration(d, p, n):
    units, mul = residue_units(d, p**n)
    rug = residue_unit_group(_field(d), p, n)
    assert rug.order == len(units)
    assert rug.exponents == p_sylow_exponents(units, mul, (1, 0), p)
    prod = 1
    for o in rug.generator_orders:
        prod *= o
    assert prod == rug.order


def test_residue_units_small_examples():
    assert residue_unit_group(_field(-7), 2, 3).order == 16
    # 11 splits in Q(sqrt -7): two residue fields of size 11
    rug = residue_unit_group(_field(-7), 11, 1)
    assert rug.order == 10 * 10


@pytest.mark.parametrize("d,p,n", [(-1, 2, 3), (-1, 2, 4), (-2, 2, 4), (-7, 2, 4), (-3, 2, 3),
                                   (-3, 3, 3), (-11, 3, 3), (-1, 5, 2), (-19, 5, 2)])
def test_ray_class_group_matches_enumeration(d, p, n):
    assert ray_class_group(_field(d), p, n).exponents == _brute_ray_class(d, p, n)


def test_examples():
    assert tp_structure(_field(-1), 2) == AbGroup(())
    assert tp_structure(_field(-7), 2) == AbGroup((2,))
    assert tp_structure(_field(-41), 2) == AbGroup((4,))
    assert tp_structure(_field(7), 2) == AbGroup((4,))
    G = tp_structure(_field(-105), 2)
    assert G.rank(2) == 2 == rk2_T2(_field(-105))
    assert G.rank(4) == rk4_T2(105)


def test_real_field_with_p_class_number_rejected():
    with pytest.raises(UnsupportedFieldError):
        ray_class_group(_field(10), 2, 4)


def test_stable_beyond_detected_level():
    for m in (-7, -15, -41, -105, -17, 7, 17, 223):
        F = _field(m)
        st = tp_structure_full(F, 2)
        later = tp_structure_full(F, 2, nmin=st.level + 2)
        assert later.structure == st.structure, m


def test_order_matches_coates_for_real_fields():
    for m in (7, 17, 23, 31, 41, 46, 62, 223):
        assert tp_structure(_field(m), 2).order == t2_order(m), m


def test_cardinality_checked_at_each_level():
    F = _field(-1155)
    for n in range(2, 8):
        G = ray_class_group(F, 2, n)
        assert G.order_exponent == G.hp_exp + sum(G.unit_quotient_exponents)
