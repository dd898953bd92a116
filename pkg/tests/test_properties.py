"""Property deciders: exact verdicts, frozen witnesses, bounded searches."""
import pytest

from skewlab import kernels
from skewlab.maps import SigmaFamily, identity_map
from skewlab.properties import (
    NotEndomorphismTypeError,
    PropertyVerdict,
    SearchBudget,
    block_elementary_subset,
    family_label,
    is_sigma_delta_skew_armendariz,
    is_sigma_rigid,
    is_sigma_skew_armendariz,
    is_skew_armendariz,
    is_skew_pi_armendariz,
    is_weak_armendariz,
    is_weak_sigma_rigid,
    is_weak_sigma_rigid_ideal,
    is_weak_sigma_skew_armendariz,
    poly_is_nilpotent,
)
from skewlab.rings import BudgetError, make_ideal, principal_right_set

from conftest import get_map, get_ring, get_system

BACKENDS = ["numba", "numpy"] if kernels.HAVE_NUMBA else ["numpy"]


def id_family(ring):
    return SigmaFamily(ring, [identity_map(ring)])


def swap_family():
    r = get_ring("Z2xZ2")
    return r, SigmaFamily(r, [get_map(r, "swap")])


def cblk(m):
    """Name of the S-ring element with matrix m in the C slot."""
    return f"blk[[0,0;0,0];[0,0;0,0];{m}]"


# --- rigidity deciders -------------------------------------------------------


def test_sigma_rigid_reduced_ring_holds():
    z6 = get_ring("Z6")
    v = is_sigma_rigid(z6, id_family(z6))
    assert v.status == "holds" and v.witness is None
    assert v.instance == "Z6/[id]"


def test_sigma_rigid_z4_fails_frozen():
    z4 = get_ring("Z4")
    v = is_sigma_rigid(z4, id_family(z4))
    assert v.status == "fails"
    assert v.witness == {
        "element": "2",
        "map": "id",
        "twisted": "2",
        "product": "0",
        "maps_swept": 1,
    }


def test_weak_rigid_z4_holds():
    z4 = get_ring("Z4")
    assert is_weak_sigma_rigid(z4, id_family(z4)).status == "holds"


def test_weak_rigid_m2_holds():
    # element-level biconditional: a*a nilpotent exactly when a is,
    # which does hold in the 2x2 matrix ring even though it is not NI
    m2 = get_ring("M2(Z2)")
    assert is_weak_sigma_rigid(m2, id_family(m2)).status == "holds"


def test_weak_rigid_swap_fails_frozen():
    r, fam = swap_family()
    v = is_weak_sigma_rigid(r, fam)
    assert v.status == "fails"
    assert v.witness == {
        "element": "(0|1)",
        "element_nilpotent": False,
        "map": "swap",
        "product": "(0|0)",
        "product_nilpotent": True,
        "maps_swept": 2,
    }


def test_weak_rigid_ideal_holds_z6():
    z6 = get_ring("Z6")
    ideal = make_ideal(z6, principal_right_set(z6, 3), "3*R")
    v = is_weak_sigma_rigid_ideal(z6, id_family(z6), ideal)
    assert v.status == "holds"
    assert v.bound == {"ideal": "3*R", "ideal_size": 2}


def test_weak_rigid_ideal_fails_swap():
    r, fam = swap_family()
    ideal = make_ideal(r, [0, 1], "0x(0|1)")
    v = is_weak_sigma_rigid_ideal(r, fam, ideal)
    assert v.status == "fails"
    assert v.witness["element"] == "(0|1)"
    assert v.witness["product"] == "(0|0)"
    assert v.witness["ideal"] == "0x(0|1)"


def test_family_label():
    r, fam = swap_family()
    assert family_label(fam) == "[swap]"


# --- zero-product searches (table path) --------------------------------------


def test_sigma_skew_armendariz_m2_fails_frozen():
    v = is_sigma_skew_armendariz(
        get_system("untwisted(M2(Z2))"), SearchBudget(degree_bound=1)
    )
    assert v.status == "fails"
    w = v.witness
    assert w["f"] == "[0,0;1,0]*x1 + [0,0;0,1]"
    assert w["g"] == "[0,0;0,1]*x1 + [0,1;0,0]"
    assert (w["monomial_i"], w["monomial_j"]) == ("1", "x1")
    assert w["a_i"] == "[0,0;0,1]" and w["b_j"] == "[0,0;0,1]"
    assert w["twist"] == "s^0"
    assert w["product"] == "[0,0;0,1]" and w["product_nilpotent"] is False
    assert (w["pairs_checked"], w["zero_products"]) == (11837, 875)


def test_weak_armendariz_m2_fails_both_bounds():
    m2 = get_ring("M2(Z2)")
    v1 = is_weak_armendariz(m2, SearchBudget(degree_bound=1))
    v2 = is_weak_armendariz(m2, SearchBudget(degree_bound=2))
    assert v1.status == "fails" and v2.status == "fails"
    # same canonical witness pair, more pairs swept at the higher bound
    assert v1.witness["f"] == v2.witness["f"] == "[0,0;1,0]*x1 + [0,0;0,1]"
    assert v1.witness["pairs_checked"] == 11837
    assert v2.witness["pairs_checked"] == 73277
    assert v2.witness["zero_products"] == 5147


def test_weak_armendariz_z4_holds_frozen():
    v = is_weak_armendariz(get_ring("Z4"), SearchBudget(degree_bound=2))
    assert v.status == "holds_up_to_bound" and v.witness is None
    assert v.bound == {
        "degree_bound": 2,
        "subset": "full",
        "monomials": 3,
        "polys": 64,
        "pairs_checked": 4096,
        "zero_products": 176,
    }


def test_weak_armendariz_z6_holds():
    v = is_weak_armendariz(get_ring("Z6"), SearchBudget(degree_bound=2))
    assert v.status == "holds_up_to_bound"
    assert v.bound["zero_products"] > 0  # zero divisors exist, none break it


def test_quantum_plane_two_variables_holds():
    v = is_sigma_skew_armendariz(
        get_system("quantum-plane(Z3,2)"), SearchBudget(degree_bound=1)
    )
    assert v.status == "holds_up_to_bound"
    assert v.bound["monomials"] == 3 and v.bound["polys"] == 27


def test_s_ring_armendariz_fails_frozen():
    sys = get_system("s-negate-b(Z3)")
    sub = block_elementary_subset(sys.ring)
    budget = SearchBudget(degree_bound=1, subset=sub, subset_name="block_elementary")
    for fn in (is_weak_sigma_skew_armendariz, is_sigma_skew_armendariz, is_skew_armendariz):
        v = fn(sys, budget)
        assert v.status == "fails"
        w = v.witness
        assert w["a_i"] == cblk("[0,0;0,1]")
        assert w["b_j"] == cblk("[0,0;0,2]")
        assert w["product"] == cblk("[0,0;0,2]")
        assert w["twist"] == "s^0"
        assert (w["pairs_checked"], w["zero_products"]) == (46347, 29242)


def test_block_elementary_sizes():
    assert block_elementary_subset(get_ring("S(Z3)")).size == 25
    assert block_elementary_subset(get_ring("S(Z4)")).size == 37
    with pytest.raises(TypeError):
        block_elementary_subset(get_ring("Z4"))


def test_pair_cap_budget():
    with pytest.raises(BudgetError):
        is_weak_armendariz(get_ring("M2(Z2)"), SearchBudget(degree_bound=2, pair_cap=1000))


def test_derivations_rejected_by_table_searches():
    so = get_system("swap-ore")
    with pytest.raises(NotEndomorphismTypeError):
        is_sigma_skew_armendariz(so, SearchBudget(degree_bound=1))


# --- engine-based searches ----------------------------------------------------


def test_sigma_delta_swap_ore_fails_frozen():
    v = is_sigma_delta_skew_armendariz(get_system("swap-ore"), SearchBudget(degree_bound=1))
    assert v.status == "fails"
    w = v.witness
    assert w["f"] == "(0|1)*x1 + (0|1)"
    assert w["g"] == "(0|1)"
    assert w["term_product"] == "(0|1)"
    assert (w["pairs_checked"], w["zero_products"]) == (78, 30)
    v2 = is_sigma_delta_skew_armendariz(get_system("swap-ore"), SearchBudget(degree_bound=2))
    assert v2.status == "fails" and v2.witness["pairs_checked"] == 270


def test_sigma_delta_holds_on_reduced_base():
    v = is_sigma_delta_skew_armendariz(get_system("untwisted(Z3)"), SearchBudget(degree_bound=2))
    assert v.status == "holds_up_to_bound"


def test_skew_pi_z4_holds_frozen():
    v = is_skew_pi_armendariz(
        get_system("untwisted(Z4)"), SearchBudget(degree_bound=1, power_bound=8)
    )
    assert v.status == "holds_up_to_bound"
    assert v.bound == {
        "degree_bound": 1,
        "power_bound": 8,
        "subset": "full",
        "pairs_checked": 256,
        "nilpotent_products": 112,
    }


def test_skew_pi_m2_fails_frozen():
    v = is_skew_pi_armendariz(
        get_system("untwisted(M2(Z2))"), SearchBudget(degree_bound=1, power_bound=4)
    )
    assert v.status == "fails"
    assert v.witness["fg_power_zero_at"] == 1
    assert (v.witness["pairs_checked"], v.witness["nilpotent_products"]) == (11837, 2275)


def test_poly_is_nilpotent():
    s4 = get_system("untwisted(Z4)")
    f = s4.poly({(1,): 2, (0,): 2})
    ok, k = poly_is_nilpotent(f, 4)
    assert ok and k == 2
    assert poly_is_nilpotent(s4.zero_poly(), 4) == (True, 1)
    assert poly_is_nilpotent(s4.constant(1), 4) == (False, 0)
    # power bound too small: no nilpotency certificate
    assert poly_is_nilpotent(f, 1) == (False, 0)


# --- determinism ----------------------------------------------------------------


def test_verdicts_identical_across_backends_and_runs():
    sys = get_system("untwisted(M2(Z2))")
    records = []
    for backend in BACKENDS + BACKENDS:
        v = is_sigma_skew_armendariz(sys, SearchBudget(degree_bound=1), backend=backend)
        records.append(v.to_record())
    assert all(r == records[0] for r in records)


def test_weak_armendariz_backend_agreement():
    z6 = get_ring("Z6")
    recs = [
        is_weak_armendariz(z6, SearchBudget(degree_bound=2), backend=b).to_record()
        for b in BACKENDS
    ]
    assert all(r == recs[0] for r in recs)


def test_to_record_field_order():
    v = PropertyVerdict("p", "i", "holds")
    assert list(v.to_record().keys()) == [
        "record",
        "property",
        "instance",
        "status",
        "witness",
        "bound",
    ]
    assert v.holds and not v.fails
