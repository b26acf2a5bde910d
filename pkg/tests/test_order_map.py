import itertools
import random
from fractions import Fraction

import pytest

from conftest import det_cofactor
from tropmono.dual_complex import SemistableCombinatorics, Stratum
from tropmono.library import (cycle_complex, cycle_orientation_presentations,
                              cycle_presentations_from_tensor, cycle_unit_h2,
                              point_complex, simplicial_presentations_from_tensors,
                              tetrahedron_complex)
from tropmono.order_map import (Presentation, check_e2_membership,
                                dolbeault_ladder, epsilon_sigma,
                                flag_normalization, ord_vector,
                                presentation_tau, require_simplicial,
                                tau_pullback)
from tropmono.poly import Poly
from tropmono.randgen import rand_fraction, rand_int_matrix


def test_ord_value_matches_weighted_determinants():
    rng = random.Random(60)
    for _ in range(120):
        p = rng.randint(1, 4)
        nw = rng.randint(1, 3)
        weights = tuple(rand_fraction(rng) for _ in range(nw))
        mats = tuple(rand_int_matrix(rng, p, p, span=5) for _ in range(nw))
        flag = tuple(range(1, p + 2))
        pres = Presentation(component=1, weights=weights, flags={flag: mats})
        want = sum((w * det_cofactor(m) for w, m in zip(weights, mats)),
                   Fraction(0))
        assert pres.ord_value(flag) == want


def test_epsilon_sigma_frozen():
    assert epsilon_sigma((0, 1)) == 1
    assert epsilon_sigma((1, 0)) == -1
    assert epsilon_sigma((0, 1, 2)) == 1
    assert epsilon_sigma((0, 2, 1)) == -1
    assert epsilon_sigma((1, 2, 0)) == 1
    assert epsilon_sigma((0, 1, 2, 3)) == 1
    with pytest.raises(ValueError):
        epsilon_sigma((0, 2))


def test_flag_normalization_frozen():
    assert flag_normalization((3, 1, 2)) == ((1, 2, 3), 1)
    assert flag_normalization((5, 1)) == ((1, 5), -1)
    assert flag_normalization((1, 2, 3)) == ((1, 2, 3), 1)


def full_subset_complex(m):
    """All nonempty subsets of {1..m} as strata."""
    def label(subset):
        return "S" + "_".join(map(str, subset))

    strata = []
    for size in range(1, m + 1):
        for subset in itertools.combinations(range(1, m + 1), size):
            parents = {}
            if size > 1:
                parents = {i: label(tuple(v for v in subset if v != i))
                           for i in subset}
            strata.append(Stratum(label(subset), subset, parents))
    return SemistableCombinatorics([f"Y{i}" for i in range(1, m + 1)], strata)


def presentation_from_tensor(tensor, weights, sigma):
    """Root the flag at vertex sigma[0]; matrix columns are differences of
    the shared tensor columns against the root."""
    verts = tuple(range(1, len(sigma) + 1))
    flag = tuple(verts[s] for s in sigma)
    mats = tuple(
        tuple(tuple(row[s] - row[sigma[0]] for s in sigma[1:]) for row in block)
        for block in tensor)
    return Presentation(component=flag[0], weights=weights, flags={flag: mats})


def test_reordered_flags_transform_by_epsilon():
    # all flag orders built from one shared exponent tensor give the same
    # normalized order value, and the raw values differ exactly by the sign
    rng = random.Random(61)
    for p in (1, 2, 3):
        cx = full_subset_complex(p + 1)
        top = "S" + "_".join(str(i) for i in range(1, p + 2))
        for _ in range(6):
            nw = rng.randint(1, 2)
            weights = tuple(rand_fraction(rng) for _ in range(nw))
            tensor = [rand_int_matrix(rng, p, p + 1, span=4)
                      for _ in range(nw)]
            sigmas = list(itertools.permutations(range(p + 1)))
            pres = {s: presentation_from_tensor(tensor, weights, s)
                    for s in sigmas}
            base = pres[tuple(range(p + 1))]
            base_val = base.ord_value(tuple(range(1, p + 2)))
            for sigma, pr in pres.items():
                flag = next(iter(pr.flags))
                assert pr.ord_value(flag) == epsilon_sigma(sigma) * base_val
            vec = ord_vector(list(pres.values()), cx, p)
            assert vec.values[top] == base_val


def test_ord_vector_rejects_disagreeing_data():
    p = 2
    cx = full_subset_complex(p + 1)
    weights = (Fraction(1),)
    tensor = [((0, 1, 3), (0, -3, -2))]
    good = [presentation_from_tensor(tensor, weights, s)
            for s in itertools.permutations(range(p + 1))]
    assert ord_vector(good, cx, p).values["S1_2_3"] == 7
    bad = Presentation(component=1, weights=weights,
                       flags={(1, 2, 3): (((1, 3), (-3, -1)),)})
    with pytest.raises(ValueError, match="disagree"):
        ord_vector(good + [bad], cx, p)


def test_ord_vector_error_paths():
    m = 4
    cx = cycle_complex(m)
    pres = cycle_orientation_presentations(m)
    with pytest.raises(ValueError, match="no presentation covers"):
        ord_vector(pres[1:], cx, 1)
    with pytest.raises(ValueError, match="levels >= 1"):
        ord_vector(pres, cx, 0)
    extra = Presentation(component=2, weights=(1,), flags={(2, 1): (((2,),),)})
    with pytest.raises(ValueError, match="disagree"):
        ord_vector(pres + [extra], cx, 1)


def test_cycle_order_vector_frozen_and_in_both_kernels():
    for m in range(3, 8):
        cx = cycle_complex(m)
        vec = ord_vector(cycle_orientation_presentations(m), cx, 1)
        assert check_e2_membership(vec, cx, cycle_unit_h2(m)) == (True, True)
    vec5 = ord_vector(cycle_orientation_presentations(5), cycle_complex(5), 1)
    assert vec5.values == {"E1_2": 1, "E2_3": 1, "E3_4": 1, "E4_5": 1,
                           "E1_5": -1}


def test_tau_pullback_frozen():
    tau = tau_pullback([[1, 0, 2], [0, 1, 1]])
    want = {((0, 1), ()): 1, ((0, 2), ()): 1, ((1, 2), ()): -2}
    assert {k: f.constant_value() for k, f in tau.terms.items()} == want
    assert tau.bidegrees() == {(2, 0)}


def test_tau_pullback_degenerate_shapes():
    unit = tau_pullback([], ncols=3)
    assert unit.terms[((), ())].constant_value() == 1
    assert tau_pullback([[1], [2]]).is_zero()
    with pytest.raises(ValueError, match="ncols required"):
        tau_pullback([])
    with pytest.raises(ValueError, match="ragged"):
        tau_pullback([[1, 2], [3]])
    with pytest.raises(ValueError, match="disagrees"):
        tau_pullback([[1, 2]], ncols=3)


def test_tau_pullback_minors_match_oracle():
    rng = random.Random(62)
    for _ in range(60):
        p = rng.randint(1, 3)
        n = rng.randint(p, 5)
        mat = rand_int_matrix(rng, p, n, span=4)
        tau = tau_pullback(mat)
        for subset in itertools.combinations(range(n), p):
            sub = [[row[j] for j in subset] for row in mat]
            want = det_cofactor(sub)
            got = tau.terms.get((subset, ()), Poly.zero(n)).constant_value()
            assert got == want


def test_presentation_tau_is_the_weighted_sum():
    rng = random.Random(63)
    for _ in range(30):
        p = rng.randint(1, 3)
        n = rng.randint(p, 4)
        w1, w2 = rand_fraction(rng), rand_fraction(rng)
        m1 = rand_int_matrix(rng, p, n)
        m2 = rand_int_matrix(rng, p, n)
        total = presentation_tau((w1, w2), (m1, m2), n)
        assert total == w1 * tau_pullback(m1) + w2 * tau_pullback(m2)
    with pytest.raises(ValueError, match="one matrix per weight"):
        presentation_tau((1, 2), ([[1]],), 1)


def test_presentation_validation():
    with pytest.raises(ValueError, match="at least one wall"):
        Presentation(1, (1,), {(1,): (((1,),),)})
    with pytest.raises(ValueError, match="rooted at"):
        Presentation(1, (1,), {(2, 1): (((1,),),)})
    with pytest.raises(ValueError, match="distinct"):
        Presentation(1, (1,), {(1, 1): (((1,),),)})
    with pytest.raises(ValueError, match="per weight"):
        Presentation(1, (1, 2), {(1, 2): (((1,),),)})
    with pytest.raises(ValueError, match="same number of rows"):
        Presentation(1, (1,), {(1, 2): (((1,), (2,)),), (1, 3): (((1,),),)})
    with pytest.raises(ValueError, match="column per wall"):
        Presentation(1, (1,), {(1, 2, 3): (((1,),),)})
    pres = Presentation(1, (1,), {(1, 2): (((3,),),)})
    with pytest.raises(KeyError):
        pres.ord_value((1, 3))
    assert Presentation(1, (1,), {}).degree is None


def test_presentation_json_roundtrip():
    pres = Presentation(
        component=2,
        weights=(Fraction(1, 2), Fraction(-3)),
        flags={(2, 1, 4): (((1, 0), (2, 5)), ((0, 1), (-1, 2))),
               (2, 3, 4): (((1, 1), (0, 2)), ((2, 0), (1, 1)))})
    assert Presentation.from_json_obj(pres.to_json_obj()) == pres


def test_ladder_on_cycles():
    for m in range(3, 8):
        cx = cycle_complex(m)
        pres = cycle_orientation_presentations(m)
        result = dolbeault_ladder(pres, cx, 1)
        assert result.constant == -1
        assert result.final_check
        assert all(ok for *_, ok in result.comparisons)
        assert result.ord_values == ord_vector(pres, cx, 1).values


def test_ladder_with_shared_tensor_cover():
    # every edge covered twice; the two induced forms must agree and the
    # tower must still close onto the common order values
    m = 4
    columns = {(1, 2): [(0, 2)], (2, 3): [(1, -1)], (3, 4): [(0, 5)],
               (1, 4): [(3, 3)]}
    pres = cycle_presentations_from_tensor(m, (Fraction(1, 2),), columns)
    cx = cycle_complex(m)
    result = dolbeault_ladder(pres, cx, 1)
    assert result.final_check
    assert result.ord_values == {"E1_2": 1, "E2_3": -1,
                                 "E3_4": Fraction(5, 2), "E1_4": 0}

    tampered = list(pres)
    broken = tampered[0].to_json_obj()
    broken["flags"]["1,2"][0][0][0] += 1
    tampered[0] = Presentation.from_json_obj(broken)
    with pytest.raises(ValueError, match="presentations disagree"):
        dolbeault_ladder(tampered, cx, 1)


def test_ladder_on_the_tetrahedron():
    cx = tetrahedron_complex()
    tensors = {
        "V1_2_3": [((0, 1, 3), (0, -3, -2))],
        "V1_2_4": [((1, 1, 0), (2, 0, 1))],
        "V1_3_4": [((0, 2, 1), (1, 1, -1))],
        "V2_3_4": [((2, 0, 1), (0, 1, 1))],
    }
    pres = simplicial_presentations_from_tensors(cx, (1,), tensors)
    result = dolbeault_ladder(pres, cx, 2)
    assert result.constant == Fraction(-1, 2)
    assert result.final_check
    assert result.ord_values["V1_2_3"] == 7
    for label, tensor in tensors.items():
        block = tensor[0]
        diff = [[row[j] - row[0] for j in (1, 2)] for row in block]
        assert result.ord_values[label] == det_cofactor(diff)


def bowtie_complex():
    """Two triangles glued along one edge."""
    strata = [Stratum(f"Y{i}", (i,), {}) for i in range(1, 5)]
    for a, b in ((1, 2), (1, 3), (2, 3), (1, 4), (2, 4)):
        strata.append(Stratum(f"E{a}_{b}", (a, b), {a: f"Y{b}", b: f"Y{a}"}))
    strata += [
        Stratum("T1_2_3", (1, 2, 3), {1: "E2_3", 2: "E1_3", 3: "E1_2"}),
        Stratum("T1_2_4", (1, 2, 4), {1: "E2_4", 2: "E1_4", 4: "E1_2"}),
    ]
    return SemistableCombinatorics([f"Y{i}" for i in range(1, 5)], strata)


def test_ladder_requires_consistent_data_across_tops():
    cx = bowtie_complex()
    # shared edge E1_2 gets value 1 from the first triangle, 1 from the
    # second: consistent
    tensors = {"T1_2_3": [((0, 1, 3),)], "T1_2_4": [((2, 3, 0),)]}
    pres = simplicial_presentations_from_tensors(cx, (1,), tensors)
    result = dolbeault_ladder(pres, cx, 1)
    assert result.final_check
    assert result.ord_values["E1_2"] == 1
    # now the second triangle reports 2 on the shared edge
    tensors = {"T1_2_3": [((0, 1, 3),)], "T1_2_4": [((2, 4, 0),)]}
    pres = simplicial_presentations_from_tensors(cx, (1,), tensors)
    with pytest.raises(ValueError, match="inconsistent order data"):
        dolbeault_ladder(pres, cx, 1)


def test_require_simplicial():
    assert require_simplicial(cycle_complex(3)) == 1
    assert require_simplicial(tetrahedron_complex()) == 2
    assert require_simplicial(bowtie_complex()) == 2
    with pytest.raises(ValueError, match="beyond level 0"):
        require_simplicial(point_complex())
    dup = SemistableCombinatorics(
        ["A", "B"],
        [Stratum("Y1", (1,), {}), Stratum("Y2", (2,), {}),
         Stratum("E", (1, 2), {1: "Y2", 2: "Y1"}),
         Stratum("F", (1, 2), {1: "Y2", 2: "Y1"})])
    with pytest.raises(ValueError, match="uniquely"):
        require_simplicial(dup)
    orphan = SemistableCombinatorics(
        ["A", "B", "C"],
        [Stratum("Y1", (1,), {}), Stratum("Y2", (2,), {}),
         Stratum("Y3", (3,), {}),
         Stratum("E", (1, 2), {1: "Y2", 2: "Y1"})])
    with pytest.raises(ValueError, match="not a face"):
        require_simplicial(orphan)


def test_ladder_input_validation():
    cx = cycle_complex(3)
    pres = cycle_orientation_presentations(3)
    with pytest.raises(ValueError, match="top level"):
        dolbeault_ladder(pres, cx, 2)
    deg2 = Presentation(1, (1,), {(1, 2): (((1,), (0,)),)})
    with pytest.raises(ValueError, match="degree disagrees"):
        dolbeault_ladder([deg2] + pres[1:], cx, 1)
    with pytest.raises(ValueError, match="no presentation covers"):
        dolbeault_ladder(pres[1:], cx, 1)
