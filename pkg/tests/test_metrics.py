import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eve_sim.genome import Agent
from eve_sim.metrics import (divergence, fit_power_law, lognormal_shape_check,
                             shannon_diversity, species_area)
from oracles import normalized_edit_distance

counts = st.lists(st.integers(1, 1000), min_size=1, max_size=30)


@pytest.mark.parametrize("n", [1, 7, 1000])
def test_shannon_single_species(n):
    assert shannon_diversity([n]) == 0.0


def test_shannon_uniform_four():
    assert shannon_diversity([5, 5, 5, 5]) == pytest.approx(math.log(4), abs=1e-12)


def test_shannon_frozen_value():
    # frozen from a 50-digit evaluation of -sum p ln p
    assert shannon_diversity([2, 1, 1]) == pytest.approx(1.03972077083991796, abs=1e-14)


@pytest.mark.parametrize("bad", [[], [0], [3, -1]])
def test_shannon_errors(bad):
    with pytest.raises(ValueError):
        shannon_diversity(bad)


@given(counts, st.randoms(use_true_random=False))
def test_shannon_bounded_and_permutation_invariant(cs, rnd):
    h = shannon_diversity(cs)
    assert -1e-12 <= h <= math.log(len(cs)) + 1e-12
    shuffled = list(cs)
    rnd.shuffle(shuffled)
    assert shannon_diversity(shuffled) == pytest.approx(h, abs=1e-12)
    if len(set(cs)) > 1:
        assert h < math.log(len(cs)) - 1e-12


def test_lognormal_geometric_series():
    chk = lognormal_shape_check([2 ** i for i in range(10)])
    assert chk.skewness == pytest.approx(0.0, abs=1e-12) and chk.passed


def test_lognormal_symmetric_in_log_space():
    # log2 levels 0..4 with multiplicities 1, 2, 4, 2, 1
    abundances = [2 ** lvl for lvl, m in enumerate([1, 2, 4, 2, 1]) for _ in range(m)]
    chk = lognormal_shape_check(abundances)
    assert chk.skewness == pytest.approx(0.0, abs=1e-12) and chk.passed


def test_lognormal_inconclusive_below_ten():
    chk = lognormal_shape_check([1] * 9)
    assert not chk.conclusive and chk.passed is None


def test_lognormal_heavily_skewed_fails():
    chk = lognormal_shape_check([1] * 20 + [10 ** 6])
    assert chk.passed is False


@pytest.mark.parametrize("points, z", [
    ([(1, 2), (2, 4), (4, 8)], 1.0),
    ([(1, 5), (2, 5), (8, 5)], 0.0),
    ([(1, 1), (4, 2), (16, 4)], 0.5),
])
def test_power_law_exact_points(points, z):
    assert fit_power_law(points)[0] == pytest.approx(z, abs=1e-12)


@given(st.lists(st.floats(0.5, 100), min_size=3, max_size=3), st.floats(0.01, 1000))
def test_power_law_scale_invariant(ss, k):
    pts = list(zip([1, 2, 4], ss))
    scaled = [(a, s * k) for a, s in pts]
    assert fit_power_law(scaled)[0] == pytest.approx(fit_power_law(pts)[0], abs=1e-9)


def test_species_area_single_species_everywhere():
    pops = [[Agent(h * 10 + i, (1, 2, 3)) for i in range(3)] for h in range(4)]
    sa = species_area(pops, [1, 2, 4], random.Random(0), replicates=5)
    assert sa.curve == [(1, 1.0), (2, 1.0), (4, 1.0)]
    assert sa.z == pytest.approx(0.0, abs=1e-12)


def test_species_area_distinct_species_per_habitat():
    # every habitat holds its own species: S equals area exactly
    pops = [[Agent(h, (h, h, h))] for h in range(8)]
    sa = species_area(pops, [1, 2, 4, 8], random.Random(1), replicates=3)
    assert sa.z == pytest.approx(1.0, abs=1e-12)


def test_species_area_rejects_oversized_sample():
    with pytest.raises(ValueError):
        species_area([[Agent(0, (1,))]], [2], random.Random(0))


def test_divergence_examples():
    assert divergence([Agent(0, (1, 2))], [Agent(1, (1, 2))]) == 0.0
    assert divergence([Agent(0, (0, 1))], [Agent(1, (2, 3))]) == 1.0


def test_divergence_self_is_internal_mean():
    rng = random.Random(2)
    pop = [Agent(i, tuple(rng.randrange(4) for _ in range(rng.randint(1, 6)))) for i in range(9)]
    expected = sum(normalized_edit_distance(a.genome, b.genome) for a in pop for b in pop) / 81
    assert divergence(pop, pop) == pytest.approx(expected, abs=1e-12)


def test_divergence_empty():
    with pytest.raises(ValueError):
        divergence([], [Agent(0, (1,))])
