import random
from fractions import Fraction

import pytest

from omegaint.branches import local_branches
from omegaint.errors import PointOnDiscriminant


def test_two_rational_branches(quad):
    rep = local_branches(quad, (0, -1), order=12, chart="UX")
    assert rep.hensel_ok and rep.transversal
    assert len(rep.branches) == 2
    assert all(b.annihilates for b in rep.branches)
    texts = sorted(rep.branch_text(b, ("u", "v")) for b in rep.branches)
    assert "v = -1 - u + O(u^13)" in texts


def test_irrational_point(quad):
    rep = local_branches(quad, (1, 1), order=8, chart="UX")       # u^2 - 4v = -3
    assert rep.branches == () and rep.total_multiplicity() == 2


def test_on_discriminant(quad):
    with pytest.raises(PointOnDiscriminant):
        local_branches(quad, (2, 1), chart="UX")


@pytest.mark.parametrize("seed", range(30))
def test_random_points_off_delta(quad, seed):
    rng = random.Random(seed)
    while True:
        u = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        v = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        if u * u != 4 * v:
            break
    rep = local_branches(quad, (u, v), order=10, chart="UX")
    assert rep.hensel_ok and rep.transversal
    assert rep.total_multiplicity() == 2
    for b in rep.branches:
        # rational branches through an affine point are family lines
        assert b.annihilates
    # rational branches exist exactly when u^2 - 4v is a square
    disc = u * u - 4 * v
    is_sq = disc > 0 and all(int(x ** 0.5 + 0.5) ** 2 == x for x in (disc.numerator, disc.denominator))
    assert (len(rep.branches) == 2) == is_sq
