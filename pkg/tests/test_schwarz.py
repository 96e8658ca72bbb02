import math

import numpy as np
import pytest

from chordalqc.errors import DegenerateSampleError, DomainError
from chordalqc.maps import (
    compose,
    counterexample_f,
    half_strip_g,
    identity,
    moebius,
    perturbed_identity,
    phi_map,
    square_map,
)
from chordalqc.schwarz import (
    NormProfile,
    StripGrid,
    derivative_ratios,
    horodisk_ratio,
    norm_profile,
    pre_schwarzian,
    schwarzian,
    schwarzian_deriv,
    strip_weights,
)

from oracles import fd_derivatives, rel_err

SMALL_GRID = StripGrid(points_per_decade=16, y_max=20.0, y_count=65)


def test_pre_schwarzian_identity_is_zero():
    for z in (0.5, 1 + 1j, 3 - 2j):
        assert pre_schwarzian(identity(), z) == 0


def test_pre_schwarzian_square():
    # (z^2)''/(z^2)' = 1/z
    assert abs(pre_schwarzian(square_map(), 2.0) - 0.5) <= 1e-14
    z = 1.5 + 0.5j
    assert abs(pre_schwarzian(square_map(), z) - 1 / z) <= 1e-14


def test_pre_schwarzian_perturbed_closed_form():
    h = perturbed_identity(0.3)
    for z in (1e-9, 0.5 + 0.2j, 2.0):
        w = 0.3 * np.exp(-complex(z))
        assert abs(pre_schwarzian(h, z) - w / (1 - w)) <= 1e-13
    assert abs(pre_schwarzian(h, 1e-9) - 0.3 / 0.7) <= 1e-6


def test_schwarzian_square_closed_form():
    assert abs(schwarzian(square_map(), 1.0) + 1.5) <= 1e-14
    z = 2.0
    assert abs(schwarzian_deriv(square_map(), z) - 3 / z ** 3) <= 1e-14


def test_schwarzian_moebius_zero():
    m = moebius(2, 1, 1, 3)
    for z in (0.5, 1 + 2j):
        assert abs(schwarzian(m, z)) <= 1e-12
        assert abs(schwarzian_deriv(m, z)) <= 1e-12


def test_schwarzian_chain_rule_moebius_inner():
    # S(g o phi) = (Sg o phi) * phi'^2 when phi is Moebius
    g = half_strip_g()
    for phi in (phi_map(), moebius(1, 1, 0, 1), moebius(2, 0, 0, 1)):
        z = 1.0
        left = schwarzian(compose(g, phi), z)
        pj = phi.jet(z)
        right = schwarzian(g, complex(pj.coeffs[0])) * pj.coeffs[1] ** 2
        assert abs(left - right) <= 1e-12 * max(1.0, abs(right))


def test_schwarzian_deriv_against_fd_oracle():
    import mpmath

    h = perturbed_identity(0.4)

    def scalar_schwarzian(w):
        e = 0.4 * mpmath.exp(-w)
        p = e / (1 - e)
        # Sf = p' - p^2/2 with p' computed symbolically: p' = -e/(1-e)^2
        return -e / (1 - e) ** 2 - p * p / 2

    z0 = 0.8 + 0.3j
    want = fd_derivatives(scalar_schwarzian, z0)[1]
    got = schwarzian_deriv(h, z0)
    assert rel_err(complex(got), want) <= 1e-6


def test_degenerate_derivative_rejected():
    from chordalqc.jets import Jet

    with pytest.raises(DegenerateSampleError):
        derivative_ratios(Jet(0.0, (1.0, 0.0, 1.0, 0.0, 0.0)))


# -- norm profiles ---------------------------------------------------------


def test_norm_profile_identity_is_zero():
    prof = norm_profile(identity(), [1.0, 0.1, 0.01], grid=SMALL_GRID)
    assert prof.beta == (0.0, 0.0, 0.0)
    assert prof.sigma == (0.0, 0.0, 0.0)


def test_norm_profile_counterexample_decreases():
    prof = norm_profile(counterexample_f(), [1.0, 0.1, 0.01], grid=SMALL_GRID)
    assert prof.sigma[0] > prof.sigma[1] > prof.sigma[2] > 0
    assert prof.beta[0] > prof.beta[1] > prof.beta[2] > 0


def test_norm_profile_perturbed_bound():
    prof = norm_profile(perturbed_identity(0.3), [0.1], grid=SMALL_GRID)
    assert prof.beta[0] <= 2 * 0.1 * 0.3 / 0.7 + 1e-12


def test_norm_profile_monotone_in_t():
    prof = norm_profile(perturbed_identity(0.5), [1.0, 0.5, 0.2, 0.05], grid=SMALL_GRID)
    assert all(a >= b for a, b in zip(prof.beta, prof.beta[1:]))
    assert all(a >= b for a, b in zip(prof.sigma, prof.sigma[1:]))


def test_norm_profile_validates_t_values():
    with pytest.raises(ValueError):
        norm_profile(identity(), [0.1, 1.0], grid=SMALL_GRID)
    with pytest.raises(ValueError):
        norm_profile(identity(), [1.0, -0.1], grid=SMALL_GRID)
    with pytest.raises(ValueError):
        norm_profile(identity(), [1e-6], grid=SMALL_GRID)


def test_norm_profile_rows_and_argmax():
    prof = norm_profile(square_map(), [0.5], grid=SMALL_GRID)
    rows = list(prof.rows())
    assert len(rows) == 1
    t, beta, sigma, bre, bim, sre, sim = rows[0]
    assert t == 0.5
    # sigma = 6 on the real axis, attained at the largest level with y = 0
    assert abs(sigma - 6.0) <= 1e-12
    assert sim == 0.0
    assert abs(beta - 2.0) <= 1e-12


def test_profile_monotonicity_guard():
    with pytest.raises(ValueError):
        NormProfile("x", (1.0, 0.1), (0.0, 1.0), (0.0, 0.0), (0j, 0j), (0j, 0j), SMALL_GRID)


def test_sup_implication_constant():
    # sup (2x)^2|Sf| <= 64*lambda + lambda^2/2 with lambda = sup (2x)|Pf|
    for m in (identity(), square_map(), perturbed_identity(0.3), counterexample_f(),
              half_strip_g()):
        _, w_beta, w_sigma = strip_weights(m, SMALL_GRID, 1.0)
        lam = float(w_beta.max())
        assert float(w_sigma.max()) <= 64 * lam + lam ** 2 / 2 + 1e-12


def test_kraus_nehari_ceiling():
    univalent = [identity(), phi_map(), half_strip_g(), counterexample_f(),
                 square_map(), perturbed_identity(0.1), perturbed_identity(0.3),
                 perturbed_identity(0.5)]
    for m in univalent:
        _, _, w_sigma = strip_weights(m, SMALL_GRID, 1.0)
        assert float(w_sigma.max()) <= 6 + 1e-9


# -- horodisk --------------------------------------------------------------


def test_horodisk_center_and_half():
    ratio, _ = horodisk_ratio(1.0, 4.0)
    assert ratio == 1.0
    ratio, inside = horodisk_ratio(0.5, 40.0)
    assert abs(ratio - 1.0) <= 1e-15
    assert inside  # the real segment near 0 sits inside every horodisk


def test_horodisk_outside_bound():
    # outside D_a the ratio d/Re z is at most 1/a
    a = 40.0  # a = 4/eps with eps = 0.1
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 10000:
        z = complex(rng.uniform(0, 2), rng.uniform(-1, 1))
        if abs(z - 1) >= 1:
            continue
        ratio, inside = horodisk_ratio(z, a)
        if inside:
            continue
        assert ratio <= 1 / a + 1e-12
        checked += 1


def test_horodisk_rejects_outside_disk():
    with pytest.raises(DomainError):
        horodisk_ratio(2.5, 4.0)
    with pytest.raises(ValueError):
        horodisk_ratio(1.0, 0.5)


def test_grid_levels_are_log_spaced():
    grid = StripGrid()
    xs = grid.x_levels(1.0)
    # four decades at 64 per decade
    assert len(xs) == 4 * 64 + 1
    assert xs[0] == 1e-4 and abs(xs[-1] - 1.0) <= 1e-15
    ratios = xs[1:] / xs[:-1]
    assert np.allclose(ratios, ratios[0])
    assert 0.0 in grid.y_values()
