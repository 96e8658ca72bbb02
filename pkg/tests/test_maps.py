import cmath
import math

import mpmath
import numpy as np
import pytest

from chordalqc.errors import DomainError, EvaluationError
from chordalqc.maps import (
    cayley,
    compose,
    counterexample_f,
    eval_jet,
    half_strip_g,
    identity,
    moebius,
    parse_complex,
    parse_map_spec,
    perturbed_identity,
    phi_map,
    square_map,
)

from oracles import fd_derivatives, rel_err


def catalog_on_h():
    return [
        identity(),
        phi_map(),
        half_strip_g(),
        counterexample_f(),
        square_map(),
        perturbed_identity(0.3),
        moebius(1, 2, 1, 3),
    ]


# -- anchors -------------------------------------------------------------


def test_half_strip_boundary_anchors():
    g = half_strip_g()
    assert abs(g.value(1j) + 1j * math.pi / 2) <= 1e-12
    assert abs(g.value(-1j) - 1j * math.pi / 2) <= 1e-12
    assert abs(g.value(1.0) - math.log(1 + math.sqrt(2))) <= 1e-12


def test_moebius_anchors():
    phi = phi_map()
    assert phi.value(1.0) == 1.0
    assert abs(phi.value(999.0) - 0.002) <= 1e-5
    assert cayley().value(0.0) == 1.0


def test_cayley_derivative_at_zero():
    jet = cayley().jet(0.0)
    assert abs(jet.coeffs[1] - 2.0) <= 1e-14


def test_moebius_degenerate_rejected():
    with pytest.raises(ValueError, match="degenerate"):
        moebius(1, 2, 2, 4)


def test_moebius_pole_evaluation_rejected():
    m = moebius(0, 1, 1, -1)  # pole at z = 1
    with pytest.raises(EvaluationError):
        m.jet(1.0)


# -- domains -------------------------------------------------------------


def test_domain_checks():
    with pytest.raises(DomainError):
        identity().jet(-1.0)
    with pytest.raises(DomainError):
        identity().jet(0.0)  # boundary is not interior
    with pytest.raises(DomainError):
        cayley().jet(2.0)
    # boundary values remain computable
    assert identity().value(0.5j) == 0.5j


def test_half_strip_rejects_left_half_plane():
    g = half_strip_g()
    with pytest.raises(DomainError):
        g.jet(-0.5 + 1j)
    with pytest.raises(EvaluationError):
        g.value(0.0)  # pole of 1/z


# -- composition ---------------------------------------------------------


def test_compose_identity_is_noop():
    for m in (phi_map(), perturbed_identity(0.2), half_strip_g()):
        c = compose(identity(), m)
        for z in (0.5, 1 + 1j, 3 - 2j):
            assert abs(c.value(z) - m.value(z)) <= 1e-14


def test_counterexample_is_g_after_phi():
    f = counterexample_f()
    g, phi = half_strip_g(), phi_map()
    assert abs(f.value(1.0) - g.value(1.0)) <= 1e-14
    # boundary point: phi(i) = 1 - i, then g there
    assert abs(f.value(1j) - g.value(phi.value(1j))) <= 1e-12
    both = compose(half_strip_g(), phi_map())
    for z in (1j, 0.5 + 2j, 4.0):
        assert abs(both.value(z) - f.value(z)) <= 1e-12


def test_counterexample_escapes_at_infinity():
    f = counterexample_f()
    assert abs(f.value(1e6)) > 5


def test_phi_decays_at_infinity():
    phi = phi_map()
    vals = [abs(phi.value(r)) for r in (1e3, 1e4, 1e6)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-5


def test_half_strip_image_and_continuity():
    g = half_strip_g()
    # vertical and horizontal probe paths stay in the half strip, no branch jumps
    for path in (0.5 + 1j * np.linspace(-10, 10, 801), np.linspace(0.01, 10, 801) + 0.3j):
        vals = np.array([g.value(complex(z)) for z in path])
        assert np.all(vals.real > 0)
        assert np.all(np.abs(vals.imag) < math.pi / 2 + 1e-12)
        assert np.max(np.abs(np.diff(vals))) < 0.5


# -- perturbed identity ---------------------------------------------------


def test_perturbed_identity_cases():
    h0 = perturbed_identity(0.0)
    for z in (0.5, 1 + 1j):
        assert h0.value(z) == z
    h = perturbed_identity(0.3)
    assert abs(h.value(0.0) - 0.3) <= 1e-15
    assert abs(h.jet(1e-8).coeffs[1] - 0.7) <= 1e-7
    # closed-form decay bound at Re z = 5
    jet = h.jet(5.0)
    ph = jet.coeffs[2] / jet.coeffs[1]
    bound = 0.3 * math.exp(-5) / (1 - 0.3 * math.exp(-5))
    assert abs(ph) <= bound + 1e-12
    assert abs(abs(ph) - 0.00202) <= 5e-5


def test_perturbed_identity_rejects_large_c():
    with pytest.raises(ValueError):
        perturbed_identity(1.0)
    with pytest.raises(ValueError):
        perturbed_identity(0.8 + 0.8j)


# -- jets vs pointwise oracle ---------------------------------------------


@pytest.mark.parametrize("m", catalog_on_h(), ids=lambda m: m.name)
def test_catalog_jets_match_fd_oracle(m):
    rng = np.random.default_rng(7)
    pts = [complex(rng.uniform(0.3, 3.0), rng.uniform(-2.0, 2.0)) for _ in range(3)]
    pts.append(0.01 + 0.5j)  # near the boundary, where conditioning is hardest
    for z0 in pts:
        jet = eval_jet(m, z0)
        oracle = fd_derivatives(lambda w: m.value(w), z0, h=1e-3)
        for got, want in zip(jet.coeffs, oracle):
            assert rel_err(complex(got), want) <= 1e-6


def test_local_univalence_at_samples():
    for m in catalog_on_h():
        for z in (0.5, 1 + 1j, 2 - 0.7j):
            assert abs(complex(eval_jet(m, z).coeffs[1])) > 0


# -- spec parsing ----------------------------------------------------------


def test_parse_complex():
    assert parse_complex("0.3") == 0.3
    assert parse_complex("-2.5") == -2.5
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex("-0.5-0.25i") == -0.5 - 0.25j
    assert parse_complex("1e-4") == 1e-4
    assert parse_complex("1.5e-3-2i") == 1.5e-3 - 2j
    assert parse_complex("2i") == 2j
    with pytest.raises(ValueError):
        parse_complex("")
    with pytest.raises(ValueError):
        parse_complex("abc")


def test_parse_map_spec_round_trips():
    assert parse_map_spec("identity").name == "identity"
    h = parse_map_spec("perturbed-identity:0.3")
    assert abs(h.value(0.0) - 0.3) <= 1e-15
    m = parse_map_spec("moebius:0,2,1,1")
    assert m.value(1.0) == 1.0
    c = parse_map_spec("compose:half-strip-g,phi")
    f = counterexample_f()
    assert abs(c.value(2 + 1j) - f.value(2 + 1j)) <= 1e-13
    # commas inside parameter lists resolve via the leftmost valid split
    c2 = parse_map_spec("compose:cayley,moebius:1,-1,1,1")
    assert abs(c2.value(2.0) - 2.0) <= 1e-13  # cayley after (z-1)/(z+1) is the identity
    # postfix composition spells the same map
    c3 = parse_map_spec("phi,compose:half-strip-g")
    assert abs(c3.value(2 + 1j) - f.value(2 + 1j)) <= 1e-13
    # parametric names round-trip through the parser
    h2 = perturbed_identity(0.2 + 0.1j)
    assert parse_map_spec(h2.name).name == h2.name
    with pytest.raises(ValueError):
        parse_map_spec("nope")
    with pytest.raises(ValueError):
        parse_map_spec("moebius:1,2,3")
    with pytest.raises(ValueError):
        parse_map_spec("compose:identity")


def test_moebius_schwarzian_annihilation():
    # catalog-level statement; the functional itself lives in schwarz
    from chordalqc.schwarz import schwarzian

    rng = np.random.default_rng(1)
    count = 0
    while count < 100:
        a, b, c, d = (complex(*rng.uniform(-2, 2, 2)) for _ in range(4))
        if abs(a * d - b * c) < 0.1:
            continue
        z = complex(rng.uniform(0.1, 4.0), rng.uniform(-3.0, 3.0))
        if abs(c * z + d) < 0.2:
            continue
        m = moebius(a, b, c, d)
        assert abs(schwarzian(m, z)) <= 1e-10
        count += 1


def test_value_accepts_mpmath_points():
    g = half_strip_g()
    v = g.value(mpmath.mpc(1, 0))
    assert abs(complex(v) - cmath.log(1 + math.sqrt(2))) <= 1e-15
