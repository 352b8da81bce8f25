"""Transition matrix elements, the size bound, lifetime extension."""

import math

import numpy as np
import pytest

from lemsim import (
    ClusterParams,
    CouplingSpec,
    ValidationError,
    build_hamiltonian,
    check_bound,
    diagonalize,
    dress,
    lifetime_extension,
    matrix_element,
    typical_level_spacing,
    uniform_couplings,
)
from lemsim.sweep import uniform_ferromagnet


def make_params(n, j=-1.0, b=0.0, c=0.0):
    return ClusterParams(
        n=n,
        couplings=uniform_couplings(n, j),
        bias=np.full(n, float(b)),
        tunneling=np.full(n, float(c)),
    )


def coupling(n, f=0.0, g=0.0, **kw):
    return CouplingSpec(z_noise=np.full(n, float(f)), x_noise=np.full(n, float(g)), **kw)


# ------------------------------------------------------------ selection rules


def test_z_channel_vanishes_between_number_states():
    # no tunneling: dressed states are orthogonal number states and the
    # diagonal channel cannot connect them
    p = make_params(3, b=0.1, c=0.0)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b000)
    l = dress(eig, 0b111)
    report = matrix_element(g, l, coupling(3, f=0.7, g=0.0))
    assert abs(report.matrix_element) <= 1e-14
    assert all(abs(v) <= 1e-14 for v in report.z_channel)


def test_x_channel_vanishes_beyond_single_flip():
    p = make_params(3, b=0.1, c=0.0)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b000)
    l = dress(eig, 0b011)  # distance 2
    report = matrix_element(g, l, coupling(3, f=0.0, g=0.9))
    assert abs(report.matrix_element) <= 1e-14


def test_x_channel_single_flip_is_bare_amplitude():
    p = make_params(3, b=0.1, c=0.0)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b000)
    l = dress(eig, 0b010)
    report = matrix_element(g, l, coupling(3, f=0.0, g=0.25))
    assert abs(report.matrix_element) == pytest.approx(0.25, abs=1e-14)


# ------------------------------------------------------------- matrix element


def test_channel_breakdown_sums_to_total():
    fam = uniform_ferromagnet(4, 0.05)
    eig = diagonalize(build_hamiltonian(fam.params))
    g = dress(eig, fam.ground_anchor)
    l = dress(eig, fam.lem_anchor)
    report = matrix_element(g, l, fam.coupling)
    total = math.fsum(list(report.z_channel) + list(report.x_channel))
    assert report.matrix_element == pytest.approx(total, abs=1e-12)
    assert report.rate_ratio == report.matrix_element**2
    # with weak tunneling switched on, the diagonal channel is small but nonzero
    assert 0 < sum(abs(v) for v in report.z_channel) < sum(abs(v) for v in report.x_channel)


def test_bilinearity_in_each_channel():
    fam = uniform_ferromagnet(3, 0.05)
    eig = diagonalize(build_hamiltonian(fam.params))
    g = dress(eig, fam.ground_anchor)
    l = dress(eig, fam.lem_anchor)
    n = 3
    base_f = matrix_element(g, l, coupling(n, f=0.2, g=0.0)).matrix_element
    base_g = matrix_element(g, l, coupling(n, f=0.0, g=0.2)).matrix_element
    for s in (0.5, 3.0):
        assert matrix_element(g, l, coupling(n, f=0.2 * s, g=0.0)).matrix_element == pytest.approx(
            s * base_f, rel=1e-12, abs=1e-18
        )
        assert matrix_element(g, l, coupling(n, f=0.0, g=0.2 * s)).matrix_element == pytest.approx(
            s * base_g, rel=1e-12, abs=1e-18
        )
    both = matrix_element(g, l, coupling(n, f=0.2, g=0.2)).matrix_element
    assert both == pytest.approx(base_f + base_g, rel=1e-12)


def test_weak_coupling_element_scale():
    # four spins, absolute couplings well under the level spacing: the element
    # carries three powers of the small ratio
    p = make_params(4, b=0.1, c=0.01)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b0000)
    l = dress(eig, 0b1111)
    report = matrix_element(g, l, coupling(4, f=0.01, g=0.01))
    a_typ = typical_level_spacing(p, 0b1111)
    scale = (0.01 / a_typ) ** 3
    assert 1e-14 < abs(report.matrix_element) <= 100.0 * scale


def test_identical_eigenindices_rejected():
    p = make_params(3, b=0.1, c=0.01)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b000)
    with pytest.raises(ValidationError):
        matrix_element(g, g, coupling(3, f=0.1, g=0.1))


def test_element_size_scaling_with_cluster_size():
    # log10|element| falls roughly linearly in n; compare the overall fit
    # against the first step as the calibration
    import numpy as np

    sizes = (2, 3, 4, 5, 6)
    logs = []
    for n in sizes:
        fam = uniform_ferromagnet(n, 0.01)
        eig = diagonalize(build_hamiltonian(fam.params))
        g = dress(eig, fam.ground_anchor)
        l = dress(eig, fam.lem_anchor)
        rep = matrix_element(g, l, fam.coupling)
        logs.append(math.log10(abs(rep.matrix_element)))
    slope = np.polyfit(sizes, logs, 1)[0]
    first_step = logs[1] - logs[0]
    assert slope < 0
    assert slope == pytest.approx(first_step, rel=0.3)
    # every extra spin suppresses the squared element by well over 10x
    for a, b in zip(logs, logs[1:]):
        assert 2 * (b - a) < -1.0


# -------------------------------------------------------------------- bounds


def test_bound_values_for_simple_ratios():
    # uncoupled biased spins give an exact spacing, so the ratio is exact
    for n, c_val, expected in ((5, 0.02, 1e-10), (4, 0.002, 1e-12)):
        p = ClusterParams(
            n=n,
            couplings=np.zeros((n, n)),
            bias=np.full(n, 1.0),
            tunneling=np.full(n, c_val),
        )
        eig = diagonalize(build_hamiltonian(p))
        g = dress(eig, 0)
        l = dress(eig, (1 << n) - 1)
        report = matrix_element(g, l, coupling(n, f=0.0, g=c_val))
        report = check_bound(report, p, coupling(n, f=0.0, g=c_val), anchor=(1 << n) - 1)
        assert report.bound == pytest.approx(expected, rel=1e-12)
        assert report.bound_satisfied


def test_bound_trivial_when_couplings_vanish():
    p = make_params(3, b=0.1, c=0.0)
    eig = diagonalize(build_hamiltonian(p))
    g = dress(eig, 0b000)
    l = dress(eig, 0b111)
    spec = coupling(3, f=0.0, g=0.0)
    report = matrix_element(g, l, spec)
    report = check_bound(report, p, spec, anchor=0b111)
    assert report.rate_ratio == 0.0
    assert report.bound_satisfied
    assert report.bound_margin == math.inf


def test_bound_margin_on_family_points():
    for n in (2, 3, 4):
        fam = uniform_ferromagnet(n, 0.01)
        eig = diagonalize(build_hamiltonian(fam.params))
        g = dress(eig, fam.ground_anchor)
        l = dress(eig, fam.lem_anchor)
        report = matrix_element(g, l, fam.coupling)
        report = check_bound(
            report, fam.params, fam.coupling, anchor=fam.lem_anchor, a_typ=fam.a_typ
        )
        assert report.bound == pytest.approx(0.01**n, rel=1e-12)
        assert report.bound_margin >= -2.0
        assert report.bound_satisfied


# ---------------------------------------------------------------- extension


def test_lifetime_extension_values():
    assert lifetime_extension(5, 0.01) == 10.0
    assert lifetime_extension(4, 0.001) == 12.0
    assert lifetime_extension(1, 0.1) == pytest.approx(1.0)


def test_lifetime_extension_domain():
    with pytest.raises(ValidationError):
        lifetime_extension(3, 1.0)
    with pytest.raises(ValidationError):
        lifetime_extension(3, -0.1)
    with pytest.raises(ValidationError):
        lifetime_extension(3, 0.0)


# ------------------------------------------------------------- coupling spec


def test_coupling_spec_validation():
    with pytest.raises(ValidationError):
        CouplingSpec(z_noise=np.array([0.1, -0.2]), x_noise=np.array([0.1, 0.1]))
    with pytest.raises(ValidationError):
        CouplingSpec(z_noise=np.array([0.1]), x_noise=np.array([0.1, 0.1]))
    with pytest.raises(ValidationError):
        CouplingSpec(z_noise=np.zeros(2), x_noise=np.zeros(2), kind="pink")
    with pytest.raises(ValidationError):
        CouplingSpec(z_noise=np.zeros(2), x_noise=np.zeros(2), correlation_time=0.0)
