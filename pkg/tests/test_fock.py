import numpy as np
import pytest
from scipy.linalg import expm

from cvghz.fock import (
    FockArray,
    FockBranchMixture,
    FockTruncationError,
    annihilation,
    apply_photon_ops_fock,
    attach_vacuum_fock,
    beam_splitter_fock,
    check_converged,
    condition_click_fock,
    covariance_from_fock,
    cutoff_for,
    displacement_matrix,
    ghz_fock,
    squeezed_vacuum_fock,
    tensor,
    two_mode_squeezer_fock,
    vacuum_fock,
    wigner_point_from_fock,
)
from cvghz.ghz import GHZParams, ghz_covariance, parse_scheme
from cvghz.phasespace import ZeroProbabilityError


def number_state(n, dim):
    a = np.zeros(dim, dtype=complex)
    a[n] = 1.0
    return FockArray(a)


def test_squeezed_vacuum_zero_is_vacuum():
    np.testing.assert_allclose(squeezed_vacuum_fock(0.0).amplitudes, number_state(0, 14).amplitudes)


@pytest.mark.parametrize("r", [0.1, 0.3, -0.3])
def test_squeezed_vacuum_moments(r):
    st = squeezed_vacuum_fock(r, 20)
    assert st.norm() == pytest.approx(1.0, abs=1e-8)
    np.testing.assert_allclose(covariance_from_fock(st), np.diag([np.exp(-2 * r), np.exp(2 * r)]) / 2, atol=1e-6)


def test_squeezed_vacuum_validation():
    with pytest.raises(ValueError):
        squeezed_vacuum_fock(0.1, 6)
    with pytest.raises(FockTruncationError):
        squeezed_vacuum_fock(1.0, 10)


def test_cutoff_for_grows_with_r():
    assert cutoff_for(0.01) == 14
    assert cutoff_for(0.3) > 14
    assert cutoff_for(0.5) > cutoff_for(0.3)


def test_single_photon_beam_splitter():
    t = 0.99
    st = beam_splitter_fock(tensor(number_state(1, 8), number_state(0, 8)), t, 0, 1)
    amps = st.amplitudes
    assert amps[1, 0] == pytest.approx(t)
    assert abs(amps[0, 1]) == pytest.approx(np.sqrt(1 - t**2))
    assert st.norm() == pytest.approx(1.0, abs=1e-12)


def test_identity_angle_changes_nothing():
    st = tensor(number_state(2, 8), number_state(1, 8))
    np.testing.assert_allclose(beam_splitter_fock(st, 1.0, 0, 1).amplitudes, st.amplitudes, atol=1e-14)


def test_two_mode_squeezer_first_order():
    s = 0.01
    st = two_mode_squeezer_fock(vacuum_fock(2, 8), s, 0, 1)
    assert st.amplitudes[1, 1] == pytest.approx(s, rel=1e-4)
    assert st.norm() == pytest.approx(1.0, abs=1e-12)


def test_beam_splitter_covariance_matches_symplectic():
    st = tensor(squeezed_vacuum_fock(0.3, 20), squeezed_vacuum_fock(-0.2, 20))
    out = beam_splitter_fock(st, 0.6, 0, 1)
    v_in = np.diag([np.exp(-0.6), np.exp(0.6), np.exp(0.4), np.exp(-0.4)]) / 2
    s = np.block([[0.6 * np.eye(2), -0.8 * np.eye(2)], [0.8 * np.eye(2), 0.6 * np.eye(2)]])
    np.testing.assert_allclose(covariance_from_fock(out), s @ v_in @ s.T, atol=1e-6)


def test_vacuum_wigner():
    assert wigner_point_from_fock(vacuum_fock(1, 10), [0.0, 0.0]) == pytest.approx(1 / np.pi)
    assert wigner_point_from_fock(vacuum_fock(2, 10), [0.0] * 4) == pytest.approx(np.pi**-2)


@pytest.mark.parametrize("x,p", [(0.0, 0.0), (0.5, -0.3), (1.0, 1.0)])
def test_single_photon_wigner(x, p):
    rho = x**2 + p**2
    want = (2 * rho - 1) * np.exp(-rho) / np.pi
    assert wigner_point_from_fock(number_state(1, 12), [x, p]) == pytest.approx(want, abs=1e-12)


def test_wigner_window_and_shape_errors():
    with pytest.raises(ValueError):
        wigner_point_from_fock(vacuum_fock(1, 8), [3.0, 0.0])
    with pytest.raises(ValueError):
        wigner_point_from_fock(vacuum_fock(1, 8), [0.0, 0.0, 0.0])


def test_displacement_matrix_against_expm():
    big = 60
    a = annihilation(big)
    beta = 0.4 - 0.7j
    full = expm(beta * a.T - np.conj(beta) * a)
    np.testing.assert_allclose(displacement_matrix(beta, 12), full[:12, :12], atol=1e-12)


def test_click_on_vacuum_ancilla_is_impossible():
    st = attach_vacuum_fock(vacuum_fock(1, 8), 6)
    with pytest.raises(ZeroProbabilityError):
        condition_click_fock(st, 1)


def test_click_branches():
    st = tensor(squeezed_vacuum_fock(0.3, 20))
    st = beam_splitter_fock(attach_vacuum_fock(st, 8), np.sqrt(0.9), 0, 1)
    anc_vac = np.sum(np.abs(st.amplitudes[:, 0]) ** 2)
    mix = condition_click_fock(st, 1)
    assert isinstance(mix, FockBranchMixture)
    assert mix.norm() == pytest.approx(st.norm() - anc_vac, rel=1e-12)
    assert mix.norm() == pytest.approx(1 - anc_vac, rel=1e-6)
    assert np.all(mix.branch_weights() > 0)
    assert mix.branch_weights().sum() == pytest.approx(mix.norm())


@pytest.mark.parametrize("r", [0.1, 0.3])
def test_ghz_covariance(r):
    np.testing.assert_allclose(covariance_from_fock(ghz_fock(r)), ghz_covariance(GHZParams.biased(r)), atol=1e-6)


def test_ghz_zero_squeezing():
    amps = ghz_fock(0.0).amplitudes
    assert abs(amps[0, 0, 0]) == pytest.approx(1.0)


def test_check_converged_detects_truncation():
    a = np.zeros(8, dtype=complex)
    a[7] = 1.0
    with pytest.raises(FockTruncationError):
        check_converged(FockArray(a))


def test_cutoff_stability():
    ops = parse_scheme("sub:A,B")
    lo = apply_photon_ops_fock(ghz_fock(0.3, 20), ops)
    hi = apply_photon_ops_fock(ghz_fock(0.3, 26), ops, ancilla_cutoff=12)
    assert hi.norm() == pytest.approx(lo.norm(), rel=1e-6)
    np.testing.assert_allclose(covariance_from_fock(hi), covariance_from_fock(lo), atol=1e-6)
    point = [0.1, 0.7, 0.0, -0.3, 0.2, 0.0]
    assert wigner_point_from_fock(hi, point) == pytest.approx(wigner_point_from_fock(lo, point), abs=1e-6)


def test_operation_order_independence():
    st = ghz_fock(0.2)
    a = apply_photon_ops_fock(st, parse_scheme("sub:A;add:B"))
    b = apply_photon_ops_fock(st, parse_scheme("add:B;sub:A"))
    assert a.norm() == pytest.approx(b.norm(), rel=1e-10)
    np.testing.assert_allclose(covariance_from_fock(a), covariance_from_fock(b), atol=1e-10)


def test_rejects_non_op():
    with pytest.raises(TypeError):
        apply_photon_ops_fock(ghz_fock(0.1), ["sub:A"])
