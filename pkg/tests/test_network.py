import itertools

import numpy as np
import pytest

from unitary_fanout.errors import DimensionMismatch, IndexOutOfRange, MalformedSettings
from unitary_fanout.network import (
    apply_layer,
    assemble_dense,
    build_layers,
    component_counts,
    dft_matrix,
    embed_splitter,
    input_concentrator_check,
    iter_states,
    layer_matrix,
    mzi_transfer,
    propagate,
    single_port_input,
    splitter_cell,
    unitarity_residual,
)
from unitary_fanout.synthesis import TargetVector, TreeSettings, program

from conftest import random_settings, random_unit


def test_splitter_cell_unitary_and_fanout():
    for alpha in np.linspace(0, np.pi / 2, 11):
        u = splitter_cell(alpha)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) < 1e-14
        a = 0.3 - 0.7j
        out = u @ np.array([a, 0])
        assert out[0] == a * np.cos(alpha)
        assert out[1] == 1j * np.sin(alpha) * a


def test_embed_identity_and_quarter():
    np.testing.assert_array_equal(embed_splitter(2, 1, 2, 0.0), np.eye(2))
    np.testing.assert_allclose(embed_splitter(2, 1, 2, np.pi / 4),
                               np.array([[1, 1j], [1j, 1]]) / np.sqrt(2), atol=1e-16)


def test_embed_gram_columns():
    u = embed_splitter(4, 1, 3, np.pi / 3)
    col_p, col_q = u[:, 0], u[:, 2]
    assert np.linalg.norm(col_p) == pytest.approx(1, abs=1e-15)
    assert np.linalg.norm(col_q) == pytest.approx(1, abs=1e-15)
    assert abs(np.vdot(col_p, col_q)) < 1e-15
    np.testing.assert_array_equal(u[:, 1], [0, 1, 0, 0])
    assert unitarity_residual(u) < 1e-14


@pytest.mark.parametrize("p, q", [(0, 1), (2, 2), (3, 1), (1, 5)])
def test_embed_bad_indices(p, q):
    with pytest.raises(IndexOutOfRange):
        embed_splitter(4, p, q, 0.1)


def test_build_layers_pairs():
    s2 = program([1, 1])
    assert [l.triples() for l in build_layers(s2).layers] == [[(1, 2, pytest.approx(np.pi / 4))]]

    def pairs(n):
        return [[(p, q) for p, q, _ in layer.triples()] for layer in build_layers(TreeSettings.identity(n)).layers]

    assert pairs(4) == [[(1, 3)], [(1, 2), (3, 4)]]
    assert pairs(8) == [[(1, 5)], [(1, 3), (5, 7)], [(1, 2), (3, 4), (5, 6), (7, 8)]]
    assert pairs(1) == []
    for n in (16, 64):
        model = build_layers(TreeSettings.identity(n))
        assert model.depth == int(np.log2(n))
        assert all(layer.is_disjoint() for layer in model.layers)


def test_build_layers_rejects_garbage():
    with pytest.raises(MalformedSettings):
        build_layers({"alphas": []})


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_layer_matrix_equals_product_of_embeddings(n, rng):
    model = build_layers(random_settings(rng, n))
    for layer in model.layers:
        prod = np.eye(n, dtype=complex)
        for p, q, a in layer.triples():
            prod = embed_splitter(n, p, q, a) @ prod
        np.testing.assert_allclose(layer_matrix(n, layer), prod, atol=1e-15)


def test_dense_identity():
    np.testing.assert_array_equal(assemble_dense(build_layers(TreeSettings.identity(8))), np.eye(8))


def test_dense_two_port_compensated():
    s = TreeSettings((np.array([np.pi / 4]),), np.array([0.0, -np.pi / 2]))
    v = assemble_dense(build_layers(s))
    np.testing.assert_allclose(v[:, 0], [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


@pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
def test_dense_unitary_random(n, rng):
    for _ in range(20):
        assert unitarity_residual(assemble_dense(build_layers(random_settings(rng, n)))) < 1e-12


def test_propagate_uniform_n4_by_hand():
    s = TreeSettings((np.array([np.pi / 4]), np.full(2, np.pi / 4)),
                     np.array([0, -np.pi / 2, -np.pi / 2, -np.pi]))
    out = propagate(build_layers(s), single_port_input(4))
    np.testing.assert_allclose(out, np.full(4, 0.5), atol=1e-15)


def test_propagate_zero_alpha_is_phase_rotation(rng):
    thetas = rng.uniform(0, 2 * np.pi, 8)
    s = TreeSettings(TreeSettings.identity(8).alphas, thetas)
    wave = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    np.testing.assert_allclose(propagate(build_layers(s), wave), np.exp(1j * s.thetas) * wave, atol=1e-15)


def test_propagate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        propagate(build_layers(TreeSettings.identity(4)), np.zeros(3))


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32, 64])
def test_exact_synthesis(n, rng):
    for _ in range(50):
        power = rng.uniform(0.1, 10)
        x = np.sqrt(power) * random_unit(rng, n)
        s = program(TargetVector(x, power))
        model = build_layers(s)
        out = propagate(model, single_port_input(n, power))
        assert np.max(np.abs(out - x)) < 1e-10
        assert np.max(np.abs(assemble_dense(model) @ single_port_input(n, power) - out)) < 1e-12
        assert abs(np.vdot(out, out).real - power) / power < 1e-12


@pytest.mark.parametrize("n", [3, 5, 7, 12])
def test_exact_synthesis_padded(n, rng):
    x = random_unit(rng, n)
    s = program(x)
    out = propagate(build_layers(s), single_port_input(s.n))
    np.testing.assert_allclose(out[:n], x, atol=1e-10)
    np.testing.assert_array_equal(out[n:], 0)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_zero_input_property(n, rng):
    for s in [random_settings(rng, n), program(random_unit(rng, n))]:
        model = build_layers(s)
        states = list(iter_states(model, single_port_input(n, 2.5)))
        for state, layer in zip(states, model.layers):
            assert np.all(state[layer.q] == 0.0)


def test_global_phase_covariance(rng):
    for n in (2, 8, 32):
        x = random_unit(rng, n) * np.sqrt(3.0)
        theta_s = rng.uniform(0, 2 * np.pi)
        s = program(TargetVector(x, 3.0), global_phase=theta_s)
        out = propagate(build_layers(s), single_port_input(n, 3.0, theta_s))
        assert np.max(np.abs(out - x)) < 1e-10


def test_layer_commutation(rng):
    model = build_layers(random_settings(rng, 8))
    wave = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    layer = model.layers[2]
    reference = wave.copy()
    apply_layer(reference, layer)
    for order in itertools.permutations(range(4)):
        state = wave.copy()
        apply_layer(state, layer, order=order)
        np.testing.assert_array_equal(state, reference)


def test_mzi_special_points():
    np.testing.assert_allclose(mzi_transfer(0.0), np.eye(2), atol=1e-16)
    np.testing.assert_allclose(mzi_transfer(np.pi), [[0, 1j], [1j, 0]], atol=1e-16)
    assert np.max(np.abs(mzi_transfer(0.6) - splitter_cell(0.3))) < 1e-15


def test_mzi_closed_form(rng):
    for delta in rng.uniform(-4 * np.pi, 4 * np.pi, 50):
        expected = np.array([[np.cos(delta / 2), 1j * np.sin(delta / 2)],
                             [1j * np.sin(delta / 2), np.cos(delta / 2)]])
        np.testing.assert_allclose(mzi_transfer(delta), expected, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16])
def test_input_concentrator(n):
    assert input_concentrator_check(n)


def test_dft_matches_numpy_fft():
    f = dft_matrix(8)
    np.testing.assert_allclose(f, np.fft.fft(np.eye(8)) / np.sqrt(8), atol=1e-14)


@pytest.mark.parametrize("n, expected", [(1, (0, 0, 1, 0)), (2, (1, 2, 3, 1)), (16, (15, 30, 31, 4))])
def test_component_counts(n, expected):
    assert tuple(component_counts(n)) == expected
