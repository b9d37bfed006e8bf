import numpy as np
import pytest

from conftest import SHAPE_SETS, leading_eigs
from npshell.geometry import LayeredGeometry, ShapeFunction
from npshell.spectrum import (
    assemble_block_operator,
    assemble_gram,
    disk_oracle_eigs,
    gram_pairing,
    spectrum,
)


def calderon_residual(block, gram):
    proj = gram.projector
    kp = proj @ block.matrix @ proj
    gp = proj.T @ gram.matrix @ proj
    return np.linalg.norm(gp @ kp - kp.T @ gp, 2) / np.linalg.norm(gp, 2)


def test_disk_eigenvalues_match_closed_form(disk_operators, disk_modes):
    # lambda = +-(1/2) (r1/r2)^n for concentric disks
    for m in disk_modes:
        expected = 0.5 * 0.5 ** m.n * np.sign(m.eigenvalue)
        assert abs(m.eigenvalue - expected) < 1e-10


def test_disk_eigenvector_ratio(disk_modes):
    # block ratio of the eigenvector is +-(delta1/delta2)(r1/r2)
    for m in disk_modes[:8]:
        half = len(m.vector) // 2
        top, bot = m.vector[:half], m.vector[half:]
        ratio = (top @ bot) / (top @ top)
        expected = 0.5 * np.sign(m.eigenvalue)
        assert abs(ratio - expected) < 1e-8


def test_modes_h2_orthonormal(disk_operators, disk_modes):
    _, gram = disk_operators
    for i in range(6):
        for j in range(6):
            val = gram_pairing(gram, disk_modes[i].vector, disk_modes[j].vector)
            assert abs(val - (1.0 if i == j else 0.0)) < 1e-8


def test_calderon_residual_disks(disk_operators):
    block, gram = disk_operators
    assert calderon_residual(block, gram) < 1e-6


def test_calderon_residual_perturbed():
    h1, h2 = SHAPE_SETS[1]
    g = LayeredGeometry(r1=1, r2=2, eps1=0.05, eps2=0.05, h1=h1, h2=h2,
                        n_nodes=256)
    block = assemble_block_operator(g, use_perturbed_curves=True)
    gram = assemble_gram(g, use_perturbed_curves=True)
    assert calderon_residual(block, gram) < 1e-4


def test_gram_symmetry_and_psd(disk_operators):
    _, gram = disk_operators
    g = gram.matrix
    assert np.linalg.norm(g - g.T) <= 1e-10 * np.linalg.norm(g)
    proj = gram.projector
    gp = proj.T @ g @ proj
    vals = np.linalg.eigvalsh(0.5 * (gp + gp.T))
    assert vals.min() >= -1e-8 * max(1.0, vals.max())


def test_gram_constant_directions_killed(disk_operators, disk_geometry):
    _, gram = disk_operators
    n = disk_geometry.n_nodes
    const1 = np.concatenate([np.ones(n), np.zeros(n)])
    assert abs(gram_pairing(gram, gram.projector @ const1,
                            gram.projector @ const1)) < 1e-12


def test_gram_value_cos_mode(disk_operators, disk_geometry):
    # <(cos t, 0), (cos t, 0)>_{H^2} = pi/2 on the unit circle
    # (brute-force double-quadrature oracle converges to this value)
    _, gram = disk_operators
    n = disk_geometry.n_nodes
    t = 2 * np.pi * np.arange(n) / n
    v = np.concatenate([np.cos(t), np.zeros(n)])
    assert abs(gram_pairing(gram, v, v) - np.pi / 2) < 1e-10


def test_gram_rayleigh_positive_mean_zero(disk_operators, disk_geometry):
    _, gram = disk_operators
    rng = np.random.default_rng(7)
    n = disk_geometry.n_nodes
    for _ in range(5):
        v = gram.projector @ rng.standard_normal(2 * n)
        assert gram_pairing(gram, v, v) > 0.0


def test_scale_invariance_of_spectrum():
    base = LayeredGeometry(r1=1, r2=2, delta1=1.0, delta2=1.0, n_nodes=96)
    ref = leading_eigs(spectrum(assemble_block_operator(base),
                                assemble_gram(base), n_max=16), 16)
    for c in (0.5, 2.0, 10.0):
        g = LayeredGeometry(r1=1, r2=2, delta1=c, delta2=c, n_nodes=96)
        lam = leading_eigs(spectrum(assemble_block_operator(g),
                                    assemble_gram(g), n_max=16), 16)
        assert np.max(np.abs(lam - ref)) < 1e-10


def test_delta_ratio_halving():
    g = LayeredGeometry(r1=1, r2=2, delta1=0.5, delta2=1.0, n_nodes=96)
    modes = spectrum(assemble_block_operator(g), assemble_gram(g), n_max=4)
    for m in modes:
        assert abs(abs(m.eigenvalue) - 0.125) < 1e-10


def test_spectrum_containment_random_geometries():
    rng = np.random.default_rng(11)
    for _ in range(5):
        h1 = ShapeFunction(cosine_coeffs=((int(rng.integers(1, 8)),
                                           float(rng.uniform(-1, 1))),),
                           sine_coeffs=((int(rng.integers(1, 8)),
                                         float(rng.uniform(-0.5, 0.5))),))
        h2 = ShapeFunction(sine_coeffs=((int(rng.integers(1, 8)),
                                         float(rng.uniform(-1, 1))),))
        g = LayeredGeometry(r1=1, r2=2, eps1=0.06, eps2=0.06, h1=h1, h2=h2,
                            n_nodes=96)
        modes = spectrum(assemble_block_operator(g, True),
                         assemble_gram(g, True), n_max=24)
        assert max(abs(m.eigenvalue) for m in modes) <= 0.5 + 1e-8


def test_mesh_independence():
    h1, h2 = SHAPE_SETS[1]
    lams = []
    for n in (128, 256):
        g = LayeredGeometry(r1=1, r2=2, eps1=0.05, eps2=0.05, h1=h1, h2=h2,
                            n_nodes=n)
        modes = spectrum(assemble_block_operator(g, True),
                         assemble_gram(g, True), n_max=8)
        lams.append(leading_eigs(modes, 8))
    assert np.max(np.abs(lams[0] - lams[1])) < 1e-8


def test_disk_oracle_eigs_table():
    table = disk_oracle_eigs(1.0, 2.0, 1.0, 1.0, n_max=2)
    assert table[0] == (1, "+", 0.25, 0.5)
    assert table[1][2] == -0.25
    assert abs(table[2][2]) == 0.125
    # vanishing-core limit
    tiny = disk_oracle_eigs(1.0, 2.0, 1e-8, 1.0, n_max=2)
    assert all(abs(row[2]) < 1e-8 for row in tiny)
    with pytest.raises(ValueError):
        disk_oracle_eigs(1.0, 2.0, 3.0, 1.0)
