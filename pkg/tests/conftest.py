import numpy as np
import pytest

from npshell.geometry import LayeredGeometry, ShapeFunction

# Shape-function sets used by the sweep and splitting experiments
SHAPE_SETS = {
    1: (ShapeFunction(cosine_coeffs=((4, 0.5),)),
        ShapeFunction(sine_coeffs=((3, -1.0),))),
    2: (ShapeFunction(sine_coeffs=((3, 0.5), (6, 1.0), (7, -0.5))),
        ShapeFunction(cosine_coeffs=((4, -0.5), (5, 1.0), (7, 0.5)))),
    3: (ShapeFunction(sine_coeffs=((1, 0.5), (3, 0.5), (8, -1.0))),
        ShapeFunction(cosine_coeffs=((1, -0.5), (5, -1.0), (12, 0.5)))),
    4: (ShapeFunction(cosine_coeffs=((6, -1.0),)),
        ShapeFunction(sine_coeffs=((4, -1.0),))),
}

OMEGA_P = 9.06


@pytest.fixture(scope="session")
def disk_geometry():
    return LayeredGeometry(r1=1.0, r2=2.0, n_nodes=128)


@pytest.fixture(scope="session")
def disk_operators(disk_geometry):
    from npshell.spectrum import assemble_block_operator, assemble_gram
    return (assemble_block_operator(disk_geometry),
            assemble_gram(disk_geometry))


@pytest.fixture(scope="session")
def disk_modes(disk_operators):
    from npshell.spectrum import spectrum
    block, gram = disk_operators
    return spectrum(block, gram, n_max=24)


def leading_eigs(modes, k):
    """Leading k eigenvalues sorted descending (for cross-method pairing)."""
    return np.sort([m.eigenvalue for m in modes[:k]])[::-1]
