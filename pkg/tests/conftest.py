import numpy as np
import pytest
from hypothesis import settings

from radtherm.models import FurnaceScene
from radtherm.spectral import SpectralCurve
from radtherm.surrogate import TrainConfig, generate_dataset, train

settings.register_profile("suite", max_examples=25, deadline=None)
settings.load_profile("suite")

#: Table-style nominal operating point with constant curves.
NOMINAL_TS = 1223.15
NOMINAL_TW = 1378.15
NOMINAL_TG = 1253.15


@pytest.fixture
def nominal_scene() -> FurnaceScene:
    return FurnaceScene(
        tube_temp=NOMINAL_TS,
        wall_temp=NOMINAL_TW,
        gas_temp=NOMINAL_TG,
        emissivity=SpectralCurve.constant(0.82),
        absorption=SpectralCurve.constant(0.05),
    )


def random_scene(rng: np.random.Generator) -> FurnaceScene:
    """A random bell-curve scene drawn from the surrogate sampling ranges."""
    return FurnaceScene(
        tube_temp=rng.uniform(1073.15, 1473.15),
        wall_temp=rng.uniform(1073.15, 1573.15),
        gas_temp=rng.uniform(773.15, 1273.15),
        emissivity=SpectralCurve.bell(rng.uniform(0.65, 0.95),
                                      rng.uniform(3.3, 4.6),
                                      rng.uniform(0.2, 1.8)),
        absorption=SpectralCurve.bell(rng.uniform(0.0, 0.2),
                                      rng.uniform(3.3, 4.6),
                                      rng.uniform(0.2, 1.8)),
    )


@pytest.fixture(scope="session")
def desk_model():
    """Desk-scale surrogate: 100k training rows, 20k validation rows.

    Trained once per session; several module invariants and the
    acceptance criteria share it.
    """
    data = generate_dataset(120_000, seed=7)
    model, report = train(data, TrainConfig(seed=7), validation_fraction=1 / 6)
    return data, model, report
