from spingas.dataclasses import (  # noqa
    DensityMatrix,
    GasConfig,
    HamiltonianConvention,
    InteractionHistory,
)
from spingas.utils import ConfigurationError, DimensionError, setup_logging  # noqa
