from spingas.dataclasses.bipartition import Bipartition, NegativitySummary  # noqa
from spingas.dataclasses.density_matrix import (  # noqa
    DensityMatrix,
    HamiltonianConvention,
)
from spingas.dataclasses.gas import Boundary, GasConfig, LatticeState  # noqa
from spingas.dataclasses.history import InteractionHistory  # noqa
from spingas.dataclasses.maps import PauliDiagonalMap, SingleQubitMapCoeffs  # noqa
