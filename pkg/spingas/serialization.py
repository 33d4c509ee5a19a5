"""Text formats for histories, states, maps, negativities and ensemble
results.

Every format has a codec with `dumps`/`loads` for strings and `dump`/`load`
for files. Floats are written with 17 significant digits so that a
write/read round trip is exact, and lines always end in "\\n".
"""
import csv
from io import StringIO
from os import PathLike
from pathlib import Path
from typing import Generic, List, Optional, TypeVar, Union

import numpy as np

from spingas.dataclasses.bipartition import Bipartition, NegativitySummary
from spingas.dataclasses.density_matrix import DensityMatrix
from spingas.dataclasses.history import InteractionHistory
from spingas.dataclasses.maps import PauliDiagonalMap
from spingas.dataclasses.run import EnsembleResult, ResultRow
from spingas.utils import DimensionError

T = TypeVar("T")

RESULT_COLUMNS = [
    "sweep_param",
    "sweep_value",
    "time",
    "observable",
    "mean",
    "stderr",
    "realizations",
]


def fmt(value: float) -> str:
    return format(value, ".17g")


class TextCodec(Generic[T]):
    """Abstract superclass of the text formats"""

    @classmethod
    def dumps(cls, value: T) -> str:
        raise NotImplementedError("Must be overridden by subclass")

    @classmethod
    def loads(cls, s: str) -> T:
        raise NotImplementedError("Must be overridden by subclass")

    @classmethod
    def dump(cls, value: T, path: Union[str, PathLike]):
        """
        Writes the text form of `value` to a file

        :param value: the value to write
        :param path: path to write output file to
        :type path: PathLike
        """
        output_file = Path(path)
        with output_file.open("w", encoding="utf-8", newline="") as f:
            f.write(cls.dumps(value))

    @classmethod
    def load(cls, path: Union[str, PathLike]) -> T:
        """
        Reads a file generated by 'dump'
        """
        with Path(path).open("r", encoding="utf-8", newline="") as f:
            return cls.loads(f.read())


class HistoryCodec(TextCodec[InteractionHistory]):
    """Header line `N_A N_B time`, then the phase matrix row by row."""

    @classmethod
    def dumps(cls, value: InteractionHistory) -> str:
        lines = [f"{value.n_probes} {value.n_env} {fmt(value.time)}"]
        for row in value.gamma:
            lines.append(" ".join(fmt(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, s: str) -> InteractionHistory:
        lines = s.splitlines()
        n_probes, n_env, time = lines[0].split()
        rows = [np.array(line.split(), dtype=float) for line in lines[1:]]
        gamma = np.zeros((int(n_probes), int(n_env)))
        if len(rows) != gamma.shape[0]:
            raise DimensionError(f"Expected {n_probes} rows, found {len(rows)}")
        for k, row in enumerate(rows):
            if row.shape[0] != gamma.shape[1]:
                raise DimensionError(f"Row {k} has {row.shape[0]} entries")
            gamma[k] = row
        return InteractionHistory(gamma, float(time))


class DensityMatrixCodec(TextCodec[DensityMatrix]):
    """One matrix row per line; entries are `re,im` pairs separated by
    spaces."""

    @classmethod
    def dumps(cls, value: DensityMatrix) -> str:
        lines = [
            " ".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in row)
            for row in value.entries
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, s: str) -> DensityMatrix:
        rows = []
        for line in s.splitlines():
            pairs = [item.split(",") for item in line.split()]
            rows.append([complex(float(re), float(im)) for re, im in pairs])
        return DensityMatrix(np.array(rows, dtype=complex))


class PauliMapCodec(TextCodec[PauliDiagonalMap]):
    """Header `n_qubits`, then one `k l re im` line per nonzero coefficient;
    k and l are strings over {0, 3}."""

    @classmethod
    def dumps(cls, value: PauliDiagonalMap) -> str:
        lines = [str(value.n_qubits)]
        for k, l, v in value.to_records():
            k_str = "".join(str(i) for i in k)
            l_str = "".join(str(i) for i in l)
            lines.append(f"{k_str} {l_str} {fmt(v.real)} {fmt(v.imag)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, s: str) -> PauliDiagonalMap:
        lines = s.splitlines()
        n = int(lines[0])
        coefficients = {}
        for line in lines[1:]:
            k, l, re, im = line.split()
            key = (tuple(int(c) for c in k), tuple(int(c) for c in l))
            coefficients[key] = complex(float(re), float(im))
        return PauliDiagonalMap(n, coefficients)


class NegativityCodec(TextCodec[NegativitySummary]):
    """Header `n_qubits`, then one `mask value` line per bipartition."""

    @classmethod
    def dumps(cls, value: NegativitySummary) -> str:
        lines = [str(value.n_qubits)]
        lines += [f"{mask} {fmt(v)}" for mask, v in value.to_record().items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, s: str) -> NegativitySummary:
        lines = s.splitlines()
        n = int(lines[0])
        values = {}
        for line in lines[1:]:
            mask, v = line.split()
            values[Bipartition.from_mask(n, int(mask))] = float(v)
        return NegativitySummary.from_values(values)


def _format_sweep_value(value: Optional[Union[int, float]]) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return fmt(value)


def _parse_sweep_value(text: str) -> Optional[Union[int, float]]:
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


class ResultsCodec(TextCodec[EnsembleResult]):
    """CSV with the columns of RESULT_COLUMNS, in that order."""

    @classmethod
    def dumps(cls, value: EnsembleResult) -> str:
        buffer = StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        for row in value.rows:
            writer.writerow(
                [
                    row.sweep_param,
                    _format_sweep_value(row.sweep_value),
                    fmt(row.time),
                    row.observable,
                    fmt(row.mean),
                    fmt(row.stderr),
                    str(row.realizations),
                ]
            )
        return buffer.getvalue()

    @classmethod
    def loads(cls, s: str) -> EnsembleResult:
        reader = csv.DictReader(StringIO(s, newline=""))
        if reader.fieldnames is not None and list(reader.fieldnames) != RESULT_COLUMNS:
            raise ValueError(f"Unexpected columns {reader.fieldnames}")
        rows: List[ResultRow] = []
        for record in reader:
            rows.append(
                ResultRow(
                    sweep_param=record["sweep_param"],
                    sweep_value=_parse_sweep_value(record["sweep_value"]),
                    time=float(record["time"]),
                    observable=record["observable"],
                    mean=float(record["mean"]),
                    stderr=float(record["stderr"]),
                    realizations=int(record["realizations"]),
                )
            )
        return EnsembleResult(rows)


def write_results(result: EnsembleResult, path: Union[str, PathLike]):
    """Write an ensemble result as CSV; an empty result gives a header-only
    file."""
    ResultsCodec.dump(result, path)


def read_results(path: Union[str, PathLike]) -> EnsembleResult:
    return ResultsCodec.load(path)
