"""JSON descriptors and CSV emission.

One config schema feeds every subcommand:

    {
      "graph": {"m": 3, "edges": [{"length": 1.0}, ...], "angles": [...]},
      "chords": [...],                # optional; derived from angles if absent
      "potentials": [ {"type": "coeffs",  "values": [[re, im], ...]}
                    | {"type": "samples", "grid": M, "values": [...]} ],
      "mode": "verbatim" | "normalized",
      "N": 8,
      "epsilon": 1e-6
    }

``angles`` may be null for recovery configs where the extension is unknown.
Numeric output is fixed at 17 significant digits with '\\n' line endings, so
identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .characteristic import PhiSampleSet, SampleGridSpec
from .errors import ConfigParseError, GridMismatch
from .fd_oracle import OracleSpectrum
from .fourier import PotentialCoeffs, SampledFunction, sine_coefficients
from .geometry import ExtendedGraphSpec, StarGraphSpec, chords_from_angles
from .solution import MODES, ModelConfig

FMT = "%.17g"


def _f(v: float) -> str:
    return FMT % v


@dataclass(frozen=True)
class ParsedConfig:
    """Config file contents, before committing to a full forward model."""

    lengths: np.ndarray
    angles: np.ndarray | None
    chords: np.ndarray | None
    potentials: PotentialCoeffs
    mode: str
    pole_eps: float
    order: int

    @property
    def m(self) -> int:
        return self.lengths.size

    def graph(self) -> StarGraphSpec:
        if self.angles is None:
            raise ConfigParseError("config declares no angles; the star fan is undetermined")
        return StarGraphSpec(self.lengths, self.angles)

    def extension(self) -> ExtendedGraphSpec:
        if self.chords is not None:
            return ExtendedGraphSpec(self.chords)
        return chords_from_angles(self.graph())

    def model_config(self) -> ModelConfig:
        return ModelConfig(
            graph=self.graph(),
            extension=self.extension(),
            potentials=self.potentials,
            mode=self.mode,
            pole_eps=self.pole_eps,
        )


def _parse_potential(entry: dict, length: float, order: int, index: int) -> np.ndarray:
    kind = entry.get("type")
    if kind == "coeffs":
        vals = entry.get("values", [])
        out = np.zeros(order, dtype=np.complex128)
        if len(vals) > order:
            raise ConfigParseError(f"potential {index}: {len(vals)} coefficients exceed N={order}")
        for n, v in enumerate(vals):
            if isinstance(v, (int, float)):
                out[n] = complex(v)
            else:
                out[n] = complex(v[0], v[1])
        return out
    if kind == "samples":
        vals = entry.get("values", [])
        grid_m = int(entry.get("grid", len(vals) - 1))
        if grid_m != len(vals) - 1:
            raise ConfigParseError(f"potential {index}: 'grid' must equal len(values) - 1")
        samples = np.array(
            [complex(v) if isinstance(v, (int, float)) else complex(v[0], v[1]) for v in vals]
        )
        return sine_coefficients(SampledFunction(length, samples), order)
    raise ConfigParseError(f"potential {index}: unknown type {kind!r}")


def parse_config(source) -> ParsedConfig:
    """Parse a config dict, JSON string, or path to a JSON file."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    elif isinstance(source, dict):
        data = source
    else:
        raise ConfigParseError(f"config file {source!r} not found")

    try:
        graph = data["graph"]
        lengths = np.array([float(e["length"]) for e in graph["edges"]], dtype=np.float64)
        m = int(graph.get("m", lengths.size))
        if m != lengths.size:
            raise ConfigParseError(f"declared m={m} but {lengths.size} edges listed")
        raw_angles = graph.get("angles")
        angles = None if raw_angles is None else np.asarray(raw_angles, dtype=np.float64)
        raw_chords = data.get("chords")
        chords = None if raw_chords is None else np.asarray(raw_chords, dtype=np.float64)
        mode = data.get("mode", "verbatim")
        if mode not in MODES:
            raise ConfigParseError(f"mode must be one of {MODES}")
        order = int(data.get("N", 16))
        eps = float(data.get("epsilon", 1e-6))
        pot_entries = data.get("potentials")
        if pot_entries is None:
            coeffs = np.zeros((m, order), dtype=np.complex128)
        else:
            if len(pot_entries) != m:
                raise ConfigParseError(f"{len(pot_entries)} potentials for {m} edges")
            coeffs = np.stack(
                [_parse_potential(e, lengths[j], order, j) for j, e in enumerate(pot_entries)]
            )
    except ConfigParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigParseError(f"malformed config: {exc}") from exc

    if angles is not None and chords is not None:
        derived = chords_from_angles(StarGraphSpec(lengths, angles)).chords
        if not np.allclose(derived, chords, rtol=0, atol=1e-9):
            raise ConfigParseError("explicit chords disagree with the chords implied by the angles")

    potentials = PotentialCoeffs(lengths, coeffs)
    return ParsedConfig(
        lengths=lengths,
        angles=angles,
        chords=chords,
        potentials=potentials,
        mode=mode,
        pole_eps=eps,
        order=order,
    )


def _pairs(arr: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(arr, dtype=np.complex128)]


def samples_to_json(samples: PhiSampleSet) -> str:
    doc = {
        "format": "phi-samples",
        "mode": samples.mode,
        "fingerprint": samples.fingerprint,
        "grid_spec": samples.grid_spec.to_dict() if samples.grid_spec is not None else None,
        "grid": _pairs(samples.grid),
        "values": _pairs(samples.values),
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def samples_from_json(source) -> PhiSampleSet:
    text = Path(source).read_text() if isinstance(source, (str, Path)) and Path(source).exists() else source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"sample file is not valid JSON: {exc}") from exc
    if doc.get("format") != "phi-samples":
        raise ConfigParseError("not a phi-samples file")
    grid = np.array([complex(re, im) for re, im in doc.get("grid", [])])
    values = np.array([complex(re, im) for re, im in doc.get("values", [])])
    if grid.size != values.size or grid.size == 0:
        raise GridMismatch(
            f"sample file carries {values.size} values on a {grid.size}-point grid"
        )
    spec = doc.get("grid_spec")
    return PhiSampleSet(
        grid=grid,
        values=values,
        mode=doc.get("mode", "verbatim"),
        fingerprint=doc.get("fingerprint", {}),
        grid_spec=SampleGridSpec.from_dict(spec) if spec else None,
    )


def samples_to_csv(samples: PhiSampleSet) -> str:
    lines = ["z_re,z_im,phi_re,phi_im"]
    for z, v in zip(samples.grid, samples.values):
        lines.append(",".join((_f(z.real), _f(z.imag), _f(v.real), _f(v.imag))))
    return "\n".join(lines) + "\n"


def report_to_json(report) -> str:
    return json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n"


def spectrum_to_json(spec: OracleSpectrum) -> str:
    doc = {
        "format": "oracle-spectrum",
        "h": spec.h,
        "count": spec.count,
        "method": spec.method,
        "values": _pairs(spec.values),
        "details": spec.details,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def spectrum_from_json(source) -> OracleSpectrum:
    text = Path(source).read_text() if isinstance(source, (str, Path)) and Path(source).exists() else source
    doc = json.loads(text)
    if doc.get("format") != "oracle-spectrum":
        raise ConfigParseError("not an oracle-spectrum file")
    values = np.array([complex(re, im) for re, im in doc.get("values", [])])
    return OracleSpectrum(
        values=values,
        h=float(doc["h"]),
        count=int(doc["count"]),
        method=doc.get("method", "eliminated"),
        details=doc.get("details", {}),
    )


def spectrum_to_csv(spec: OracleSpectrum) -> str:
    lines = ["lambda_re,lambda_im"]
    for v in spec.values:
        lines.append(",".join((_f(v.real), _f(v.imag))))
    return "\n".join(lines) + "\n"


def zero_table_to_csv(table: list[dict]) -> str:
    lines = ["z,lambda,nearest_re,nearest_im,distance"]
    for row in table:
        if row["lambda"] is None:
            lines.append(",".join((_f(row["z"]), "", "", "", "")))
        else:
            near = complex(row["nearest_eigenvalue"])
            lines.append(
                ",".join(
                    (_f(row["z"]), _f(row["lambda"]), _f(near.real), _f(near.imag), _f(row["distance"]))
                )
            )
    return "\n".join(lines) + "\n"
