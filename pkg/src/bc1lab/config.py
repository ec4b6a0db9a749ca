"""Run configuration: JSON on disk, canonical serialization, validated by schema."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources

from .elliptic import MIN_IM_TAU, Torus
from .errors import ConfigError
from .potential import CouplingSet
from .records import decode_complex, encode

SUITES = ("elliptic_core", "potential_v", "vandiejen", "gyrostat", "gauge", "xyz", "limit")

DEFAULT_TOLERANCES = {
    "elliptic_core": 1e-10,
    "potential_v": 1e-10,
    "vandiejen": 1e-7,
    "gyrostat": 1e-10,
    "gauge": 1e-10,
    "xyz": 1e-9,
    "limit": 0.1,
    "brackets": 1e-6,
    "spectral": 1e-12,
    "casimir": 1e-9,
    "gradient": 1e-8,
    "conservation": 1e-8,
    "exact": 1e-12,
    "conjugation": 1e-11,
    "linear_combination": 1e-11,
    "evenness": 1e-10,
    "canonical": 1e-10,
    "state_independence": 1e-9,
    "commuting": 1e-7,
    "convergence": 1.0,
}

DEFAULT_SAMPLES = {
    "identities": 100,
    "lax": 50,
    "gradient": 100,
    "theorem1": 100,
    "theorem2": 8,
    "theorem3": 50,
    "reflection": 50,
    "gauge": 50,
    "xyz": 100,
    "brackets": 4,
    "states": 10,
}

# bounded trajectories for the default integration runs
DEFAULT_SIMULATION = {
    "c": 8.0,
    "eta": 0.3j,
    "eta_bar": 0.24j,
    "nu_breve": (0.5, 0.3, 0.2, 0.1),
    "nu_bar_breve": (0.8, 0.1, 0.2, 0.1),
    "p0": 0.0,
    "q0": 0.3 + 0.02j,
    "inoz_nu": (0.3j, 0.2j, 0.1, 0.1),
    "inoz_p0": 0.2,
    "inoz_q0": 0.23,
    "spin0": (0.0, 1.0, 0.5, 0.25),
    "lam": (0.0, 0.0, 0.0),
    "gyrostat_c": 1.0,
}


@dataclass
class RunConfig:
    tau: complex = 1j
    seed: int = 42
    probe: complex = 0.17 + 0.23j
    coupling_radius: float = 1.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    samples: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    simulation: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_SIMULATION))
    boundary: dict | None = None
    outputs: dict = field(default_factory=lambda: {
        "report": "report.json", "trajectory": "trajectory.csv", "summary": "summary.json"})

    def __post_init__(self):
        self.tau = complex(self.tau)
        self.probe = complex(self.probe)
        if self.tau.imag < MIN_IM_TAU:
            raise ConfigError(f"Im(tau) must be >= {MIN_IM_TAU}")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        self.seed = int(self.seed)
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        unknown = set(self.samples) - set(DEFAULT_SAMPLES)
        if unknown:
            raise ConfigError(f"unknown sample keys: {sorted(unknown)}")
        self.tolerances = {**DEFAULT_TOLERANCES, **{k: float(v) for k, v in self.tolerances.items()}}
        self.samples = {**DEFAULT_SAMPLES, **{k: int(v) for k, v in self.samples.items()}}
        sim = copy.deepcopy(DEFAULT_SIMULATION)
        unknown = set(self.simulation) - set(sim)
        if unknown:
            raise ConfigError(f"unknown simulation keys: {sorted(unknown)}")
        for key, value in self.simulation.items():
            sim[key] = _decode_like(sim[key], value)
        self.simulation = sim
        if self.boundary is not None:
            if set(self.boundary) != {"rho_plus", "rho_minus"}:
                raise ConfigError("boundary needs exactly rho_plus and rho_minus")
            self.boundary = {k: tuple(decode_complex(x) for x in v) for k, v in self.boundary.items()}

    @property
    def torus(self) -> Torus:
        return Torus(self.tau)

    def tolerance(self, key: str) -> float:
        return self.tolerances[key]

    def with_tolerance(self, value: float) -> "RunConfig":
        out = copy.deepcopy(self)
        out.tolerances = {k: float(value) for k in out.tolerances}
        return out

    def simulation_couplings(self) -> tuple:
        """(nu, nu_bar) whose duals are the configured dual couplings."""
        sim = self.simulation
        return CouplingSet(sim["nu_breve"]).dual(), CouplingSet(sim["nu_bar_breve"]).dual()

    def to_dict(self) -> dict:
        return encode({
            "tau": self.tau,
            "seed": self.seed,
            "probe": self.probe,
            "coupling_radius": self.coupling_radius,
            "tolerances": self.tolerances,
            "samples": self.samples,
            "simulation": self.simulation,
            "boundary": self.boundary,
            "outputs": self.outputs,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        validate_config(data)
        kwargs = dict(data)
        for key in ("tau", "probe"):
            if key in kwargs:
                kwargs[key] = decode_complex(kwargs[key])
        try:
            return cls(**kwargs)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc


def _decode_like(template, value):
    if isinstance(template, tuple):
        if not isinstance(value, (list, tuple)) or len(value) != len(template):
            raise ConfigError(f"expected a list of {len(template)} values, got {value!r}")
        return tuple(_decode_like(t, v) for t, v in zip(template, value))
    if isinstance(template, complex):
        return decode_complex(value)
    if isinstance(template, float):
        if isinstance(value, (list, tuple)):
            z = decode_complex(value)
            return z if z.imag else z.real
        return float(value)
    return value


def config_schema() -> dict:
    text = resources.files("bc1lab").joinpath("schemas/config.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_config(data) -> None:
    import jsonschema

    try:
        jsonschema.validate(data, config_schema())
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config does not match the schema: {exc.message}") from exc
