"""Pipeline configuration and its flat key=value file format."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .errors import InputError


@dataclass
class PipelineConfig:
    """Every knob of the analysis pipeline, with the stock EEG defaults.

    ``window_len``/``hop`` are in samples at the native rate (defaults match
    one-minute windows hopping by two seconds at 1 kHz); ``frame_len`` is the
    clustering frame in samples, ``min_duration`` the shortest reported
    interval in samples.
    """

    j1: int = 2
    q1: int = 10
    j2: int = 2
    q2: int = 10
    p: float = 2.0
    reducer: str = "pca"
    window_len: int = 60000
    hop: int = 2000
    k_max: int = 6
    frame_len: int = 100
    min_duration: int = 20
    seed: int = 0
    sample_rate_hz: float = 1000.0

    def validate(self) -> "PipelineConfig":
        if min(self.j1, self.q1, self.j2, self.q2) < 1:
            raise InputError("invalid filterbank geometry")
        if self.p <= 0:
            raise InputError("invalid exponent")
        if self.reducer not in ("pca", "maxpool"):
            raise InputError(f"unknown reducer {self.reducer!r}")
        if self.window_len < 2:
            raise InputError("window_len must be at least 2")
        if not (1 <= self.hop <= self.window_len):
            raise InputError("hop must be in [1, window_len]")
        if self.k_max < 1:
            raise InputError("k_max must be positive")
        if self.frame_len < 1:
            raise InputError("frame_len must be positive")
        if self.min_duration < 0:
            raise InputError("min_duration must be non-negative")
        if self.sample_rate_hz <= 0:
            raise InputError("sample_rate_hz must be positive")
        return self

    def to_text(self) -> str:
        lines = [f"{field.name}={getattr(self, field.name)}" for field in fields(self)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PipelineConfig":
        known = {field.name: field.type for field in fields(cls)}
        values: dict[str, object] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InputError(f"config line {lineno}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in known:
                raise InputError(f"config line {lineno}: unknown key {key!r}")
            try:
                values[key] = _parse_field(key, value)
            except ValueError as exc:
                raise InputError(f"config line {lineno}: {exc}") from exc
        return cls(**values).validate()

    def as_dict(self) -> dict:
        return asdict(self)


_INT_FIELDS = {"j1", "q1", "j2", "q2", "window_len", "hop", "k_max", "frame_len",
               "min_duration", "seed"}
_FLOAT_FIELDS = {"p", "sample_rate_hz"}


def _parse_field(key: str, value: str):
    if key in _INT_FIELDS:
        return int(value)
    if key in _FLOAT_FIELDS:
        return float(value)
    return value.strip("'\"")


def load_config(path) -> PipelineConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return PipelineConfig.from_text(handle.read())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc


def save_config(config: PipelineConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(config.to_text())
