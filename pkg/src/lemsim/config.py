"""Sectioned key-value run configuration: parsing, defaults, rendering.

Format: ``[section]`` headers, ``key = value`` lines, ``#`` comments,
whitespace-separated vectors, scalars broadcast to length n where a vector
is expected.  Unknown sections or keys are hard errors.  Rendering emits
every resolved value (defaults included) so an output header fully
reproduces the run.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .cluster import ClusterParams, uniform_couplings
from .errors import ConfigError
from .sweep import CHANNELS, SweepGrid
from .transition import NOISE_KINDS, CouplingSpec


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration.

    Vector-valued fields are stored as tuples so configurations compare
    exactly; ``None`` means "absent" for optional sections and "auto" for
    deferred numeric defaults.
    """

    # [cluster]
    n: int | None = None
    j_uniform: float | None = None
    j_upper: tuple[float, ...] | None = None
    bias: tuple[float, ...] | None = None
    tunneling: tuple[float, ...] | None = None
    a_typ: float | None = None
    # [noise]
    z_noise: tuple[float, ...] | None = None
    x_noise: tuple[float, ...] | None = None
    noise_kind: str = "ou"
    noise_tau: float | None = None
    # [dynamics]
    time_step: float | None = None
    total_time: float | None = None
    trajectories: int = 200
    anchors: tuple[str, str] | None = None
    # [sweep]
    sweep_n: tuple[int, ...] | None = None
    sweep_ratios: tuple[float, ...] | None = None
    sweep_channels: tuple[str, ...] = ("overlaps", "rates", "pathsum")
    sweep_bias: float = 0.1
    sweep_j: float = -1.0
    # [output]
    output_path: str | None = None
    # [run]
    seed: int = 0

    @property
    def has_cluster(self) -> bool:
        return self.n is not None

    @property
    def has_sweep(self) -> bool:
        return self.sweep_n is not None or self.sweep_ratios is not None

    def cluster_params(self) -> ClusterParams:
        if not self.has_cluster:
            raise ConfigError("configuration has no [cluster] section")
        n = self.n
        if self.j_upper is not None:
            m = np.zeros((n, n))
            k = 0
            for i in range(n):
                for j in range(i + 1, n):
                    m[i, j] = m[j, i] = self.j_upper[k]
                    k += 1
        else:
            m = uniform_couplings(n, self.j_uniform or 0.0)
        return ClusterParams(
            n=n,
            couplings=m,
            bias=np.array(self.bias),
            tunneling=np.array(self.tunneling),
        )

    def coupling_spec(self) -> CouplingSpec:
        if not self.has_cluster:
            raise ConfigError("configuration has no [cluster] section")
        return CouplingSpec(
            z_noise=np.array(self.z_noise if self.z_noise is not None else [0.0] * self.n),
            x_noise=np.array(self.x_noise if self.x_noise is not None else [0.0] * self.n),
            kind=self.noise_kind,
            correlation_time=self.noise_tau,
        )

    def sweep_grid(self) -> SweepGrid:
        if self.sweep_n is None or self.sweep_ratios is None:
            raise ConfigError("configuration has no complete [sweep] section")
        return SweepGrid(
            n_values=self.sweep_n,
            ratio_values=self.sweep_ratios,
            channels=self.sweep_channels,
            bias=self.sweep_bias,
            coupling_j=self.sweep_j,
            trajectory_count=self.trajectories,
        )


_SECTIONS = ("cluster", "noise", "dynamics", "sweep", "output", "run")
_KEYS = {
    "cluster": ("n", "j", "j_upper", "bias", "tunneling", "a_typ"),
    "noise": ("z_noise", "x_noise", "kind", "tau"),
    "dynamics": ("time_step", "total_time", "trajectories", "anchors"),
    "sweep": ("n_values", "ratios", "channels", "bias", "j"),
    "output": ("path",),
    "run": ("seed",),
}


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{where}: not a number: {raw!r}") from None


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw, 0)
    except ValueError:
        raise ConfigError(f"{where}: not an integer: {raw!r}") from None


def _parse_vector(raw: str, n: int, where: str) -> tuple[float, ...]:
    parts = raw.split()
    values = tuple(_parse_float(p, where) for p in parts)
    if len(values) == 1:
        return values * n  # scalar broadcast
    if len(values) != n:
        raise ConfigError(f"{where}: expected 1 or {n} values, got {len(values)}")
    return values


def _parse_auto_float(raw: str, where: str) -> float | None:
    if raw == "auto":
        return None
    return _parse_float(raw, where)


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text, resolving every default."""
    entries: dict[tuple[str, str], tuple[str, int]] = {}
    section = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"line {lineno}: malformed section header: {rawline.strip()!r}")
            name = line[1:-1].strip()
            if name not in _SECTIONS:
                raise ConfigError(f"line {lineno}: unknown section [{name}]")
            section = name
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {rawline.strip()!r}")
        if section is None:
            raise ConfigError(f"line {lineno}: key outside any [section]")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS[section]:
            raise ConfigError(f"line {lineno}: unknown key {key!r} in section [{section}]")
        if (section, key) in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in section [{section}]")
        entries[(section, key)] = (value, lineno)

    def take(section: str, key: str) -> tuple[str, int] | None:
        return entries.pop((section, key), None)

    cfg = {}

    got = take("cluster", "n")
    has_cluster = got is not None or any(sec == "cluster" for sec, _ in entries)
    if has_cluster:
        if got is None:
            raise ConfigError("section [cluster] is missing the required key 'n'")
        n = _parse_int(got[0], f"line {got[1]}: cluster.n")
        if n < 1:
            raise ConfigError(f"line {got[1]}: cluster.n must be positive")
        cfg["n"] = n
        got_j = take("cluster", "j")
        got_ju = take("cluster", "j_upper")
        if got_j is not None and got_ju is not None:
            raise ConfigError(f"line {got_ju[1]}: give either 'j' or 'j_upper', not both")
        if got_ju is not None:
            want = n * (n - 1) // 2
            parts = got_ju[0].split()
            if len(parts) != want:
                raise ConfigError(
                    f"line {got_ju[1]}: j_upper needs {want} entries "
                    f"(row-major upper triangle for n={n}), got {len(parts)}"
                )
            cfg["j_upper"] = tuple(
                _parse_float(p, f"line {got_ju[1]}: cluster.j_upper") for p in parts
            )
        else:
            cfg["j_uniform"] = (
                _parse_float(got_j[0], f"line {got_j[1]}: cluster.j") if got_j else 0.0
            )
        for key, field_name in (("bias", "bias"), ("tunneling", "tunneling")):
            got_v = take("cluster", key)
            if got_v is None:
                cfg[field_name] = (0.0,) * n
            else:
                cfg[field_name] = _parse_vector(
                    got_v[0], n, f"line {got_v[1]}: cluster.{key}"
                )
        got_a = take("cluster", "a_typ")
        if got_a is not None:
            a = _parse_float(got_a[0], f"line {got_a[1]}: cluster.a_typ")
            if not a > 0:
                raise ConfigError(f"line {got_a[1]}: cluster.a_typ must be positive")
            cfg["a_typ"] = a
        for key in ("z_noise", "x_noise"):
            got_v = take("noise", key)
            if got_v is None:
                cfg[key] = (0.0,) * n
            else:
                cfg[key] = _parse_vector(got_v[0], n, f"line {got_v[1]}: noise.{key}")
    else:
        for key in ("z_noise", "x_noise"):
            got_v = take("noise", key)
            if got_v is not None:
                raise ConfigError(
                    f"line {got_v[1]}: noise.{key} requires a [cluster] section for its length"
                )

    got = take("noise", "kind")
    if got is not None:
        if got[0] not in NOISE_KINDS:
            raise ConfigError(f"line {got[1]}: noise.kind must be one of {NOISE_KINDS}")
        cfg["noise_kind"] = got[0]
    got = take("noise", "tau")
    if got is not None:
        tau = _parse_auto_float(got[0], f"line {got[1]}: noise.tau")
        if tau is not None and not tau > 0:
            raise ConfigError(f"line {got[1]}: noise.tau must be positive")
        cfg["noise_tau"] = tau

    got = take("dynamics", "time_step")
    if got is not None:
        ts = _parse_auto_float(got[0], f"line {got[1]}: dynamics.time_step")
        if ts is not None and not ts > 0:
            raise ConfigError(f"line {got[1]}: dynamics.time_step must be positive")
        cfg["time_step"] = ts
    got = take("dynamics", "total_time")
    if got is not None:
        tt = _parse_auto_float(got[0], f"line {got[1]}: dynamics.total_time")
        if tt is not None and not tt > 0:
            raise ConfigError(f"line {got[1]}: dynamics.total_time must be positive")
        cfg["total_time"] = tt
    got = take("dynamics", "trajectories")
    if got is not None:
        count = _parse_int(got[0], f"line {got[1]}: dynamics.trajectories")
        if count < 1:
            raise ConfigError(f"line {got[1]}: dynamics.trajectories must be positive")
        cfg["trajectories"] = count
    got = take("dynamics", "anchors")
    if got is not None:
        parts = got[0].split()
        if len(parts) != 2 or any(set(p) - set("01") for p in parts):
            raise ConfigError(
                f"line {got[1]}: dynamics.anchors needs two bitstrings (ground lem)"
            )
        cfg["anchors"] = (parts[0], parts[1])

    got = take("sweep", "n_values")
    if got is not None:
        cfg["sweep_n"] = tuple(
            _parse_int(p, f"line {got[1]}: sweep.n_values") for p in got[0].split()
        )
    got = take("sweep", "ratios")
    if got is not None:
        cfg["sweep_ratios"] = tuple(
            _parse_float(p, f"line {got[1]}: sweep.ratios") for p in got[0].split()
        )
    got = take("sweep", "channels")
    if got is not None:
        channels = tuple(got[0].split())
        for ch in channels:
            if ch not in CHANNELS:
                raise ConfigError(
                    f"line {got[1]}: unknown sweep channel {ch!r}; choose from {CHANNELS}"
                )
        cfg["sweep_channels"] = channels
    got = take("sweep", "bias")
    if got is not None:
        cfg["sweep_bias"] = _parse_float(got[0], f"line {got[1]}: sweep.bias")
    got = take("sweep", "j")
    if got is not None:
        cfg["sweep_j"] = _parse_float(got[0], f"line {got[1]}: sweep.j")

    got = take("output", "path")
    if got is not None:
        cfg["output_path"] = got[0]
    got = take("run", "seed")
    if got is not None:
        seed = _parse_int(got[0], f"line {got[1]}: run.seed")
        if not 0 <= seed < 2**64:
            raise ConfigError(f"line {got[1]}: run.seed must fit in 64 unsigned bits")
        cfg["seed"] = seed

    if entries:
        (sec, key), (_, lineno) = next(iter(entries.items()))
        raise ConfigError(f"line {lineno}: key {key!r} is not allowed in section [{sec}]")
    return RunConfig(**cfg)


def _fmt(value) -> str:
    if value is None:
        return "auto"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    """Canonical text form listing every resolved value; parses back equal."""
    lines: list[str] = []
    if cfg.has_cluster:
        lines.append("[cluster]")
        lines.append(f"n = {cfg.n}")
        if cfg.j_upper is not None:
            lines.append("j_upper = " + " ".join(repr(v) for v in cfg.j_upper))
        else:
            lines.append(f"j = {_fmt(cfg.j_uniform)}")
        lines.append("bias = " + " ".join(repr(v) for v in cfg.bias))
        lines.append("tunneling = " + " ".join(repr(v) for v in cfg.tunneling))
        if cfg.a_typ is not None:
            lines.append(f"a_typ = {_fmt(cfg.a_typ)}")
        lines.append("")
    lines.append("[noise]")
    if cfg.has_cluster:
        lines.append("z_noise = " + " ".join(repr(v) for v in cfg.z_noise))
        lines.append("x_noise = " + " ".join(repr(v) for v in cfg.x_noise))
    lines.append(f"kind = {cfg.noise_kind}")
    lines.append(f"tau = {_fmt(cfg.noise_tau)}")
    lines.append("")
    lines.append("[dynamics]")
    lines.append(f"time_step = {_fmt(cfg.time_step)}")
    lines.append(f"total_time = {_fmt(cfg.total_time)}")
    lines.append(f"trajectories = {cfg.trajectories}")
    if cfg.anchors is not None:
        lines.append(f"anchors = {cfg.anchors[0]} {cfg.anchors[1]}")
    lines.append("")
    if cfg.has_sweep:
        lines.append("[sweep]")
        if cfg.sweep_n is not None:
            lines.append("n_values = " + " ".join(str(v) for v in cfg.sweep_n))
        if cfg.sweep_ratios is not None:
            lines.append("ratios = " + " ".join(repr(v) for v in cfg.sweep_ratios))
        lines.append("channels = " + " ".join(cfg.sweep_channels))
        lines.append(f"bias = {_fmt(cfg.sweep_bias)}")
        lines.append(f"j = {_fmt(cfg.sweep_j)}")
        lines.append("")
    if cfg.output_path is not None:
        lines.append("[output]")
        lines.append(f"path = {cfg.output_path}")
        lines.append("")
    lines.append("[run]")
    lines.append(f"seed = {cfg.seed}")
    return "\n".join(lines) + "\n"


def with_overrides(cfg: RunConfig, seed: int | None = None, output_path: str | None = None) -> RunConfig:
    """Apply command-line overrides on top of a parsed configuration."""
    changes = {}
    if seed is not None:
        changes["seed"] = seed
    if output_path is not None:
        changes["output_path"] = output_path
    return replace(cfg, **changes) if changes else cfg
