"""Command-line front end for reproducible gating-controller experiments.

Verbs:

* ``gen-cubes``   synthesize a cube workload from a usage profile
* ``baseline``    emit the conventional random controller
* ``search``      run the genetic search and emit the best net plus trace
* ``evaluate``    score a net on a cube file (metrics, merging, cycles)
* ``sweep-cbc``   repeat search + evaluate across control-bit counts

Every command reads one JSON experiment config; individual flags override
config fields, and all outputs embed the resolved config hash and master
seed. The only environment variable honored is ``XORSCAN_OUT`` (output
directory override; an explicit ``--out`` flag still wins).
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import click

from .cubes import CubeSet, generate_cubes, load_cubes, load_profile
from .ga import GaConfig, run_ga, write_trace_csv
from .merge import incremental_merge, save_merge_report
from .metrics import (
    CycleModel,
    evaluate_xornet,
    save_report,
    total_cycles,
    write_per_cube_csv,
)
from .seeds import derived_seed, stream_seed
from .xornet import conventional_xornet, load_xornet, save_xornet


@dataclass
class ExperimentConfig:
    """Resolved experiment parameters (config file plus flag overrides)."""

    n_chains: int
    n_control: int
    taps: int = 3
    levels: int = 1
    sca_limit: float = 0.5
    d: int = 0
    c_in: int = 1
    n_cell: int = 0
    ga: dict = field(default_factory=dict)
    profile_path: str | None = None
    cubes_path: str | None = None
    master_seed: int = 0
    out_dir: str = "out"
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self) -> None:
        if self.n_chains < 1 or self.n_control < 1:
            raise click.ClickException("n_chains and n_control must be >= 1")
        if not 1 <= self.taps <= self.n_control:
            raise click.ClickException("taps must lie in 1..n_control")
        if self.levels not in (1, 2):
            raise click.ClickException("levels must be 1 or 2")
        if not 0.0 < self.sca_limit <= 1.0:
            raise click.ClickException("sca_limit must lie in (0, 1]")
        if self.c_in < 1:
            raise click.ClickException("c_in must be >= 1")

    @classmethod
    def load(
        cls,
        path: str,
        seed: int | None = None,
        out: str | None = None,
        levels: int | None = None,
        sca_limit: float | None = None,
    ) -> "ExperimentConfig":
        p = Path(path)
        if not p.is_file():
            raise click.ClickException(f"config not found: {path}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise click.ClickException(f"{path}: invalid JSON: {exc}")
        workload = raw.get("workload", {})
        try:
            cfg = cls(
                n_chains=int(raw["n_chains"]),
                n_control=int(raw["n_control"]),
                taps=int(raw.get("taps", 3)),
                levels=int(raw.get("levels", 1)),
                sca_limit=float(raw.get("sca_limit", 0.5)),
                d=int(raw.get("cycle", {}).get("d", 0)),
                c_in=int(raw.get("cycle", {}).get("c_in", 1)),
                n_cell=int(raw.get("cycle", {}).get("n_cell", 0)),
                ga=dict(raw.get("ga", {})),
                profile_path=workload.get("profile"),
                cubes_path=workload.get("cubes"),
                master_seed=int(raw.get("master_seed", 0)),
                out_dir=str(raw.get("out_dir", "out")),
                base_dir=p.parent,
            )
        except KeyError as exc:
            raise click.ClickException(f"{path}: missing config field {exc}")
        except (TypeError, ValueError) as exc:
            raise click.ClickException(f"{path}: bad config value: {exc}")
        if seed is not None:
            cfg.master_seed = seed
        env_out = os.environ.get("XORSCAN_OUT")
        if env_out:
            cfg.out_dir = env_out
        if out is not None:
            cfg.out_dir = out
        if levels is not None:
            cfg.levels = levels
            cfg.__post_init__()
        if sca_limit is not None:
            cfg.sca_limit = sca_limit
            cfg.__post_init__()
        return cfg

    def config_hash(self) -> str:
        payload = {
            k: v for k, v in self.__dict__.items() if k not in ("base_dir",)
        }
        return hashlib.sha256(
            json.dumps(payload, sort_keys=True).encode()
        ).hexdigest()[:16]

    def provenance(self) -> dict:
        return {"config_sha256": self.config_hash(), "master_seed": self.master_seed}

    def resolve_path(self, rel: str) -> Path:
        p = Path(rel)
        return p if p.is_absolute() else self.base_dir / p

    def out_path(self, name: str) -> Path:
        out = Path(self.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        return out / name

    def ga_config(self, master_seed: int | None = None) -> GaConfig:
        kwargs = dict(self.ga)
        kwargs.setdefault("sca_limit", self.sca_limit)
        kwargs["master_seed"] = self.master_seed if master_seed is None else master_seed
        try:
            return GaConfig(**kwargs)
        except (TypeError, ValueError) as exc:
            raise click.ClickException(f"bad ga config: {exc}")

    def load_workload(self) -> CubeSet:
        if self.cubes_path:
            path = self.resolve_path(self.cubes_path)
            if not path.is_file():
                raise click.ClickException(f"cube file not found: {path}")
            try:
                return load_cubes(path)
            except ValueError as exc:
                raise click.ClickException(str(exc))
        if self.profile_path:
            path = self.resolve_path(self.profile_path)
            if not path.is_file():
                raise click.ClickException(f"profile not found: {path}")
            profile = load_profile(path)
            if profile.n_chains != self.n_chains:
                raise click.ClickException(
                    f"profile has {profile.n_chains} chains, config says {self.n_chains}"
                )
            try:
                return generate_cubes(profile, stream_seed(self.master_seed, "cube-gen"))
            except ValueError as exc:
                raise click.ClickException(str(exc))
        raise click.ClickException("config defines no workload (profile or cubes)")


_CONFIG_OPTIONS = [
    click.option("--config", "config_path", required=True, type=str, help="Experiment config JSON."),
    click.option("--seed", type=int, default=None, help="Override master seed."),
    click.option("--out", type=str, default=None, help="Override output directory."),
]


def _with_config_options(fn):
    for opt in reversed(_CONFIG_OPTIONS):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Synthesize, search and evaluate XOR-network scan-gating controllers."""


@main.command("gen-cubes")
@_with_config_options
def cmd_gen_cubes(config_path: str, seed: int | None, out: str | None) -> None:
    """Generate a synthetic cube workload from the configured profile."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out)
    if not cfg.profile_path:
        raise click.ClickException("config defines no workload profile")
    path = cfg.resolve_path(cfg.profile_path)
    if not path.is_file():
        raise click.ClickException(f"profile not found: {path}")
    profile = load_profile(path)
    if profile.n_chains != cfg.n_chains:
        raise click.ClickException(
            f"profile has {profile.n_chains} chains, config says {cfg.n_chains}"
        )
    try:
        cubes = generate_cubes(profile, stream_seed(cfg.master_seed, "cube-gen"))
    except ValueError as exc:
        raise click.ClickException(str(exc))
    out_file = cfg.out_path("cubes.txt")
    prov = cfg.provenance()
    lines = ["# " + " ".join(f"{k}={v}" for k, v in prov.items())]
    lines += [cube.usage.to01() for cube in cubes]
    out_file.write_text("\n".join(lines) + "\n")
    click.echo(f"wrote {len(cubes)} cubes to {out_file}")


@main.command("baseline")
@_with_config_options
@click.option("--levels", type=int, default=None, help="Override net levels (1 or 2).")
def cmd_baseline(config_path: str, seed: int | None, out: str | None, levels: int | None) -> None:
    """Emit the conventional seeded-random controller."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out, levels=levels)
    try:
        net = conventional_xornet(cfg.n_chains, cfg.n_control, cfg.taps, cfg.levels)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    out_file = cfg.out_path("baseline_xornet.json")
    save_xornet(net, out_file, provenance=cfg.provenance())
    click.echo(f"wrote {out_file}")


@main.command("search")
@_with_config_options
@click.option("--levels", type=int, default=None, help="Override net levels (1 or 2).")
@click.option("--sca-limit", type=float, default=None, help="Override the SCA limit.")
def cmd_search(
    config_path: str,
    seed: int | None,
    out: str | None,
    levels: int | None,
    sca_limit: float | None,
) -> None:
    """Run the genetic search and write the best net plus fitness trace."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out, levels=levels, sca_limit=sca_limit)
    cubes = cfg.load_workload()
    fixed_andnet = None
    if cfg.levels == 2:
        fixed_andnet = conventional_xornet(cfg.n_chains, cfg.n_control, cfg.taps, levels=2).level2
    try:
        result = run_ga(cubes, cfg.n_control, cfg.ga_config(), fixed_andnet)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    net_file = cfg.out_path("ga_xornet.json")
    trace_file = cfg.out_path("ga_trace.csv")
    save_xornet(result.best, net_file, provenance=cfg.provenance())
    write_trace_csv(result.trace, trace_file, provenance=cfg.provenance())
    click.echo(
        f"best fitness {result.best_fitness.value:.4f} "
        f"(ue={result.best_fitness.ue}, mean_sca={result.best_fitness.mean_sca:.4f}) "
        f"after {len(result.trace.records)} generations"
    )
    click.echo(f"wrote {net_file} and {trace_file}")


@main.command("evaluate")
@_with_config_options
@click.option("--xornet", "xornet_path", required=True, type=str, help="Controller JSON.")
@click.option("--cubes", "cubes_path", required=True, type=str, help="Cube file.")
@click.option("--sca-limit", type=float, default=None, help="Override the SCA limit.")
@click.option("--per-cube", is_flag=True, help="Also write per-cube outcomes as CSV.")
def cmd_evaluate(
    config_path: str,
    seed: int | None,
    out: str | None,
    xornet_path: str,
    cubes_path: str,
    sca_limit: float | None,
    per_cube: bool,
) -> None:
    """Score a controller on a cube file: metrics, merging and cycle count."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out, sca_limit=sca_limit)
    if not Path(xornet_path).is_file():
        raise click.ClickException(f"xornet file not found: {xornet_path}")
    if not Path(cubes_path).is_file():
        raise click.ClickException(f"cube file not found: {cubes_path}")
    net = load_xornet(xornet_path)
    try:
        cubes = load_cubes(cubes_path)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if cubes.n_chains != net.n_chains:
        raise click.ClickException(
            f"cube file has {cubes.n_chains} chains, net has {net.n_chains}"
        )
    fill_seed = stream_seed(cfg.master_seed, "encode-fill")
    report = evaluate_xornet(
        net, cubes, cfg.sca_limit, derived_seed(fill_seed, "evaluate"),
        keep_per_cube=per_cube,
    )
    if per_cube:
        write_per_cube_csv(report, cfg.out_path("per_cube.csv"))
    merged = incremental_merge(
        net, cubes, cfg.sca_limit, derived_seed(fill_seed, "merge")
    )
    cycles = total_cycles(
        CycleModel(net.n_control, cfg.d, cfg.c_in, cfg.n_cell, merged.pattern_count)
    )
    out_file = cfg.out_path("report.json")
    save_report(
        report,
        out_file,
        extra={
            "pattern_count": merged.pattern_count,
            "dropped_count": len(merged.dropped),
            "total_cycles": cycles,
            "provenance": cfg.provenance(),
        },
    )
    save_merge_report(
        merged, cfg.out_path("merge_report.json"), extra={"provenance": cfg.provenance()}
    )
    click.echo(
        f"ue={report.ue} (uns={report.uns} scae={report.scae}) "
        f"mean_sca={report.mean_sca:.4f} patterns={merged.pattern_count} cycles={cycles}"
    )
    click.echo(f"wrote {out_file}")


def run_sweep(cfg: ExperimentConfig, cbc_values: list[int]) -> list[dict]:
    """Search + evaluate once per control-bit count; returns one row per point.

    Each point derives its own substreams from the master seed and the CBC
    value, so points are independent and can be reproduced in isolation.
    """
    cubes = cfg.load_workload()
    rows = []
    for cbc in cbc_values:
        if cbc < 1:
            raise click.ClickException(f"cbc must be >= 1, got {cbc}")
        point_seed = derived_seed(cfg.master_seed, "cbc", cbc)
        fixed_andnet = None
        if cfg.levels == 2:
            fixed_andnet = conventional_xornet(
                cfg.n_chains, cbc, min(cfg.taps, cbc), levels=2
            ).level2
        ga_cfg = cfg.ga_config(master_seed=point_seed)
        if ga_cfg.taps_init > cbc:
            ga_cfg.taps_init = cbc
        result = run_ga(cubes, cbc, ga_cfg, fixed_andnet)
        fill_seed = stream_seed(point_seed, "encode-fill")
        report = evaluate_xornet(
            result.best, cubes, cfg.sca_limit, derived_seed(fill_seed, "evaluate")
        )
        merged = incremental_merge(
            result.best, cubes, cfg.sca_limit, derived_seed(fill_seed, "merge")
        )
        cycles = total_cycles(
            CycleModel(cbc, cfg.d, cfg.c_in, cfg.n_cell, merged.pattern_count)
        )
        rows.append(
            {
                "cbc": cbc,
                "ue": report.ue,
                "pattern_count": merged.pattern_count,
                "total_cycles": cycles,
            }
        )
    return rows


@main.command("sweep-cbc")
@_with_config_options
@click.option(
    "--cbc-list",
    required=True,
    type=str,
    help="Comma-separated control-bit counts, e.g. 8,10,12.",
)
def cmd_sweep_cbc(config_path: str, seed: int | None, out: str | None, cbc_list: str) -> None:
    """Sweep the control-bit count; emit a CSV of ue/patterns/cycles per point."""
    cfg = ExperimentConfig.load(config_path, seed=seed, out=out)
    try:
        cbc_values = [int(tok) for tok in cbc_list.split(",") if tok.strip()]
    except ValueError:
        raise click.ClickException(f"bad --cbc-list: {cbc_list!r}")
    if not cbc_values:
        raise click.ClickException("empty --cbc-list")
    rows = run_sweep(cfg, cbc_values)
    out_file = cfg.out_path("cbc_sweep.csv")
    with open(out_file, "w", newline="") as fh:
        fh.write("# " + " ".join(f"{k}={v}" for k, v in cfg.provenance().items()) + "\n")
        writer = csv.DictWriter(fh, fieldnames=["cbc", "ue", "pattern_count", "total_cycles"])
        writer.writeheader()
        writer.writerows(rows)
    for row in rows:
        click.echo(
            f"cbc={row['cbc']}: ue={row['ue']} patterns={row['pattern_count']} "
            f"cycles={row['total_cycles']}"
        )
    click.echo(f"wrote {out_file}")


if __name__ == "__main__":
    main()
