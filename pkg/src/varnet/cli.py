"""Command line front end: ``varnet stats|analyze|robust|gen``."""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import distfit, metrics, netbuild, percolate, svgplot, synthgen
from .ingest import Catalog, CatalogError, catalog_stats, dump_csv, dump_jsonl, parse_csv, parse_jsonl, sample

log = logging.getLogger("varnet")

EXIT_USAGE = 2
EXIT_ANALYSIS = 1


class UsageError(Exception):
    """Bad input or parameters: reported on stderr with exit code 2."""


class AnalysisError(Exception):
    """The input parsed but cannot support the requested analysis (exit code 1)."""


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    format: str | None = None
    normalize: bool = True
    min_overlap: int = 1
    sample_n: int | None = None
    seed: int = 0
    r2_min: float = 0.97
    min_window: int = 10
    min_segment: int = 5
    step: float = 0.02
    n_runs: int = 10
    mode: str = "static"
    out_dir: Path = Path(".")
    formats: tuple[str, ...] = ("json", "csv")
    workers: int = 1

    def validate(self) -> None:
        if self.min_overlap < 1:
            raise UsageError("--min-overlap must be >= 1")
        if not 0.0 < self.r2_min <= 1.0:
            raise UsageError("--r2-min must lie in (0, 1]")
        if self.min_window < 2 or self.min_segment < 2:
            raise UsageError("--min-window and --min-segment must be >= 2")
        if self.n_runs < 1:
            raise UsageError("--runs must be >= 1")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.sample_n is not None and self.sample_n < 0:
            raise UsageError("--sample must be >= 0")
        if self.mode not in ("static", "adaptive"):
            raise UsageError("--mode must be static or adaptive")
        bad = set(self.formats) - {"json", "csv", "svg"}
        if bad:
            raise UsageError(f"unknown output formats: {', '.join(sorted(bad))}")
        try:
            percolate.default_grid(self.step)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def read_config_file(path: Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment. Keys use flag names with ``-`` or ``_``."""
    out: dict[str, str] = {}
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def load_catalog(cfg: RunConfig) -> Catalog:
    records = []
    for path in cfg.inputs:
        fmt = cfg.format or ("csv" if path.suffix.lower() == ".csv" else "jsonl")
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                cat = parse_csv(fh, cfg.normalize) if fmt == "csv" else parse_jsonl(fh, cfg.normalize)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except CatalogError as exc:
            raise UsageError(f"{path}: {exc}") from None
        records.extend(cat.records)
    try:
        catalog = Catalog(tuple(records))
    except CatalogError as exc:
        raise UsageError(str(exc)) from None
    if cfg.sample_n is not None:
        if cfg.sample_n > len(catalog):
            raise UsageError(f"--sample {cfg.sample_n} exceeds the {len(catalog)} records")
        catalog = sample(catalog, cfg.sample_n, synthgen.derive_seed(cfg.seed, "sample"))
    return catalog


def write_outputs(out_dir: Path, files: dict[str, str]) -> None:
    """Write every file to a temp name first, then rename, so no partial output survives."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged: list[tuple[str, Path]] = []
    try:
        for name, content in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out_dir)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(content)
            staged.append((tmp, out_dir / name))
        for tmp, final in staged:
            os.replace(tmp, final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _json(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def _fit_json(points: distfit.CcdfPoints, cfg: RunConfig, kind: str) -> dict:
    try:
        fit = distfit.fit_power_law(points, cfg.r2_min, cfg.min_window)
    except distfit.FitError as exc:
        return {"kind": kind, "error": str(exc), "best_window": exc.best_window, "best_r2": exc.best_r2}
    return {"kind": kind, **fit.to_dict()}


def _fit_line(fit: dict, label: str) -> svgplot.Series | None:
    if "gamma" not in fit:
        return None
    lo, hi = fit["m_min"], fit["m_max"]
    ys = [10 ** (fit["intercept"] + fit["slope"] * math.log10(m)) for m in (lo, hi)]
    return svgplot.Series([lo, hi], ys, f"{label} gamma={fit['gamma']:.2f}", "line")


def cmd_stats(cfg: RunConfig) -> dict[str, str]:
    stats = catalog_stats(load_catalog(cfg))
    return {"stats.json": _json(stats.to_dict())}


def cmd_analyze(cfg: RunConfig) -> dict[str, str]:
    catalog = load_catalog(cfg)
    if len(catalog) == 0:
        raise UsageError("catalog is empty")
    network = netbuild.build_network(catalog, cfg.min_overlap)
    core = netbuild.largest_component(network)
    if core.n_nodes < 2:
        raise AnalysisError(
            f"largest component has {core.n_nodes} node; no datasets share "
            f"{cfg.min_overlap} or more variables"
        )
    report = metrics.full_report(core, cfg.workers)
    log.info("largest component: %d of %d nodes", core.n_nodes, network.n_nodes)

    occ = distfit.variable_occurrence_distribution(catalog)
    per = distfit.variables_per_dataset_distribution(catalog)
    deg = distfit.degree_distribution(core)
    occ_pts, per_pts, deg_pts = distfit.ccdf(occ), distfit.ccdf(per), distfit.ccdf(deg)
    knn = metrics.degree_correlation(core)

    occ_fit = _fit_json(occ_pts, cfg, "variable_occurrence")
    occ_fit["share_at_most_1"] = distfit.cumulative_share(occ, 1)
    occ_fit["share_at_most_2"] = distfit.cumulative_share(occ, 2)
    per_fit = _fit_json(per_pts, cfg, "variables_per_dataset")
    deg_fit = _fit_json(deg_pts, cfg, "degree")
    try:
        two = distfit.fit_two_regime(deg_pts, cfg.min_segment)
        two_json = {"kind": "degree", **two.to_dict()}
    except distfit.FitError as exc:
        two, two_json = None, {"kind": "degree", "error": str(exc)}

    files: dict[str, str] = {}
    if "json" in cfg.formats:
        files["metrics.json"] = _json(report.to_dict())
        files["var_freq_fit.json"] = _json(occ_fit)
        files["vars_per_data_fit.json"] = _json(per_fit)
        files["degree_fit.json"] = _json(deg_fit)
        files["degree_two_regime.json"] = _json(two_json)
    if "csv" in cfg.formats:
        files["var_freq_ccdf.csv"] = occ_pts.to_csv()
        files["vars_per_data_ccdf.csv"] = per_pts.to_csv()
        files["degree_ccdf.csv"] = deg_pts.to_csv()
        files["knn.csv"] = "k,knn\n" + "".join(f"{k},{v!r}\n" for k, v in knn.items())
    if "svg" in cfg.formats:
        panels = []
        for title, xl, pts, fit in (
            ("(a) variable occurrence", "m", occ_pts, occ_fit),
            ("(b) variables per dataset", "l", per_pts, per_fit),
        ):
            series = [svgplot.Series(pts.m, pts.ccdf, "ccdf")]
            line = _fit_line(fit, "fit")
            if line:
                series.append(line)
            panels.append(svgplot.Panel(title, xl, "ccdf", series))
        panels.append(svgplot.Panel("(c) degree correlation", "k", "knn(k)",
                                    [svgplot.Series(list(knn), list(knn.values()), "knn")]))
        deg_series = [svgplot.Series(deg_pts.m, deg_pts.ccdf, "ccdf")]
        if two is not None:
            for part, name in ((two.head, "head"), (two.tail, "tail")):
                line = _fit_line(part.to_dict(), name)
                if line:
                    deg_series.append(line)
        panels.append(svgplot.Panel("(d) degree", "k", "ccdf", deg_series))
        files["figure1.svg"] = svgplot.render(panels)
    return files


def cmd_robust(cfg: RunConfig) -> dict[str, str]:
    catalog = load_catalog(cfg)
    if len(catalog) == 0:
        raise UsageError("catalog is empty")
    core = netbuild.largest_component(netbuild.build_network(catalog, cfg.min_overlap))
    if core.n_nodes < 2:
        raise AnalysisError(f"largest component has {core.n_nodes} node; nothing to remove")
    grid = percolate.default_grid(cfg.step)
    rnd = percolate.random_removal_curve(
        core, grid, cfg.n_runs, synthgen.derive_seed(cfg.seed, "random-removal"), cfg.workers
    )
    tgt = percolate.targeted_removal_curve(core, grid, cfg.mode)
    files: dict[str, str] = {}
    if "csv" in cfg.formats or "json" in cfg.formats:
        files["robust_random.csv"] = rnd.to_csv()
        files["robust_targeted.csv"] = tgt.to_csv()
    if "svg" in cfg.formats:
        panels = [
            svgplot.Panel(f"({tag}) {c.strategy} removal", "f", "P(f)/P(0)",
                          [svgplot.Series(c.f, c.mean_ratio, c.strategy, "line")], log=False)
            for tag, c in (("a", rnd), ("b", tgt))
        ]
        files["robustness.svg"] = svgplot.render(panels)
    return files


def cmd_gen(kind: str, args: Sequence[str], output: Path, fmt: str) -> dict[Path, str]:
    try:
        spec = synthgen.GenSpec.from_args(kind, list(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dump = dump_csv if fmt == "csv" else dump_jsonl
    if spec.is_graph:
        network = synthgen.generate_graph(spec)
        stem = output.with_suffix("")
        return {
            output: dump(synthgen.network_to_catalog(network)),
            stem.with_name(stem.name + "_edges.csv"): netbuild.edge_list_csv(network),
        }
    return {output: dump(synthgen.generate_catalog(spec))}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("inputs", nargs="*", type=Path, help="catalog files (.jsonl or .csv)")
    p.add_argument("--config", type=Path, help="key=value file; flags override it")
    p.add_argument("--format", choices=("jsonl", "csv"), help="input format (default: by extension)")
    p.add_argument("--no-normalize", action="store_true", help="match raw labels exactly")
    p.add_argument("--min-overlap", type=int)
    p.add_argument("--sample", type=int, dest="sample_n", metavar="N", help="random sample of N records")
    p.add_argument("--seed", type=int)
    p.add_argument("--r2-min", type=float)
    p.add_argument("--min-window", type=int)
    p.add_argument("--min-segment", type=int)
    p.add_argument("--step", type=float, help="removal-fraction grid step")
    p.add_argument("--runs", type=int, dest="n_runs", help="random-removal repetitions")
    p.add_argument("--mode", choices=("static", "adaptive"), help="targeted-removal degree ordering")
    p.add_argument("-o", "--out-dir", type=Path)
    p.add_argument("--formats", help="comma-separated subset of json,csv,svg")
    p.add_argument("--workers", type=int, help="worker processes for BFS sweeps and removal runs")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varnet", description="Variable-linked dataset network analysis.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("stats", "catalog totals"),
        ("analyze", "network metrics, distributions and fits"),
        ("robust", "robustness under random and targeted node removal"),
    ):
        _add_common(sub.add_parser(name, help=help_))
    gen = sub.add_parser("gen", help="write a synthetic catalog")
    gen.add_argument("kind", help="complete|star|path|cycle|er|pa|zipf")
    gen.add_argument("params", nargs="*", help="positional generator parameters")
    gen.add_argument("-o", "--output", type=Path)
    gen.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    return parser


def make_config(ns: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(ns.config) if ns.config else {}
    cfg = RunConfig()
    conv = {
        "format": str, "min_overlap": int, "sample_n": int, "sample": int, "seed": int,
        "r2_min": float, "min_window": int, "min_segment": int, "step": float,
        "n_runs": int, "runs": int, "mode": str, "out_dir": Path, "formats": str, "workers": int,
        "no_normalize": lambda v: v.lower() in ("1", "true", "yes", "on"),
        "inputs": lambda v: [Path(p) for p in v.split(",") if p.strip()],
    }
    aliases = {"sample": "sample_n", "runs": "n_runs"}
    merged: dict[str, object] = {}
    for key, raw in file_values.items():
        if key not in conv:
            raise UsageError(f"unknown config key {key!r}")
        try:
            merged[aliases.get(key, key)] = conv[key](raw)
        except ValueError:
            raise UsageError(f"bad value for {key}: {raw!r}") from None
    for key in conv:
        if key in aliases or key in ("inputs", "no_normalize"):
            continue
        value = getattr(ns, key, None)
        if value is not None:
            merged[key] = value
    if ns.inputs:
        merged["inputs"] = list(ns.inputs)
    if ns.no_normalize:
        merged["no_normalize"] = True

    if "no_normalize" in merged:
        cfg.normalize = not merged.pop("no_normalize")
    formats = merged.pop("formats", None)
    if isinstance(formats, str):
        cfg.formats = tuple(f.strip() for f in formats.split(",") if f.strip())
    for key, value in merged.items():
        setattr(cfg, key, value)
    if not cfg.inputs:
        raise UsageError("no input files given")
    cfg.validate()
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(ns, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if ns.command == "gen":
            output = ns.output or Path(f"{ns.kind}.{ns.format}")
            files = cmd_gen(ns.kind, ns.params, output, ns.format)
            write_outputs(output.parent, {path.name: content for path, content in files.items()})
            return 0
        cfg = make_config(ns)
        command = {"stats": cmd_stats, "analyze": cmd_analyze, "robust": cmd_robust}[ns.command]
        write_outputs(cfg.out_dir, command(cfg))
    except UsageError as exc:
        print(f"varnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AnalysisError as exc:
        print(f"varnet: error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    except OSError as exc:
        print(f"varnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
