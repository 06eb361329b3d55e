"""Command-line interface.

    verdant <sites|gvi|sgvi|ndvi|compare|synth> [--config PATH] [overrides]

Exit codes: 0 success, 2 invalid input, 3 too little data to compute.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections import Counter
from pathlib import Path

from . import io, raster, stats, synth
from .aggregation import ZoneMetrics, aggregate_zones, thread_count
from .config import ProjectConfig, load_config, parse_months
from .exceptions import InsufficientDataError, ValidationError
from .imagery import filter_captures, green_view
from .network import place_sites

log = logging.getLogger("verdant")


def _outdir(cfg: ProjectConfig) -> Path:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    return cfg.output_dir


def cmd_sites(cfg: ProjectConfig) -> int:
    cfg.require("network")
    proj = io.projection_for(cfg.zones, cfg.planar)
    net = io.read_network(cfg.network, proj)
    sites = place_sites(net, cfg.spacing)
    out = _outdir(cfg) / "sites.csv"
    io.write_csv(out, io.SITES_HEADER,
                 ((s.site_id, s.link_id, s.offset, s.position.x, s.position.y, s.is_node) for s in sites))
    log.info("wrote %d sites to %s", len(sites), out)
    return 0


def _mode(values) -> int:
    counts = Counter(values)
    return min(counts, key=lambda k: (-counts[k], k))


def cmd_gvi(cfg: ProjectConfig) -> int:
    cfg.require("manifest")
    sites = io.read_sites(cfg.sites_path)
    provider = io.LocalDirectoryProvider(cfg.manifest, cfg.image_root)
    rows = []
    for sid, _ in sorted(sites, key=lambda s: s[0]):
        metas = filter_captures(provider.captures(sid), cfg.green_months, cfg.preferred_year)
        images, used = [], []
        for m in metas:
            data = provider.fetch(m)
            if data is None:
                log.warning("site %s: image at heading %g unreadable, skipped", sid, m.heading)
                continue
            try:
                images.append(io.decode_image(data))
            except ValidationError as exc:
                log.warning("site %s: heading %g: %s, skipped", sid, m.heading, exc)
                continue
            used.append(m)
        if not images:
            log.warning("site %s: no usable images, omitted", sid)
            continue
        gvi = green_view(images, cfg.green_threshold)
        rows.append((sid, gvi, len(images), _mode(m.year for m in used), _mode(m.month for m in used)))
    io.write_csv(_outdir(cfg) / "gvi.csv", io.GVI_HEADER, rows)
    return 0


def _site_records(cfg: ProjectConfig) -> list[tuple]:
    scores = io.read_gvi(cfg.gvi_path)
    return [(sid, xy, scores.get(sid)) for sid, xy in io.read_sites(cfg.sites_path)]


def cmd_sgvi(cfg: ProjectConfig) -> int:
    cfg.require("zones", "network")
    proj = io.projection_for(cfg.zones, cfg.planar)
    zones = io.read_zones(cfg.zones, proj)
    net = io.read_network(cfg.network, proj)
    metrics = aggregate_zones(zones, _site_records(cfg), net, thread_count())
    out = _outdir(cfg)
    rows = [(m.zone_id, m.sgvi, m.gvi_mean, m.gvi_median, m.site_count, m.road_length, m.excluded)
            for m in metrics]
    io.write_csv(out / "zones.csv", io.ZONES_HEADER, rows)
    props = {r[0]: {k: (io._num(v) if isinstance(v, float) else v) for k, v in zip(io.ZONES_HEADER[1:], r[1:])}
             for r in rows}
    io.write_zones_geojson(out / "zones.geojson", sorted(zones, key=lambda z: z.zone_id), props, proj)
    return 0


def cmd_ndvi(cfg: ProjectConfig) -> int:
    cfg.require("zones", "rasters")
    dated = []
    for pair in cfg.rasters:
        nir = raster.reflectance(raster.read_asc(pair["nir"]), cfg.raster_scale)
        red = raster.reflectance(raster.read_asc(pair["red"]), cfg.raster_scale)
        dated.append(raster.ndvi(nir, red))
    comp = raster.composite_mean(dated)
    out = _outdir(cfg)
    raster.write_asc(out / "ndvi_composite.asc", comp)
    # zones stay in the input coordinates, like the grids
    rows = []
    for z in sorted(io.read_zones(cfg.zones), key=lambda z: z.zone_id):
        vals = raster.zonal_values(comp, z)
        rows.append((z.zone_id, float(vals.mean()) if len(vals) else None, len(vals)))
    io.write_csv(out / "ndvi_zonal.csv", io.NDVI_HEADER, rows)
    return 0


def _read_metrics(out: Path) -> list[ZoneMetrics]:
    zpath, npath = out / "zones.csv", out / "ndvi_zonal.csv"
    ndvi = {}
    for i, row in enumerate(io.read_csv(npath, io.NDVI_HEADER), start=2):
        ndvi[row["zone_id"]] = io.parse_float(npath, i, "ndvi_mean", row["ndvi_mean"])
    metrics = []
    for i, row in enumerate(io.read_csv(zpath, io.ZONES_HEADER), start=2):
        f = {k: io.parse_float(zpath, i, k, row[k]) for k in ("sgvi", "gvi_mean", "gvi_median", "road_length_m")}
        metrics.append(ZoneMetrics(row["zone_id"], f["sgvi"] or 0.0, f["gvi_mean"], f["gvi_median"],
                                   int(row["site_count"]), f["road_length_m"] or 0.0,
                                   io.parse_bool(row["excluded"]), ndvi.get(row["zone_id"])))
    return metrics


def cmd_compare(cfg: ProjectConfig) -> int:
    out = _outdir(cfg)
    rows = stats.usable(_read_metrics(out))
    if len(rows) < 3:
        raise InsufficientDataError(f"only {len(rows)} usable zones; need at least 3")
    cols = stats.metric_columns(rows)
    mat = stats.correlation_matrix(rows)
    names = stats.METRIC_NAMES
    ids = [m.zone_id for m in rows]
    try:
        fit = stats.ols_fit(cols[:, 0], cols[:, 3], ids)
    except ValidationError as exc:
        raise InsufficientDataError(f"cannot regress NDVI on sGVI: {exc}") from None
    # nothing is written until every statistic has been computed
    io.write_csv(out / "correlation_matrix.csv", ("metric", *names),
                 ((names[i], *mat[i].tolist()) for i in range(4)))
    rho = mat[0, 3]
    io.write_csv(out / "regression.csv",
                 ("response", "regressor", "slope", "intercept", "r2", "n", "spearman_rho", "spearman_p_approx"),
                 [("ndvi", "sgvi", fit.slope, fit.intercept, fit.r_squared, len(rows),
                   rho, stats.spearman_pvalue(rho, len(rows)))])
    io.write_csv(out / "residuals.csv", ("zone_id", "residual"), ((k, fit.residuals[k]) for k in ids))
    fitted = fit.predict(cols[:, 0])
    io.write_csv(out / "scatter.csv", ("zone_id", *names, "ndvi_fitted", "residual"),
                 ((ids[i], *cols[i].tolist(), fitted[i], fit.residuals[ids[i]]) for i in range(len(ids))))
    desc = [stats.describe(cols[:, j]) for j in range(4)]
    io.write_csv(out / "descriptive.csv", ("metric", "n", "mean", "median", "sd", "min", "max"),
                 ((names[j], d.n, d.mean, d.median, d.sd, d.min, d.max) for j, d in enumerate(desc)))
    return 0


def cmd_synth(cfg: ProjectConfig, scenario: str, seed: int) -> int:
    if scenario not in synth.SCENARIOS:
        raise ValidationError(f"unknown scenario {scenario!r}")
    scene = synth.make_scene(scenario, seed)
    out = _outdir(cfg)
    inp = out / "inputs"
    inp.mkdir(exist_ok=True)
    io.write_zones_geojson(inp / "zones.geojson", scene.zones)
    io.write_network_geojson(inp / "network.geojson", scene.network)
    io.write_csv(inp / "sites.csv", io.SITES_HEADER,
                 ((s.site_id, s.link_id, s.offset, s.position.x, s.position.y, s.is_node) for s in scene.sites))
    io.write_csv(inp / "gvi.csv", io.GVI_HEADER,
                 ((s.site_id, scene.gvi[s.site_id], 6, None, None) for s in scene.sites))
    rasters = []
    for k, (nir, red) in enumerate(synth.scene_bands(scene), start=1):
        raster.write_asc(inp / f"nir_{k}.asc", nir)
        raster.write_asc(inp / f"red_{k}.asc", red)
        rasters.append({"nir": f"inputs/nir_{k}.asc", "red": f"inputs/red_{k}.asc"})
    truth = {str(z.zone_id): _maybe_num(synth.truth_network_mean(scene, cfg.oracle_step, z)) for z in scene.zones}
    io.write_json(out / "truth.json", {"scenario": scenario, "seed": seed, "step": cfg.oracle_step,
                                       "truth_network_mean": truth})
    io.write_json(out / "config.json", {
        "zones": "inputs/zones.geojson", "network": "inputs/network.geojson",
        "sites": "inputs/sites.csv", "gvi": "inputs/gvi.csv", "rasters": rasters,
        "planar": True, "raster_scale": 1.0, "oracle_step": cfg.oracle_step, "output_dir": "results"})
    return 0


def _maybe_num(v):
    return None if v is None else io._num(v)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration file")
    common.add_argument("--output-dir", type=Path)
    common.add_argument("--zones", type=Path)
    common.add_argument("--network", type=Path)
    common.add_argument("--sites", type=Path)
    common.add_argument("--gvi", type=Path)
    common.add_argument("--manifest", type=Path)
    common.add_argument("--image-root", type=Path)
    common.add_argument("--planar", action="store_true", default=None,
                        help="inputs are already in planar meters")
    common.add_argument("--green-months", type=parse_months, help="e.g. 4-10 or 4,5,6")
    common.add_argument("--preferred-year", type=int)
    common.add_argument("--spacing", type=float, help="site spacing in meters")
    common.add_argument("--green-threshold", type=int)
    common.add_argument("--raster-scale", type=float)
    common.add_argument("--oracle-step", type=float)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="verdant", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sites", parents=[common], help="place measurement sites along links")
    sub.add_parser("gvi", parents=[common], help="per-site GVI from an image manifest")
    sub.add_parser("sgvi", parents=[common], help="zonal sGVI, GVI mean and median")
    sub.add_parser("ndvi", parents=[common], help="NDVI composite and zonal means")
    sub.add_parser("compare", parents=[common], help="correlation matrix and regression")
    sp = sub.add_parser("synth", parents=[common], help="write a synthetic fixture directory")
    sp.add_argument("--scenario", default="fig4")
    sp.add_argument("--seed", type=int, default=0)
    return p


def _config(args) -> ProjectConfig:
    cfg = load_config(args.config) if args.config else ProjectConfig()
    return cfg.updated(output_dir=args.output_dir, zones=args.zones, network=args.network,
                       sites=args.sites, gvi=args.gvi, manifest=args.manifest, image_root=args.image_root,
                       planar=args.planar, green_months=args.green_months,
                       preferred_year=args.preferred_year, spacing=args.spacing,
                       green_threshold=args.green_threshold, raster_scale=args.raster_scale,
                       oracle_step=args.oracle_step)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        if args.command == "synth":
            return cmd_synth(cfg, args.scenario, args.seed)
        return {"sites": cmd_sites, "gvi": cmd_gvi, "sgvi": cmd_sgvi, "ndvi": cmd_ndvi,
                "compare": cmd_compare}[args.command](cfg)
    except InsufficientDataError as exc:
        print(f"verdant: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"verdant: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
