# cli.py
import logging
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import typer

import config
from circle.actions import build_action, isometric_companion
from errors import AmencertError, InputError, PolicyError
from groups.words import FREE, FREE_ABELIAN
from hilbert.witnesses import overlap_defect, verify_witness
from measures.hellinger import affinity, avg_hellinger_sq_routes, hellinger, l1_distance, total_variation
from printing import console_print
from repos.configs import (
    RunConfig,
    build_action_from,
    build_arc,
    build_diffeo,
    build_lambda1,
    build_measure,
    build_witness,
    config_from_dict,
    parse_config,
)
from repos.reports import write_report, write_series, write_witness
from services.certify_service import certify_generator_derivative, certify_hellinger, margin_sweep
from services.evidence_service import evidence_theorem2, near_isometry_check
from services.replay_service import replay_theorem3
from spectral.laplacian import dirichlet_series

logger = logging.getLogger(__name__)

app = typer.Typer(help="amencert: certificados de no amenabilidad de acciones en el círculo")

# (payload, líneas de resumen)
Outcome = tuple[dict, list[str]]


def _certify(cfg: RunConfig, out_dir: Path) -> Outcome:
    action = build_action_from(cfg)
    lam = build_lambda1(cfg)
    route = cfg.params.get("route", "hellinger")
    if route == "hellinger":
        report = certify_hellinger(action, build_measure(cfg.measure, cfg.grid), lam, cfg.tolerances)
    elif route == "derivative":
        report = certify_generator_derivative(action, lam, cfg.tolerances)
    else:
        raise InputError(f"ruta desconocida {route!r}", "/params/route")
    payload = report.to_dict()
    sweep = cfg.params.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict) or not isinstance(sweep.get("amplitudes"), list):
            raise InputError("'sweep' necesita 'amplitudes'", "/params/sweep")
        thetas = sweep.get("thetas") or [action.generator(s).params.get("theta", 0.0)
                                         for s in cfg.group.generators if s.islower()]
        rows = margin_sweep(cfg.group, thetas, sweep["amplitudes"], cfg.grid, lam, cfg.tolerances)
        path = write_series(out_dir / "certify_sweep.csv", ["a", "avg_h_sq", "margin", "verdict"],
                            [(r.a, r.avg_h_sq, r.margin, r.verdict.value) for r in rows])
        payload["sweep_csv"] = path.name
    return payload, console_print.render_certificate(payload)


def _lambda1(cfg: RunConfig, out_dir: Path) -> Outcome:
    payload = build_lambda1(cfg).to_dict()
    radii = cfg.params.get("radii")
    if radii is not None:
        if not isinstance(radii, list) or not all(isinstance(r, int) and r >= 1 for r in radii):
            raise InputError("'radii' debe ser una lista de enteros >= 1", "/params/radii")
        series = dirichlet_series(cfg.group, radii, cfg.tolerances)
        payload["series"] = [v.to_dict() for v in series]
        payload["series_csv"] = write_series(out_dir / "lambda1_series.csv", ["R", "value"],
                                             [(v.radius, v.value) for v in series]).name
    return payload, console_print.render_lambda1(payload)


def _hellinger(cfg: RunConfig, out_dir: Path) -> Outcome:
    nu = build_measure(cfg.measure, cfg.grid)
    payload: dict = {}
    if "mu1" in cfg.params or "mu2" in cfg.params:
        mu1 = build_measure(cfg.params.get("mu1", {"kind": "lebesgue"}), cfg.grid, "/params/mu1")
        mu2 = build_measure(cfg.params.get("mu2", {"kind": "lebesgue"}), cfg.grid, "/params/mu2")
        payload.update({
            "hellinger": hellinger(mu1, mu2, nu),
            "affinity": affinity(mu1, mu2, nu),
            "l1_distance": l1_distance(mu1, mu2, nu),
            "total_variation": total_variation(mu1, mu2, nu),
        })
    if cfg.action is not None:
        via_rho, via_push = avg_hellinger_sq_routes(build_action_from(cfg), nu)
        payload.update({"avg_h_sq": via_rho, "avg_h_sq_pushforward": via_push})
    if not payload:
        raise InputError("nada que medir: indique params.mu1/mu2 o una acción", "/params")
    return payload, console_print.render_hellinger(payload)


def _evidence(cfg: RunConfig, out_dir: Path) -> Outcome:
    report = evidence_theorem2(build_action_from(cfg), build_measure(cfg.measure, cfg.grid), cfg.radius)
    payload = report.to_dict()
    payload["series_csv"] = write_series(out_dir / "evidence_series.csv", ["R", "sup_integral", "inf_integral"],
                                         report.rows()).name
    return payload, console_print.render_evidence(payload)


def _near_isometry(cfg: RunConfig, out_dir: Path) -> Outcome:
    action = build_action_from(cfg)
    comp = cfg.params.get("comparison")
    if comp is None:
        comparison = isometric_companion(action)
    else:
        gens = comp.get("generators") if isinstance(comp, dict) else None
        if not isinstance(gens, dict):
            raise InputError("'comparison' necesita 'generators'", "/params/comparison")
        comparison = build_action(cfg.group, {
            s: build_diffeo(spec, cfg.grid, f"/params/comparison/generators/{s}") for s, spec in gens.items()})
    payload = near_isometry_check(action, comparison, build_arc(cfg), cfg.radius).to_dict()
    return payload, console_print.render_near_isometry(payload)


def _replay(cfg: RunConfig, out_dir: Path) -> Outcome:
    lam = build_lambda1(cfg)
    if not lam.certifiable:
        raise PolicyError("la reproducción necesita lambda_1 exacto o una cota inferior certificada")
    report = replay_theorem3(build_witness(cfg), build_action_from(cfg), build_measure(cfg.measure, cfg.grid),
                             cfg.radius, lam, cfg.tolerances)
    payload = report.to_dict()
    return payload, console_print.render_replay(payload)


def _witness(cfg: RunConfig, out_dir: Path) -> Outcome:
    xi = build_witness(cfg)
    eps = cfg.params.get("epsilon", 0.1)
    if isinstance(eps, bool) or not isinstance(eps, (int, float)):
        raise InputError("'epsilon' debe ser un número", "/params/epsilon")
    payload = verify_witness(xi, build_action_from(cfg), float(eps), cfg.tolerances).to_dict()
    rows = list(xi.entries.values())
    if rows and all(np.all(r == rows[0][0]) for r in rows):
        payload["exact_overlap_defect"] = overlap_defect(xi.entries, cfg.group)
    payload["witness_json"] = write_witness(out_dir / "witness_xi.json", xi).name
    return payload, console_print.render_witness(payload)


COMMANDS: dict[str, Callable[[RunConfig, Path], Outcome]] = {
    "certify": _certify,
    "lambda1": _lambda1,
    "hellinger": _hellinger,
    "evidence": _evidence,
    "near-isometry": _near_isometry,
    "replay": _replay,
    "witness": _witness,
}


def run(cfg: RunConfig, command: str, out_dir: Path | None = None) -> int:
    """Ejecuta un comando y escribe su reporte; devuelve el código de salida."""
    out_dir = Path(out_dir or config.OUT_DIR)
    try:
        handler = COMMANDS[command]
    except KeyError:
        typer.secho(f"comando desconocido: {command}", fg=typer.colors.RED, err=True)
        return InputError.exit_code
    try:
        payload, lines = handler(cfg, out_dir)
        path = write_report(out_dir, command, payload, cfg)
    except AmencertError as exc:
        logger.error("%s falló: %s", command, exc)
        typer.secho(f"ERROR ({type(exc).__name__}): {exc}", fg=typer.colors.RED, err=True)
        return exc.exit_code
    for line in lines:
        typer.echo(line)
    typer.secho(f"OK: reporte en {path}", fg=typer.colors.GREEN)
    return 0


def _load_and_run(config_path: Path, command: str, out: Optional[Path]) -> None:
    try:
        cfg = parse_config(config_path)
    except AmencertError as exc:
        typer.secho(f"ERROR ({type(exc).__name__}): {exc}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=exc.exit_code)
    code = run(cfg, command, out)
    if code:
        raise typer.Exit(code=code)


CONFIG_OPT = typer.Option(..., "--config", "-c", help="Archivo JSON de la corrida")
OUT_OPT = typer.Option(None, "--out", "-o", help="Directorio de reportes (por omisión AMENCERT_OUT_DIR)")


@app.callback()
def main():
    logging.basicConfig(level=config.LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")


@app.command("certify")
def certify_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Certificado de Hellinger (o por derivadas con params.route = "derivative")"""
    _load_and_run(config_path, "certify", out)


def parse_group(text: str) -> dict:
    """'F2' -> libre de rango 2; 'Z2' o 'Z^2' -> libre abeliano."""
    t = text.strip().replace("^", "").upper()
    if len(t) >= 2 and t[0] in "FZ" and t[1:].isdigit():
        return {"family": FREE if t[0] == "F" else FREE_ABELIAN, "rank": int(t[1:])}
    raise InputError(f"grupo no reconocido {text!r} (use F2, Z2, ...)", "/group")


@app.command("lambda1")
def lambda1_cmd(
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Archivo JSON de la corrida"),
    group: Optional[str] = typer.Option(None, "--group", "-g", help="F2, F3, Z2, ..."),
    radius: Optional[int] = typer.Option(None, "--radius", "-r", help="Radio de Dirichlet"),
    exact: bool = typer.Option(False, "--exact", help="Valor cerrado"),
    out: Optional[Path] = OUT_OPT,
):
    """lambda_1 exacto o estimación de Dirichlet"""
    if config_path is not None:
        _load_and_run(config_path, "lambda1", out)
        return
    try:
        if group is None:
            raise InputError("indique --config o --group", "/group")
        data = {"group": parse_group(group)}
        if radius is not None and not exact:
            data["lambda1"] = {"kind": "dirichlet", "radius": radius}
            data["radius"] = radius
        cfg = config_from_dict(data)
    except AmencertError as exc:
        typer.secho(f"ERROR ({type(exc).__name__}): {exc}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=exc.exit_code)
    code = run(cfg, "lambda1", out)
    if code:
        raise typer.Exit(code=code)


@app.command("hellinger")
def hellinger_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Distancia/afinidad de Hellinger y promedio sobre generadores"""
    _load_and_run(config_path, "hellinger", out)


@app.command("evidence")
def evidence_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Series ∫ρ̄_R dν y ∫ρ̲_R dν (sólo indicios)"""
    _load_and_run(config_path, "evidence", out)


@app.command("near-isometry")
def near_isometry_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Criterio de cercanía C¹ a rotaciones sobre un arco"""
    _load_and_run(config_path, "near-isometry", out)


@app.command("replay")
def replay_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Reproduce ψ, Q, η y la cadena de Rayleigh sobre un testigo"""
    _load_and_run(config_path, "replay", out)


@app.command("witness")
def witness_cmd(config_path: Path = CONFIG_OPT, out: Optional[Path] = OUT_OPT):
    """Verifica (a), (b), (c) de un testigo de amenabilidad"""
    _load_and_run(config_path, "witness", out)


if __name__ == "__main__":
    app()
