# printing/console_print.py
"""Resúmenes de ancho fijo para la terminal, con el formato etiqueta ... valor del ticket."""
from typing import Iterable

WIDTH = 42


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "sí" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    if value is None:
        return "-"
    return str(value)


def pline(label: str, value, width: int = WIDTH) -> str:
    l = label
    r = _fmt(value)
    return l + " " * max(width - len(l) - len(r), 1) + r


def rule(width: int = WIDTH) -> str:
    return "-" * width


def ticket(title: str, pairs: Iterable[tuple[str, object]], footer: str | None = None,
           width: int = WIDTH) -> list[str]:
    lines = [title.center(width), rule(width)]
    lines += [pline(label, value, width) for label, value in pairs]
    lines.append(rule(width))
    if footer:
        lines.append(footer.center(width))
    return lines


def render_certificate(report: dict) -> list[str]:
    return ticket("CERTIFICADO", [
        ("Ruta:", report["route"]),
        ("avg H²:", report["avg_h_sq"]),
        ("lambda_1:", report["lambda1"]["value"]),
        ("tipo:", report["lambda1"]["kind"]),
        ("Margen:", report["margin"]),
        ("δ_cert:", report["delta_cert"]),
    ], footer=report["verdict"])


def render_lambda1(report: dict) -> list[str]:
    pairs = [("lambda_1:", report["value"]), ("tipo:", report["kind"])]
    if "radius" in report:
        pairs.append(("R:", report["radius"]))
    for row in report.get("series", []):
        pairs.append((f"  R={row['radius']}", row["value"]))
    return ticket("LAMBDA_1", pairs)


def render_hellinger(report: dict) -> list[str]:
    return ticket("HELLINGER", [(f"{k}:", v) for k, v in sorted(report.items()) if not isinstance(v, dict)])


def render_evidence(report: dict) -> list[str]:
    pairs = [(f"R={r}", f"{s:.6g} / {i:.6g}")
             for r, s, i in zip(report["radii"], report["sup_integrals"], report["inf_integrals"])]
    pairs += [("ρ̄ acotada:", report["flags"]["sup_bounded_hint"]),
              ("ρ̲ positiva:", report["flags"]["inf_positive_hint"])]
    return ticket("EVIDENCIA ∫ρ̄ / ∫ρ̲", pairs, footer="sólo indicios")


def render_near_isometry(report: dict) -> list[str]:
    return ticket("CASI-ISOMETRÍA", [
        ("R:", report["radius"]),
        ("Puntos en U:", report["points"]),
        ("C_R:", report["C_R"]),
        ("1 - C_R:", report["implied_inf_derivative"]),
        ("inf Dφ medido:", report["measured_inf_derivative"]),
    ], footer=report["conclusion"][:WIDTH])


def render_replay(report: dict) -> list[str]:
    if report["refused"]:
        return ticket("REPLAY", [("Rechazado:", True)], footer=report["reason"][:WIDTH])
    return ticket("REPLAY", [
        ("R:", report["radius"]),
        ("mín autovalor ψ:", report["psi_min_eigenvalue"]),
        ("‖η‖:", report["eta_norm"]),
        ("τ_trunc:", report["tau_trunc"]),
        ("β(1-ε):", report["beta_times_one_minus_eps"]),
        ("cota rigurosa:", report["rigorous_lower_bound"]),
        ("media ψ_s:", report["mean_psi_s"]),
        ("Rayleigh:", report["rayleigh"]),
        ("lambda_1:", report["lambda1"]["value"]),
        ("cadena:", report["flags"]["chain_holds"]),
        ("contrarrecíproco:", report["flags"]["contrapositive_holds"]),
    ])


def render_witness(report: dict) -> list[str]:
    pairs = [
        ("(a) no negativo:", report["a_nonnegative"]),
        ("(b) unitario:", report["b_unit"]),
        ("(c) defecto <= ε:", report["c_within_epsilon"]),
        ("Defecto:", report["defect"]),
        ("ε:", report["epsilon"]),
    ]
    pairs += [(f"  ε_{s}:", v) for s, v in sorted(report["generator_defects"].items())]
    return ticket("TESTIGO", pairs)
