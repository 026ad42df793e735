import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

from trispec import (
    Box,
    CertifierConfig,
    Positive,
    ResourceCapError,
    RunConfig,
    Signature,
    SignatureRegion,
    brute_force_head,
    build_star_ball,
    cert_frame,
    cert_report_model,
    certify_positive,
    comparison_frame,
    config_from_env,
    dump_json,
    dump_svg,
    forms_frame,
    grid_report,
    grid_signatures,
    head_frame,
    head_report,
    load_config,
    parse_box,
    parse_expression,
    parse_locus,
    predicted_head,
    render,
    rho5_certificate,
    rho_frame,
    rho_star_report,
    sample_minimum,
    validate_grid,
    validation_frame,
    write_output,
)

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4


def _common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--cfg", type=str, default="", help="Path to a JSON run config")
    ap.add_argument("--format", choices=["text", "json", "csv"], default=None)
    ap.add_argument("--out", type=str, default=None, help="Write output to this path")
    ap.add_argument("--jobs", type=int, default=None, help="Worker processes")
    ap.add_argument("--seed", type=int, default=None, help="Seed for sampled checks")
    ap.add_argument("--quiet", action="store_true", help="Only log warnings")


def _signature_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("r")
    ap.add_argument("p")
    ap.add_argument("q", help="integer or inf")


def _brute_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--cutoff", type=float, default=None)
    ap.add_argument("--max-word", type=int, default=None)
    ap.add_argument("--conj-depth", type=int, default=None)


def _cert_args(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--eps", type=float, default=None)
    ap.add_argument("--depth", type=int, default=None, help="Maximal bisection depth")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trispec", description="Length spectrum heads of triangle groups")
    sub = ap.add_subparsers(dest="command", required=True)

    head = sub.add_parser("head", help="Predicted spectrum head")
    _signature_args(head)
    _brute_args(head)
    head.add_argument("--brute", action="store_true", help="Add the brute-force head")
    _common(head)

    val = sub.add_parser("validate", help="Cross-validate a grid of signatures")
    val.add_argument("--sig", action="append", default=None, help="Signature such as 4,5,6")
    val.add_argument("--rmin", type=int, default=None)
    val.add_argument("--rmax", type=int, default=None)
    val.add_argument("--pmax", type=int, default=None)
    val.add_argument("--qmax", type=int, default=None)
    val.add_argument("--ball", type=int, default=None, help="Star-ball radius (0 skips graph checks)")
    _brute_args(val)
    _common(val)

    forms = sub.add_parser("forms", help="Closed forms")
    forms_sub = forms.add_subparsers(dest="action", required=True)
    table = forms_sub.add_parser("table", help="X, Y, Z, Δ, sides, contact data, L-table")
    _signature_args(table)
    _common(table)

    graph = sub.add_parser("graph", help="Star graph E*")
    graph_sub = graph.add_subparsers(dest="action", required=True)
    rho = graph_sub.add_parser("rho-star", help="ρ*(2..N) and the sphere-5 comparison")
    _signature_args(rho)
    rho.add_argument("--n", type=int, default=5)
    _common(rho)
    ball = graph_sub.add_parser("ball", help="Star ball summary and SVG dump")
    _signature_args(ball)
    ball.add_argument("--ball", type=int, default=None)
    ball.add_argument("--svg", type=str, default=None)
    _common(ball)

    cert = sub.add_parser("certify", help="Interval certification")
    cert_sub = cert.add_subparsers(dest="action", required=True)
    rho5 = cert_sub.add_parser("rho5", help="Sphere-5 bound per path type")
    _cert_args(rho5)
    rho5.add_argument("--n-max", type=int, default=None)
    rho5.add_argument("--no-tails", action="store_true")
    rho5.add_argument(
        "--box",
        nargs="?",
        const="full",
        default=None,
        help="Continuous box instead of pinned cells: full or x0:x1,y0:y1,z0:z1",
    )
    _common(rho5)
    poly = cert_sub.add_parser("poly", help="Positivity of a polynomial in X, Y, Z")
    poly.add_argument("expr", help='e.g. "(2*Y-1)*(Z-X)"')
    poly.add_argument("--exclude", action="append", default=[], help="Y=1/2, X=Z or x,y,z")
    poly.add_argument("--samples", type=int, default=0, help="Sampled soundness check")
    _cert_args(poly)
    _common(poly)
    return ap


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.cfg) if args.cfg else None
    cfg = config_from_env(cfg)
    if args.format is not None:
        cfg.output.format = args.format
    if args.out is not None:
        cfg.output.out = Path(args.out)
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if args.seed is not None:
        cfg.seed = args.seed
    for flag, target, attr in (
        ("cutoff", cfg.brute, "cutoff"),
        ("max_word", cfg.brute, "max_word"),
        ("conj_depth", cfg.brute, "conj_depth"),
        ("ball", cfg.graph, "ball"),
        ("eps", cfg.cert, "eps"),
        ("depth", cfg.cert, "max_depth"),
        ("n_max", cfg.cert, "n_max"),
        ("rmin", cfg.grid, "rmin"),
        ("rmax", cfg.grid, "rmax"),
        ("pmax", cfg.grid, "pmax"),
        ("qmax", cfg.grid, "qmax"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(target, attr, value)
    if getattr(args, "no_tails", False):
        cfg.cert.tails = False
    if getattr(args, "svg", None):
        cfg.output.svg = Path(args.svg)
    if getattr(args, "sig", None):
        cfg.signatures = args.sig
    cfg.check()
    return cfg


def _sig(args: argparse.Namespace) -> Signature:
    return Signature.of(args.r, args.p, args.q)


def cmd_head(args: argparse.Namespace, cfg: RunConfig) -> int:
    sig = _sig(args)
    pred = predicted_head(sig)
    brute = None
    if args.brute:
        brute = brute_force_head(
            sig,
            cutoff=cfg.brute.cutoff,
            max_word=cfg.brute.max_word,
            conj_depth=cfg.brute.conj_depth,
            tile_budget=cfg.brute.tile_budget,
        )
    fmt = cfg.output.format
    if fmt == "json":
        text = dump_json(head_report(pred, brute, config=cfg.as_dict()))
    else:
        text = render(head_frame(pred, brute), fmt)
        if fmt == "text" and pred.open_tail:
            text += "(open tail: next values not determined)\n"
    write_output(text, cfg.output.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, cfg: RunConfig) -> int:
    if cfg.signatures:
        sigs = [Signature.parse(s) for s in cfg.signatures]
    else:
        g = cfg.grid
        if g.rmin > g.rmax or (g.pmax and g.pmax > g.qmax) or g.qmax < 3:
            msg = f"malformed range rmin={g.rmin} rmax={g.rmax} pmax={g.pmax} qmax={g.qmax}"
            raise ValueError(msg)
        sigs = grid_signatures(g)
    reports = validate_grid(sigs, cfg.brute, cfg.graph, jobs=cfg.jobs)
    fmt = cfg.output.format
    if fmt == "json":
        text = dump_json(grid_report(reports, cfg.as_dict()))
    else:
        text = render(validation_frame(reports), fmt)
    write_output(text, cfg.output.out)
    bad = [r.sig.label for r in reports if not r.ok]
    if bad:
        logger.warning("Mismatches for: %s", "; ".join(bad))
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_forms(args: argparse.Namespace, cfg: RunConfig) -> int:
    write_output(render(forms_frame(_sig(args)), cfg.output.format), cfg.output.out)
    return EXIT_OK


def cmd_graph(args: argparse.Namespace, cfg: RunConfig) -> int:
    sig = _sig(args)
    fmt = cfg.output.format
    if args.action == "rho-star":
        if not 2 <= args.n <= 5:
            msg = f"--n must be between 2 and 5, got {args.n}"
            raise ValueError(msg)
        star = build_star_ball(sig, args.n, cap=cfg.graph.max_ball)
        text = render(rho_frame(star, args.n), fmt)
        if args.n == 5:
            text += render(comparison_frame(rho_star_report(sig, star)), fmt)
        write_output(text, cfg.output.out)
        return EXIT_OK

    star = build_star_ball(sig, cfg.graph.ball, cap=cfg.graph.max_ball)
    sizes = {k: len(star.sphere(k)) for k in range(star.radius + 1)}
    logger.info("Ball (%s) radius %s: %s nodes", sig.label, star.radius, len(star.nodes))
    rows = "".join(f"sphere {k}: {n} nodes\n" for k, n in sizes.items())
    write_output(rows, cfg.output.out)
    if cfg.output.svg:
        dump_svg(star, cfg.output.svg)
    return EXIT_OK


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> int:
    cc: CertifierConfig = cfg.cert
    fmt = cfg.output.format
    if args.action == "rho5":
        if args.box:
            region = parse_box(args.box, cc.eps)
        else:
            region = SignatureRegion(n_max=cc.n_max, tails=cc.tails, eps=cc.eps)
        report = rho5_certificate(region, eps=cc.eps, max_depth=cc.max_depth, jobs=cfg.jobs)
        if fmt == "json":
            text = dump_json(cert_report_model(report, cfg.as_dict()))
        else:
            text = render(cert_frame(report), fmt)
        write_output(text, cfg.output.out)
        return EXIT_OK if report.ok else EXIT_MISMATCH

    expr = parse_expression(args.expr)
    exclusions = tuple(parse_locus(e) for e in args.exclude)
    box = Box.full(cc.eps)
    verdict = certify_positive(expr, box, exclusions, eps=cc.eps, max_depth=cc.max_depth)
    lines = [f"{expr.label}: {type(verdict).__name__}", f"  {verdict}"]
    if args.samples:
        low = sample_minimum(expr, box, args.samples, cfg.seed, exclusions, cc.eps)
        lines.append(f"  sampled minimum over {args.samples} points: {low:.7g}")
    write_output("\n".join(lines) + "\n", cfg.output.out)
    return EXIT_OK if isinstance(verdict, Positive) else EXIT_MISMATCH


COMMANDS = {
    "head": cmd_head,
    "validate": cmd_validate,
    "forms": cmd_forms,
    "graph": cmd_graph,
    "certify": cmd_certify,
}


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except ResourceCapError as e:
        logger.error("Resource cap: %s", e)
        return EXIT_CAP
    except (ValueError, OSError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
