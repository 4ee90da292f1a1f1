# Copyright (c) 2026 Alessandro Orrù
# Licensed under MIT

import argparse
import dataclasses
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
import yaml
from thetaplane.coefficient_ring import Scalar, ThetaMatrix, parse_theta
from thetaplane.config import AppConfig, CliConfig
from thetaplane.element_syntax import (
    format_coefficient,
    format_element,
    format_element_file,
    format_monomial,
    parse_element,
    parse_element_file,
)
from thetaplane.errors import ElementSyntaxError, ThetaPlaneError
from thetaplane.k0 import k0_class
from thetaplane.matrix_algebra import (
    AlgMatrix,
    JetContext,
    evaluate_matrix,
    format_matrix,
    mat_adjoint,
    mat_mul,
    parse_matrix,
    projector_violations,
)
from thetaplane.messages import msg
from thetaplane.metrics import PerformanceMetrics
from thetaplane.projector_tools import format_report, make_test_projector, top_gram_check, trivialize
from thetaplane.theta_algebra import AlgebraSignature, Element, MultiIndex, evaluate, star

logger = logging.getLogger("[ CLI ]")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def setup_logging(level: str) -> None:
    # stderr only: stdout carries the deterministic results
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thetaplane", description="Exact arithmetic on theta-deformed planes")
    parser.add_argument("--config", default="config.yaml", help="YAML configuration file")
    parser.add_argument("--theta", dest="theta_path", help="theta config file")
    parser.add_argument("--mode", choices=("exact", "numeric"))
    parser.add_argument("--degree", type=int, help="truncation degree D")
    parser.add_argument("--tol", type=float, help="numeric tolerance")
    parser.add_argument("--seed", type=int, help="seed for gen-test")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))
    sub = parser.add_subparsers(dest="command", required=True)

    def element_source(p: argparse.ArgumentParser, allow_matrix: bool) -> None:
        if allow_matrix:
            p.add_argument("matrix", nargs="?", help="matrix file")
        p.add_argument("-e", "--expr", help="element expression")
        p.add_argument("-f", "--file", help="element file of 'name = expr' lines")
        p.add_argument("-m", type=int, dest="m", help="ambient dimension m")
        p.add_argument("-n", type=int, dest="n", help="half-dimension n (m = 2n, or 2n+1 with --odd)")
        p.add_argument("--odd", action="store_true", help="use m = 2n + 1")

    p = sub.add_parser("mul", help="product of two matrix files")
    p.add_argument("left")
    p.add_argument("right")

    element_source(sub.add_parser("star", help="star of an element or adjoint of a matrix"), allow_matrix=True)
    element_source(sub.add_parser("normalize", help="print the normal form of elements"), allow_matrix=False)
    element_source(sub.add_parser("eval", help="evaluate phases under theta"), allow_matrix=True)

    p = sub.add_parser("projcheck", help="check P*P = P = P* modulo degree > D")
    p.add_argument("matrix")

    p = sub.add_parser("trivialize", help="build U with U P U* = diag(I_r, 0)")
    p.add_argument("matrix")
    p.add_argument("-o", "--output", help="write U here instead of stdout")

    p = sub.add_parser("k0", help="K0 class of a projector")
    p.add_argument("matrix")

    p = sub.add_parser("gen-test", help="write a seeded test projector")
    p.add_argument("-n", type=int, dest="n", required=True)
    p.add_argument("-N", type=int, dest="N", required=True)
    p.add_argument("-r", type=int, dest="r", required=True)
    p.add_argument("--odd", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--unitary-out")

    p = sub.add_parser("gram", help="Gram coefficient of z^M zb^M in row k of P P*")
    p.add_argument("matrix")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-M", required=True, help="comma separated exponents m1,...,mn")
    p.add_argument("-t", type=int, default=0, help="x-exponent (odd m)")

    return parser


# Built-in defaults < config file < flags
def resolve_config(args: argparse.Namespace) -> tuple[CliConfig, str]:
    app = AppConfig.from_yaml(args.config)
    overrides = {
        key: value
        for key in ("theta_path", "mode", "degree", "tol", "seed")
        if (value := getattr(args, key)) is not None
    }
    cfg = dataclasses.replace(app.cli, **overrides)

    return cfg, args.log_level or app.logging.level


class Session:

    def __init__(self, cfg: CliConfig) -> None:
        self._cfg = cfg
        self._theta: ThetaMatrix | None = None


    @property
    def cfg(self) -> CliConfig:
        return self._cfg


    def theta(self, required_by: str | None = None) -> ThetaMatrix | None:
        if self._theta is None and self._cfg.theta_path:
            self._theta = parse_theta(_read(self._cfg.theta_path))
        if self._theta is None and required_by:
            raise UsageError(msg("cli.missing_theta", command=required_by))

        return self._theta


    def signature(self, args: argparse.Namespace) -> AlgebraSignature:
        if args.m is not None:
            m = args.m
        elif args.n is not None:
            m = 2 * args.n + (1 if args.odd else 0)
        else:
            raise UsageError(msg("cli.missing_signature"))
        theta = self.theta() if self._cfg.mode == "numeric" else None

        return AlgebraSignature.from_m(m, self._cfg.mode, theta)


    def ctx(self, sig: AlgebraSignature) -> JetContext:
        return JetContext.for_signature(sig, self._cfg.degree, self._cfg.tol)


    def matrix(self, path: str) -> AlgMatrix:
        return parse_matrix(_read(path), self.theta())


    def elements(self, args: argparse.Namespace, sig: AlgebraSignature) -> dict[str, Element]:
        if args.expr is not None and args.file is None:
            return {"": parse_element(args.expr, sig)}
        if args.file is not None and args.expr is None:
            return parse_element_file(_read(args.file), sig)

        raise UsageError(msg("cli.missing_input"))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
    logger.info(msg("cli.wrote_file", path=path))


def _render_elements(elements: dict[str, Element]) -> str:
    if list(elements) == [""]:
        return format_element(elements[""]) + "\n"

    return format_element_file(elements)


def _format_scalar(value: Scalar) -> str:
    if value.is_zero():
        return "0"
    negative, text = format_coefficient(value)
    text = text or "1"

    return f"-{text}" if negative else text


def _format_index(idx: MultiIndex) -> str:
    p = ",".join(map(str, idx.p))
    q = ",".join(map(str, idx.q))
    return f"({p};{q};{idx.t})" if idx.t else f"({p};{q})"


# --- Commands: each returns the text for stdout ---

def cmd_mul(session: Session, args: argparse.Namespace) -> str:
    return format_matrix(mat_mul(session.matrix(args.left), session.matrix(args.right)))


def cmd_star(session: Session, args: argparse.Namespace) -> str:
    if args.matrix is not None:
        return format_matrix(mat_adjoint(session.matrix(args.matrix)))
    sig = session.signature(args)
    return _render_elements({name: star(a) for name, a in session.elements(args, sig).items()})


def cmd_normalize(session: Session, args: argparse.Namespace) -> str:
    sig = session.signature(args)
    return _render_elements(session.elements(args, sig))


def cmd_eval(session: Session, args: argparse.Namespace) -> str:
    th = session.theta(required_by="eval")
    if args.matrix is not None:
        return format_matrix(evaluate_matrix(session.matrix(args.matrix), th))
    sig = session.signature(args)
    if not sig.is_exact:
        sig = AlgebraSignature(sig.n, sig.m)
    return _render_elements({name: evaluate(a, th) for name, a in session.elements(args, sig).items()})


def cmd_projcheck(session: Session, args: argparse.Namespace) -> str:
    P = session.matrix(args.matrix)
    violations = projector_violations(P, session.ctx(P.sig))
    if not violations:
        return msg("projcheck.yes") + "\n"
    first = violations[0]
    line = msg(
        "projcheck.violation",
        row=first.row,
        col=first.col,
        relation=first.relation,
        index=_format_index(first.index),
        monomial=format_monomial(first.index) or "1",
        coefficient=_format_scalar(first.value),
    )

    return f"{msg('projcheck.no')}\n{line}\n"


def cmd_trivialize(session: Session, args: argparse.Namespace, metrics: PerformanceMetrics) -> str:
    P = session.matrix(args.matrix)
    ctx = session.ctx(P.sig)
    logger.info(msg("trivialize.start", N=P.N, m=P.sig.m, mode=P.sig.mode, degree=ctx.D))
    result = trivialize(P, ctx, metrics)
    report = format_report(result) + "\n"
    if args.output:
        _write(args.output, format_matrix(result.U))
        return report

    return format_matrix(result.U) + report


def cmd_k0(session: Session, args: argparse.Namespace, metrics: PerformanceMetrics) -> str:
    P = session.matrix(args.matrix)
    return f"{k0_class(P, session.ctx(P.sig), metrics)}\n"


def cmd_gen_test(session: Session, args: argparse.Namespace) -> str:
    cfg = session.cfg
    m = 2 * args.n + (1 if args.odd else 0)
    P, V = make_test_projector(cfg.seed, args.n, args.N, args.r, max(cfg.degree, 1), m)
    logger.info(msg("gen_test.done", seed=cfg.seed, n=args.n, N=args.N, r=args.r, degree=max(cfg.degree, 1)))
    if args.unitary_out:
        _write(args.unitary_out, format_matrix(V))
    if args.output:
        _write(args.output, format_matrix(P))
        return ""

    return format_matrix(P)


def cmd_gram(session: Session, args: argparse.Namespace) -> str:
    P = session.matrix(args.matrix)
    try:
        M = tuple(int(part) for part in args.M.split(","))
    except ValueError as exc:
        raise UsageError(f"-M must be comma separated integers, got '{args.M}'") from exc
    return _format_scalar(top_gram_check(P, args.k, M, args.t)) + "\n"


def run(args: argparse.Namespace, cfg: CliConfig, metrics: PerformanceMetrics) -> str:
    session = Session(cfg)
    if cfg.mode == "numeric":
        session.theta(required_by="numeric mode")
    handlers = {
        "mul": lambda: cmd_mul(session, args),
        "star": lambda: cmd_star(session, args),
        "normalize": lambda: cmd_normalize(session, args),
        "eval": lambda: cmd_eval(session, args),
        "projcheck": lambda: cmd_projcheck(session, args),
        "trivialize": lambda: cmd_trivialize(session, args, metrics),
        "k0": lambda: cmd_k0(session, args, metrics),
        "gen-test": lambda: cmd_gen_test(session, args),
        "gram": lambda: cmd_gram(session, args),
    }
    with metrics.measure(f"command_{args.command}"):
        return handlers[args.command]()


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, level = resolve_config(args)
    except (ValueError, TypeError, yaml.YAMLError) as exc:
        print(msg("cli.config_error", error=exc), file=sys.stderr)
        return EXIT_USAGE
    setup_logging(level)
    metrics = PerformanceMetrics()

    try:
        output = run(args, cfg, metrics)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ElementSyntaxError as exc:
        print(msg("cli.syntax_error", error=exc), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(msg("cli.io_error", path=getattr(exc, "filename", None) or "?", error=exc.strerror or exc), file=sys.stderr)
        return EXIT_USAGE
    except (ThetaPlaneError, ValueError) as exc:
        print(msg("cli.domain_error", error=exc), file=sys.stderr)
        return EXIT_DOMAIN

    sys.stdout.write(output)
    metrics.log_summary()

    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
