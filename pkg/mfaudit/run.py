"""
The mfaudit command line.

    mfaudit run P5 --seed 7 --trials 100
    mfaudit attack A2-sk --trials 100
    mfaudit evaluate --all --check-paper
    mfaudit cost --units default.units
    mfaudit deduce p2_attack.kb
    mfaudit report --output results/

"""

import argparse
from functools import partial
import logging
import os
import sys

from tqdm import tqdm

from .attacks import ATTACKS, get_attack
from .config import DEFAULT_CONFIG, OUTPUT_FORMATS, WorkbenchConfig
from .cost import CostReport, load_profiles, load_units, measure_primitives
from .deduction import ClosureLimits, derivable, load_kb
from .errors import (
    AttackInapplicable,
    ClosureLimitExceeded,
    ConfigError,
    FixtureParseError,
    MetadataOnlyProtocol,
    PrerequisiteUnmet,
    SelectorViolation,
    TermSyntaxError,
    UnknownProtocolError,
)
from .protocols import get_protocol, list_protocols
from .report import (
    AttackReport,
    CriteriaMatrix,
    CriteriaReport,
    DeductionReport,
    SessionReport,
    load_reference_matrix,
)
from .threat_models import attack_trials, collect_all, honest_trials

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_UNKNOWN = 2
EXIT_METADATA_ONLY = 3
EXIT_PREREQUISITE_UNMET = 4
EXIT_PARSE_ERROR = 5

EXIT_CODES_HELP = """exit codes:
  0  success
  1  results differ from what was expected
  2  unknown protocol or attack
  3  the protocol is described at metadata fidelity only
  4  the adversary lacks what the attack needs
  5  malformed fixture, knowledge base or configuration
"""

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def _data_file(path, subdirectory=""):
    """A path as given, or the packaged file of that name."""
    if os.path.exists(path):
        return path
    packaged = os.path.join(DATA_DIR, subdirectory, os.path.basename(path))
    return packaged if os.path.exists(packaged) else path


def _tracker(args, unit):
    return partial(tqdm, unit=unit, leave=False) if args.verbose else None


def _emit(config, report, args):
    """Print a report in the configured format, and publish it if asked."""
    if config.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_markdown())
    if args.output:
        report.publish(args.output)


def _models(ids, config):
    return [get_protocol(protocol_id, config.fixture_dir) for protocol_id in ids]


def cmd_run(args, config):
    if args.all:
        models = [m for m in _models(list_protocols(config.fixture_dir), config) if m.is_executable]
    elif args.protocol:
        models = _models([args.protocol], config)
    else:
        raise ConfigError("Name a protocol, or pass --all.")
    status = EXIT_OK
    for model in models:
        if not model.is_executable:
            raise MetadataOnlyProtocol(
                f"{model.id} is described at metadata fidelity only and cannot be run."
            )
        if args.variant:
            try:
                model = model.variant(args.variant)
            except KeyError as err:
                raise ConfigError(err.args[0]) from None
        transcripts = honest_trials(model, config, _tracker(args, "session"))
        report = SessionReport(model.id, transcripts, args.variant)
        logger.info("%s: %d/%d sessions agreed.", model.id, report.agreed, len(transcripts))
        _emit(config, report, args)
        if report.disagreements:
            status = EXIT_MISMATCH
    return status


def cmd_attack(args, config):
    if args.all:
        attacks = list(ATTACKS.values())
    elif args.attack:
        attacks = [get_attack(args.attack)]
    else:
        raise ConfigError("Name an attack, or pass --all.")
    outcomes, unmet = {}, []
    for attack in attacks:
        targets = [args.protocol] if args.protocol else list(attack.protocol_ids)
        for model in _models(targets, config):
            if not attack.applies_to(model):
                raise AttackInapplicable(f"{attack.label} does not target {model.id}.")
            adversary = config.adversary
            if args.no_compromise:
                adversary = (adversary or attack.default_adversary(model)).with_changes(
                    compromised=(), device_read=(), longterm_leak=False
                )
            try:
                runs = attack_trials(
                    attack.label,
                    model,
                    config,
                    adversary=adversary,
                    iterator_tracker=_tracker(args, "trial"),
                )
            except PrerequisiteUnmet as err:
                if not args.all:
                    raise
                logger.warning("%s", err)
                unmet.append((attack.label, model.id))
                continue
            for finding in runs[0].findings:
                logger.info("%s on %s: %s", attack.label, model.id, finding)
            outcomes[(attack.label, model.id)] = runs
    report = AttackReport(outcomes)
    _emit(config, report, args)
    # Every registered attack is expected to break its targets in every trial.
    failed = [key for key, rate in report.rates.items() if rate.successes != rate.trials]
    for attack_id, protocol in failed:
        logger.warning("%s did not succeed in every trial on %s.", attack_id, protocol)
    if failed:
        return EXIT_MISMATCH
    return EXIT_PREREQUISITE_UNMET if unmet else EXIT_OK


def _evaluate(args, config):
    ids = args.protocols if args.protocols and not args.all else list_protocols(config.fixture_dir)
    models = _models(ids, config)
    results = collect_all(models, config, _tracker(args, "protocol"))
    matrix = CriteriaMatrix.from_results(models, results)
    reference = load_reference_matrix(args.reference) if args.check_paper else None
    return CriteriaReport(matrix, reference)


def cmd_evaluate(args, config):
    report = _evaluate(args, config)
    _emit(config, report, args)
    for protocol, criterion, expected, computed in report.differences:
        logger.warning(
            "%s %s: expected %s, computed %s.",
            protocol,
            criterion,
            "pass" if expected else "fail",
            "pass" if computed else "fail",
        )
    return EXIT_MISMATCH if report.differences else EXIT_OK


def _cost(args, config):
    profiles = load_profiles()
    if args.protocols:
        unknown = [p for p in args.protocols if p not in profiles]
        if unknown:
            raise UnknownProtocolError(f"No published cost for {', '.join(unknown)}.")
        profiles = {p: profiles[p] for p in args.protocols}
    path = _data_file(args.units) if args.units else None
    try:
        units = load_units(path)
    except OSError as err:
        raise ConfigError(f"Cannot read {path}: {err.strerror}.") from None
    measured = None
    if args.measure:
        logger.info("Measuring unit costs over %d trials.", config.trials)
        measured = measure_primitives(config.suite, trials=config.trials, seed=config.seed)
    return CostReport(profiles, units, measured, z=args.z)


def cmd_cost(args, config):
    _emit(config, _cost(args, config), args)
    return EXIT_OK


def cmd_deduce(args, config):
    path = _data_file(args.kb, "knowledge")
    if args.max_depth <= 0:
        raise ConfigError("--max-depth must be positive.")
    try:
        kb, goal = load_kb(path, ClosureLimits(max_depth=args.max_depth))
    except OSError as err:
        raise ConfigError(f"Cannot read {path}: {err.strerror}.") from None
    if goal is None:
        raise FixtureParseError("The knowledge base has no goal", path)
    undecided = None
    try:
        trace = derivable(kb, goal, config.suite, strict=True)
    except ClosureLimitExceeded as err:
        trace, undecided = None, str(err)
    report = DeductionReport(goal, trace, os.path.basename(path), undecided=undecided)
    _emit(config, report, args)
    return EXIT_OK


def cmd_report(args, config):
    """Evaluate every protocol, run every attack and tabulate costs."""
    args.all, args.protocols, args.protocol, args.attack = True, [], None, None
    args.no_compromise = False
    criteria = _evaluate(args, config)
    criteria.publish(args.output)
    outcomes = {}
    for attack in ATTACKS.values():
        for model in _models(attack.protocol_ids, config):
            outcomes[(attack.label, model.id)] = attack_trials(
                attack.label, model, config, adversary=config.adversary
            )
    AttackReport(outcomes).publish(args.output)
    _cost(args, config).publish(args.output)
    return EXIT_MISMATCH if criteria.differences else EXIT_OK


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--seed", type=int, help="seed of every run (trial k uses seed + k)")
    common.add_argument("--trials", type=int, help="repetitions of batched runs")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="output format")
    common.add_argument(
        "--fixtures", help="directory of protocol descriptions (default: $MFAUDIT_FIXTURES)"
    )
    common.add_argument("--workers", type=int, help="protocols evaluated in parallel")
    common.add_argument("--output", help="also write the report and figures to this directory")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return common


def build_parser():
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="mfaudit",
        description="Audit multi-factor authentication protocols.",
        epilog=EXIT_CODES_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run honest sessions")
    r.add_argument("protocol", nargs="?")
    r.add_argument("--all", action="store_true", help="every executable protocol")
    r.add_argument("--variant", help="equations variant of the description")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("attack", parents=[common], help="run an attack")
    a.add_argument("attack", nargs="?")
    a.add_argument("--all", action="store_true", help="every registered attack")
    a.add_argument("--protocol", help="only this target")
    a.add_argument(
        "--no-compromise",
        action="store_true",
        help="the adversary holds no factor and reads no device",
    )
    a.set_defaults(func=cmd_attack)

    e = sub.add_parser("evaluate", parents=[common], help="score protocols against C1-C8")
    e.add_argument("protocols", nargs="*")
    e.add_argument("--all", action="store_true", help="every protocol")
    e.add_argument(
        "--check-paper",
        action="store_true",
        help="compare with the published matrix; differences exit 1",
    )
    e.add_argument("--reference", help="matrix to compare with (default: packaged)")
    e.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("cost", parents=[common], help="tabulate computation cost")
    c.add_argument("protocols", nargs="*")
    c.add_argument("--units", help="unit-cost file (default: packaged default.units)")
    c.add_argument("--measure", action="store_true", help="benchmark the primitives too")
    c.add_argument("--z", type=int, help="parameter of affine operation counts")
    c.set_defaults(func=cmd_cost)

    d = sub.add_parser("deduce", parents=[common], help="query the deduction engine")
    d.add_argument("kb", help="knowledge-base file")
    d.add_argument(
        "--max-depth",
        type=int,
        default=ClosureLimits.max_depth,
        help="rounds of rule application before giving up (default: %(default)s)",
    )
    d.set_defaults(func=cmd_deduce)

    p = sub.add_parser("report", parents=[common], help="write every report to a directory")
    p.add_argument("--units", help="unit-cost file (default: packaged default.units)")
    p.add_argument("--measure", action="store_true", help="benchmark the primitives too")
    p.add_argument("--z", type=int, help="parameter of affine operation counts")
    p.add_argument("--reference", help="matrix to compare with (default: packaged)")
    p.set_defaults(func=cmd_report, check_paper=True, output_default="mfaudit-report")
    return parser


def _configure_logging(args):
    level = logging.INFO if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.captureWarnings(True)


def _load_config(args):
    config = WorkbenchConfig.load(args.config) if args.config else DEFAULT_CONFIG
    return config.with_changes(
        seed=args.seed,
        trials=args.trials,
        format=args.format,
        fixture_dir=args.fixtures,
        workers=args.workers,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    if args.command == "report" and not args.output:
        args.output = args.output_default
    try:
        config = _load_config(args)
        return args.func(args, config)
    except (UnknownProtocolError, AttackInapplicable) as err:
        logger.error("%s", err)
        return EXIT_UNKNOWN
    except MetadataOnlyProtocol as err:
        logger.error("%s", err)
        return EXIT_METADATA_ONLY
    except PrerequisiteUnmet as err:
        logger.error("%s", err)
        return EXIT_PREREQUISITE_UNMET
    except (FixtureParseError, TermSyntaxError, SelectorViolation, ConfigError) as err:
        logger.error("%s", err)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
