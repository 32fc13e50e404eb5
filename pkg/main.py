import argparse
import json
import logging
import os
import sys

from cbf_errors import CBFError, ScenarioError
from presets import export_preset, get_preset, list_presets
from run_database import RunDatabase
from sim_engine import (EXIT_INTEGRATION_FAILURE, EXIT_OK, load_scenario, preset_scenario, run_batch,
                        run_to_directory, validate, with_overrides)

logger = logging.getLogger("Main")


def _load(args):
    if args.scenario:
        return load_scenario(args.scenario)
    return preset_scenario(args.preset)


def _add_source(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--scenario", help="scenario JSON file")
    source.add_argument("--preset", help="named preset scenario (see `presets list`)")


def _record(args, summary, out_dir):
    if args.no_history:
        return
    with RunDatabase(args.db) as db:
        db.add_run(summary, out_dir=os.path.abspath(out_dir))


def cmd_run(args):
    scenario = _load(args)
    filter_mode = "strict" if args.strict else "lenient" if args.lenient else None
    scenario = with_overrides(scenario, seed=args.seed, filter_mode=filter_mode)
    diagnostics = validate(scenario)
    if diagnostics:
        for line in diagnostics:
            print(f"invalid scenario: {line}")
        return EXIT_INTEGRATION_FAILURE

    log = run_to_directory(scenario, args.out, dump_epochs=args.dump_epochs)
    summary = log.summary
    _record(args, summary, args.out)
    print(json.dumps(summary.to_dict(), indent=4))
    return summary.exit_code


def cmd_validate(args):
    diagnostics = validate(_load(args))
    if not diagnostics:
        print("scenario OK")
        return EXIT_OK
    for line in diagnostics:
        print(line)
    return EXIT_INTEGRATION_FAILURE


def cmd_presets(args):
    if args.action == "list":
        for name in list_presets():
            preset = get_preset(name)
            print(f"{name:20s} {preset['plant']:12s} goals={preset['goals']}")
    elif args.action == "show":
        print(json.dumps(get_preset(args.name), indent=4))
    else:
        export_preset(args.name, args.file)
        print(f"preset {args.name} written to {args.file}")
    return EXIT_OK


def cmd_batch(args):
    scenarios = [preset_scenario(name) for name in args.presets or []]
    scenarios += [load_scenario(path) for path in args.scenarios or []]
    if not scenarios:
        raise ScenarioError("batch needs at least one --presets or --scenarios entry")
    for scenario in scenarios:
        diagnostics = validate(scenario)
        if diagnostics:
            raise ScenarioError(f"{scenario.name}: {'; '.join(diagnostics)}")

    summaries = run_batch(scenarios, args.out, workers=args.workers, dump_epochs=args.dump_epochs)
    for summary in summaries:
        _record(args, summary, os.path.join(args.out, summary.name))
        print(f"{summary.name:20s} {summary.status:20s} min_h={summary.min_h:.4g} "
              f"goal_distance={summary.final_goal_distance:.3f}")
    return max(summary.exit_code for summary in summaries)


def cmd_history(args):
    with RunDatabase(args.db) as db:
        if args.delete is not None:
            if not db.delete_run(args.delete):
                print(f"error: no recorded run with id {args.delete}", file=sys.stderr)
                return EXIT_INTEGRATION_FAILURE
            logger.info(f"deleted run {args.delete} from the history")
            return EXIT_OK
        rows = db.get_run_history(limit=args.limit, scenario=args.name)
    for row in rows:
        run_id, scenario, plant, status, exit_code, min_h, min_psi1, distance, infeasible, sim_time, out_dir, ts = row
        print(f"{run_id:5d} {ts} {scenario:20s} {plant:12s} {status:20s} exit={exit_code} "
              f"min_h={min_h} goal_distance={distance} out={out_dir}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(description="Soft-max composite CBF safety filter simulator")
    parser.add_argument("-v", "--verbose", action="store_true", help="log every epoch (DEBUG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario")
    _add_source(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", action="store_true", help="abort on an infeasible QP")
    mode.add_argument("--lenient", action="store_true", help="pass u_d through an infeasible QP and flag it")
    p.add_argument("--dump-epochs", action="store_true", help="write epochs.jsonl with barrier parameters")
    p.add_argument("--no-history", action="store_true", help="do not record the run in the history database")
    p.add_argument("--db", default=None, help="history database path")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check a scenario without running it")
    _add_source(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("presets", help="list, show or export preset scenarios")
    actions = p.add_subparsers(dest="action", required=True)
    actions.add_parser("list")
    show = actions.add_parser("show")
    show.add_argument("name")
    export = actions.add_parser("export")
    export.add_argument("name")
    export.add_argument("file")
    p.set_defaults(func=cmd_presets)

    p = sub.add_parser("batch", help="run several scenarios in parallel")
    p.add_argument("--presets", nargs="+")
    p.add_argument("--scenarios", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--dump-epochs", action="store_true")
    p.add_argument("--no-history", action="store_true")
    p.add_argument("--db", default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("history", help="list or prune recorded runs")
    p.add_argument("--db", default=None)
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--name", default=None, help="only runs of this scenario")
    p.add_argument("--delete", type=int, default=None, metavar="RUN_ID", help="remove one recorded run")
    p.set_defaults(func=cmd_history)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    try:
        return args.func(args)
    except CBFError as e:
        logger.error(f"{args.command} 失败: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INTEGRATION_FAILURE


if __name__ == '__main__':
    sys.exit(main())
