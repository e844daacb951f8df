"""Command-line front end.

    periodmotives run SESSION.json [--format table|json] [--bound B] [--twist q] [--jobs N]
    periodmotives validate SESSION.json
    periodmotives <command> SESSION.json ARG [ARG ...]   # one query against the session's objects

Exit codes: 0 success, 1 schema or semantic error, 2 computation error.
"""

import argparse
import json
import sys

from .session import (
    ARGS,
    SessionError,
    emit_session,
    parse_session,
    results_json,
    results_table,
    run_session,
)


def _parser():
    p = argparse.ArgumentParser(prog="periodmotives", description="Exact period calculator for 1-motives.")
    p.add_argument("action", choices=["run", "validate", "emit", *ARGS], help="what to do")
    p.add_argument("session", help="path to a JSON session document ('-' for stdin)")
    p.add_argument("refs", nargs="*", help="object names for a single command, in argument order")
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.add_argument("--bound", type=int, default=None, help="relation bound for curve kernels")
    p.add_argument("--twist", type=int, default=None, help="default r for twist queries")
    p.add_argument("--q", type=int, nargs="*", default=None, help="q values for the report command")
    p.add_argument("--jobs", type=int, default=1, help="run independent queries concurrently")
    return p


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        text = _read(args.session)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        session = parse_session(text)
    except SessionError as exc:
        for e in exc.errors:
            print(f"schema error: {e}", file=sys.stderr)
        return 1
    if args.action == "validate":
        print("valid")
        return 0
    if args.action == "emit":
        sys.stdout.write(emit_session(session))
        return 0
    if args.action != "run":
        keys = list(ARGS[args.action])
        if len(args.refs) != len(keys):
            print(f"error: {args.action} takes {len(keys)} argument(s): {', '.join(keys)}", file=sys.stderr)
            return 1
        query = {"command": args.action, "args": dict(zip(keys, args.refs))}
        if args.action == "report" and args.q is not None:
            query["args"]["q"] = args.q
        raw = dict(session.raw, queries=[query])
        try:
            session = parse_session(json.dumps(raw))
        except SessionError as exc:
            for e in exc.errors:
                print(f"schema error: {e}", file=sys.stderr)
            return 1
    results = run_session(session, bound=args.bound, twist=args.twist, jobs=max(1, args.jobs))
    out = results_json(results) if args.format == "json" else results_table(results)
    sys.stdout.write(out)
    failed = [r for r in results["results"] if "error" in r]
    for r in failed:
        print(f"query {r['index']} ({r['command']}) failed: {r['error']}", file=sys.stderr)
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
