"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
3 computation guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import chen, gauss, milnor
from .diagram import (
    CDJError,
    CutDiagram,
    DiagramError,
    cdj_dumps,
    cdj_loads,
    validate,
)
from .spun import spun as spun_fn

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_GUARD = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        print(f"error: cannot read {path}: {e}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_diagram(path: str) -> CutDiagram:
    text = _read(path)
    if path.endswith(".gauss"):
        return gauss.to_cut_diagram(gauss.parse_gauss(text))
    return cdj_loads(text)


def _require_valid(d: CutDiagram) -> None:
    rep = validate(d)
    if not rep.ok:
        print(rep.render(), file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _write_out(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    d = _load_diagram(args.path)
    rep = validate(d)
    print(rep.render())
    return EXIT_OK if rep.ok else EXIT_VALIDATION


def cmd_invariants(args) -> int:
    d = _load_diagram(args.path)
    _require_valid(d)
    table = milnor.invariant_table(
        d,
        max_len=args.max_len,
        mode=args.mode,
        nonrepeated=args.nonrepeated,
        force=args.force,
        seed=args.seed,
    )
    if args.format == "json":
        print(json.dumps(table.to_json(), indent=2))
    else:
        print(table.render_text())
    return EXIT_OK


def cmd_import_gauss(args) -> int:
    g = gauss.parse_gauss(_read(args.path))
    d = gauss.to_cut_diagram(g)
    _write_out(cdj_dumps(d), args.output)
    return EXIT_OK


def cmd_spun(args) -> int:
    d = _load_diagram(args.path)
    _require_valid(d)
    result = spun_fn(d)
    _write_out(cdj_dumps(result.diagram), args.output)
    if args.output:
        for i in sorted(result.provenance):
            print(f"component {i}: {result.provenance[i]}")
    return EXIT_OK


def cmd_group(args) -> int:
    d = _load_diagram(args.path)
    _require_valid(d)
    q = args.q if args.q is not None else (d.ell if args.reduced else 3)
    if args.reduced:
        q = max(q, d.ell)
    ctx = chen.make_context(d, q, seed=args.seed)
    pres = chen.reduced_presentation(ctx) if args.reduced else chen.nilpotent_presentation(ctx)
    if args.format == "json":
        print(json.dumps(pres.structured(), indent=2))
    else:
        print(pres.render())
    return EXIT_OK


def cmd_moves(args) -> int:
    g = gauss.parse_gauss(_read(args.path))
    if args.script:
        try:
            script = json.loads(args.script)
        except json.JSONDecodeError as e:
            print(f"error: move script is not valid JSON: {e}", file=sys.stderr)
            return EXIT_USAGE
        for item in script:
            kind, loc = item[0], item[1]
            g = gauss.apply_move(g, kind, loc)
    if args.random:
        g = gauss.random_move_sequence(
            g, args.random, seed=args.seed or 0, allow_selfvirt=args.selfvirt
        )
    _write_out(gauss.render_gauss(g), args.output)
    return EXIT_OK


def cmd_kernel(args) -> int:
    d = _load_diagram(args.path)
    _require_valid(d)
    sequences = []
    for part in args.sequences.split(","):
        part = part.strip()
        if not part.isdigit():
            print(f"error: bad sequence {part!r}", file=sys.stderr)
            return EXIT_USAGE
        sequences.append(tuple(int(c) for c in part))
    comps = {s[-1] for s in sequences}
    if len(comps) != 1:
        print("error: all sequences must end with the same component index", file=sys.stderr)
        return EXIT_USAGE
    max_len = max(len(s) for s in sequences)
    comp = milnor.InvariantComputer(d, max_len=max_len, force=True)
    maps = [comp.milnor_map(s) for s in sequences]
    result = milnor.free_kernel(maps)
    for m in maps:
        print(
            f"map {''.join(map(str, m.sequence))}: modulus {m.modulus} values {m.values} "
            f"free kernel {result.per_map[''.join(map(str, m.sequence))]}"
        )
    print(f"intersection rank {result.rank}")
    for row in result.basis:
        print(f"  basis {row}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import selftest

    ok = selftest.run(seed=args.seed, verbose=True)
    return EXIT_OK if ok else EXIT_VALIDATION


def main(argv=None) -> int:
    parser = _Parser(prog="cutmilnor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a CDJ diagram file")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("invariants", help="invariant table of a diagram")
    p.add_argument("path")
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--mode", choices=("series", "word"), default="series")
    p.add_argument("--nonrepeated", action="store_true")
    p.add_argument("--force", action="store_true",
                   help="compute single-component tables instead of shortcutting")
    p.add_argument("--seed", type=int, default=None, help="road-network seed")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("import-gauss", help="convert a Gauss code to CDJ")
    p.add_argument("path")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_import_gauss)

    p = sub.add_parser("spun", help="rotation construction: CDJ in, CDJ out")
    p.add_argument("path")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_spun)

    p = sub.add_parser("group", help="nilpotent or reduced quotient presentation")
    p.add_argument("path")
    p.add_argument("-q", type=int, default=None)
    p.add_argument("--reduced", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(fn=cmd_group)

    p = sub.add_parser("moves", help="apply moves to a Gauss code")
    p.add_argument("path")
    p.add_argument("--script", default=None,
                   help='JSON list of [kind, location] pairs, e.g. [["R1", {"op": "delete", "arrow": 1}]]')
    p.add_argument("--random", type=int, default=0, help="apply this many random moves")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--selfvirt", action="store_true",
                   help="allow self-virtualization in random sequences")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_moves)

    p = sub.add_parser("kernel", help="free-kernel intersection rank of Milnor maps")
    p.add_argument("path")
    p.add_argument("--sequences", required=True, help="comma-separated index sequences, e.g. 13,23")
    p.set_defaults(fn=cmd_kernel)

    p = sub.add_parser("selftest", help="run the reduced-size property suites")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(fn=cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (gauss.GaussError, CDJError) as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except gauss.MoveError as e:
        print(f"move error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DiagramError as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except chen.DepthGuardError as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD
    except milnor.SequenceTooLong as e:
        print(f"guard exceeded: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
