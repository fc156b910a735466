import argparse
import sys
from pathlib import Path

# --- Ensure local packages (logic/) are importable ---------------------------
ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))
# -----------------------------------------------------------------------------

from logic.errors import BadConfig
from logic.runner import EXIT_BAD_CONFIG, SCENARIOS, parse_config, run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qnet",
        description="Quantum linear network coding + superdense coding simulator.",
        epilog=(
            "examples:\n"
            "  qnet prop1-compare k=10 n_b=1000\n"
            "  qnet prop1-combined k=3 n_b=4 oracle=on\n"
            "  qnet butterfly b1=1011 b2=0110\n"
            "  qnet decompose topology=loop out=loop.decomp.json"
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("options", nargs="*", metavar="key=value",
                   help="k, n_b, seed, oracle, latency_constant, verbose, b1, b2, topology, network, decomposition, out, simulate")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = parse_config([args.scenario, *args.options])
    except BadConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    log_func = (lambda m: print(m, file=sys.stderr)) if config.verbose else None
    outcome = run(config, log_func=log_func)
    stream = sys.stdout if outcome.status == 0 else sys.stderr
    stream.write(outcome.text)
    for kind, path in sorted(outcome.artifacts.items()):
        print(f"wrote {kind}: {path}", file=sys.stderr)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
