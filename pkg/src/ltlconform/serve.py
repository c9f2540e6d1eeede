"""Serve a Mealy machine over the SUT line protocol: ``python -m ltlconform.serve FILE``."""
import sys

from .sut import parse_mealy, serve


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m ltlconform.serve MEALY_FILE", file=sys.stderr)
        return 2
    with open(argv[0], encoding="utf-8") as fh:
        machine = parse_mealy(fh.read())
    serve(machine)
    return 0


if __name__ == "__main__":
    sys.exit(main())
