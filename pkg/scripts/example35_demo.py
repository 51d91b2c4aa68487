"""Run the worked example over Q(sqrt(T+1)), a module isogenous to each
of its Galois conjugates, and print the check report for a few field sizes."""
import json
import sys

from dforge.cli import cmd_example35


def main():
    sizes = [int(a) for a in sys.argv[1:]] or [3, 5, 9]
    for q in sizes:
        report = cmd_example35(q)
        print(json.dumps(report, indent=2, sort_keys=True))
        if not report["all_pass"]:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
