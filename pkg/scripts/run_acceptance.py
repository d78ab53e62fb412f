"""Run the acceptance criteria and write a JSON report.

    python3 scripts/run_acceptance.py --out acceptance.json
    python3 scripts/run_acceptance.py --only 6 7
"""

import argparse
import json
import sys

from halfhecke.config import RunConfig
from halfhecke.verify import CRITERIA


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", type=int, nargs="*", default=sorted(CRITERIA))
    ap.add_argument("--cap", type=int, default=RunConfig.cap)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    cfg = RunConfig(cap=args.cap)
    report = []
    for num in args.only:
        rep = CRITERIA[num](cfg)
        print(f"criterion {num:>2} [{rep.name}]: {'PASS' if rep.passed else 'FAIL'} "
              f"(checked={rep.checked}, {rep.seconds or 0:.1f}s)", file=sys.stderr)
        report.append({"criterion": num, "seconds": round(rep.seconds or 0, 2), **rep.to_json()})
    text = json.dumps(report, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if all(r["pass"] for r in report) else 1


if __name__ == "__main__":
    sys.exit(main())
