"""Rewrite the seed-0 golden fixtures.  Only run this after an intended format change.

    python3 tests/golden/regenerate.py
"""

import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, os.path.dirname(HERE))

from golden_cases import GOLDEN_CASES, dump  # noqa: E402


def main():
    for name, build in GOLDEN_CASES.items():
        with open(os.path.join(HERE, name), "w") as fh:
            fh.write(dump(build()))
        print("wrote", name)


if __name__ == "__main__":
    main()
