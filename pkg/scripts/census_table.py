"""Print the PG(3,q) / hyperbolic quadric census for several q, with timings.

    python scripts/census_table.py 2 3 4 5 7 8 9
"""
import argparse
import time

from pg3quad.cli import census
from pg3quad.gf import field_of_order


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("q", nargs="*", type=int, default=[2, 3, 4, 5, 7, 8, 9])
    args = parser.parse_args()

    names = None
    table = []
    for q in args.q:
        start = time.perf_counter()
        rows = census(field_of_order(q))
        elapsed = time.perf_counter() - start
        names = names or [r[0] for r in rows]
        table.append((q, rows, elapsed))

    print("quantity".ljust(34) + "".join(f"q={q}".rjust(14) for q, _, _ in table))
    for k, name in enumerate(names):
        cells = []
        for _, rows, _ in table:
            _, measured, _, ok = rows[k]
            cells.append((str(measured) + ("" if ok else " !")).rjust(14))
        print(name.ljust(34) + "".join(cells))
    print("seconds".ljust(34) + "".join(f"{t:14.2f}" for _, _, t in table))


if __name__ == "__main__":
    main()
