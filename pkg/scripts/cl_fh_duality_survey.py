"""When are CL and FH dual?  Tabulate over every covering up to --n.

Compares duality against two candidate conditions: the covering is a
partition, and its reduct (blocks that are not unions of other blocks) is
a partition.
"""

import argparse
from collections import Counter

from covtop.covering import Op, duality_defect
from covtop.enumerate import enumerate_coverings
from covtop.sets import blocks_partition


def reduct(c):
    keep = []
    for b in c.masks:
        acc = 0
        for o in c.masks:
            if o != b and o & ~b == 0:
                acc |= o
        if acc != b:
            keep.append(b)
    return keep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args()
    print("n  coverings  dual  partition  reduct-partition  dual!=reduct-partition")
    for n in range(1, args.n + 1):
        tally = Counter()
        for c in enumerate_coverings(n):
            dual = not duality_defect(c, Op.CL, Op.FH)
            red = blocks_partition(reduct(c), c.universe.full)
            tally["all"] += 1
            tally["dual"] += dual
            tally["partition"] += c.is_partition
            tally["reduct"] += red
            tally["mismatch"] += dual != red
        print(f"{n}  {tally['all']:>9}  {tally['dual']:>4}  {tally['partition']:>9}  "
              f"{tally['reduct']:>16}  {tally['mismatch']:>22}")


if __name__ == "__main__":
    main()
