"""Principal-component sweep over several split seeds.

Writes one CSV per seed and prints Youden's index per PC count, then checks
the expected shape: a rise from 10 PCs to a peak between 150 and 300 PCs and
a lower value at the top of the list.

    python scripts/run_sweep.py data/afp.fa data/non_afp.fa -o results/ --seeds 0 1 2 3 4
"""

import argparse
import logging
import os
import time
from pathlib import Path

from afpsrc.classifier import SolverParams
from afpsrc.config import Config
from afpsrc.encoding import encode_batch
from afpsrc.experiments import DEFAULT_PC_LIST, SplitSpec, pc_sweep, split_dataset, write_sweep_csv
from afpsrc.seqio import read_fasta


def shape_ok(youden: dict) -> bool:
    ks = sorted(youden)
    peak = max(ks, key=youden.get)
    return 150 <= peak <= 300 and youden[peak] > youden[ks[0]] and youden[ks[-1]] < youden[peak]


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("afp", type=Path)
    ap.add_argument("non_afp", type=Path)
    ap.add_argument("-o", "--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    ap.add_argument("--encoding", default="seg2")
    ap.add_argument("--train-per-class", type=int, default=300)
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--strict", action="store_true", help="fail on ambiguous residues instead of dropping")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    afps = read_fasta(args.afp, drop_ambiguous=not args.strict)
    nons = read_fasta(args.non_afp, drop_ambiguous=not args.strict)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    table = {}
    for seed in args.seeds:
        t0 = time.time()
        split = split_dataset(afps, nons, SplitSpec(args.train_per_class, seed))
        Xtr = encode_batch([it.record for it in split.train], args.encoding)
        Xte = encode_batch([it.record for it in split.test], args.encoding)
        res = pc_sweep(Xtr, split.labels(split.train), Xte, split.labels(split.test),
                       DEFAULT_PC_LIST, SolverParams(), jobs=args.jobs)
        cfg = Config(encoding=args.encoding, seed=seed, train_per_class=args.train_per_class)
        write_sweep_csv(args.out_dir / f"sweep_seed{seed}.csv", res,
                        {**cfg.as_header(), "n_train": len(split.train), "n_test": len(split.test)})
        table[seed] = {r.pcs: r.report.youden for r in res.completed}
        logging.info("seed %d done in %.1f min", seed, (time.time() - t0) / 60)

    pcs = sorted({k for row in table.values() for k in row})
    print("PCs   " + "  ".join(f"seed{s:<3d}" for s in args.seeds))
    for k in pcs:
        print(f"{k:<5d} " + "  ".join(f"{table[s].get(k, float('nan')):7.3f}" for s in args.seeds))
    good = [s for s in args.seeds if shape_ok(table[s])]
    print(f"rise-peak-decline shape in {len(good)}/{len(args.seeds)} seeds")


if __name__ == "__main__":
    main()
