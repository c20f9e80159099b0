"""Noisy-dictionary robustness: self-classify the training files for a few
noise levels and seeds, one CSV per (sigma, seed).

    python scripts/run_noise.py data/afp.fa data/non_afp.fa -o results/ --sigmas 0 0.5 1
"""

import argparse
import os
from pathlib import Path

import numpy as np

from afpsrc.classifier import SolverParams
from afpsrc.config import Config
from afpsrc.encoding import encode_batch
from afpsrc.experiments import DEFAULT_PC_LIST, noise_robustness, write_sweep_csv
from afpsrc.seqio import read_fasta


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("afp", type=Path)
    ap.add_argument("non_afp", type=Path)
    ap.add_argument("-o", "--out-dir", type=Path, default=Path("results"))
    ap.add_argument("--sigmas", type=float, nargs="+", default=[0.0, 1.0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--stage", choices=["projected", "raw"], default="projected")
    ap.add_argument("--encoding", default="seg2")
    ap.add_argument("--pc-list", type=int, nargs="+", default=list(DEFAULT_PC_LIST))
    ap.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    afps = read_fasta(args.afp, drop_ambiguous=True)
    nons = read_fasta(args.non_afp, drop_ambiguous=True)
    X = encode_batch(afps + nons, args.encoding)
    y = np.array([1] * len(afps) + [2] * len(nons), dtype=np.int8)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for sigma in args.sigmas:
        for seed in args.seeds:
            res = noise_robustness(X, y, sigma, seed, args.pc_list, SolverParams(), args.stage, args.jobs)
            cfg = Config(encoding=args.encoding, seed=seed, sigma=sigma, noise_stage=args.stage,
                         pc_list=tuple(args.pc_list))
            path = args.out_dir / f"noise_sigma{sigma:g}_seed{seed}.csv"
            write_sweep_csv(path, res, {**cfg.as_header(), "n_train": len(y)})
            accs = ", ".join(f"{r.pcs}:{100 * r.report.accuracy:.1f}" for r in res.completed)
            print(f"sigma={sigma:g} seed={seed}  accuracy by PCs  {accs}")


if __name__ == "__main__":
    main()
