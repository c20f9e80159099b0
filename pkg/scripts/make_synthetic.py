"""Write synthetic FASTA inputs for trying the CLI without the real dataset.

Two sets are produced under OUT_DIR:

  proteins/afp.fa, proteins/non_afp.fa   composition-skewed random sequences
  clusters/afp.fa, clusters/non_afp.fa   training half of the two-cluster
  clusters/probes.fa, clusters/truth.csv benchmark, written as AAC-encodable
                                         sequences (use --encoding aac --pcs 10)
"""

import argparse
import csv
from pathlib import Path

import numpy as np

from afpsrc.experiments import composition_records, gaussian_clusters, synthetic_proteins
from afpsrc.seqio import write_fasta


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("out_dir", type=Path)
    ap.add_argument("--n-afp", type=int, default=400)
    ap.add_argument("--n-non", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    prot = args.out_dir / "proteins"
    prot.mkdir(parents=True, exist_ok=True)
    write_fasta(prot / "afp.fa", synthetic_proteins(args.n_afp, 1, args.seed))
    write_fasta(prot / "non_afp.fa", synthetic_proteins(args.n_non, 2, args.seed))

    clus = args.out_dir / "clusters"
    clus.mkdir(parents=True, exist_ok=True)
    Xd, yd, Xp, yp = gaussian_clusters(seed=42)
    recs = composition_records(np.vstack([Xd, Xp]), np.concatenate([yd, yp]), seed=args.seed)
    train, probes = recs[:len(yd)], recs[len(yd):]
    write_fasta(clus / "afp.fa", [r for r, y in zip(train, yd) if y == 1])
    write_fasta(clus / "non_afp.fa", [r for r, y in zip(train, yd) if y == 2])
    write_fasta(clus / "probes.fa", probes)
    with open(clus / "truth.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "label"])
        w.writerows((r.id, int(y)) for r, y in zip(probes, yp))
    print(f"wrote {prot} and {clus}")


if __name__ == "__main__":
    main()
