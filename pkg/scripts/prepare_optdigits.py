"""Recreate the UCI optdigits partitions (optdigits.tra / optdigits.tes).

The UCI archive is not always reachable, but the ``keel-ds`` wheel on PyPI
ships ``optdigits.dat``: the 3823 training rows followed by the 1797 test rows,
in the original order.  This script slices it back into the two partition
files and, when scikit-learn is installed, checks the test rows against
sklearn's bundled copy of the test partition.

    python scripts/prepare_optdigits.py                 # pip-downloads keel-ds
    python scripts/prepare_optdigits.py --wheel path/to/keel_ds-*.whl
"""
from __future__ import annotations

import argparse
import glob
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

import numpy as np

N_TRAIN = 3823
N_TEST = 1797
MEMBER = "keel_ds/data/balanced/raw/optdigits.dat"


def fetch_wheel(dest: str) -> str:
    subprocess.run(
        [sys.executable, "-m", "pip", "download", "--no-deps", "-q", "-d", dest, "keel-ds==0.2.5"],
        check=True,
    )
    return glob.glob(str(Path(dest) / "keel_ds-*.whl"))[0]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--wheel", help="local keel-ds wheel (downloaded when omitted)")
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data"))
    args = ap.parse_args(argv)

    with tempfile.TemporaryDirectory() as tmp:
        wheel = args.wheel or fetch_wheel(tmp)
        text = zipfile.ZipFile(wheel).read(MEMBER).decode()
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("@")]
    if len(rows) != N_TRAIN + N_TEST:
        raise SystemExit(f"expected {N_TRAIN + N_TEST} rows, found {len(rows)}")

    try:
        from sklearn.datasets import load_digits
    except ImportError:
        print("scikit-learn not installed; skipping test-partition check", file=sys.stderr)
    else:
        ref = load_digits()
        tail = np.array([[int(v) for v in r.split(",")] for r in rows[N_TRAIN:]])
        if not (np.array_equal(tail[:, :64], ref.data.astype(int)) and np.array_equal(tail[:, 64], ref.target)):
            raise SystemExit("test rows do not match sklearn's optdigits test partition")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "optdigits.tra").write_text("\n".join(rows[:N_TRAIN]) + "\n")
    (out / "optdigits.tes").write_text("\n".join(rows[N_TRAIN:]) + "\n")
    print(f"wrote {out / 'optdigits.tra'} ({N_TRAIN}) and {out / 'optdigits.tes'} ({N_TEST})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
