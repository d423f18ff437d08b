#!/usr/bin/env python3
# Copyright 2026 The lshlift Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Optional MNIST experiment: plain LSH against LSH with lifted offsets.

Expected direction: on MNIST, plain origin-crossing LSH retrieves same-digit
neighbours at least as well as the lifted variant. Needs network access for
the download (torchvision) and a built `lshlift` binary.

    python3 scripts/mnist_check.py --cli build/tools/lshlift --workdir /tmp/mnist
"""

import argparse
import pathlib
import subprocess
import sys

import numpy as np


def load_mnist(root):
    from torchvision import datasets

    train = datasets.MNIST(root, train=True, download=True)
    x = train.data.numpy().reshape(len(train.data), -1).astype(np.float32) / 255.0
    y = train.targets.numpy().astype(np.int64)
    return x, y


def run(cli, *args):
    out = subprocess.run([cli, *args], check=True, capture_output=True, text=True)
    return out.stdout


def precision_at(report, bits):
    for line in report.splitlines():
        cells = line.split(",")
        if len(cells) == 5 and cells[0] == str(bits):
            return float(cells[2])
    raise RuntimeError("no report row for %d bits" % bits)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cli", default="build/tools/lshlift")
    ap.add_argument("--workdir", default="mnist_work")
    ap.add_argument("--learn", type=int, default=5000)
    ap.add_argument("--database", type=int, default=5000)
    ap.add_argument("--query", type=int, default=1000)
    ap.add_argument("--acquisition", type=float, default=0.1)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--bits", type=int, nargs="+", default=[32, 256])
    args = ap.parse_args()

    work = pathlib.Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    x, y = load_mnist(str(work / "raw"))

    rng = np.random.default_rng(0)
    n = args.learn + args.database + args.query
    idx = rng.choice(len(x), size=n, replace=False)
    x, y = x[idx], y[idx]
    # Pixels that never vary in the subsample would make normalization fail.
    keep = x[: args.learn].std(axis=0) > 0
    x = x[:, keep]

    data = work / "mnist.csv"
    header = ",".join("x%d" % j for j in range(x.shape[1])) + ",label"
    rows = np.column_stack([x, y]).astype(object)
    rows[:, -1] = y
    np.savetxt(data, rows, delimiter=",", header=header, comments="", fmt="%s")
    splits = ["learn"] * args.learn + ["database"] * args.database + ["query"] * args.query
    (work / "splits.txt").write_text("\n".join(splits) + "\n")

    learn = work / "learn.csv"
    np.savetxt(learn, x[: args.learn], delimiter=",", fmt="%.7g")
    params = work / "params.lshp"
    run(args.cli, "preprocess", "--input", str(learn), "--output-params", str(params))

    wins = 0
    total = 0
    for bits in args.bits:
        for seed in range(args.seeds):
            result = {}
            for method in ("lsh", "lsh-lift"):
                model = work / ("%s_%d_%d.lshm" % (method, bits, seed))
                run(args.cli, "train", "--method", method, "--bits", str(bits),
                    "--seed", str(seed), "--params", str(params), "--input", str(learn),
                    "--output-model", str(model))
                report = run(args.cli, "evaluate", "--model", str(model), "--dataset",
                             str(data), "--splits", str(work / "splits.txt"),
                             "--acquisition", str(args.acquisition))
                result[method] = precision_at(report, bits)
            total += 1
            wins += result["lsh"] >= result["lsh-lift"]
            print("bits=%d seed=%d precision lsh=%.4f lsh-lift=%.4f"
                  % (bits, seed, result["lsh"], result["lsh-lift"]))
    print("lsh >= lsh-lift in %d/%d runs (expected: majority)" % (wins, total))
    return 0


if __name__ == "__main__":
    sys.exit(main())
