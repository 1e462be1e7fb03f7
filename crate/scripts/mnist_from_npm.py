#!/usr/bin/env python3
"""Convert the digit arrays shipped in the npm `mnist` package into IDX files.

Usage: mnist_from_npm.py <path to unpacked npm package> <output dir>

The package stores 28x28 digits as intensities in [0, 1] rounded to three
decimals, grouped per class. The last 100 digits of each class become the
test split; the rest are interleaved round-robin across classes so that any
prefix of the training file is roughly class-balanced.
"""
import gzip
import json
import struct
import sys
from pathlib import Path

SIZE = 28 * 28
TEST_PER_CLASS = 100


def load_class(pkg: Path, digit: int):
    data = json.loads((pkg / "src" / "digits" / f"{digit}.json").read_text())["data"]
    count = len(data) // SIZE
    images = []
    for i in range(count):
        px = data[i * SIZE:(i + 1) * SIZE]
        images.append(bytes(min(255, max(0, round(v * 255))) for v in px))
    return images


def write_idx(out: Path, stem: str, samples):
    with gzip.GzipFile(out / f"{stem}-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, len(samples), 28, 28))
        for img, _ in samples:
            f.write(img)
    with gzip.GzipFile(out / f"{stem}-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, len(samples)))
        f.write(bytes(label for _, label in samples))


def main():
    pkg, out = Path(sys.argv[1]), Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    per_class = [load_class(pkg, d) for d in range(10)]
    train_lists = [imgs[:-TEST_PER_CLASS] for imgs in per_class]
    test = [(img, d) for d in range(10) for img in per_class[d][-TEST_PER_CLASS:]]
    # interleave the test split too so prefixes stay balanced
    test = [test[d * TEST_PER_CLASS + i] for i in range(TEST_PER_CLASS) for d in range(10)]
    train = []
    longest = max(len(l) for l in train_lists)
    for i in range(longest):
        for d in range(10):
            if i < len(train_lists[d]):
                train.append((train_lists[d][i], d))
    write_idx(out, "train", train)
    write_idx(out, "t10k", test)
    print(f"train={len(train)} test={len(test)}")


if __name__ == "__main__":
    main()
