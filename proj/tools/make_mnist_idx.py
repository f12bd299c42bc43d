#!/usr/bin/env python3
"""Convert the digit JSON files of the `mnist` npm package into IDX files.

The npm package (https://www.npmjs.com/package/mnist) ships the first 10,000
MNIST training digits grouped by class, as grayscale values v/255 rounded to
three decimals. This script restores the 8-bit pixel values and writes a
single interleaved sequence:

    <out>/images-idx3-ubyte   (magic 0x00000803, N x 28 x 28 uint8)
    <out>/labels-idx1-ubyte   (magic 0x00000801, N uint8)

Interleaving is deterministic: the i-th digit of class c (out of n_c) is
placed at key (i + 0.5) / n_c, sorted by (key, c). Any prefix of the output
is therefore close to class-balanced in MNIST's natural proportions.

Usage:
    npm pack mnist && tar xzf mnist-*.tgz
    python3 tools/make_mnist_idx.py package/src/digits data/mnist
"""
import json
import struct
import sys
from pathlib import Path

ROWS = COLS = 28


def main(src: Path, out: Path) -> None:
    classes = []
    for c in range(10):
        flat = json.loads((src / f"{c}.json").read_text())["data"]
        if len(flat) % (ROWS * COLS):
            raise SystemExit(f"{c}.json: length {len(flat)} not a multiple of 784")
        n = len(flat) // (ROWS * COLS)
        pixels = bytes(min(255, max(0, round(v * 255))) for v in flat)
        classes.append([pixels[i * 784:(i + 1) * 784] for i in range(n)])

    order = sorted(
        ((i + 0.5) / len(digits), c, i)
        for c, digits in enumerate(classes)
        for i in range(len(digits))
    )
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 0x803, len(order), ROWS, COLS))
        for _, c, i in order:
            f.write(classes[c][i])
    with open(out / "labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 0x801, len(order)))
        f.write(bytes(c for _, c, _ in order))
    print(f"wrote {len(order)} digits to {out}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    main(Path(sys.argv[1]), Path(sys.argv[2]))
