#!/usr/bin/env python3
"""Build the MNIST subset used by the recall experiments.

Reads the original idx files from the npm tarball mnist-data-1.2.6.tgz
(`npm pack mnist-data@1.2.6`) and writes gzipped idx3-ubyte files:

  base-images-idx3-ubyte.gz   first 10,000 training images
  query-images-idx3-ubyte.gz  first 1,000 test images

  python3 tools/make_mnist_subset.py --tarball mnist-data-1.2.6.tgz --out data/mnist-subset
"""

import argparse
import gzip
import hashlib
import pathlib
import struct
import tarfile

IMAGE_MAGIC = 0x00000803


def read_images(tar: tarfile.TarFile, member: str, count: int) -> tuple[bytes, int, int]:
    data = tar.extractfile(member).read()
    magic, n, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGE_MAGIC:
        raise SystemExit(f"{member}: bad magic {magic:#x}")
    if n < count:
        raise SystemExit(f"{member}: holds {n} images, need {count}")
    size = rows * cols
    if len(data) != 16 + n * size:
        raise SystemExit(f"{member}: {len(data)} bytes, expected {16 + n * size}")
    return data[16:16 + count * size], rows, cols


def write_idx(path: pathlib.Path, pixels: bytes, count: int, rows: int, cols: int) -> None:
    header = struct.pack(">IIII", IMAGE_MAGIC, count, rows, cols)
    # mtime=0 keeps the gzip bytes reproducible.
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as f:
        f.write(header)
        f.write(pixels)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--tarball", type=pathlib.Path, required=True)
    parser.add_argument("--out", type=pathlib.Path, required=True)
    parser.add_argument("--base", type=int, default=10000)
    parser.add_argument("--queries", type=int, default=1000)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    with tarfile.open(args.tarball) as tar:
        jobs = (
            ("package/data/train-images-idx3-ubyte", args.base, "base-images-idx3-ubyte.gz"),
            ("package/data/t10k-images-idx3-ubyte", args.queries, "query-images-idx3-ubyte.gz"),
        )
        for member, count, name in jobs:
            pixels, rows, cols = read_images(tar, member, count)
            path = args.out / name
            write_idx(path, pixels, count, rows, cols)
            print(f"{path}: {count} images, sha256 {hashlib.sha256(path.read_bytes()).hexdigest()}")


if __name__ == "__main__":
    main()
