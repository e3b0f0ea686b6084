#!/usr/bin/env python3
"""Fetch the Yeast and Scene multi-label benchmarks and write them as
multilabel-svm files.

Both datasets ship as pickled dumps inside the scikit-multilearn 0.0.1 source
distribution on PyPI. The train and test splits are concatenated (train
first) so the result is the full dataset used for cross-validation.

Usage: python3 tools/fetch_datasets.py [--out data] [--sdist path.tar.gz]
"""

import argparse
import bz2
import io
import json
import pickle
import tarfile
import urllib.request
from pathlib import Path
from urllib.parse import urljoin

import numpy as np

PYPI_JSON = "https://pypi.org/pypi/scikit-multilearn/json"
SDIST_VERSION = "0.0.1"
DATASETS = ("yeast", "scene")


def download_sdist() -> bytes:
    meta = json.load(urllib.request.urlopen(PYPI_JSON))
    for entry in meta["releases"][SDIST_VERSION]:
        if entry["packagetype"] == "sdist":
            return urllib.request.urlopen(urljoin(PYPI_JSON, entry["url"])).read()
    raise RuntimeError("sdist for scikit-multilearn %s not found" % SDIST_VERSION)


def read_dump(archive: tarfile.TarFile, name: str):
    member = "scikit-multilearn-%s/skmultilearn/data/%s.dump.bz2" % (SDIST_VERSION, name)
    raw = archive.extractfile(member).read()
    payload = pickle.loads(bz2.decompress(raw), encoding="latin1")
    return np.asarray(payload["X"], dtype=np.float64), np.asarray(payload["y"], dtype=np.int64)


def write_svm(path: Path, features: np.ndarray, labels: np.ndarray) -> None:
    with path.open("w") as out:
        out.write("#K=%d m=%d\n" % (labels.shape[1], features.shape[1]))
        for row, label_row in zip(features, labels):
            label_field = ",".join(str(k + 1) for k in np.flatnonzero(label_row))
            pairs = " ".join("%d:%r" % (j + 1, float(v)) for j, v in enumerate(row) if v != 0.0)
            out.write("%s %s\n" % (label_field, pairs))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data")
    parser.add_argument("--sdist", help="use a local copy of the sdist instead of downloading")
    args = parser.parse_args()

    blob = Path(args.sdist).read_bytes() if args.sdist else download_sdist()
    archive = tarfile.open(fileobj=io.BytesIO(blob))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in DATASETS:
        x_train, y_train = read_dump(archive, name + "-train")
        x_test, y_test = read_dump(archive, name + "-test")
        features = np.vstack([x_train, x_test])
        labels = np.vstack([y_train, y_test])
        target = out_dir / (name + ".svm")
        write_svm(target, features, labels)
        print("%s: n=%d m=%d K=%d -> %s" % (name, features.shape[0], features.shape[1], labels.shape[1], target))


if __name__ == "__main__":
    main()
