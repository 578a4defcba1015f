#!/usr/bin/env python3
# Copyright 2026 The EUPG Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts the UCI Adult files into the headered CSV dialect eupg reads.

Accepts either the raw `adult.data` / `adult.test` files or any wheel/zip
archive that contains them (the `responsibly` wheel on PyPI ships both):

    pip download --no-deps responsibly -d /tmp/w
    python3 tools/prepare_adult.py /tmp/w/responsibly-*.whl data/adult
"""
import csv
import io
import sys
import zipfile
from pathlib import Path

COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num",
    "marital_status", "occupation", "relationship", "race", "sex",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]


def read_sources(src: Path):
    if src.is_dir():
        return ((src / "adult.data").read_text(), (src / "adult.test").read_text())
    with zipfile.ZipFile(src) as z:
        names = {Path(n).name: n for n in z.namelist()}
        return tuple(z.read(names[f]).decode("utf-8") for f in ("adult.data", "adult.test"))


def convert(text: str, out: Path) -> int:
    rows = 0
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        for line in io.StringIO(text):
            line = line.strip()
            if not line or line.startswith("|"):
                continue
            cells = [c.strip() for c in line.split(",")]
            if len(cells) != len(COLUMNS):
                raise SystemExit(f"unexpected row: {line!r}")
            cells[-1] = cells[-1].rstrip(".")
            w.writerow(cells)
            rows += 1
    return rows


def main() -> None:
    if len(sys.argv) != 3:
        raise SystemExit(__doc__)
    src, dst = Path(sys.argv[1]), Path(sys.argv[2])
    dst.mkdir(parents=True, exist_ok=True)
    train, test = read_sources(src)
    print("train rows:", convert(train, dst / "adult_train.csv"))
    print("test rows:", convert(test, dst / "adult_test.csv"))


if __name__ == "__main__":
    main()
