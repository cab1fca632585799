#!/usr/bin/env python3
"""Convert Cremona's elliptic curve tables (PARI/GP `elldata` package) into a
corpus CSV with one row per isogeny class.

The elldata files `ellK` hold every curve with conductor in [1000K, 1000K+999]
as a GP vector of `[N, [label, [a1,a2,a3,a4,a6], generators], ...]`. The rank
is the number of listed Mordell-Weil generators. The first curve listed for a
class (Cremona number 1) is used as the representative equation.

The elldata package is distributed on PyPI as the `passagemath-pari-elldata`
wheel; point --source at either the unpacked `elldata` directory or the wheel.

Examples:
  elldata_to_corpus.py --source passagemath_pari_elldata-10.8.9-py3-none-any.whl \
      --max-conductor 1000 --out data/ecq_conductor_le_1000.csv
  elldata_to_corpus.py --source elldata/ --max-conductor 99999 --gzip \
      --out data/ecq_conductor_lt_100000.csv.gz
"""

import argparse
import gzip
import json
import os
import re
import sys
import zipfile

LABEL_RE = re.compile(r"^(\d+)([a-z]+)(\d+)$")
FRACTION_RE = re.compile(r"(-?\d+/\d+)")


class Source:
    def __init__(self, path):
        self.path = path
        self.zip = None
        if os.path.isfile(path) and zipfile.is_zipfile(path):
            self.zip = zipfile.ZipFile(path)
            self.members = {
                os.path.basename(n): n
                for n in self.zip.namelist()
                if "/elldata/ell" in n and not n.endswith("/")
            }

    def read(self, name):
        if self.zip is not None:
            member = self.members.get(name)
            return None if member is None else self.zip.read(member).decode()
        full = os.path.join(self.path, name)
        if not os.path.exists(full):
            return None
        with open(full) as fh:
            return fh.read()


def classes_in_block(text):
    # Rational generator coordinates (e.g. 1/4) are not valid JSON.
    data = json.loads(FRACTION_RE.sub(r'"\1"', text))
    for entry in data:
        conductor = entry[0]
        seen = {}
        for label, coeffs, gens in entry[1:]:
            m = LABEL_RE.match(label)
            if not m:
                raise ValueError(f"unexpected curve label {label!r}")
            cls = m.group(1) + m.group(2)
            rank = len(gens)
            if cls in seen:
                if seen[cls] != rank:
                    raise ValueError(f"rank mismatch inside class {cls}")
                continue
            seen[cls] = rank
            yield cls, conductor, rank, coeffs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--source", required=True)
    ap.add_argument("--min-conductor", type=int, default=1)
    ap.add_argument("--max-conductor", type=int, required=True,
                    help="inclusive upper bound")
    ap.add_argument("--out", required=True)
    ap.add_argument("--gzip", action="store_true")
    args = ap.parse_args()

    src = Source(args.source)
    opener = gzip.open if args.gzip else open
    rows = 0
    # mtime=0 keeps the gzip stream byte-reproducible.
    if args.gzip:
        raw = open(args.out, "wb")
        out = gzip.GzipFile(fileobj=raw, mode="wb", mtime=0)
        write = lambda s: out.write(s.encode())
    else:
        out = opener(args.out, "w", newline="\n")
        write = out.write
    write("# Isogeny classes of elliptic curves over Q, one representative each.\n")
    write("# Source: J. E. Cremona, elliptic curve data (PARI/GP elldata package).\n")
    write(f"# Conductor range: [{args.min_conductor}, {args.max_conductor}]; "
          "rank = number of Mordell-Weil generators.\n")
    write("label,conductor,rank,a1,a2,a3,a4,a6\n")
    for block in range(args.min_conductor // 1000, args.max_conductor // 1000 + 1):
        text = src.read(f"ell{block}")
        if text is None:
            sys.exit(f"missing elldata block ell{block}")
        for cls, conductor, rank, coeffs in classes_in_block(text):
            if args.min_conductor <= conductor <= args.max_conductor:
                write(f"{cls},{conductor},{rank}," + ",".join(map(str, coeffs)) + "\n")
                rows += 1
    out.close()
    if args.gzip:
        raw.close()
    print(f"wrote {rows} isogeny classes to {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
