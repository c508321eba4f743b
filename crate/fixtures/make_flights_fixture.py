#!/usr/bin/env python3
"""Build fixtures/flights.csv.gz from the public nycflights13 tables.

The four tables (flights, airlines, planes, airports) are left-joined in the
same order and with the same column suffixes as R's `merge(..., all.x = TRUE)`:

    merge_airlines <- merge(flights, airlines, by = "carrier", all.x = TRUE)
    merge_planes   <- merge(merge_airlines, planes, by = "tailnum",
                            all.x = TRUE, suffixes = c("_flights", "_planes"))
    merge_origin   <- merge(merge_planes, airports, by.x = "origin",
                            by.y = "faa", all.x = TRUE,
                            suffixes = c("_carrier", "_origin"))
    flight_data    <- merge(merge_origin, airports, by.x = "dest",
                            by.y = "faa", all.x = TRUE,
                            suffixes = c("_origin", "_dest"))

Usage:
    pip download nycflights13 --no-deps   # source tables (CC0)
    python3 make_flights_fixture.py <nycflights13/data dir> [out.csv.gz]

Missing values are written as `NA`. Row order follows R's default
`sort = TRUE` on the final join key, ties in input order.
"""
import sys
import zipfile
from pathlib import Path

import pandas as pd


def r_merge(x, y, by_x, by_y, suffixes):
    """Left join with R merge() column layout: key, rest of x, rest of y."""
    y = y.rename(columns={by_y: by_x})
    common = (set(x.columns) & set(y.columns)) - {by_x}
    x = x.rename(columns={c: c + suffixes[0] for c in common})
    y = y.rename(columns={c: c + suffixes[1] for c in common})
    out = x.merge(y, on=by_x, how="left", sort=False)
    cols = [by_x] + [c for c in x.columns if c != by_x] + [c for c in y.columns if c != by_x]
    out = out[cols]
    return out.sort_values(by_x, kind="stable", na_position="last").reset_index(drop=True)


def main():
    data = Path(sys.argv[1])
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path(__file__).with_name("flights.csv.gz")
    with zipfile.ZipFile(data / "flights.csv.zip") as zf:
        with zf.open("flights.csv") as fh:
            flights = pd.read_csv(fh, keep_default_na=True)
    airlines = pd.read_csv(data / "airlines.csv")
    planes = pd.read_csv(data / "planes.csv")
    airports = pd.read_csv(data / "airports.csv", keep_default_na=False, na_values=[""])

    m = r_merge(flights, airlines, "carrier", "carrier", ("_carrier", "_airlines"))
    m = r_merge(m, planes, "tailnum", "tailnum", ("_flights", "_planes"))
    m = r_merge(m, airports, "origin", "faa", ("_carrier", "_origin"))
    m = r_merge(m, airports, "dest", "faa", ("_origin", "_dest"))
    assert m.shape == (336776, 42), m.shape

    # integer-valued columns that picked up NaN through the join stay integral
    for c in m.columns:
        s = m[c]
        if s.dtype.kind == "f" and ((s.dropna() % 1) == 0).all():
            m[c] = s.astype("Int64")
    m.to_csv(out, index=False, na_rep="NA", compression={"method": "gzip", "mtime": 0})
    print(f"wrote {out} {m.shape}")


if __name__ == "__main__":
    main()
