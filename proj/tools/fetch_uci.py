#!/usr/bin/env python3
"""Fetch and clean the UCI datasets used by the benchmark and the acceptance
suite, writing one CSV per dataset to data/uci/ (header row, numeric features,
label in the last column as -1/+1).

Needs network access and `pip install ucimlrepo pandas scikit-learn`.

Cleaning rules (the upstream benchmark publications do not document theirs, so
these are fixed here for reproducibility):
  * rows containing missing values are dropped,
  * heart_hungarian drops the `ca`/`thal`/`slope` columns first (mostly
    missing in that cohort),
  * categorical feature columns are one-hot encoded,
  * binary labels map to -1/+1 with the numerically or lexicographically
    smaller original value becoming -1.
Feature scaling is NOT applied here; the library standardizes per
training fold.
"""

import argparse
import io
import sys
import urllib.request
from pathlib import Path

import pandas as pd


def finalize(name: str, features: pd.DataFrame, labels: pd.Series, out_dir: Path) -> None:
    df = features.copy()
    df["__label__"] = labels.values
    before = len(df)
    df = df.dropna()
    dropped = before - len(df)

    y = df["__label__"]
    df = df.drop(columns="__label__")

    # one-hot encode any non-numeric feature columns
    cat_cols = [c for c in df.columns if not pd.api.types.is_numeric_dtype(df[c])]
    if cat_cols:
        df = pd.get_dummies(df, columns=cat_cols, dtype=float)

    # order numerically when both parse as numbers, else lexicographically
    try:
        values = sorted(y.unique(), key=float)
    except (TypeError, ValueError):
        values = sorted(map(str, y.unique()))
    if len(values) != 2:
        raise SystemExit(f"{name}: expected 2 label values, got {values}")
    mapped = y.map(lambda v: -1 if str(v) == str(values[0]) else 1)

    out = df.copy()
    out.columns = [f"f{i+1}" for i in range(out.shape[1])]
    out["label"] = mapped.values
    path = out_dir / f"{name}.csv"
    out.to_csv(path, index=False)
    print(f"{name}: {out.shape[0]} rows x {out.shape[1]-1} features "
          f"({dropped} rows dropped for missing values) -> {path}")


def from_ucimlrepo(repo_id: int):
    from ucimlrepo import fetch_ucirepo

    ds = fetch_ucirepo(id=repo_id)
    return ds.data.features, ds.data.targets.iloc[:, 0]


def fetch_heart_hungarian():
    url = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
           "heart-disease/processed.hungarian.data")
    cols = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach",
            "exang", "oldpeak", "slope", "ca", "thal", "num"]
    raw = urllib.request.urlopen(url, timeout=60).read().decode()
    df = pd.read_csv(io.StringIO(raw), names=cols, na_values="?")
    df = df.drop(columns=["slope", "ca", "thal"])  # mostly missing here
    labels = (df["num"] > 0).astype(int)
    return df.drop(columns="num"), labels


def fetch_pima():
    # withdrawn from the UCI index; the canonical copy lives on OpenML (id 37)
    from sklearn.datasets import fetch_openml

    ds = fetch_openml(data_id=37, as_frame=True, parser="auto")
    return ds.data, ds.target


DATASETS = {
    "blood": lambda: from_ucimlrepo(176),                    # Blood Transfusion
    "haberman_survival": lambda: from_ucimlrepo(43),         # Haberman's Survival
    "pima": fetch_pima,                                      # Pima Indians Diabetes
    "heart_hungarian": fetch_heart_hungarian,                # Heart Disease (Hungarian)
    "breast_cancer_wisc": lambda: from_ucimlrepo(15),        # Breast Cancer Wisconsin (Original)
    "conn_bench_sonar_mines_rocks": lambda: from_ucimlrepo(151),  # Sonar
    "credit_approval": lambda: from_ucimlrepo(27),
    "ilpd_indian_liver": lambda: from_ucimlrepo(225),        # ILPD
    "ionosphere": lambda: from_ucimlrepo(52),
    "musk_1": lambda: from_ucimlrepo(74),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/uci", help="output directory")
    parser.add_argument("--only", nargs="*", help="subset of dataset names")
    args = parser.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    names = args.only or list(DATASETS)
    failures = []
    for name in names:
        if name not in DATASETS:
            print(f"unknown dataset: {name}", file=sys.stderr)
            failures.append(name)
            continue
        try:
            features, labels = DATASETS[name]()
            finalize(name, features, labels, out_dir)
        except Exception as e:  # keep going; report at the end
            print(f"{name}: FAILED ({e})", file=sys.stderr)
            failures.append(name)
    if failures:
        print(f"failed: {' '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
