#!/usr/bin/env python3
"""
Download the public temporal networks used by the case studies.

Usage:
    python scripts/fetch_datasets.py              # all datasets
    python scripts/fetch_datasets.py email        # just one
    python scripts/fetch_datasets.py --force facebook
"""
import argparse
import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from pathhom.config.settings import settings
from pathhom.data_sources.snap import download_dataset
from pathhom.errors import PathHomError


def main():
    parser = argparse.ArgumentParser(description="Fetch the case-study datasets")
    parser.add_argument("names", nargs="*", help=f"Datasets to fetch (default: all of {', '.join(sorted(settings.DATASETS))})")
    parser.add_argument("--dest", default=None, help=f"Target directory (default: {settings.DATA_DIR})")
    parser.add_argument("--force", action="store_true", help="Download again even if present")
    args = parser.parse_args()
    unknown = [n for n in args.names if n not in settings.DATASETS]
    if unknown:
        parser.error(f"unknown datasets: {', '.join(unknown)}")

    failed = 0
    for name in args.names or sorted(settings.DATASETS):
        try:
            path = download_dataset(name, args.dest, force=args.force)
            print(f"✓ {name}: {path}")
        except PathHomError as e:
            failed += 1
            print(f"✗ {name}: {e.message}")

    sys.exit(2 if failed else 0)


if __name__ == "__main__":
    main()
