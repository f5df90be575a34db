#!/usr/bin/env python3
"""
Run the q-adic Takagi toolkit from a checkout.

Usage:
    python run.py eval cdf --q 2 --sigma 1,0 --d 1/3,2/3 --r 1/4,3/4 --x 3/4
    python run.py sample --function cdf --grid-level 3 --output cdf.csv
    python run.py verify --suite all --seed 1
"""

import sys
from pathlib import Path

# Make the src package importable without installing
sys.path.insert(0, str(Path(__file__).parent))


def main() -> int:
    from src.cli import main as cli_main

    return cli_main()


if __name__ == "__main__":
    sys.exit(main())
