"""Runtime settings for the q-adic Takagi toolkit.

Values come from the environment (optionally a local .env file) with
defaults sized for the verification suites.
"""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Dense step tables refuse more cells than this (q^m > cap)
MAX_TABLE_CELLS = int(os.getenv("QTAKAGI_MAX_TABLE_CELLS", str(2**20)))

# Guard on C(k+1, |u|) * |u|!/u! for the direct D summation
MAX_TUPLE_TERMS = int(os.getenv("QTAKAGI_MAX_TUPLE_TERMS", str(10**5)))

# Highest point level accepted by the polynomial oracle
MAX_POLY_LEVEL = int(os.getenv("QTAKAGI_MAX_POLY_LEVEL", "10"))

LOG_LEVEL = os.getenv("QTAKAGI_LOG_LEVEL", "WARNING").upper()
