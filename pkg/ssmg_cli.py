#!/usr/bin/env python3
"""Launcher for the ssmg command line."""

import sys
from pathlib import Path

# Add project root to path so `src.*` imports resolve from any cwd
project_root = Path(__file__).parent
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from src.cli import main


if __name__ == "__main__":
    main()
