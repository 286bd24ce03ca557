"""Entry point for ``python -m src``."""

import sys

from src.harness.cli import main

sys.exit(main())
