"""
Entry point for ``python -m anyonwalk``; delegates to the CLI.
"""

import sys

from anyonwalk.cli import main

if __name__ == "__main__":
    sys.exit(main())
