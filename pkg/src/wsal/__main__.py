"""Module entry point: ``python -m wsal`` behaves like the ``wsal`` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
