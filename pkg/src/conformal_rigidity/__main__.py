"""Main entry point: ``python -m conformal_rigidity`` or ``conformal-rigidity``."""

import sys

from conformal_rigidity.cli import run


def main() -> None:
    """Run the command line and exit with its status.

    Example:
        >>> python -m conformal_rigidity chain --domain disk.json --point 0,0
    """
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
