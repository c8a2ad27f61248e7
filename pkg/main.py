#!/usr/bin/env python3
"""
RevoStore - revocable-storage attribute-based encryption toolkit
Main entry point for the command-line tool
"""

import sys
from pathlib import Path

# Add src directory to Python path
src_dir = Path(__file__).parent / "src"
sys.path.insert(0, str(src_dir))

from cli.commands import main as cli_main


def main():
    """Main entry point for RevoStore"""
    try:
        sys.exit(cli_main(sys.argv[1:]))

    except KeyboardInterrupt:
        print("\nInterrupted by user")
        sys.exit(130)
    except Exception as e:
        print(f"Unexpected error in RevoStore: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
