"""
Command-line entry point.

Usage:
    python3 workbench.py hh cp2.qcat --oracle
"""

import sys
import os

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from cli import main

if __name__ == '__main__':
    sys.exit(main())
