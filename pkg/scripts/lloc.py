#!/usr/bin/env python3
"""
Runs the lloc command line from a source checkout
Usage: python scripts/lloc.py solve instance.lloc --b 5
"""

import sys
from pathlib import Path

# Load .env file if it exists
try:
    from dotenv import load_dotenv

    env_path = Path(__file__).parent.parent / '.env'
    if env_path.exists():
        load_dotenv(env_path)
except ImportError:
    pass

# Add project root to the Python path so lloc imports without installation
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from lloc.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
