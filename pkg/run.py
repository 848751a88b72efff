#!/usr/bin/env python3
"""
Multiple Line Atlas - Main Entry Point

Runs the command-line front end: construct multiple lines, report their
invariants and re-verify the classification scenarios.
"""

import logging
import sys

from app.config import settings
from app.main import main as cli_main

# Configure logging
logging.basicConfig(
    level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def main():
    """Main function to run the atlas"""
    try:
        return cli_main()
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return 1
    except Exception as e:
        logger.error(f"Error running atlas: {e}")
        raise


if __name__ == "__main__":
    sys.exit(main())
